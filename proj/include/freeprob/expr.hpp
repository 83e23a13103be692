#pragma once

#include <string>
#include <vector>

#include "freeprob/surd.hpp"

namespace freeprob {

enum class BlockKind { Matrix, FreeGroup, Hyperfinite, Opaque };

/// Fundamental-group data attached to an opaque factor: either the marker
/// "every positive rational" or an explicit generator set.
struct FgGenerators {
    bool all_positive_rationals = false;
    std::vector<Rational> generators;

    friend bool operator==(const FgGenerators&, const FgGenerators&) = default;
};

/// One direct summand of an algebra in the computable class: a full matrix
/// block M_n, an interpolated free group factor L(F_t) with t in (1,inf],
/// the hyperfinite factor R, or an opaque factor known only by name,
/// fundamental-group generators and an accumulated compression parameter.
struct Block {
    BlockKind kind = BlockKind::Matrix;
    int size = 1;               // Matrix
    ExtSurd param;              // FreeGroup
    std::string name;           // Opaque
    FgGenerators fg;            // Opaque
    Surd compression{1};        // Opaque: c in "A_c"; 1 means uncompressed
    Surd weight{1};

    static Block matrix(int n, const Surd& weight);
    /// t == 1 normalizes to a hyperfinite block; t < 1 is an error.
    static Block free_group(const ExtSurd& t, const Surd& weight);
    static Block hyperfinite(const Surd& weight);
    static Block opaque(std::string name, FgGenerators fg, const Surd& weight,
                        const Surd& compression = Surd(1));

    bool is_diffuse() const { return kind != BlockKind::Matrix; }
    std::string str() const;

    friend bool operator==(const Block&, const Block&);
};

bool block_less(const Block& l, const Block& r);

/// A weighted direct sum of blocks; weights are positive and sum to 1.
/// Canonical form sorts summands by (kind, size/parameter, weight), so
/// equality of canonical forms is a syntactic check.
class AlgebraExpression {
public:
    explicit AlgebraExpression(std::vector<Block> summands);

    static AlgebraExpression matrix(int n);
    static AlgebraExpression free_group(const ExtSurd& t);
    static AlgebraExpression hyperfinite();
    static AlgebraExpression opaque(std::string name, FgGenerators fg = {},
                                    const Surd& compression = Surd(1));

    const std::vector<Block>& summands() const { return summands_; }
    bool has_opaque() const;
    bool is_single_block() const { return summands_.size() == 1; }
    /// A single diffuse block of weight 1 (a II_1-type factor).
    bool is_factor() const;
    const Block& only_block() const;

    std::string str() const;

    friend bool operator==(const AlgebraExpression& l, const AlgebraExpression& r) {
        return l.summands_ == r.summands_;
    }

private:
    std::vector<Block> summands_;
};

/// An ordered multiset of free-product components; `infinite_index` marks
/// the free product over a countably infinite index set, in which case the
/// stored components are the recurring patterns.
struct FreeProductExpression {
    std::vector<AlgebraExpression> components;
    bool infinite_index = false;

    std::string str() const;
    friend bool operator==(const FreeProductExpression&, const FreeProductExpression&);
};

/// Order-insensitive comparison of free products (components compared as
/// canonical multisets).
bool canonical_equal(const FreeProductExpression& l, const FreeProductExpression& r);

}  // namespace freeprob
