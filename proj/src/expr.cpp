#include "freeprob/expr.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace freeprob {

Block Block::matrix(int n, const Surd& weight) {
    if (n < 1) throw std::invalid_argument("matrix block size must be >= 1");
    Block b;
    b.kind = BlockKind::Matrix;
    b.size = n;
    b.weight = weight;
    return b;
}

Block Block::free_group(const ExtSurd& t, const Surd& weight) {
    if (!t.is_infinite()) {
        if (t.finite() == Surd(1)) return hyperfinite(weight);
        if (t.finite() < Surd(1))
            throw std::invalid_argument("free group factor parameter must be > 1, got " +
                                        t.finite().str());
    }
    Block b;
    b.kind = BlockKind::FreeGroup;
    b.param = t;
    b.weight = weight;
    return b;
}

Block Block::hyperfinite(const Surd& weight) {
    Block b;
    b.kind = BlockKind::Hyperfinite;
    b.weight = weight;
    return b;
}

Block Block::opaque(std::string name, FgGenerators fg, const Surd& weight,
                    const Surd& compression) {
    if (name.empty()) throw std::invalid_argument("opaque factor needs a name");
    if (compression.sign() <= 0) throw std::invalid_argument("compression must be positive");
    Block b;
    b.kind = BlockKind::Opaque;
    b.name = std::move(name);
    b.fg = std::move(fg);
    b.compression = compression;
    b.weight = weight;
    return b;
}

std::string Block::str() const {
    std::ostringstream out;
    switch (kind) {
        case BlockKind::Matrix:
            if (size == 1)
                out << "C";
            else
                out << "M" << size;
            break;
        case BlockKind::FreeGroup:
            out << "L(F_" << param.str() << ")";
            break;
        case BlockKind::Hyperfinite:
            out << "R";
            break;
        case BlockKind::Opaque:
            out << name;
            if (compression != Surd(1)) out << "_[" << compression.str() << "]";
            break;
    }
    if (weight != Surd(1)) out << "{" << weight.str() << "}";
    return out.str();
}

bool operator==(const Block& l, const Block& r) {
    if (l.kind != r.kind || l.weight != r.weight) return false;
    switch (l.kind) {
        case BlockKind::Matrix: return l.size == r.size;
        case BlockKind::FreeGroup: return l.param == r.param;
        case BlockKind::Hyperfinite: return true;
        case BlockKind::Opaque:
            return l.name == r.name && l.fg == r.fg && l.compression == r.compression;
    }
    return false;
}

namespace {

int kind_rank(BlockKind k) {
    switch (k) {
        case BlockKind::Matrix: return 0;
        case BlockKind::FreeGroup: return 1;
        case BlockKind::Hyperfinite: return 2;
        case BlockKind::Opaque: return 3;
    }
    return 4;
}

int cmp_surd(const Surd& l, const Surd& r) {
    if (l == r) return 0;
    return l < r ? -1 : 1;
}

}  // namespace

bool block_less(const Block& l, const Block& r) {
    if (kind_rank(l.kind) != kind_rank(r.kind)) return kind_rank(l.kind) < kind_rank(r.kind);
    switch (l.kind) {
        case BlockKind::Matrix:
            if (l.size != r.size) return l.size < r.size;
            break;
        case BlockKind::FreeGroup: {
            if (l.param.is_infinite() != r.param.is_infinite()) return r.param.is_infinite();
            if (!l.param.is_infinite()) {
                int c = cmp_surd(l.param.finite(), r.param.finite());
                if (c != 0) return c < 0;
            }
            break;
        }
        case BlockKind::Hyperfinite:
            break;
        case BlockKind::Opaque: {
            if (l.name != r.name) return l.name < r.name;
            int c = cmp_surd(l.compression, r.compression);
            if (c != 0) return c < 0;
            break;
        }
    }
    return cmp_surd(l.weight, r.weight) < 0;
}

AlgebraExpression::AlgebraExpression(std::vector<Block> summands) : summands_(std::move(summands)) {
    if (summands_.empty()) throw std::invalid_argument("expression needs at least one summand");
    Surd total(0);
    for (const auto& b : summands_) {
        if (b.weight.sign() <= 0) throw std::invalid_argument("summand weights must be positive");
        total += b.weight;
    }
    if (total != Surd(1))
        throw std::invalid_argument("summand weights must sum to 1, got " + total.str());
    std::sort(summands_.begin(), summands_.end(), block_less);
}

AlgebraExpression AlgebraExpression::matrix(int n) {
    return AlgebraExpression({Block::matrix(n, Surd(1))});
}

AlgebraExpression AlgebraExpression::free_group(const ExtSurd& t) {
    return AlgebraExpression({Block::free_group(t, Surd(1))});
}

AlgebraExpression AlgebraExpression::hyperfinite() {
    return AlgebraExpression({Block::hyperfinite(Surd(1))});
}

AlgebraExpression AlgebraExpression::opaque(std::string name, FgGenerators fg,
                                            const Surd& compression) {
    return AlgebraExpression({Block::opaque(std::move(name), std::move(fg), Surd(1), compression)});
}

bool AlgebraExpression::has_opaque() const {
    return std::any_of(summands_.begin(), summands_.end(),
                       [](const Block& b) { return b.kind == BlockKind::Opaque; });
}

bool AlgebraExpression::is_factor() const {
    return summands_.size() == 1 && summands_[0].is_diffuse();
}

const Block& AlgebraExpression::only_block() const {
    if (summands_.size() != 1)
        throw std::invalid_argument("expected a single-summand expression, got " + str());
    return summands_[0];
}

std::string AlgebraExpression::str() const {
    std::ostringstream out;
    for (size_t i = 0; i < summands_.size(); ++i) {
        if (i) out << " (+) ";
        out << summands_[i].str();
    }
    return out.str();
}

std::string FreeProductExpression::str() const {
    std::ostringstream out;
    if (infinite_index) out << "*inf ";
    for (size_t i = 0; i < components.size(); ++i) {
        if (i) out << " * ";
        out << "[" << components[i].str() << "]";
    }
    return out.str();
}

bool operator==(const FreeProductExpression& l, const FreeProductExpression& r) {
    return l.infinite_index == r.infinite_index && l.components == r.components;
}

bool canonical_equal(const FreeProductExpression& l, const FreeProductExpression& r) {
    if (l.infinite_index != r.infinite_index) return false;
    if (l.components.size() != r.components.size()) return false;
    auto key = [](const FreeProductExpression& fp) {
        std::vector<std::string> parts;
        for (const auto& c : fp.components) parts.push_back(c.str());
        std::sort(parts.begin(), parts.end());
        return parts;
    };
    return key(l) == key(r);
}

}  // namespace freeprob
