#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "freeprob/expr.hpp"

namespace freeprob {

/// Audit trail for rewrite chains. Each step stores a machine-actionable
/// rule id with its parameters plus before/after snapshots; `replay`
/// re-applies every rule and checks the recorded outcome.
struct DerivationStep {
    std::string rule;
    nlohmann::json params;
    nlohmann::json before;
    nlohmann::json after;
    std::string note;
};

struct Derivation {
    std::vector<DerivationStep> steps;
    nlohmann::json to_json() const;
};

bool replay(const Derivation& derivation);

/// Free dimension 1 - sum_i w_i^2 (1 - d_i) with d(M_n) = 1 - 1/n^2,
/// d(L(F_t)) = t, d(R) = 1; infinite when any L(F_inf) summand is present.
/// Opaque summands are an error.
ExtSurd fdim(const AlgebraExpression& expr);

/// Tracial free product inside the computable class, folded pairwise:
/// the free dimensions add, and the only surviving finite-dimensional
/// summands come from pairs of one-dimensional blocks with weights
/// a + b > 1 (yielding weight a + b - 1). Configurations that would need
/// the general matrix-block collision rule raise "outside implemented
/// class", as does a computed factor parameter below 1; a parameter of
/// exactly 1 becomes the hyperfinite factor.
AlgebraExpression free_product(const std::vector<AlgebraExpression>& factors,
                               Derivation* derivation = nullptr);

/// Compression of a single factor block by trace gamma > 0:
/// L(F_t) -> L(F_{1 + (t-1)/gamma^2}); R -> R; M_n by 1/m (m | n) ->
/// M_{n/m}; an opaque A_c becomes A_{c*gamma}, collapsing to A when the
/// accumulated parameter lies in the generated fundamental group.
AlgebraExpression compress_factor(const AlgebraExpression& expr, const Surd& gamma,
                                  Derivation* derivation = nullptr);

/// Compression of a free product of II_1-type factors by trace t in (0,1):
/// (*_i A_i)_t = (*_i (A_i)_t) * TAIL with TAIL = L(F_y) / R / R (+) C_alpha
/// according to y = (|I|-1)(t^{-2}-1) being > 1 / = 1 / < 1, where
/// alpha = sqrt(1-y); no tail when the index set is infinite. t must be
/// rational or a pure quadratic surd so the trichotomy is decided exactly.
FreeProductExpression compress_free_product(const FreeProductExpression& fp, const Surd& t,
                                            Derivation* derivation = nullptr);

/// For B = B0 (+) C with the one-dimensional complement of weight
/// (n-1)/n and B0 of weight 1/n: (A * B)_{1/n} = A_{1/n} * B0' * L(F_{2(n-1)})
/// where B0' is B0 with its trace renormalized by n.
FreeProductExpression stickout_rewrite(const AlgebraExpression& a, const AlgebraExpression& b,
                                       int n, Derivation* derivation = nullptr);

/// Over an infinite index set the free product absorbs L(F_inf): removes
/// every plain L(F_inf) component. Idempotent; an error on finite index
/// sets.
FreeProductExpression absorb_lf_infinity(const FreeProductExpression& fp,
                                         Derivation* derivation = nullptr);

struct EquivalenceResult {
    bool equal = false;          // canonical forms match
    bool context_equal = false;  // equal free dimension: interchangeable as a free-product factor
    std::string note;
};

EquivalenceResult equivalent(const AlgebraExpression& x, const AlgebraExpression& y);

/// Membership of t in the multiplicative subgroup of positive rationals
/// generated by fg, decided by integer linear algebra on prime exponent
/// vectors.
bool in_generated_subgroup(const Rational& t, const FgGenerators& fg);

struct WitnessResult {
    bool found = false;
    std::string reason;
    Derivation derivation;
};

/// Fundamental-group witness for an infinite free product: M_t = M when
/// every component certifies t (hyperfinite and L(F_inf) components
/// certify everything; opaque components via their generator sets; t > 1
/// reduces to 1/t).
WitnessResult fundamental_group_witness(const FreeProductExpression& fp, const Rational& t);

struct ComprIrratData {
    AlgebraExpression d_algebra;
    AlgebraExpression p_algebra;
    AlgebraExpression n_algebra;
};

/// The two-dimensional amalgamation data for compressing a free product
/// of |I| factors by a non-reciprocal-integer trace t = 1/(n + r):
/// D = C_r (+) C_{1-r}, plus the companion algebras P and N with the case
/// split at t vs 1 - 1/(2|I|). index_count = nullopt means |I| infinite
/// (P and N become L(F_inf)). Reciprocal-integer t is an error (that case
/// belongs to the matrix-compression path).
ComprIrratData comprirrat_data(std::optional<int> index_count, const Rational& t);

struct ConsistencyReport {
    bool pass = false;
    std::optional<AlgebraExpression> left;
    std::optional<AlgebraExpression> right;
    std::string note;
};

/// Two-route check of (M * L(F_s))_t = M_t * L(F_{s/t^2}) through the
/// calculus, with M = probe; s = 1 means R, s = inf means L(F_inf).
/// t = 1 returns a trivial pass.
ConsistencyReport shlyakhtenko_consistency(const ExtSurd& s, const Rational& t,
                                           const AlgebraExpression& probe);

}  // namespace freeprob
