#include "freeprob/fdim_ops.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

#include "freeprob/json_io.hpp"

namespace freeprob {

using nlohmann::json;

json Derivation::to_json() const {
    json steps_json = json::array();
    for (const auto& s : steps) {
        json step{{"rule", s.rule}, {"params", s.params}, {"before", s.before}, {"after", s.after}};
        if (!s.note.empty()) step["note"] = s.note;
        steps_json.push_back(step);
    }
    return steps_json;
}

namespace {

void record(Derivation* d, DerivationStep step) {
    if (d) d->steps.push_back(std::move(step));
}

Surd block_free_dimension(const Block& b) {
    switch (b.kind) {
        case BlockKind::Matrix: {
            Rational one_over_n2(1, static_cast<long>(b.size) * b.size);
            one_over_n2.canonicalize();
            return Surd(Rational(1) - one_over_n2);
        }
        case BlockKind::FreeGroup:
            return b.param.finite();  // caller filters the infinite case
        case BlockKind::Hyperfinite:
            return Surd(1);
        case BlockKind::Opaque:
            throw std::domain_error("fdim undefined for opaque factors");
    }
    throw std::logic_error("unreachable");
}

// nullopt = infinite linear dimension
std::optional<long> linear_dimension(const AlgebraExpression& e) {
    long dim = 0;
    for (const auto& b : e.summands()) {
        if (b.is_diffuse()) return std::nullopt;
        dim += static_cast<long>(b.size) * b.size;
    }
    return dim;
}

AlgebraExpression fold_pair(const AlgebraExpression& a, const AlgebraExpression& b) {
    std::vector<Surd> survivors;
    for (const auto& ba : a.summands()) {
        if (ba.kind != BlockKind::Matrix) continue;
        for (const auto& bb : b.summands()) {
            if (bb.kind != BlockKind::Matrix) continue;
            Surd min_trace_sum = ba.weight / Surd(ba.size) + bb.weight / Surd(bb.size);
            if (min_trace_sum > Surd(1)) {
                if (ba.size == 1 && bb.size == 1) {
                    survivors.push_back(ba.weight + bb.weight - Surd(1));
                } else {
                    throw std::domain_error(
                        "outside implemented class: overlapping minimal projections of " +
                        ba.str() + " and " + bb.str() +
                        " need the general matrix-block collision rule");
                }
            }
        }
    }

    ExtSurd fa = fdim(a), fb = fdim(b);
    Surd survivor_weight(0), survivor_sq(0);
    for (const auto& s : survivors) {
        survivor_weight += s;
        survivor_sq += s * s;
    }
    Surd factor_weight = Surd(1) - survivor_weight;

    std::vector<Block> blocks;
    if (fa.is_infinite() || fb.is_infinite()) {
        blocks.push_back(Block::free_group(ExtSurd::infinity(), factor_weight));
    } else {
        // additivity: fdim(a) + fdim(b) = 1 - w_f^2 (1 - f) - sum s_k^2
        Surd one_minus_f =
            (Surd(1) - survivor_sq - (fa.finite() + fb.finite())) / (factor_weight * factor_weight);
        Surd f = Surd(1) - one_minus_f;
        if (f < Surd(1))
            throw std::domain_error("outside implemented class: factor parameter " + f.str() +
                                    " below 1");
        blocks.push_back(Block::free_group(ExtSurd(f), factor_weight));
    }
    for (const auto& s : survivors) blocks.push_back(Block::matrix(1, s));
    return AlgebraExpression(std::move(blocks));
}

Block compress_block(const Block& block, const Surd& gamma);

AlgebraExpression lf_expr(const ExtSurd& t) { return AlgebraExpression::free_group(t); }

AlgebraExpression tail_below_one(const Surd& y) {
    // R (+) C_alpha with alpha = sqrt(1 - y)
    Surd alpha = Surd::sqrt_of((Surd(1) - y).as_rational());
    return AlgebraExpression(
        {Block::hyperfinite(Surd(1) - alpha), Block::matrix(1, alpha)});
}

}  // namespace

ExtSurd fdim(const AlgebraExpression& expr) {
    for (const auto& b : expr.summands()) {
        if (b.kind == BlockKind::Opaque)
            throw std::domain_error("fdim undefined for opaque factors");
        if (b.kind == BlockKind::FreeGroup && b.param.is_infinite()) return ExtSurd::infinity();
    }
    Surd value(1);
    for (const auto& b : expr.summands())
        value -= b.weight * b.weight * (Surd(1) - block_free_dimension(b));
    return ExtSurd(value);
}

AlgebraExpression free_product(const std::vector<AlgebraExpression>& factors,
                               Derivation* derivation) {
    if (factors.size() < 2)
        throw std::invalid_argument("free product needs at least two factors");
    size_t big = factors.size();
    for (size_t i = 0; i < factors.size(); ++i) {
        if (factors[i].has_opaque())
            throw std::domain_error("free product fold requires the computable class (no opaque factors)");
        auto dim = linear_dimension(factors[i]);
        if (dim && *dim < 2)
            throw std::invalid_argument("free product factors must have linear dimension >= 2");
        if (big == factors.size() && (!dim || *dim >= 3)) big = i;
    }
    if (big == factors.size())
        throw std::invalid_argument(
            "free product needs at least one factor of linear dimension >= 3");

    // fold the >=3-dimensional factor first so every pairwise step is in class
    std::vector<AlgebraExpression> ordered;
    ordered.push_back(factors[big]);
    for (size_t i = 0; i < factors.size(); ++i)
        if (i != big) ordered.push_back(factors[i]);

    AlgebraExpression result = ordered[0];
    for (size_t i = 1; i < ordered.size(); ++i) result = fold_pair(result, ordered[i]);

    if (derivation) {
        json before{{"components", json::array()}};
        for (const auto& f : factors) before["components"].push_back(expression_to_json(f));
        record(derivation, {"free-product-fold", json::object(), before,
                            expression_to_json(result), ""});
    }
    return result;
}

namespace {

Block compress_block(const Block& block, const Surd& gamma) {
    switch (block.kind) {
        case BlockKind::Matrix: {
            Rational g = gamma.is_rational() ? gamma.as_rational() : Rational(0);
            if (!gamma.is_rational() || g.get_num() != 1)
                throw std::invalid_argument("matrix blocks compress only by reciprocal integers");
            long m = g.get_den().get_si();
            if (block.size % m != 0)
                throw std::invalid_argument("compression 1/" + std::to_string(m) +
                                            " does not divide matrix size " +
                                            std::to_string(block.size));
            return Block::matrix(block.size / static_cast<int>(m), block.weight);
        }
        case BlockKind::FreeGroup: {
            if (block.param.is_infinite()) return block;
            Surd t_new = Surd(1) + (block.param.finite() - Surd(1)) / (gamma * gamma);
            if (t_new < Surd(1)) throw std::domain_error("outside interpolation range");
            return Block::free_group(ExtSurd(t_new), block.weight);
        }
        case BlockKind::Hyperfinite:
            return block;
        case BlockKind::Opaque: {
            Block out = block;
            out.compression = block.compression * gamma;
            return out;
        }
    }
    throw std::logic_error("unreachable");
}

// Collapse an opaque compression parameter by a certified subgroup element.
Block absorb_compression(const Block& block) {
    if (block.kind != BlockKind::Opaque) return block;
    if (!block.compression.is_rational()) return block;
    Rational c = block.compression.as_rational();
    if (c == 1) return block;
    if (!in_generated_subgroup(c, block.fg)) return block;
    Block out = block;
    out.compression = Surd(1);
    return out;
}

AlgebraExpression compress_factor_impl(const AlgebraExpression& expr, const Surd& gamma,
                                       bool absorb) {
    if (gamma.sign() <= 0) throw std::invalid_argument("compression trace must be positive");
    const Block& block = expr.only_block();
    if (block.weight != Surd(1))
        throw std::invalid_argument("compress_factor expects a single factor block, got " +
                                    expr.str());
    Block out = compress_block(block, gamma);
    if (absorb) out = absorb_compression(out);
    return AlgebraExpression({out});
}

}  // namespace

AlgebraExpression compress_factor(const AlgebraExpression& expr, const Surd& gamma,
                                  Derivation* derivation) {
    AlgebraExpression result = compress_factor_impl(expr, gamma, true);
    if (derivation) {
        record(derivation, {"factor-compression",
                            json{{"gamma", surd_to_json(gamma)}, {"absorb", true}},
                            expression_to_json(expr), expression_to_json(result), ""});
    }
    return result;
}

namespace {

FreeProductExpression compress_fp_impl(const FreeProductExpression& fp, const Surd& t,
                                       bool absorb, Derivation* derivation) {
    if (t.sign() <= 0 || t >= Surd(1))
        throw std::invalid_argument("compression trace must lie in (0,1)");
    if (!t.is_rational() && t.rational_part() != 0)
        throw std::invalid_argument(
            "compression trace must be rational or a pure quadratic surd");
    if (fp.components.empty() ||
        (!fp.infinite_index && fp.components.size() < 2))
        throw std::invalid_argument("free product needs at least two components");
    for (const auto& c : fp.components)
        if (!c.is_factor())
            throw std::invalid_argument("free-product compression needs II_1-type factor components, got " +
                                        c.str());

    FreeProductExpression result;
    result.infinite_index = fp.infinite_index;
    for (const auto& c : fp.components)
        result.components.push_back(compress_factor_impl(c, t, absorb));

    json params{{"t", surd_to_json(t)}, {"absorb", absorb}};
    if (fp.infinite_index) {
        params["tail"] = "none";
        record(derivation, {"free-product-compression", params, free_product_to_json(fp),
                            free_product_to_json(result), "infinite index set: no tail"});
        return result;
    }

    Surd t_sq = t * t;
    Surd y = Surd(static_cast<long>(fp.components.size()) - 1) * (Surd(1) / t_sq - Surd(1));
    params["y"] = surd_to_json(y);
    std::string note;
    if (y > Surd(1)) {
        result.components.push_back(lf_expr(ExtSurd(y)));
        params["tail"] = "lf";
        note = "tail L(F_y), y = (|I|-1)(t^-2 - 1) > 1";
    } else if (y == Surd(1)) {
        result.components.push_back(AlgebraExpression::hyperfinite());
        params["tail"] = "r";
        note = "tail R at the boundary y = 1";
    } else {
        result.components.push_back(tail_below_one(y));
        params["tail"] = "r-plus-c";
        note = "tail R (+) C_alpha with alpha = sqrt(1-y)";
    }
    record(derivation, {"free-product-compression", params, free_product_to_json(fp),
                        free_product_to_json(result), note});
    return result;
}

}  // namespace

FreeProductExpression compress_free_product(const FreeProductExpression& fp, const Surd& t,
                                            Derivation* derivation) {
    return compress_fp_impl(fp, t, true, derivation);
}

FreeProductExpression stickout_rewrite(const AlgebraExpression& a, const AlgebraExpression& b,
                                       int n, Derivation* derivation) {
    if (n < 2) throw std::invalid_argument("stickout needs an integer n >= 2");
    if (!a.is_factor())
        throw std::invalid_argument("stickout expects a II_1-type factor on the left");
    Rational complement_weight(static_cast<long>(n) - 1, n);
    complement_weight.canonicalize();

    std::vector<Block> core;
    bool complement_found = false;
    for (const auto& blk : b.summands()) {
        if (!complement_found && blk.kind == BlockKind::Matrix && blk.size == 1 &&
            blk.weight == Surd(complement_weight)) {
            complement_found = true;
            continue;
        }
        core.push_back(blk);
    }
    if (!complement_found)
        throw std::invalid_argument("no one-dimensional complement summand of weight " +
                                    rational_str(complement_weight) + " in " + b.str());
    Surd core_weight(0);
    for (const auto& blk : core) core_weight += blk.weight;
    if (core_weight != Surd(Rational(1, n)))
        throw std::invalid_argument("B0 weight must be 1/" + std::to_string(n) + ", got " +
                                    core_weight.str());
    for (auto& blk : core) blk.weight *= Surd(n);

    Surd inv_n(Rational(1, n));
    FreeProductExpression result;
    result.components.push_back(compress_factor_impl(a, inv_n, true));
    result.components.emplace_back(std::move(core));
    result.components.push_back(lf_expr(ExtSurd(Surd(2L * (n - 1)))));

    if (derivation) {
        FreeProductExpression before;
        before.components = {a, b};
        record(derivation, {"stickout", json{{"n", n}}, free_product_to_json(before),
                            free_product_to_json(result),
                            "(A*B)_{1/n} = A_{1/n} * B0 * L(F_{2(n-1)})"});
    }
    return result;
}

FreeProductExpression absorb_lf_infinity(const FreeProductExpression& fp,
                                         Derivation* derivation) {
    if (!fp.infinite_index)
        throw std::domain_error("L(F_inf) absorption applies only to infinite index sets");
    FreeProductExpression result;
    result.infinite_index = true;
    size_t removed = 0;
    for (const auto& c : fp.components) {
        if (c.is_factor() && c.only_block().kind == BlockKind::FreeGroup &&
            c.only_block().param.is_infinite()) {
            ++removed;
            continue;
        }
        result.components.push_back(c);
    }
    if (derivation) {
        record(derivation, {"lf-infinity-absorption", json{{"removed", removed}},
                            free_product_to_json(fp), free_product_to_json(result),
                            "an infinite free product absorbs L(F_inf)"});
    }
    return result;
}

EquivalenceResult equivalent(const AlgebraExpression& x, const AlgebraExpression& y) {
    if (x.has_opaque() || y.has_opaque())
        throw std::domain_error("equivalence undecidable for opaque factors");
    if (x == y) return {true, true, "identical canonical forms"};
    if (fdim(x) == fdim(y))
        return {false, true,
                "equal free dimension " + fdim(x).str() +
                    ": interchangeable as a free-product factor"};
    return {false, false, ""};
}

namespace {

void accumulate_prime_exponents(const mpz_class& value, int sign,
                                std::map<mpz_class, long>& out) {
    mpz_class rest = value;
    for (mpz_class p = 2; p * p <= rest; ++p) {
        while (rest % p == 0) {
            rest /= p;
            out[p] += sign;
        }
    }
    if (rest > 1) out[rest] += sign;
}

std::map<mpz_class, long> prime_exponents(const Rational& q) {
    std::map<mpz_class, long> out;
    accumulate_prime_exponents(q.get_num(), 1, out);
    accumulate_prime_exponents(q.get_den(), -1, out);
    for (auto it = out.begin(); it != out.end();)
        it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

// Is v in the integer column lattice of A? Column Hermite reduction with
// forward substitution.
bool lattice_member(std::vector<std::vector<mpz_class>> a, std::vector<mpz_class> v) {
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    std::vector<std::pair<size_t, size_t>> pivots;
    size_t c = 0;
    for (size_t r = 0; r < rows && c < cols; ++r) {
        size_t k = c;
        while (k < cols && a[r][k] == 0) ++k;
        if (k == cols) continue;
        if (k != c)
            for (size_t i = 0; i < rows; ++i) std::swap(a[i][c], a[i][k]);
        for (size_t j = c + 1; j < cols; ++j) {
            if (a[r][j] == 0) continue;
            mpz_class g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a[r][c].get_mpz_t(),
                       a[r][j].get_mpz_t());
            mpz_class ag = a[r][c] / g, bg = a[r][j] / g;
            for (size_t i = 0; i < rows; ++i) {
                mpz_class nc = s * a[i][c] + t * a[i][j];
                mpz_class nj = ag * a[i][j] - bg * a[i][c];
                a[i][c] = nc;
                a[i][j] = nj;
            }
        }
        pivots.emplace_back(r, c);
        ++c;
    }
    size_t pi = 0;
    for (size_t r = 0; r < rows; ++r) {
        if (pi < pivots.size() && pivots[pi].first == r) {
            size_t j = pivots[pi].second;
            if (v[r] % a[r][j] != 0) return false;
            mpz_class q = v[r] / a[r][j];
            for (size_t i = r; i < rows; ++i) v[i] -= q * a[i][j];
            ++pi;
        } else if (v[r] != 0) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool in_generated_subgroup(const Rational& t, const FgGenerators& fg) {
    if (t <= 0) throw std::invalid_argument("subgroup elements are positive rationals");
    if (fg.all_positive_rationals) return true;
    if (t == 1) return true;
    auto target = prime_exponents(t);
    std::vector<std::map<mpz_class, long>> gen_exps;
    for (const auto& g : fg.generators) {
        if (g <= 0) throw std::invalid_argument("generators must be positive rationals");
        gen_exps.push_back(prime_exponents(g));
    }
    std::map<mpz_class, size_t> prime_index;
    for (const auto& [p, e] : target) prime_index.emplace(p, 0);
    for (const auto& m : gen_exps)
        for (const auto& [p, e] : m) prime_index.emplace(p, 0);
    size_t idx = 0;
    for (auto& [p, i] : prime_index) i = idx++;

    std::vector<std::vector<mpz_class>> matrix(prime_index.size(),
                                               std::vector<mpz_class>(gen_exps.size(), 0));
    for (size_t j = 0; j < gen_exps.size(); ++j)
        for (const auto& [p, e] : gen_exps[j]) matrix[prime_index[p]][j] = e;
    std::vector<mpz_class> v(prime_index.size(), 0);
    for (const auto& [p, e] : target) v[prime_index[p]] = e;
    return lattice_member(std::move(matrix), std::move(v));
}

WitnessResult fundamental_group_witness(const FreeProductExpression& fp, const Rational& t) {
    if (!fp.infinite_index)
        throw std::invalid_argument("fundamental-group witness needs an infinite index set");
    if (t <= 0) throw std::invalid_argument("t must be a positive rational");

    WitnessResult result;
    if (t == 1) {
        result.found = true;
        result.reason = "identity compression";
        return result;
    }
    Rational s = t < 1 ? t : Rational(1) / t;
    s.canonicalize();

    for (const auto& c : fp.components) {
        if (!c.is_factor())
            throw std::invalid_argument("witness components must be II_1-type factors");
        const Block& blk = c.only_block();
        bool ok = false;
        switch (blk.kind) {
            case BlockKind::Hyperfinite:
                ok = true;  // fundamental group is every positive real
                break;
            case BlockKind::FreeGroup:
                ok = blk.param.is_infinite();
                if (!ok) {
                    result.reason = "no witness: " + blk.str() +
                                    " certifies only the identity compression";
                    return result;
                }
                break;
            case BlockKind::Opaque:
                ok = in_generated_subgroup(s, blk.fg);
                if (!ok) {
                    result.reason = "no witness: component '" + blk.name +
                                    "' cannot produce " + rational_str(s) +
                                    " from its generators";
                    return result;
                }
                break;
            case BlockKind::Matrix:
                throw std::invalid_argument("witness components must be II_1-type factors");
        }
        (void)ok;
    }

    // build the replayable chain: compress without absorbing, then divide the
    // certified factor out of each component in turn
    Derivation& d = result.derivation;
    if (t > 1) {
        record(&d, {"inverse-symmetry", json{{"t", rational_to_json(t)}},
                    free_product_to_json(fp), free_product_to_json(fp),
                    "fundamental group is inverse-closed: reduce t to 1/t"});
    }
    FreeProductExpression current = compress_fp_impl(fp, Surd(s), false, &d);
    for (size_t i = 0; i < current.components.size(); ++i) {
        const Block& blk = current.components[i].only_block();
        if (blk.kind != BlockKind::Opaque) continue;
        FreeProductExpression next = current;
        Block restored = blk;
        restored.compression = blk.compression / Surd(s);
        next.components[i] = AlgebraExpression({restored});
        record(&d, {"fundamental-group-absorption",
                    json{{"component", i}, {"removed", rational_to_json(s)}},
                    free_product_to_json(current), free_product_to_json(next),
                    "component '" + blk.name + "' absorbs the compression"});
        current = std::move(next);
    }
    result.found = true;
    result.reason = "every component certifies " + rational_str(s);
    return result;
}

ComprIrratData comprirrat_data(std::optional<int> index_count, const Rational& t) {
    if (t <= 0 || t >= 1) throw std::invalid_argument("t must lie in (0,1)");
    Rational inv_t = Rational(1) / t;
    inv_t.canonicalize();
    mpz_class n_int = inv_t.get_num() / inv_t.get_den();  // floor for positive values
    Rational r = inv_t - Rational(n_int);
    r.canonicalize();
    if (r == 0)
        throw std::invalid_argument(
            "1/t is an integer: use the matrix-compression path instead");
    long n = n_int.get_si();

    AlgebraExpression d_algebra({Block::matrix(1, Surd(r)), Block::matrix(1, Surd(Rational(1) - r))});

    if (!index_count) {
        return {d_algebra, lf_expr(ExtSurd::infinity()), lf_expr(ExtSurd::infinity())};
    }
    int k = *index_count;
    if (k < 2) throw std::invalid_argument("index set needs at least two elements");

    Rational threshold = Rational(1) - Rational(1, 2L * k);
    threshold.canonicalize();
    Rational two_r_one_minus_r = 2 * r * (1 - r);

    AlgebraExpression p_algebra = [&] {
        if (t <= threshold) {
            Rational y = (k - 1) * (inv_t * inv_t - 1) + k * 2 * r * (1 - r);
            return lf_expr(ExtSurd(Surd(y)));
        }
        Rational u = 2 - Rational(k + 1) / (Rational(2L * k - 1) * Rational(2L * k - 1));
        Rational beta = 2 * k - Rational(2L * k - 1) * inv_t;
        u.canonicalize();
        beta.canonicalize();
        return AlgebraExpression({Block::free_group(ExtSurd(Surd(u)), Surd(Rational(1) - beta)),
                                  Block::matrix(1, Surd(beta))});
    }();

    AlgebraExpression n_algebra = [&] {
        if (n >= 2 || t <= threshold) {
            Rational y = k * (1 - t * t + t * t * two_r_one_minus_r);
            return lf_expr(ExtSurd(Surd(y)));
        }
        Rational u = 2 - Rational(5, 4L * k);
        Rational c = 1 - 2 * k * (1 - t);
        u.canonicalize();
        c.canonicalize();
        return AlgebraExpression({Block::free_group(ExtSurd(Surd(u)), Surd(Rational(1) - c)),
                                  Block::matrix(1, Surd(c))});
    }();

    return {d_algebra, p_algebra, n_algebra};
}

ConsistencyReport shlyakhtenko_consistency(const ExtSurd& s, const Rational& t,
                                           const AlgebraExpression& probe) {
    if (t <= 0 || t > 1) throw std::invalid_argument("t must lie in (0,1]");
    if (t == 1) return {true, probe, probe, "identity compression: trivial pass"};
    if (!probe.is_factor())
        throw std::invalid_argument("probe must be a single II_1-type factor");
    if (!s.is_infinite() && s.finite() < Surd(1))
        throw std::invalid_argument("s must be >= 1 or infinite");

    auto make_lf = [](const ExtSurd& param) {
        if (!param.is_infinite() && param.finite() == Surd(1))
            return AlgebraExpression::hyperfinite();
        return AlgebraExpression::free_group(param);
    };

    Surd t_surd{t};
    AlgebraExpression left = compress_factor(free_product({probe, make_lf(s)}), t_surd);
    ExtSurd s_scaled = s.is_infinite()
                           ? ExtSurd::infinity()
                           : ExtSurd(s.finite() / (t_surd * t_surd));
    AlgebraExpression right =
        free_product({compress_factor(probe, t_surd), make_lf(s_scaled)});

    ConsistencyReport report;
    report.left = left;
    report.right = right;
    report.pass = (left == right);
    report.note = report.pass ? "both routes give " + left.str()
                              : "routes disagree: " + left.str() + " vs " + right.str();
    return report;
}

bool replay(const Derivation& derivation) {
    for (const auto& step : derivation.steps) {
        try {
            if (step.rule == "free-product-fold") {
                std::vector<AlgebraExpression> components;
                for (const auto& c : step.before.at("components"))
                    components.push_back(expression_from_json(c));
                if (!(free_product(components) == expression_from_json(step.after))) return false;
            } else if (step.rule == "factor-compression") {
                Surd gamma = surd_from_json(step.params.at("gamma"), "gamma");
                AlgebraExpression before = expression_from_json(step.before);
                if (!(compress_factor(before, gamma) == expression_from_json(step.after)))
                    return false;
            } else if (step.rule == "free-product-compression") {
                Surd t = surd_from_json(step.params.at("t"), "t");
                bool absorb = step.params.value("absorb", true);
                FreeProductExpression before = free_product_from_json(step.before);
                if (!(compress_fp_impl(before, t, absorb, nullptr) ==
                      free_product_from_json(step.after)))
                    return false;
            } else if (step.rule == "stickout") {
                FreeProductExpression before = free_product_from_json(step.before);
                if (before.components.size() != 2) return false;
                int n = step.params.at("n").get<int>();
                if (!(stickout_rewrite(before.components[0], before.components[1], n) ==
                      free_product_from_json(step.after)))
                    return false;
            } else if (step.rule == "lf-infinity-absorption") {
                FreeProductExpression before = free_product_from_json(step.before);
                if (!(absorb_lf_infinity(before) == free_product_from_json(step.after)))
                    return false;
            } else if (step.rule == "fundamental-group-absorption") {
                size_t idx = step.params.at("component").get<size_t>();
                Rational removed = rational_from_json(step.params.at("removed"), "removed");
                FreeProductExpression before = free_product_from_json(step.before);
                FreeProductExpression after = free_product_from_json(step.after);
                if (idx >= before.components.size()) return false;
                const Block& blk = before.components[idx].only_block();
                if (blk.kind != BlockKind::Opaque) return false;
                if (!in_generated_subgroup(removed, blk.fg)) return false;
                Block restored = blk;
                restored.compression = blk.compression / Surd(removed);
                FreeProductExpression expected = before;
                expected.components[idx] = AlgebraExpression({restored});
                if (!(expected == after)) return false;
            } else if (step.rule == "inverse-symmetry") {
                if (!(free_product_from_json(step.before) == free_product_from_json(step.after)))
                    return false;
            } else if (step.rule == "tail-replacement") {
                AlgebraExpression before = expression_from_json(step.before);
                AlgebraExpression after = expression_from_json(step.after);
                if (!(fdim(before) == fdim(after))) return false;
            } else {
                return false;  // unknown rule
            }
        } catch (const std::exception&) {
            return false;
        }
    }
    // chain coherence: each step applies to the previous outcome
    for (size_t i = 1; i < derivation.steps.size(); ++i)
        if (derivation.steps[i].before != derivation.steps[i - 1].after) return false;
    return true;
}

}  // namespace freeprob
