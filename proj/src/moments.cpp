#include "freeprob/moments.hpp"

#include <cmath>
#include <stdexcept>

namespace freeprob {

namespace {

constexpr double kCornerTol = 1e-12;

std::vector<int> even_labels(int n) {
    std::vector<int> evens(n);
    for (int i = 0; i < n; ++i) evens[i] = 2 * (i + 1);
    return evens;
}

void validate_word(const ModelState& model, const WordSpec& word) {
    if (word.coefficients.empty())
        throw std::invalid_argument("word needs at least the coefficient a_0");
    if (!model.has_element(word.projection))
        throw std::invalid_argument("unknown projection '" + word.projection + "'");
    if (!model.is_projection(word.projection))
        throw std::invalid_argument("'" + word.projection + "' is not a projection");
    for (const auto& name : word.coefficients) {
        double defect = model.corner_defect(name, word.projection);
        if (defect > kCornerTol)
            throw std::invalid_argument("coefficient '" + name + "' is not in the corner pMp (defect " +
                                        std::to_string(defect) + ")");
    }
}

// Complement-block product of phi values; odd label 2j+1 indexes a_j.
std::complex<double> complement_contribution(const ModelState& model,
                                             const std::vector<std::string>& coeffs,
                                             const NCPartition& complement) {
    std::complex<double> value = 1;
    for (const auto& block : complement.blocks()) {
        std::vector<std::string> names;
        names.reserve(block.size());
        for (int odd : block) names.push_back(coeffs[(odd - 1) / 2]);
        value *= model.phi_product(names);
    }
    return value;
}

// Deterministic pairwise tree reduction in enumeration order.
std::complex<double> tree_sum(const std::vector<std::complex<double>>& terms, size_t lo, size_t hi) {
    if (lo == hi) return 0;
    if (hi - lo == 1) return terms[lo];
    size_t mid = lo + (hi - lo) / 2;
    return tree_sum(terms, lo, mid) + tree_sum(terms, mid, hi);
}

}  // namespace

double semicircle_moment(int k, double c) {
    if (k < 0) throw std::invalid_argument("moment order must be >= 0");
    if (c <= 0) throw std::invalid_argument("semicircle variance must be positive");
    if (k % 2) return 0.0;
    return static_cast<double>(catalan(static_cast<unsigned>(k / 2))) * std::pow(c, k / 2);
}

PsiBreakdown psi_word_detailed(const ModelState& model, const WordSpec& word) {
    validate_word(model, word);
    int n = static_cast<int>(word.coefficients.size()) - 1;
    PsiBreakdown out;
    if (n == 0) {
        out.value = model.phi(word.coefficients[0]);
        out.per_pairing = {out.value};
        return out;
    }
    if (n % 2) {
        out.value = 0;
        return out;
    }
    for (const auto& pairing : enumerate_nc_pairings(even_labels(n))) {
        NCPartition complement = kreweras_complement(pairing);
        out.per_pairing.push_back(complement_contribution(model, word.coefficients, complement));
    }
    out.value = tree_sum(out.per_pairing, 0, out.per_pairing.size());
    return out;
}

std::complex<double> psi_word(const ModelState& model, const WordSpec& word) {
    return psi_word_detailed(model, word).value;
}

std::complex<double> speicher_moment(const ModelState& model, const CumulantSpec& cum,
                                     const WordSpec& word) {
    validate_word(model, word);
    int n = static_cast<int>(word.coefficients.size()) - 1;
    double weight_p = model.phi(word.projection).real();
    if (weight_p <= 0) throw std::invalid_argument("projection has non-positive weight");
    if (n == 0) return model.phi(word.coefficients[0]);

    std::vector<std::complex<double>> terms;
    for (const auto& pi : enumerate_nc(even_labels(n))) {
        double k_pi = 1;
        for (const auto& block : pi.blocks()) k_pi *= cum.at(static_cast<int>(block.size()));
        if (k_pi == 0) continue;
        NCPartition complement = kreweras_complement(pi);
        std::complex<double> corner = complement_contribution(model, word.coefficients, complement);
        // phi~_p normalization: one factor of 1/phi(p) per complement block
        corner /= std::pow(weight_p, static_cast<double>(complement.block_count()));
        terms.push_back(k_pi * corner);
    }
    return weight_p * tree_sum(terms, 0, terms.size());
}

std::vector<double> moments_from_cumulants(const CumulantSpec& cum, int order) {
    if (order < 1) throw std::invalid_argument("order must be >= 1");
    std::vector<double> moments{1.0};
    for (int k = 1; k <= order; ++k) {
        std::vector<int> ground(k);
        for (int i = 0; i < k; ++i) ground[i] = i + 1;
        double m = 0;
        for (const auto& pi : enumerate_nc(ground)) {
            double term = 1;
            for (const auto& block : pi.blocks()) term *= cum.at(static_cast<int>(block.size()));
            m += term;
        }
        moments.push_back(m);
    }
    return moments;
}

CumulantSpec cumulants_from_moments(const std::vector<double>& moments) {
    if (moments.empty() || moments[0] != 1.0)
        throw std::invalid_argument("moment list must start with m_0 = 1");
    int order = static_cast<int>(moments.size()) - 1;
    if (order < 1) throw std::invalid_argument("order must be >= 1");
    CumulantSpec cum;
    // m_k = k_k + sum over non-full pi of prod k_|B|; solve upward in k.
    for (int k = 1; k <= order; ++k) {
        std::vector<int> ground(k);
        for (int i = 0; i < k; ++i) ground[i] = i + 1;
        double rest = 0;
        for (const auto& pi : enumerate_nc(ground)) {
            if (pi.block_count() == 1) continue;
            double term = 1;
            for (const auto& block : pi.blocks()) term *= cum.at(static_cast<int>(block.size()));
            rest += term;
        }
        cum.values[k] = moments[k] - rest;
    }
    return cum;
}

PIndependenceReport check_p_independence(const ModelState& model, const std::string& p,
                                         const std::string& q, const WordSpec& word) {
    if (!model.is_projection(p) || !model.is_projection(q))
        throw std::invalid_argument("p and q must be projections");
    if (!model.projection_leq(p, q))
        throw std::invalid_argument("p <= q is required");
    WordSpec at_p = word;
    at_p.projection = p;
    WordSpec at_q = word;
    at_q.projection = q;
    double cp = model.phi(p).real();
    double cq = model.phi(q).real();
    PIndependenceReport report;
    report.value_p = speicher_moment(model, CumulantSpec::semicircular(cp), at_p);
    report.value_q = speicher_moment(model, CumulantSpec::semicircular(cq), at_q);
    report.difference = std::abs(report.value_p - report.value_q);
    report.pass = report.difference < 1e-10;
    return report;
}

ScalingReport scaling_covariance(const ModelState& model, const Rational& lambda,
                                 const WordSpec& word) {
    if (lambda <= 0) throw std::invalid_argument("lambda must be positive");
    int n = static_cast<int>(word.coefficients.size()) - 1;
    ModelState scaled = model.scaled_weights(lambda);
    double lam = to_double(lambda);
    ScalingReport report;
    report.scaled_value = std::pow(lam, -n / 2.0) * psi_word(scaled, word);
    report.target_value = lam * psi_word(model, word);
    if (std::abs(report.target_value) < 1e-300) {
        report.ratio_deviation = std::abs(report.scaled_value);
    } else {
        report.ratio_deviation = std::abs(report.scaled_value / report.target_value - 1.0);
    }
    report.pass = report.ratio_deviation < 1e-10;
    return report;
}

std::vector<double> compressed_semicircular_moments(const Rational& c_q, int order,
                                                    int max_order) {
    if (c_q <= 0) throw std::invalid_argument("compression weight must be positive");
    if (order % 2) throw std::invalid_argument("order must be even");
    if (order < 0 || order > max_order)
        throw std::invalid_argument("order exceeds the configured maximum");
    ModelState model({1}, {c_q});
    model.add_element("q", {Eigen::MatrixXcd::Ones(1, 1)});
    double cq = to_double(c_q);
    std::vector<double> moments{1.0};
    for (int k = 1; k <= order; ++k) {
        WordSpec word{std::vector<std::string>(k + 1, "q"), "q"};
        moments.push_back(psi_word(model, word).real() / cq);
    }
    return moments;
}

}  // namespace freeprob
