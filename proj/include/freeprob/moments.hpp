#pragma once

#include <complex>
#include <vector>

#include "freeprob/model.hpp"
#include "freeprob/nc.hpp"

namespace freeprob {

/// k-th moment of the semicircle law with variance c: 0 for odd k,
/// Catalan(k/2) * c^(k/2) for even k.
double semicircle_moment(int k, double c);

struct PsiBreakdown {
    std::complex<double> value;
    std::vector<std::complex<double>> per_pairing;  // in pairing enumeration order
};

/// psi(a_0 X a_1 X ... X a_n) as the sum over non-crossing pairings of the
/// X slots, each weighted by the product of phi over the blocks of the
/// Kreweras complement. Odd numbers of X slots give 0. Coefficients must
/// lie in the corner p M p (tolerance 1e-12 on the max-entry norm of
/// a - p a p); violations are errors, not silent projections.
std::complex<double> psi_word(const ModelState& model, const WordSpec& word);
PsiBreakdown psi_word_detailed(const ModelState& model, const WordSpec& word);

/// The cumulant-weighted sum over all non-crossing partitions pi of the X
/// slots: phi(p) * sum_pi (prod_B k_|B|) * (phi~_p)_{pi^c}[a_0..a_n], where
/// phi~_p = phi(p)^{-1} phi on the corner. With the semicircular spec
/// k_2 = phi(p) this reduces to psi_word.
std::complex<double> speicher_moment(const ModelState& model, const CumulantSpec& cum,
                                     const WordSpec& word);

/// Moments m_1..m_order of a single variable from its free cumulants:
/// m_k = sum over NC(k) of prod_B k_|B|. Returned list starts with m_0 = 1.
std::vector<double> moments_from_cumulants(const CumulantSpec& cum, int order);

/// Inverse transform up to the order implied by the input (moments[0] must
/// be 1). Triangular solve of the moment recursion; the Moebius-inversion
/// route lives in the tests as the independent check.
CumulantSpec cumulants_from_moments(const std::vector<double>& moments);

struct PIndependenceReport {
    std::complex<double> value_p;
    std::complex<double> value_q;
    double difference;
    bool pass;
};

/// Evaluates the word twice through speicher_moment, once normalized at p
/// and once at q (p <= q required); the two must agree.
PIndependenceReport check_p_independence(const ModelState& model, const std::string& p,
                                         const std::string& q, const WordSpec& word);

struct ScalingReport {
    std::complex<double> scaled_value;   // lambda^{-n/2} psi evaluated with weights * lambda
    std::complex<double> target_value;   // lambda * psi(original)
    double ratio_deviation;              // |scaled/target - 1|
    bool pass;
};

/// Weight-scaling covariance: scaling the trace weights by lambda and each
/// X slot by lambda^{-1/2} multiplies psi by exactly lambda.
ScalingReport scaling_covariance(const ModelState& model, const Rational& lambda,
                                 const WordSpec& word);

/// Moments m_0..m_order of the compressed variable q X q under the
/// q-normalized state, computed through psi_word on a rank-one model.
/// Equals semicircle_moment(k, c_q) for every k. Odd `order` is an error;
/// order beyond `max_order` (default 12) is an error.
std::vector<double> compressed_semicircular_moments(const Rational& c_q, int order,
                                                    int max_order = 12);

}  // namespace freeprob
