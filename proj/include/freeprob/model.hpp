#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <string>
#include <vector>

#include "freeprob/rational.hpp"

namespace freeprob {

/// A concrete finite-dimensional algebra: a direct sum of full matrix
/// blocks with a trace-weight vector. phi(a) = sum_i w_i * ntr(a_i) where
/// ntr is the normalized trace of block i. Weights are exact positive
/// rationals summing to the total weight W (W = 1 for a state; W > 0 in
/// general, phi(1) = W). Named elements hold one d_i x d_i complex array
/// per block.
class ModelState {
public:
    ModelState(std::vector<int> dims, std::vector<Rational> weights);

    void add_element(const std::string& name, std::vector<Eigen::MatrixXcd> blocks);
    /// The identity element under the reserved name "1" is always present.

    const std::vector<int>& dims() const { return dims_; }
    const std::vector<Rational>& weights() const { return weights_; }
    Rational total_weight() const;
    const std::vector<Eigen::MatrixXcd>& element(const std::string& name) const;
    std::vector<std::string> element_names() const;
    bool has_element(const std::string& name) const;

    std::complex<double> phi(const std::string& name) const;
    /// phi of the product of the named elements, via actual block-wise
    /// matrix multiplication.
    std::complex<double> phi_product(const std::vector<std::string>& names) const;

    bool is_projection(const std::string& name, double tol = 1e-10) const;
    /// max-entry norm of a - p a p
    double corner_defect(const std::string& name, const std::string& proj) const;
    /// p <= q as projections: q p = p within tolerance
    bool projection_leq(const std::string& p, const std::string& q, double tol = 1e-10) const;

    /// Same algebra and elements, all weights multiplied by lambda.
    ModelState scaled_weights(const Rational& lambda) const;

private:
    std::vector<int> dims_;
    std::vector<Rational> weights_;
    std::map<std::string, std::vector<Eigen::MatrixXcd>> elements_;
};

/// The word a_0 X a_1 X ... X a_n: coefficient names from a ModelState
/// plus the projection p with all a_j in the corner p M p.
struct WordSpec {
    std::vector<std::string> coefficients;
    std::string projection;
};

/// Free cumulant data k_m by block size; a semicircular spec is k_2 = c.
struct CumulantSpec {
    std::map<int, double> values;

    static CumulantSpec semicircular(double c) { return CumulantSpec{{{2, c}}}; }
    double at(int m) const {
        auto it = values.find(m);
        return it == values.end() ? 0.0 : it->second;
    }
};

}  // namespace freeprob
