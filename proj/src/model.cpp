#include "freeprob/model.hpp"

#include <stdexcept>

namespace freeprob {

ModelState::ModelState(std::vector<int> dims, std::vector<Rational> weights)
    : dims_(std::move(dims)), weights_(std::move(weights)) {
    if (dims_.empty()) throw std::invalid_argument("model needs at least one block");
    if (dims_.size() != weights_.size())
        throw std::invalid_argument("dims and weights length mismatch");
    for (int d : dims_)
        if (d < 1) throw std::invalid_argument("block dimension must be >= 1");
    for (auto& w : weights_) {
        w.canonicalize();
        if (w <= 0) throw std::invalid_argument("weights must be strictly positive");
    }
    std::vector<Eigen::MatrixXcd> identity;
    for (int d : dims_) identity.push_back(Eigen::MatrixXcd::Identity(d, d));
    elements_["1"] = std::move(identity);
}

void ModelState::add_element(const std::string& name, std::vector<Eigen::MatrixXcd> blocks) {
    if (name.empty()) throw std::invalid_argument("element name must be non-empty");
    if (blocks.size() != dims_.size())
        throw std::invalid_argument("element '" + name + "': expected " +
                                    std::to_string(dims_.size()) + " blocks");
    for (size_t i = 0; i < blocks.size(); ++i)
        if (blocks[i].rows() != dims_[i] || blocks[i].cols() != dims_[i])
            throw std::invalid_argument("element '" + name + "': block " + std::to_string(i) +
                                        " has wrong shape");
    elements_[name] = std::move(blocks);
}

Rational ModelState::total_weight() const {
    Rational w(0);
    for (const auto& x : weights_) w += x;
    return w;
}

const std::vector<Eigen::MatrixXcd>& ModelState::element(const std::string& name) const {
    auto it = elements_.find(name);
    if (it == elements_.end()) throw std::invalid_argument("unknown element '" + name + "'");
    return it->second;
}

std::vector<std::string> ModelState::element_names() const {
    std::vector<std::string> names;
    for (const auto& [k, v] : elements_) names.push_back(k);
    return names;
}

bool ModelState::has_element(const std::string& name) const {
    return elements_.count(name) > 0;
}

std::complex<double> ModelState::phi(const std::string& name) const {
    return phi_product({name});
}

std::complex<double> ModelState::phi_product(const std::vector<std::string>& names) const {
    if (names.empty()) throw std::invalid_argument("phi of an empty product");
    std::complex<double> value = 0;
    for (size_t i = 0; i < dims_.size(); ++i) {
        Eigen::MatrixXcd prod = element(names[0])[i];
        for (size_t j = 1; j < names.size(); ++j) prod = prod * element(names[j])[i];
        value += to_double(weights_[i]) * prod.trace() / static_cast<double>(dims_[i]);
    }
    return value;
}

bool ModelState::is_projection(const std::string& name, double tol) const {
    const auto& blocks = element(name);
    for (const auto& b : blocks) {
        if ((b * b - b).cwiseAbs().maxCoeff() > tol) return false;
        if ((b.adjoint() - b).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

double ModelState::corner_defect(const std::string& name, const std::string& proj) const {
    const auto& a = element(name);
    const auto& p = element(proj);
    double defect = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        Eigen::MatrixXcd diff = a[i] - p[i] * a[i] * p[i];
        defect = std::max(defect, diff.cwiseAbs().maxCoeff());
    }
    return defect;
}

bool ModelState::projection_leq(const std::string& p, const std::string& q, double tol) const {
    const auto& pb = element(p);
    const auto& qb = element(q);
    for (size_t i = 0; i < pb.size(); ++i)
        if ((qb[i] * pb[i] - pb[i]).cwiseAbs().maxCoeff() > tol) return false;
    return true;
}

ModelState ModelState::scaled_weights(const Rational& lambda) const {
    if (lambda <= 0) throw std::invalid_argument("weight scale must be positive");
    std::vector<Rational> scaled = weights_;
    for (auto& w : scaled) w *= lambda;
    ModelState copy(dims_, std::move(scaled));
    copy.elements_ = elements_;
    return copy;
}

}  // namespace freeprob
