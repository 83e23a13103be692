#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "freeprob/rational.hpp"
#include "freeprob/rng.hpp"

namespace freeprob {

struct SimulationConfig {
    int dim = 1000;
    int trials = 50;
    std::uint64_t seed = 12345;
    int max_moment_order = 8;

    void validate() const;
    std::uint64_t trial_seed(int trial) const {
        return seed ^ static_cast<std::uint64_t>(trial);
    }
};

/// A named random or deterministic matrix generator. Random generators are
/// drawn independently per trial; deterministic diagonals tile their
/// pattern up to the configured dimension and are identical across trials.
struct Generator {
    enum class Kind { Gue, GinibreCircular, DeterministicDiagonal };
    Kind kind = Kind::Gue;
    std::vector<double> diagonal;  // pattern for DeterministicDiagonal

    static Generator gue() { return {Kind::Gue, {}}; }
    static Generator circular() { return {Kind::GinibreCircular, {}}; }
    static Generator diag(std::vector<double> pattern) {
        return {Kind::DeterministicDiagonal, std::move(pattern)};
    }
};

using EnsembleSpec = std::map<std::string, Generator>;

/// Hermitian GUE draw with entry variance 1/N (second moment 1).
Eigen::MatrixXcd draw_gue(GaussianStream& stream, int n);
/// Circular draw z = (s1 + i s2)/sqrt(2) from two independent GUE draws.
Eigen::MatrixXcd draw_circular(GaussianStream& stream, int n);

struct MomentEstimate {
    double estimate = 0;
    double stderr_ = 0;
};

/// Mean over trials of the real part of the normalized trace of the word
/// product. Word tokens are generator names, with a trailing '*' for the
/// adjoint (e.g. {"z*","z"}).
MomentEstimate empirical_word_moment(const SimulationConfig& cfg, const EnsembleSpec& ensemble,
                                     const std::vector<std::string>& word);

struct CheckRow {
    std::string check;
    std::string name;
    int order = 0;
    double estimate = 0;
    double stderr_ = 0;
    double prediction = 0;
    double tolerance = 0;
    bool pass = false;
};

struct SimReport {
    std::vector<CheckRow> rows;

    bool all_pass() const;
    void append(const SimReport& other);
    std::string to_csv() const;
    nlohmann::json to_json() const;
};

/// Declared tolerance policy: 3 standard errors plus the finite-dimension
/// bias budget 5/N scaled by the prediction magnitude.
double check_tolerance(double stderr_, double prediction, int n);

/// Even GUE moments m_2..m_order against Catalan numbers (order <= 8).
SimReport verify_gue_moments(const SimulationConfig& cfg, int order);

/// Moments of a GUE draw compressed by a deterministic diagonal projection
/// of trace q, state rescaled by 1/q, against the semicircle of variance q;
/// also checks the top eigenvalue against 2 sqrt(q) within 10%.
SimReport verify_compressed_semicircular(const SimulationConfig& cfg, const Rational& q_trace);

/// Alternating centered words of an independent GUE and a deterministic
/// diagonal vanish; the mixed word tr(a0 s a1 s a2) matches the pairing
/// formula phi(a0 a2) phi(a1).
SimReport verify_freeness(const SimulationConfig& cfg, int order);

/// Block-matrix semicircular assembly over e_size x k_units index pairs:
/// GUE diagonal blocks and circular off-diagonal blocks. Checks the
/// semicircle moments (variance n = e_size * k_units) under the normalized
/// trace, the mixed word against the pairing formula, and alternating
/// centered words against block-diagonal deterministic elements.
SimReport verify_y_construction(int e_size, int k_units, const SimulationConfig& cfg);

}  // namespace freeprob
