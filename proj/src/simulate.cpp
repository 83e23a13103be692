#include "freeprob/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "freeprob/moments.hpp"

namespace freeprob {

void SimulationConfig::validate() const {
    if (dim < 8) throw std::invalid_argument("matrix dimension must be >= 8");
    if (trials < 1) throw std::invalid_argument("trial count must be >= 1");
    if (max_moment_order < 2 || max_moment_order % 2)
        throw std::invalid_argument("max moment order must be even and >= 2");
}

Eigen::MatrixXcd draw_gue(GaussianStream& stream, int n) {
    Eigen::MatrixXcd h(n, n);
    double diag_scale = 1.0 / std::sqrt(static_cast<double>(n));
    double off_scale = 1.0 / std::sqrt(2.0 * n);
    for (int i = 0; i < n; ++i) h(i, i) = diag_scale * stream.next();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            std::complex<double> z(off_scale * stream.next(), off_scale * stream.next());
            h(i, j) = z;
            h(j, i) = std::conj(z);
        }
    }
    return h;
}

Eigen::MatrixXcd draw_circular(GaussianStream& stream, int n) {
    Eigen::MatrixXcd s1 = draw_gue(stream, n);
    Eigen::MatrixXcd s2 = draw_gue(stream, n);
    return (s1 + std::complex<double>(0, 1) * s2) / std::sqrt(2.0);
}

namespace {

struct Stats {
    double mean = 0;
    double stderr_ = 0;
};

Stats summarize(const std::vector<double>& samples) {
    Stats s;
    for (double x : samples) s.mean += x;
    s.mean /= static_cast<double>(samples.size());
    if (samples.size() > 1) {
        double var = 0;
        for (double x : samples) var += (x - s.mean) * (x - s.mean);
        var /= static_cast<double>(samples.size() - 1);
        s.stderr_ = std::sqrt(var / static_cast<double>(samples.size()));
    }
    return s;
}

Eigen::VectorXd tiled_diagonal(const std::vector<double>& pattern, int n) {
    if (pattern.empty()) throw std::invalid_argument("deterministic diagonal needs a pattern");
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = pattern[i % pattern.size()];
    return d;
}

struct WordFactor {
    std::string generator;
    bool adjoint = false;
};

WordFactor parse_token(const std::string& token) {
    if (token.empty()) throw std::invalid_argument("empty word token");
    if (token.back() == '*') return {token.substr(0, token.size() - 1), true};
    return {token, false};
}

// Left-fold product; diagonal factors scale in O(N^2).
class ProductAccumulator {
public:
    explicit ProductAccumulator(int n) : n_(n) {}

    void multiply_dense(const Eigen::MatrixXcd& m) {
        if (!started_) {
            dense_ = m;
            started_ = true;
        } else {
            dense_ = dense_ * m;
        }
    }

    void multiply_diagonal(const Eigen::VectorXd& d) {
        if (!started_) {
            dense_ = d.cast<std::complex<double>>().asDiagonal();
            started_ = true;
        } else {
            dense_ = dense_ * d.cast<std::complex<double>>().asDiagonal();
        }
    }

    double normalized_trace() const {
        if (!started_) return 1.0;
        return dense_.trace().real() / static_cast<double>(n_);
    }

private:
    int n_;
    bool started_ = false;
    Eigen::MatrixXcd dense_;
};

}  // namespace

MomentEstimate empirical_word_moment(const SimulationConfig& cfg, const EnsembleSpec& ensemble,
                                     const std::vector<std::string>& word) {
    cfg.validate();
    if (word.empty()) throw std::invalid_argument("word must be non-empty");
    std::vector<WordFactor> factors;
    for (const auto& token : word) {
        WordFactor f = parse_token(token);
        if (!ensemble.count(f.generator))
            throw std::invalid_argument("undefined generator '" + f.generator + "'");
        factors.push_back(std::move(f));
    }

    std::vector<double> samples;
    samples.reserve(cfg.trials);
    for (int trial = 0; trial < cfg.trials; ++trial) {
        GaussianStream stream(cfg.trial_seed(trial));
        // draw random generators in name order so the stream layout is fixed
        std::map<std::string, Eigen::MatrixXcd> drawn;
        for (const auto& [name, gen] : ensemble) {
            bool used = std::any_of(factors.begin(), factors.end(),
                                    [&](const WordFactor& f) { return f.generator == name; });
            if (!used) continue;
            switch (gen.kind) {
                case Generator::Kind::Gue:
                    drawn[name] = draw_gue(stream, cfg.dim);
                    break;
                case Generator::Kind::GinibreCircular:
                    drawn[name] = draw_circular(stream, cfg.dim);
                    break;
                case Generator::Kind::DeterministicDiagonal:
                    break;
            }
        }
        ProductAccumulator product(cfg.dim);
        for (const auto& f : factors) {
            const Generator& gen = ensemble.at(f.generator);
            if (gen.kind == Generator::Kind::DeterministicDiagonal) {
                product.multiply_diagonal(tiled_diagonal(gen.diagonal, cfg.dim));
            } else if (f.adjoint) {
                product.multiply_dense(drawn.at(f.generator).adjoint());
            } else {
                product.multiply_dense(drawn.at(f.generator));
            }
        }
        samples.push_back(product.normalized_trace());
    }
    Stats s = summarize(samples);
    return {s.mean, s.stderr_};
}

bool SimReport::all_pass() const {
    return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
}

void SimReport::append(const SimReport& other) {
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

std::string SimReport::to_csv() const {
    std::ostringstream out;
    out << "check,name,order,estimate,stderr,prediction,tolerance,pass\n";
    out.precision(12);
    for (const auto& r : rows) {
        out << r.check << ',' << r.name << ',' << r.order << ',' << r.estimate << ','
            << r.stderr_ << ',' << r.prediction << ',' << r.tolerance << ','
            << (r.pass ? "true" : "false") << '\n';
    }
    return out.str();
}

nlohmann::json SimReport::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& r : rows) {
        rows_json.push_back({{"check", r.check},
                             {"name", r.name},
                             {"order", r.order},
                             {"estimate", r.estimate},
                             {"stderr", r.stderr_},
                             {"prediction", r.prediction},
                             {"tolerance", r.tolerance},
                             {"pass", r.pass}});
    }
    return nlohmann::json{{"rows", rows_json}, {"all_pass", all_pass()}};
}

double check_tolerance(double stderr_, double prediction, int n) {
    return 3.0 * stderr_ + (5.0 / n) * std::max(1.0, std::abs(prediction));
}

namespace {

CheckRow make_row(const std::string& check, const std::string& name, int order, Stats s,
                  double prediction, int dim) {
    CheckRow row;
    row.check = check;
    row.name = name;
    row.order = order;
    row.estimate = s.mean;
    row.stderr_ = s.stderr_;
    row.prediction = prediction;
    row.tolerance = check_tolerance(s.stderr_, prediction, dim);
    row.pass = std::abs(s.mean - prediction) <= row.tolerance;
    return row;
}

}  // namespace

SimReport verify_gue_moments(const SimulationConfig& cfg, int order) {
    cfg.validate();
    if (order < 2 || order > 8 || order % 2)
        throw std::invalid_argument("gue moment check supports even orders 2..8");
    std::vector<std::vector<double>> samples(order / 2);
    for (int trial = 0; trial < cfg.trials; ++trial) {
        GaussianStream stream(cfg.trial_seed(trial));
        Eigen::MatrixXcd x = draw_gue(stream, cfg.dim);
        double n = cfg.dim;
        samples[0].push_back(x.squaredNorm() / n);  // tr(X^2) for Hermitian X
        if (order >= 4) {
            Eigen::MatrixXcd a = x * x;
            samples[1].push_back(a.squaredNorm() / n);
            if (order >= 6) {
                Eigen::MatrixXcd b = a * a;
                samples[2].push_back((b.array() * a.array().conjugate()).sum().real() / n);
                if (order >= 8) samples[3].push_back(b.squaredNorm() / n);
            }
        }
    }
    SimReport report;
    for (int k = 1; 2 * k <= order; ++k) {
        double prediction = static_cast<double>(catalan(static_cast<unsigned>(k)));
        report.rows.push_back(make_row("gue-moment", "m" + std::to_string(2 * k), 2 * k,
                                       summarize(samples[k - 1]), prediction, cfg.dim));
    }
    return report;
}

SimReport verify_compressed_semicircular(const SimulationConfig& cfg, const Rational& q_trace) {
    cfg.validate();
    if (q_trace <= 0 || q_trace > 1)
        throw std::invalid_argument("projection trace must lie in (0,1]");
    double q = to_double(q_trace);
    int rank = static_cast<int>(std::floor(q * cfg.dim));
    if (rank < 4) throw std::invalid_argument("projection rank below 4: raise q or the dimension");

    int order = cfg.max_moment_order;
    std::vector<std::vector<double>> samples(order / 2);
    std::vector<double> top_eigenvalue;
    for (int trial = 0; trial < cfg.trials; ++trial) {
        GaussianStream stream(cfg.trial_seed(trial));
        Eigen::MatrixXcd x = draw_gue(stream, cfg.dim);
        Eigen::MatrixXcd corner = x.topLeftCorner(rank, rank);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(corner,
                                                               Eigen::EigenvaluesOnly);
        const auto& eigenvalues = solver.eigenvalues();
        top_eigenvalue.push_back(
            std::max(std::abs(eigenvalues(0)), std::abs(eigenvalues(rank - 1))));
        for (int k = 1; 2 * k <= order; ++k) {
            double sum = 0;
            for (int i = 0; i < rank; ++i) sum += std::pow(eigenvalues(i), 2 * k);
            samples[k - 1].push_back(sum / (cfg.dim * q));
        }
    }

    SimReport report;
    for (int k = 1; 2 * k <= order; ++k) {
        double prediction = semicircle_moment(2 * k, q);
        report.rows.push_back(make_row("compressed-semicircular", "m" + std::to_string(2 * k),
                                       2 * k, summarize(samples[k - 1]), prediction, cfg.dim));
    }
    {
        Stats s = summarize(top_eigenvalue);
        CheckRow row;
        row.check = "compressed-semicircular";
        row.name = "top-eigenvalue";
        row.order = 0;
        row.estimate = s.mean;
        row.stderr_ = s.stderr_;
        row.prediction = 2.0 * std::sqrt(q);
        row.tolerance = 0.10 * row.prediction;
        row.pass = std::abs(s.mean - row.prediction) <= row.tolerance;
        report.rows.push_back(row);
    }
    return report;
}

SimReport verify_freeness(const SimulationConfig& cfg, int order) {
    cfg.validate();
    if (order < 2 || order > cfg.max_moment_order)
        throw std::invalid_argument("order must lie in [2, max_moment_order]");

    // centered deterministic diagonal: pattern with mean zero
    std::vector<double> centered{-1.5, -0.5, 0.5, 1.5};
    EnsembleSpec ensemble{{"s", Generator::gue()}, {"ac", Generator::diag(centered)}};

    SimReport report;
    // alternating centered words (s ac)^(len/2)
    for (int len = 2; len <= order; len += 2) {
        std::vector<std::string> word;
        for (int i = 0; i < len / 2; ++i) {
            word.push_back("s");
            word.push_back("ac");
        }
        MomentEstimate est = empirical_word_moment(cfg, ensemble, word);
        Stats s{est.estimate, est.stderr_};
        report.rows.push_back(
            make_row("freeness-alternating", "(s ac)x" + std::to_string(len / 2), len, s, 0.0,
                     cfg.dim));
    }

    // mixed word tr(a0 s a1 s a2) against the pairing formula
    std::vector<double> p0{0.5, 1.0, 1.5, 2.0}, p1{1.0, -1.0, 2.0, 0.5}, p2{2.0, 1.0, 0.5, 1.5};
    EnsembleSpec mixed{{"s", Generator::gue()},
                       {"a0", Generator::diag(p0)},
                       {"a1", Generator::diag(p1)},
                       {"a2", Generator::diag(p2)}};
    MomentEstimate est = empirical_word_moment(cfg, mixed, {"a0", "s", "a1", "s", "a2"});

    ModelState model({4}, {Rational(1)});
    auto as_matrix = [](const std::vector<double>& d) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
        for (int i = 0; i < 4; ++i) m(i, i) = d[i];
        return std::vector<Eigen::MatrixXcd>{m};
    };
    model.add_element("a0", as_matrix(p0));
    model.add_element("a1", as_matrix(p1));
    model.add_element("a2", as_matrix(p2));
    double prediction = psi_word(model, {{"a0", "a1", "a2"}, "1"}).real();
    report.rows.push_back(make_row("freeness-mixed-word", "a0.s.a1.s.a2", 2,
                                   Stats{est.estimate, est.stderr_}, prediction, cfg.dim));
    return report;
}

SimReport verify_y_construction(int e_size, int k_units, const SimulationConfig& cfg) {
    cfg.validate();
    if (e_size < 1 || k_units < 1) throw std::invalid_argument("index ranges must be >= 1");
    int n = e_size * k_units;
    if (cfg.dim % n != 0)
        throw std::invalid_argument("matrix dimension must be divisible by " + std::to_string(n));
    int block = cfg.dim / n;

    int order = std::min(cfg.max_moment_order, 4);
    std::vector<std::vector<double>> moment_samples(2);
    std::vector<double> mixed_samples;
    std::vector<std::vector<double>> alternating_samples;
    int alt_orders = std::min(cfg.max_moment_order, 6);
    for (int len = 2; len <= alt_orders; len += 2) alternating_samples.emplace_back();

    // block-diagonal deterministic element: scalar c_j on block j
    Eigen::VectorXd b_scalars(n);
    for (int j = 0; j < n; ++j) b_scalars(j) = j + 1;
    double b_mean = b_scalars.mean();

    for (int trial = 0; trial < cfg.trials; ++trial) {
        GaussianStream stream(cfg.trial_seed(trial));
        Eigen::MatrixXcd y = Eigen::MatrixXcd::Zero(cfg.dim, cfg.dim);
        for (int j = 0; j < n; ++j)
            y.block(j * block, j * block, block, block) = draw_gue(stream, block);
        for (int j1 = 1; j1 < n; ++j1) {
            for (int j2 = 0; j2 < j1; ++j2) {
                Eigen::MatrixXcd z = draw_circular(stream, block);
                y.block(j1 * block, j2 * block, block, block) = z;
                y.block(j2 * block, j1 * block, block, block) = z.adjoint();
            }
        }
        double nn = cfg.dim;
        moment_samples[0].push_back(y.squaredNorm() / nn);
        if (order >= 4) {
            Eigen::MatrixXcd y2 = y * y;
            moment_samples[1].push_back(y2.squaredNorm() / nn);
        }

        // mixed word n * tr(Y b Y b) with b the projector onto the first block
        double mixed = 0;
        for (int i = 0; i < block; ++i)
            for (int j = 0; j < block; ++j) mixed += std::norm(y(i, j));
        mixed_samples.push_back(n * mixed / nn);

        if (n > 1) {
            Eigen::VectorXd bc(cfg.dim);
            for (int j = 0; j < n; ++j)
                bc.segment(j * block, block).setConstant(b_scalars(j) - b_mean);
            Eigen::MatrixXcd m = y * bc.cast<std::complex<double>>().asDiagonal();
            Eigen::MatrixXcd power = m;
            int idx = 0;
            for (int len = 2; len <= alt_orders; len += 2, ++idx) {
                if (len > 2) power = power * m;
                alternating_samples[idx].push_back(power.trace().real() / nn);
            }
        }
    }

    SimReport report;
    for (int k = 1; 2 * k <= order; ++k) {
        double prediction = semicircle_moment(2 * k, static_cast<double>(n));
        report.rows.push_back(make_row("y-construction", "m" + std::to_string(2 * k), 2 * k,
                                       summarize(moment_samples[k - 1]), prediction, cfg.dim));
    }
    {
        // pairing formula in the total-weight-n model: psi(b X b X 1) = phi(b)^2
        ModelState model({n}, {Rational(n)});
        Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(n, n);
        b(0, 0) = 1;
        model.add_element("b", {b});
        double prediction = psi_word(model, {{"b", "b", "1"}, "1"}).real();
        report.rows.push_back(make_row("y-construction", "n.tr(YbYb)", 2,
                                       summarize(mixed_samples), prediction, cfg.dim));
    }
    if (n > 1) {
        int idx = 0;
        for (int len = 2; len <= alt_orders; len += 2, ++idx) {
            report.rows.push_back(make_row("y-construction-alternating",
                                           "(Y bc)x" + std::to_string(len / 2), len,
                                           summarize(alternating_samples[idx]), 0.0, cfg.dim));
        }
    }
    return report;
}

}  // namespace freeprob
