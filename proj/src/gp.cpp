#include "mcprc/gp.hpp"

#include "mcprc/common.hpp"
#include "mcprc/quasirandom.hpp"
#include "mcprc/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace mcprc {

namespace {

constexpr double kSqrt5 = 2.2360679774997896964;
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kJitterStart = 1e-8;
constexpr double kJitterMax = 1e-4;

// Search box for the compass search, in log space. Lengthscales refer to the
// normalized [0,1] coordinates, signal/noise to the standardized objective.
constexpr double kLogLenLo = -3.0;   // ~0.05
constexpr double kLogLenHi = 2.3;    // ~10
constexpr double kLogSigLo = -2.3;   // ~0.1
constexpr double kLogSigHi = 1.1;    // ~3
constexpr double kLogNoiseLo = -9.2; // ~1e-4
constexpr double kLogNoiseHi = 0.0;  // 1

double matern52(double r, double signal_var) {
    const double s = kSqrt5 * r;
    return signal_var * (1.0 + s + s * s / 3.0) * std::exp(-s);
}

double scaled_distance(const GpHyperparams& hyper, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double diff = (a(i) - b(i)) * std::exp(-hyper.log_lengthscales(i));
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& x,
                              const GpHyperparams& hyper) {
    const Eigen::Index n = x.rows();
    const double signal_var = std::exp(2.0 * hyper.log_signal_sd);
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = signal_var;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = matern52(
                scaled_distance(hyper, x.row(i).transpose(), x.row(j).transpose()),
                signal_var);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

struct Factorization {
    Eigen::MatrixXd lower;
    Eigen::VectorXd alpha;
    double jitter = 0.0;
    double log_marginal = 0.0;
    bool ok = false;
};

Factorization factorize(const Eigen::MatrixXd& x, const Eigen::VectorXd& y_std,
                        const GpHyperparams& hyper) {
    Factorization f;
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd k = kernel_matrix(x, hyper);
    const double noise_var = std::exp(2.0 * hyper.log_noise_sd);
    for (double jitter = kJitterStart; jitter <= kJitterMax * 1.0000001;
         jitter *= 10.0) {
        Eigen::MatrixXd kj = k;
        kj.diagonal().array() += noise_var + jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(kj);
        if (llt.info() != Eigen::Success) continue;
        f.lower = llt.matrixL();
        f.alpha = llt.solve(y_std);
        f.jitter = jitter;
        double log_det_half = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) log_det_half += std::log(f.lower(i, i));
        f.log_marginal = -0.5 * y_std.dot(f.alpha) - log_det_half -
                         0.5 * static_cast<double>(n) * kLog2Pi;
        f.ok = std::isfinite(f.log_marginal);
        if (f.ok) return f;
    }
    f.ok = false;
    return f;
}

double objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y_std,
                 const GpHyperparams& hyper) {
    const Factorization f = factorize(x, y_std, hyper);
    return f.ok ? f.log_marginal : -std::numeric_limits<double>::infinity();
}

GpHyperparams unpack(const Eigen::VectorXd& z, Eigen::Index dim) {
    GpHyperparams h;
    h.log_lengthscales = z.head(dim);
    h.log_signal_sd = z(dim);
    h.log_noise_sd = z(dim + 1);
    return h;
}

Eigen::VectorXd clamp_to_box(Eigen::VectorXd z, Eigen::Index dim) {
    for (Eigen::Index i = 0; i < dim; ++i) {
        z(i) = std::clamp(z(i), kLogLenLo, kLogLenHi);
    }
    z(dim) = std::clamp(z(dim), kLogSigLo, kLogSigHi);
    z(dim + 1) = std::clamp(z(dim + 1), kLogNoiseLo, kLogNoiseHi);
    return z;
}

} // namespace

double gp_kernel(const GpHyperparams& hyper, const Eigen::VectorXd& a,
                 const Eigen::VectorXd& b) {
    return matern52(scaled_distance(hyper, a, b),
                    std::exp(2.0 * hyper.log_signal_sd));
}

GpModel gp_build(const Eigen::MatrixXd& points, const Eigen::VectorXd& values,
                 const GpHyperparams& hyper) {
    if (points.rows() != values.size()) {
        throw std::invalid_argument("gp_build: points/values size mismatch");
    }
    if (points.rows() < 1) {
        throw std::invalid_argument("gp_build: empty training set");
    }
    if (hyper.log_lengthscales.size() != points.cols()) {
        throw std::invalid_argument("gp_build: lengthscale dimension mismatch");
    }
    if (!values.allFinite()) {
        throw std::invalid_argument("gp_build: non-finite objective values");
    }

    GpModel model;
    model.train_x = points;
    model.train_y = values;
    model.hyper = hyper;
    model.y_mean = values.mean();
    const double var =
        (values.array() - model.y_mean).square().sum() /
        std::max<double>(1.0, static_cast<double>(values.size()) - 1.0);
    model.y_sd = var > 0.0 ? std::sqrt(var) : 1.0;

    const Eigen::VectorXd y_std = (values.array() - model.y_mean) / model.y_sd;
    const Factorization f = factorize(points, y_std, hyper);
    if (!f.ok) {
        throw NumericalError("gp_build: kernel factorization failed at maximum jitter");
    }
    model.chol_lower = f.lower;
    model.alpha = f.alpha;
    model.jitter = f.jitter;
    model.log_marginal = f.log_marginal;
    return model;
}

GpModel gp_fit(const Eigen::MatrixXd& points, const Eigen::VectorXd& values,
               std::uint64_t seed, int restarts, const GpHyperparams* warm_start) {
    if (points.rows() < 2) {
        throw std::invalid_argument("gp_fit: need at least two points");
    }
    if (restarts < 1) restarts = 1;
    const Eigen::Index dim = points.cols();
    const Eigen::Index hdim = dim + 2;

    double y_mean = values.mean();
    double var = (values.array() - y_mean).square().sum() /
                 std::max<double>(1.0, static_cast<double>(values.size()) - 1.0);
    const double y_sd = var > 0.0 ? std::sqrt(var) : 1.0;
    const Eigen::VectorXd y_std = (values.array() - y_mean) / y_sd;

    // Restart starts: a sensible default plus seed-shifted Halton points.
    std::vector<Eigen::VectorXd> starts;
    if (warm_start != nullptr && warm_start->log_lengthscales.size() == dim) {
        Eigen::VectorXd z(hdim);
        z.head(dim) = warm_start->log_lengthscales;
        z(dim) = warm_start->log_signal_sd;
        z(dim + 1) = warm_start->log_noise_sd;
        starts.push_back(z);
    }
    {
        Eigen::VectorXd z0(hdim);
        z0.head(dim).setConstant(std::log(0.5));
        z0(dim) = 0.0;               // signal sd 1
        z0(dim + 1) = std::log(0.05); // noise sd
        starts.push_back(z0);
    }
    HaltonSequence halton(static_cast<std::size_t>(hdim));
    Rng shift_rng(seed);
    Eigen::VectorXd shift(hdim);
    for (Eigen::Index i = 0; i < hdim; ++i) shift(i) = shift_rng.uniform01();
    for (int r = 1; r < restarts; ++r) {
        const auto h = halton.point(static_cast<std::size_t>(r));
        Eigen::VectorXd z(hdim);
        for (Eigen::Index i = 0; i < hdim; ++i) {
            const double u = std::fmod(h[static_cast<std::size_t>(i)] + shift(i), 1.0);
            if (i < dim) {
                z(i) = kLogLenLo + u * (kLogLenHi - kLogLenLo);
            } else if (i == dim) {
                z(i) = kLogSigLo + u * (kLogSigHi - kLogSigLo);
            } else {
                z(i) = kLogNoiseLo + u * (kLogNoiseHi - kLogNoiseLo);
            }
        }
        starts.push_back(z);
    }

    double best_lml = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_z;
    for (const Eigen::VectorXd& start : starts) {
        Eigen::VectorXd z = clamp_to_box(start, dim);
        double f_curr = objective(points, y_std, unpack(z, dim));
        int evals = 0;
        double step = 0.4;
        while (step >= 0.01 && evals < 160) {
            bool improved = false;
            for (Eigen::Index i = 0; i < hdim && evals < 160; ++i) {
                for (double sign : {1.0, -1.0}) {
                    Eigen::VectorXd trial = z;
                    trial(i) += sign * step;
                    trial = clamp_to_box(trial, dim);
                    const double f_trial =
                        objective(points, y_std, unpack(trial, dim));
                    ++evals;
                    if (f_trial > f_curr) {
                        z = trial;
                        f_curr = f_trial;
                        improved = true;
                        break;
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        if (f_curr > best_lml) {
            best_lml = f_curr;
            best_z = z;
        }
    }

    if (!std::isfinite(best_lml)) {
        throw NumericalError("gp_fit: no hyperparameter setting produced a valid factorization");
    }
    return gp_build(points, values, unpack(best_z, dim));
}

GpPrediction gp_predict(const GpModel& model, const Eigen::VectorXd& x) {
    if (x.size() != model.dim()) {
        throw std::invalid_argument("gp_predict: dimension mismatch");
    }
    const Eigen::Index n = model.size();
    Eigen::VectorXd k_star(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k_star(i) = gp_kernel(model.hyper, model.train_x.row(i).transpose(), x);
    }
    const double mean_std = k_star.dot(model.alpha);
    const Eigen::VectorXd v =
        model.chol_lower.triangularView<Eigen::Lower>().solve(k_star);
    const double prior_var = std::exp(2.0 * model.hyper.log_signal_sd);
    const double var = std::max(0.0, prior_var - v.squaredNorm());

    GpPrediction p;
    p.mean = model.y_mean + model.y_sd * mean_std;
    p.sd = model.y_sd * std::sqrt(var);
    return p;
}

} // namespace mcprc
