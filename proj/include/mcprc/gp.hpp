#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace mcprc {

/// Matern-5/2 kernel hyperparameters with one lengthscale per input
/// dimension, all stored in log space. Signal and noise scales refer to the
/// internally standardized objective values.
struct GpHyperparams {
    Eigen::VectorXd log_lengthscales;
    double log_signal_sd = 0.0;
    double log_noise_sd = -4.6051701859880914; // log(1e-2)
};

/// Fitted Gaussian-process surrogate. Holds the training set in normalized
/// coordinates, the standardization constants of the objective values, and
/// the Cholesky factor of the kernel matrix (plus jitter) used for
/// prediction.
struct GpModel {
    Eigen::MatrixXd train_x; ///< n x d, coordinates in [0, 1]
    Eigen::VectorXd train_y; ///< raw objective values
    GpHyperparams hyper;
    double y_mean = 0.0;
    double y_sd = 1.0;
    Eigen::MatrixXd chol_lower; ///< L with L L^T = K + jitter I
    Eigen::VectorXd alpha;      ///< (K + jitter I)^{-1} y_standardized
    double jitter = 0.0;
    double log_marginal = 0.0;  ///< at the stored hyperparameters

    Eigen::Index dim() const { return train_x.cols(); }
    Eigen::Index size() const { return train_x.rows(); }
};

struct GpPrediction {
    double mean = 0.0;
    double sd = 0.0;
};

/// Matern-5/2 covariance between two points under the given hyperparameters.
double gp_kernel(const GpHyperparams& hyper, const Eigen::VectorXd& a,
                 const Eigen::VectorXd& b);

/// Builds the factorized model at fixed hyperparameters. Starts from jitter
/// 1e-8 and escalates tenfold up to 1e-4 when the Cholesky factorization
/// fails; beyond that a NumericalError is thrown.
GpModel gp_build(const Eigen::MatrixXd& points, const Eigen::VectorXd& values,
                 const GpHyperparams& hyper);

/// Fits kernel hyperparameters by maximizing the log marginal likelihood
/// with a deterministic multi-start compass search (restart starts drawn
/// from a seed-shifted Halton sequence). Requires at least two points.
/// An optional warm start is searched in addition to the regular restarts.
GpModel gp_fit(const Eigen::MatrixXd& points, const Eigen::VectorXd& values,
               std::uint64_t seed = 0, int restarts = 8,
               const GpHyperparams* warm_start = nullptr);

/// Posterior mean and standard deviation at x, de-standardized to the
/// original objective scale. The standard deviation is the latent-function
/// uncertainty (observation noise excluded) and is always >= 0.
GpPrediction gp_predict(const GpModel& model, const Eigen::VectorXd& x);

} // namespace mcprc
