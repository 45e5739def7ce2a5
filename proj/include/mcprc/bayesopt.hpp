#pragma once

#include "mcprc/channel.hpp"
#include "mcprc/gp.hpp"
#include "mcprc/rng.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mcprc {

enum class DimScale { linear, log10 };

struct DimSpec {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
    DimScale scale = DimScale::linear;
    bool integer = false;
};

/// Box-bounded search domain. Optimization happens in normalized [0,1]^dim
/// coordinates; log10-scaled dimensions are normalized in log space and
/// integer dimensions are rounded (and kept in bounds) on the way out.
struct SearchSpace {
    std::vector<DimSpec> dims;

    std::size_t size() const { return dims.size(); }
    void validate() const;

    Eigen::VectorXd normalize(const std::vector<double>& x) const;
    std::vector<double> denormalize(const Eigen::VectorXd& u) const;
};

/// The canonical seven-dimensional biophysical space: k_on, k_off, T, d,
/// n_max, D, memory_window_L (SI units; log10 scaling on k_on, D, n_max).
SearchSpace default_channel_space();

ChannelParams channel_params_from_point(const std::vector<double>& x);
std::vector<double> point_from_channel_params(const ChannelParams& params);

/// Expected improvement for minimization under a Gaussian posterior:
///   EI = (f_min - mu) Phi(Z) + sigma phi(Z),  Z = (f_min - mu) / sigma,
/// degenerating to max(f_min - mu, 0) when sigma <= 1e-12. Always >= 0.
double expected_improvement(double mean, double sd, double f_min);
double expected_improvement(const GpModel& model, const Eigen::VectorXd& x,
                            double f_min);

/// Maximizes EI over the space: scores 4096 shifted-Halton candidates,
/// refines the best 8 by coordinate-wise search with shrinking steps, and
/// returns the winner denormalized. When the EI landscape is exactly flat at
/// zero, the candidate with the largest posterior standard deviation is
/// returned instead.
std::vector<double> propose_next(const GpModel& model, const SearchSpace& space,
                                 double f_min, Rng& rng);

/// propose_next mapped onto the canonical channel space.
ChannelParams propose_next_params(const GpModel& model, const SearchSpace& space,
                                  double f_min, Rng& rng);

enum class TrialStatus { ok, failed };

struct Trial {
    std::vector<double> x; ///< denormalized coordinates
    double objective = 0.0; ///< finite iff status == ok
    TrialStatus status = TrialStatus::ok;
    double duration_s = 0.0;
    int index = 0; ///< evaluation order
};

/// Sequential GP optimization: `init` quasi-random evaluations, then
/// fit -> propose -> evaluate until `budget` trials are spent. Objective
/// exceptions (and non-finite returns) are recorded as failed trials and
/// imputed at the worst observed value for surrogate fitting; a surrogate
/// failure falls back to a random point for that iteration. Returns all
/// trials sorted ascending by objective (failed trials last).
std::vector<Trial> optimize(
    const std::function<double(const std::vector<double>&)>& objective,
    const SearchSpace& space, int budget, int init, std::uint64_t rng_seed);

} // namespace mcprc
