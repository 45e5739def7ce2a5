#pragma once

#include "mcprc/channel.hpp"
#include "mcprc/receptor.hpp"

#include <Eigen/Dense>

#include <span>

namespace mcprc {

/// Readout-side settings: how the continuous trace is multiplexed into
/// virtual-node states and how the linear readout is regularized.
struct ReservoirConfig {
    int virtual_nodes_M = 20;
    int memory_window_L = 5; ///< mirrors ChannelParams::memory_window_L
    int washout_symbols = 50;
    double ridge_lambda = 1e-6;
    int filter_window_W = 0; ///< moving-average window in samples, 0 = off

    void validate() const;
};

/// Design matrix and aligned targets ready for readout training. Row n holds
/// the concatenation of L consecutive M-dimensional virtual-node vectors plus
/// a trailing bias entry of 1.
struct ReservoirDataset {
    Eigen::MatrixXd states;  ///< rows x (M*L + 1)
    Eigen::VectorXd targets; ///< one target per row
    int first_symbol = 0;    ///< symbol index of row 0 in the source series
};

struct ReadoutWeights {
    Eigen::VectorXd weights;
    /// Set when a rank-deficient unregularized solve fell back to the
    /// minimum-norm solution.
    bool min_norm_fallback = false;
};

/// Causal moving average, Eq.-style: the output at sample i averages the
/// window of up to W most recent raw samples. The first W-1 outputs average
/// over the samples available so far, so nothing before t0 is ever read and
/// the output length equals the input length.
BoundFractionTrace moving_average_filter(const BoundFractionTrace& trace,
                                         int window_W);

/// Samples b(t) at the M uniform offsets t = n*T + (j+1)*T/M inside each
/// symbol (nearest-sample lookup) and stacks them as one row per symbol.
Eigen::MatrixXd build_states(const BoundFractionTrace& trace,
                             const ChannelParams& params,
                             const ReservoirConfig& config, int num_symbols);

/// Windows the per-symbol states into readout rows: row for symbol n
/// concatenates states n-L+1 .. n plus a bias 1, skipping symbols whose
/// window would reach before the washout.
ReservoirDataset assemble_dataset(const Eigen::MatrixXd& states,
                                  std::span<const double> targets,
                                  const ReservoirConfig& config);

/// Ridge readout: solves (X^T X + lambda I) w = X^T y by LDLT. With
/// lambda = 0 the minimum-norm least-squares solution is used instead
/// (exactly the pseudoinverse on full-column-rank designs; flagged when the
/// design is rank deficient).
ReadoutWeights train_readout(const ReservoirDataset& dataset,
                             const ReservoirConfig& config);

double predict(const ReadoutWeights& weights, const Eigen::VectorXd& state_row);
Eigen::VectorXd predict_all(const ReadoutWeights& weights,
                            const Eigen::MatrixXd& states);

/// Contiguous head/tail row split (no shuffling; these are temporal tasks).
std::pair<ReservoirDataset, ReservoirDataset>
split_dataset(const ReservoirDataset& dataset, double train_fraction);

} // namespace mcprc
