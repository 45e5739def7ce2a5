#include "mcprc/reservoir.hpp"

#include "mcprc/common.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mcprc {

void ReservoirConfig::validate() const {
    if (virtual_nodes_M < 1) {
        throw std::invalid_argument("ReservoirConfig: virtual_nodes_M must be >= 1");
    }
    if (memory_window_L < 1) {
        throw std::invalid_argument("ReservoirConfig: memory_window_L must be >= 1");
    }
    if (washout_symbols < 0) {
        throw std::invalid_argument("ReservoirConfig: washout_symbols must be >= 0");
    }
    if (!(ridge_lambda >= 0.0)) {
        throw std::invalid_argument("ReservoirConfig: ridge_lambda must be >= 0");
    }
    if (filter_window_W < 0) {
        throw std::invalid_argument("ReservoirConfig: filter_window_W must be >= 0");
    }
}

BoundFractionTrace moving_average_filter(const BoundFractionTrace& trace,
                                         int window_W) {
    if (window_W < 1) {
        throw std::invalid_argument("moving_average_filter: window_W must be >= 1");
    }
    BoundFractionTrace out;
    out.dt = trace.dt;
    out.t0 = trace.t0;
    out.samples.resize(trace.samples.size());
    const auto W = static_cast<std::size_t>(window_W);
    double running = 0.0;
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        running += trace.samples[i];
        if (i >= W) running -= trace.samples[i - W];
        const double n = static_cast<double>(std::min(i + 1, W));
        out.samples[i] = running / n;
    }
    return out;
}

Eigen::MatrixXd build_states(const BoundFractionTrace& trace,
                             const ChannelParams& params,
                             const ReservoirConfig& config, int num_symbols) {
    config.validate();
    if (num_symbols < 1) {
        throw std::invalid_argument("build_states: num_symbols must be >= 1");
    }
    if (trace.samples.empty() || !(trace.dt > 0.0)) {
        throw std::invalid_argument("build_states: empty or invalid trace");
    }
    const double T = params.symbol_duration_T;
    const int M = config.virtual_nodes_M;
    const double t_last = static_cast<double>(num_symbols) * T;
    const auto last_index =
        static_cast<long long>(std::llround((t_last - trace.t0) / trace.dt));
    if (last_index >= static_cast<long long>(trace.samples.size())) {
        throw std::invalid_argument("build_states: trace shorter than num_symbols * T");
    }

    Eigen::MatrixXd states(num_symbols, M);
    for (int n = 0; n < num_symbols; ++n) {
        for (int j = 0; j < M; ++j) {
            const double t = static_cast<double>(n) * T +
                             static_cast<double>(j + 1) * T / static_cast<double>(M);
            states(n, j) = trace.samples[trace.index_at(t)];
        }
    }
    return states;
}

ReservoirDataset assemble_dataset(const Eigen::MatrixXd& states,
                                  std::span<const double> targets,
                                  const ReservoirConfig& config) {
    config.validate();
    const auto num_symbols = static_cast<int>(states.rows());
    if (static_cast<std::size_t>(num_symbols) != targets.size()) {
        throw std::invalid_argument("assemble_dataset: states/targets length mismatch");
    }
    const int L = config.memory_window_L;
    const int M = static_cast<int>(states.cols());
    // First symbol whose L-window stays clear of the washout region.
    const int first = config.washout_symbols + L - 1;
    const int rows = num_symbols - first;
    if (rows < 1) {
        throw std::invalid_argument("assemble_dataset: not enough symbols after washout for one full window");
    }

    ReservoirDataset dataset;
    dataset.first_symbol = first;
    dataset.states.resize(rows, M * L + 1);
    dataset.targets.resize(rows);
    for (int r = 0; r < rows; ++r) {
        const int n = first + r;
        for (int l = 0; l < L; ++l) {
            dataset.states.block(r, l * M, 1, M) = states.row(n - L + 1 + l);
        }
        dataset.states(r, M * L) = 1.0; // bias
        dataset.targets(r) = targets[static_cast<std::size_t>(n)];
    }
    return dataset;
}

ReadoutWeights train_readout(const ReservoirDataset& dataset,
                             const ReservoirConfig& config) {
    config.validate();
    if (dataset.states.rows() == 0 || dataset.states.cols() == 0) {
        throw std::invalid_argument("train_readout: empty dataset");
    }
    if (dataset.states.rows() != dataset.targets.size()) {
        throw std::invalid_argument("train_readout: row/target count mismatch");
    }
    ReadoutWeights result;
    const Eigen::MatrixXd& X = dataset.states;
    const Eigen::VectorXd& y = dataset.targets;
    if (config.ridge_lambda > 0.0) {
        const auto p = X.cols();
        Eigen::MatrixXd gram = X.transpose() * X;
        gram.diagonal().array() += config.ridge_lambda;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
        if (ldlt.info() != Eigen::Success) {
            throw NumericalError("train_readout: LDLT factorization failed");
        }
        result.weights = ldlt.solve(X.transpose() * y);
    } else {
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(X);
        result.weights = cod.solve(y);
        result.min_norm_fallback = cod.rank() < X.cols();
    }
    if (!result.weights.allFinite()) {
        throw NumericalError("train_readout: non-finite weights");
    }
    return result;
}

double predict(const ReadoutWeights& weights, const Eigen::VectorXd& state_row) {
    if (state_row.size() != weights.weights.size()) {
        throw std::invalid_argument("predict: state/weight dimension mismatch");
    }
    return weights.weights.dot(state_row);
}

Eigen::VectorXd predict_all(const ReadoutWeights& weights,
                            const Eigen::MatrixXd& states) {
    if (states.cols() != weights.weights.size()) {
        throw std::invalid_argument("predict: state/weight dimension mismatch");
    }
    return states * weights.weights;
}

std::pair<ReservoirDataset, ReservoirDataset>
split_dataset(const ReservoirDataset& dataset, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("split_dataset: train_fraction must be in (0, 1)");
    }
    const auto rows = dataset.states.rows();
    auto n_train = static_cast<Eigen::Index>(
        std::floor(train_fraction * static_cast<double>(rows)));
    n_train = std::clamp<Eigen::Index>(n_train, 1, rows - 1);

    ReservoirDataset train, test;
    train.first_symbol = dataset.first_symbol;
    train.states = dataset.states.topRows(n_train);
    train.targets = dataset.targets.head(n_train);
    test.first_symbol = dataset.first_symbol + static_cast<int>(n_train);
    test.states = dataset.states.bottomRows(rows - n_train);
    test.targets = dataset.targets.tail(rows - n_train);
    return {std::move(train), std::move(test)};
}

} // namespace mcprc
