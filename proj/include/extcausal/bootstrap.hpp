#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "extcausal/errors.hpp"
#include "extcausal/estimator.hpp"
#include "extcausal/panel.hpp"
#include "extcausal/parallel.hpp"
#include "extcausal/rng.hpp"

namespace extcausal {

struct BootstrapConfig {
    std::size_t draws = 200;       // B
    std::size_t block_length = 0;  // b; 0 means floor(sqrt(n))
    double alpha = 0.05;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/// Outcome of the block-bootstrap tail-causality test. `reject` is exactly
/// "the alpha-quantile of the successful delta draws is strictly positive".
struct TestResult {
    bool reject = false;
    double alpha_quantile_of_delta = 0.0;
    std::vector<double> deltas;  // gamma_hat - baseline_hat per successful draw, in draw order
    std::size_t n_failed_draws = 0;
    double p_hat = 0.0;            // share of draws with delta <= 0; descriptive only
    bool low_reliability = false;  // more than half the draws failed
    BootstrapConfig config;        // echo, with the realized block length
};

/// Moving-block resample: ceil(n/b) block starts drawn uniformly with
/// replacement from the n-b+1 overlapping blocks, concatenated in draw order
/// and truncated to n rows. Rows move as a whole, so every output row equals
/// some input row across all columns.
inline TimeSeriesPanel block_bootstrap_resample(const TimeSeriesPanel& panel,
                                                std::size_t block_length, Rng& rng) {
    const std::size_t n = panel.rows();
    if (block_length < 1 || block_length > n)
        throw std::invalid_argument("block length must lie in [1, n]");
    const std::size_t n_blocks = (n + block_length - 1) / block_length;
    const std::size_t n_starts = n - block_length + 1;

    std::vector<std::vector<double>> columns(panel.cols());
    for (auto& col : columns) col.reserve(n_blocks * block_length);
    for (std::size_t blk = 0; blk < n_blocks; ++blk) {
        const std::size_t start = rng.uniform_below(n_starts);
        for (std::size_t c = 0; c < panel.cols(); ++c) {
            const auto src = panel.column(c);
            columns[c].insert(columns[c].end(), src.begin() + start,
                              src.begin() + start + block_length);
        }
    }
    for (auto& col : columns) col.resize(n);
    return TimeSeriesPanel(std::move(columns), panel.names());
}

/// Block-bootstrap test of "no tail causality": resample the panel B times,
/// compute delta = gamma_hat - baseline_hat on each resample, and reject when
/// the empirical alpha-quantile of the deltas is strictly positive. Draws use
/// per-draw sub-seeds, so parallel execution reproduces the sequential result.
inline TestResult tail_causality_test(const TimeSeriesPanel& panel, std::string_view cause,
                                      std::string_view effect,
                                      const std::vector<std::string>& conditioners,
                                      const ConditioningSpec& spec,
                                      const BootstrapConfig& config) {
    if (config.draws < 1) throw std::invalid_argument("need at least one bootstrap draw");
    if (!(config.alpha > 0.0 && config.alpha < 1.0))
        throw std::invalid_argument("alpha must lie in (0,1)");
    const std::size_t n = panel.rows();
    const std::size_t block =
        config.block_length > 0
            ? config.block_length
            : static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    if (block < 1 || block > n) throw std::invalid_argument("block length must lie in [1, n]");

    // Fail fast on misuse; inside the draw loop only degeneracy is tolerated.
    const std::size_t cause_col = panel.column_index(cause);
    const std::size_t effect_col = panel.column_index(effect);
    if (cause_col == effect_col) throw std::invalid_argument("cause and effect must differ");
    for (const auto& name : conditioners) {
        const std::size_t col = panel.column_index(name);
        if (col == cause_col || col == effect_col)
            throw std::invalid_argument("conditioner '" + name + "' overlaps cause/effect");
    }
    spec.validate(conditioners.size());
    if (n < spec.p_x + spec.p_y + 1)
        throw std::invalid_argument("sample too short for the requested lags");

    std::vector<std::optional<double>> draws(config.draws);
    parallel_for(config.draws, config.threads, [&](std::size_t k) {
        Rng rng(derive_seed(config.seed, k));
        try {
            const TimeSeriesPanel resample = block_bootstrap_resample(panel, block, rng);
            const GammaEstimate estimate =
                gamma_pair(resample, cause, effect, conditioners, spec);
            draws[k] = estimate.gamma_hat - estimate.baseline_hat;
        } catch (const degeneracy_error&) {
            draws[k] = std::nullopt;  // thresholds left this resample empty
        }
    });

    TestResult result;
    result.config = config;
    result.config.block_length = block;
    for (const auto& d : draws) {
        if (d) {
            result.deltas.push_back(*d);
        } else {
            ++result.n_failed_draws;
        }
    }
    if (result.deltas.empty())
        throw degeneracy_error("bootstrap degenerate — thresholds too strict");
    result.low_reliability = 2 * result.n_failed_draws > config.draws;
    result.alpha_quantile_of_delta = empirical_quantile(result.deltas, config.alpha);
    result.reject = result.alpha_quantile_of_delta > 0.0;
    std::size_t non_positive = 0;
    for (double d : result.deltas) non_positive += d <= 0.0;
    result.p_hat = static_cast<double>(non_positive) / static_cast<double>(result.deltas.size());
    return result;
}

}  // namespace extcausal
