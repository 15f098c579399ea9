#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "extcausal/discovery.hpp"
#include "extcausal/graph.hpp"
#include "extcausal/parallel.hpp"
#include "extcausal/simulation.hpp"

namespace extcausal {

/// Normalized directed edit distance: the share of ordered off-diagonal pairs
/// whose adjacency differs, i.e. mismatches / (m * (m - 1)).
inline double edit_distance(const SummaryGraph& estimated, const SummaryGraph& truth) {
    if (estimated.size() != truth.size() || estimated.names() != truth.names())
        throw std::invalid_argument("edit_distance: graphs must share size and column order");
    const std::size_t m = estimated.size();
    if (m < 2) throw std::invalid_argument("edit_distance: need at least two vertices");
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i != j && estimated.edge(i, j) != truth.edge(i, j)) ++mismatches;
        }
    }
    return static_cast<double>(mismatches) / static_cast<double>(m * (m - 1));
}

enum class BenchmarkModel { VarPareto, VarGaussian, GarchCauchy, GarchGaussian };
enum class BenchmarkMethod { ExtremeClassifier, RandomHalf };

inline const char* model_label(BenchmarkModel model) {
    switch (model) {
        case BenchmarkModel::VarPareto:
        case BenchmarkModel::VarGaussian: return "var";
        case BenchmarkModel::GarchCauchy:
        case BenchmarkModel::GarchGaussian: return "garch";
    }
    return "?";
}

inline const char* noise_label(BenchmarkModel model) {
    switch (model) {
        case BenchmarkModel::VarPareto: return "pareto";
        case BenchmarkModel::VarGaussian: return "gaussian";
        case BenchmarkModel::GarchCauchy: return "cauchy";
        case BenchmarkModel::GarchGaussian: return "gaussian";
    }
    return "?";
}

inline const char* method_label(BenchmarkMethod method) {
    switch (method) {
        case BenchmarkMethod::ExtremeClassifier: return "extreme";
        case BenchmarkMethod::RandomHalf: return "random";
    }
    return "?";
}

/// Monte-Carlo study layout: per cell (m, n, model) draw a 1/m-density truth
/// graph, simulate, estimate with each method, and score the normalized edit
/// distance against the truth.
struct BenchmarkGrid {
    std::vector<std::size_t> m_values{3, 5, 7};
    std::vector<std::size_t> n_values{500, 5000};
    std::vector<BenchmarkModel> models{BenchmarkModel::VarPareto, BenchmarkModel::VarGaussian};
    std::size_t replications = 100;
    ConditioningSpec spec;
    std::vector<BenchmarkMethod> methods{BenchmarkMethod::ExtremeClassifier,
                                         BenchmarkMethod::RandomHalf};
    std::uint64_t seed = 0;
    unsigned threads = 1;

    void validate() const {
        if (replications < 1) throw std::invalid_argument("need at least one replication");
        if (m_values.empty() || n_values.empty() || models.empty() || methods.empty())
            throw std::invalid_argument("benchmark grid has an empty dimension");
        for (std::size_t m : m_values) {
            if (m < 2) throw std::invalid_argument("benchmark needs m >= 2");
        }
        for (std::size_t n : n_values) {
            if (n < 2) throw std::invalid_argument("benchmark needs n >= 2");
        }
    }
};

struct BenchmarkRow {
    std::size_t m = 0;
    std::size_t n = 0;
    BenchmarkModel model = BenchmarkModel::VarPareto;
    BenchmarkMethod method = BenchmarkMethod::ExtremeClassifier;
    double mean_error = 0.0;
    double stderr_error = 0.0;
    double mean_runtime_seconds = 0.0;
    std::size_t replications = 0;  // successful ones entering the mean
    std::size_t failures = 0;
};

struct BenchmarkReport {
    std::vector<BenchmarkRow> rows;
};

namespace detail {

inline SimulationRecipe recipe_for(BenchmarkModel model, const SummaryGraph& truth,
                                   std::size_t n, std::uint64_t seed) {
    SimulationRecipe recipe;
    recipe.graph = truth;
    recipe.n = n;
    recipe.seed = seed;
    recipe.burn_in = 0;
    switch (model) {
        case BenchmarkModel::VarPareto:
            recipe.kind = ModelKind::VarGraph;
            recipe.noise.family = NoiseFamily::Pareto;
            break;
        case BenchmarkModel::VarGaussian:
            recipe.kind = ModelKind::VarGraph;
            recipe.noise.family = NoiseFamily::Gaussian;
            break;
        case BenchmarkModel::GarchCauchy:
            recipe.kind = ModelKind::GarchGraph;
            recipe.noise.family = NoiseFamily::Cauchy;
            break;
        case BenchmarkModel::GarchGaussian:
            recipe.kind = ModelKind::GarchGraph;
            recipe.noise.family = NoiseFamily::Gaussian;
            break;
    }
    return recipe;
}

struct RepScore {
    std::optional<double> error;
    double runtime_seconds = 0.0;
};

}  // namespace detail

/// Runs the full grid. Every cell and replication derives its own sub-seed
/// from (seed, m, n, model, rep), so cells rerun independently and parallel
/// execution matches the sequential result. Failed replications (an exploding
/// simulation or a degenerate estimate) are excluded from the averages and
/// counted per row.
inline BenchmarkReport run_benchmark(const BenchmarkGrid& grid) {
    grid.validate();
    BenchmarkReport report;
    const std::size_t reps = grid.replications;

    for (std::size_t m : grid.m_values) {
        for (std::size_t n : grid.n_values) {
            for (std::size_t model_idx = 0; model_idx < grid.models.size(); ++model_idx) {
                const BenchmarkModel model = grid.models[model_idx];
                // scores[method][rep]
                std::vector<std::vector<detail::RepScore>> scores(
                    grid.methods.size(), std::vector<detail::RepScore>(reps));

                parallel_for(reps, grid.threads, [&](std::size_t rep) {
                    const std::uint64_t rep_seed = derive_seed(
                        derive_seed(derive_seed(derive_seed(grid.seed, m), n),
                                    static_cast<std::uint64_t>(model) + 101),
                        rep);
                    Rng truth_rng(derive_seed(rep_seed, 1));
                    const SummaryGraph truth =
                        random_graph(m, 1.0 / static_cast<double>(m), truth_rng);

                    std::optional<TimeSeriesPanel> panel;
                    bool need_panel = false;
                    for (BenchmarkMethod method : grid.methods)
                        need_panel |= method == BenchmarkMethod::ExtremeClassifier;
                    if (need_panel) {
                        try {
                            panel = simulate(
                                detail::recipe_for(model, truth, n, derive_seed(rep_seed, 2)));
                        } catch (const std::exception&) {
                            // exploding recursion; leave panel empty
                        }
                    }

                    for (std::size_t mi = 0; mi < grid.methods.size(); ++mi) {
                        detail::RepScore& slot = scores[mi][rep];
                        switch (grid.methods[mi]) {
                            case BenchmarkMethod::ExtremeClassifier: {
                                if (!panel) break;
                                const auto start = std::chrono::steady_clock::now();
                                try {
                                    const GraphEstimate estimate = estimate_summary_graph(
                                        *panel, grid.spec, ClassifierBackend{}, 1);
                                    slot.error = edit_distance(estimate.graph, truth);
                                } catch (const std::exception&) {
                                }
                                slot.runtime_seconds =
                                    std::chrono::duration<double>(
                                        std::chrono::steady_clock::now() - start)
                                        .count();
                                break;
                            }
                            case BenchmarkMethod::RandomHalf: {
                                Rng baseline_rng(derive_seed(rep_seed, 3));
                                const auto start = std::chrono::steady_clock::now();
                                SummaryGraph guess = random_graph(m, 0.5, baseline_rng);
                                slot.error = edit_distance(guess, truth);
                                slot.runtime_seconds =
                                    std::chrono::duration<double>(
                                        std::chrono::steady_clock::now() - start)
                                        .count();
                                break;
                            }
                        }
                    }
                });

                for (std::size_t mi = 0; mi < grid.methods.size(); ++mi) {
                    BenchmarkRow row;
                    row.m = m;
                    row.n = n;
                    row.model = model;
                    row.method = grid.methods[mi];
                    double sum = 0.0, sum_sq = 0.0, time_sum = 0.0;
                    for (const auto& score : scores[mi]) {
                        if (!score.error) {
                            ++row.failures;
                            continue;
                        }
                        ++row.replications;
                        sum += *score.error;
                        sum_sq += *score.error * *score.error;
                        time_sum += score.runtime_seconds;
                    }
                    if (row.replications > 0) {
                        const double count = static_cast<double>(row.replications);
                        row.mean_error = sum / count;
                        if (row.replications > 1) {
                            const double variance =
                                (sum_sq - sum * sum / count) / (count - 1.0);
                            row.stderr_error =
                                std::sqrt(std::max(0.0, variance) / count);
                        }
                        row.mean_runtime_seconds = time_sum / count;
                    }
                    report.rows.push_back(row);
                }
            }
        }
    }
    return report;
}

}  // namespace extcausal
