#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "extcausal/graph.hpp"
#include "extcausal/panel.hpp"
#include "extcausal/rng.hpp"

namespace extcausal {

enum class NoiseFamily { Gaussian, Pareto, Cauchy };

struct NoiseSpec {
    NoiseFamily family = NoiseFamily::Gaussian;

    double sample(Rng& rng) const {
        switch (family) {
            case NoiseFamily::Gaussian: return rng.gaussian();
            case NoiseFamily::Pareto: return rng.pareto1();
            case NoiseFamily::Cauchy: return rng.cauchy();
        }
        throw std::logic_error("unreachable noise family");
    }
};

enum class ModelKind { Var3, Garch3, VarGraph, GarchGraph };

/// Fully seeded description of a synthetic panel. Trivariate kinds use the
/// (alpha_x, alpha_y, alpha_z) coefficients; graph kinds wire fixed-strength
/// effects along the given summary graph, with adjacency(j, i) meaning that
/// series j enters series i's recursion.
struct SimulationRecipe {
    ModelKind kind = ModelKind::Var3;
    double alpha_x = 0.5;
    double alpha_y = 0.5;
    double alpha_z = 0.5;
    SummaryGraph graph;  // graph kinds only
    std::size_t n = 0;
    NoiseSpec noise;
    std::size_t burn_in = 0;
    std::uint64_t seed = 0;

    std::size_t series_count() const {
        return (kind == ModelKind::Var3 || kind == ModelKind::Garch3) ? 3 : graph.size();
    }

    void validate() const {
        if (n < 2) throw std::invalid_argument("simulation needs n >= 2");
        if ((kind == ModelKind::VarGraph || kind == ModelKind::GarchGraph) && graph.size() < 2)
            throw std::invalid_argument("graph kinds need a graph with at least two vertices");
    }
};

/// Core generator with an injectable noise source; noise(i) is called once
/// per generated row for each series i in storage order. The state starts at
/// zero, the first burn_in generated rows are discarded.
template <typename NoiseFn>
TimeSeriesPanel simulate_with_noise(const SimulationRecipe& recipe, NoiseFn&& noise) {
    recipe.validate();
    const std::size_t m = recipe.series_count();
    const std::size_t total = recipe.n + recipe.burn_in;

    std::vector<std::vector<double>> columns(m);
    for (auto& col : columns) col.reserve(total);

    std::vector<double> state(m, 0.0);
    std::vector<double> next(m, 0.0);
    std::vector<double> eps(m, 0.0);
    for (std::size_t c = 0; c < m; ++c) columns[c].push_back(state[c]);

    for (std::size_t t = 1; t < total; ++t) {
        for (std::size_t i = 0; i < m; ++i) eps[i] = noise(i);
        switch (recipe.kind) {
            case ModelKind::Var3: {
                const double x = state[0], y = state[1], z = state[2];
                next[0] = 0.5 * x + recipe.alpha_z * z + eps[0];
                next[1] = recipe.alpha_y * y + recipe.alpha_z * z + recipe.alpha_x * x + eps[1];
                next[2] = 0.5 * z + eps[2];
                break;
            }
            case ModelKind::Garch3: {
                const double x = state[0], y = state[1], z = state[2];
                next[0] = std::sqrt(0.1 + 0.1 * x * x + recipe.alpha_z * z * z) * eps[0];
                next[1] = std::sqrt(0.1 + recipe.alpha_y / 5.0 * y * y +
                                    recipe.alpha_z * z * z + recipe.alpha_x * x * x) *
                          eps[1];
                next[2] = std::sqrt(0.1 + 0.1 * z * z) * eps[2];
                break;
            }
            case ModelKind::VarGraph: {
                for (std::size_t i = 0; i < m; ++i) {
                    double value = 0.3 * state[i];
                    for (std::size_t j = 0; j < m; ++j) {
                        if (j != i && recipe.graph.edge(j, i)) value += 0.3 * state[j];
                    }
                    next[i] = value + eps[i];
                }
                break;
            }
            case ModelKind::GarchGraph: {
                for (std::size_t i = 0; i < m; ++i) {
                    double variance = 0.1;
                    for (std::size_t j = 0; j < m; ++j) {
                        if (j != i && recipe.graph.edge(j, i))
                            variance += 0.5 * state[j] * state[j];
                    }
                    next[i] = std::sqrt(variance) * eps[i];
                }
                break;
            }
        }
        state = next;
        for (std::size_t c = 0; c < m; ++c) columns[c].push_back(state[c]);
    }

    for (auto& col : columns) col.erase(col.begin(), col.begin() + recipe.burn_in);

    std::vector<std::string> names;
    if (recipe.kind == ModelKind::Var3 || recipe.kind == ModelKind::Garch3) {
        names = {"X", "Y", "Z"};
    } else {
        names = recipe.graph.names();
    }
    return TimeSeriesPanel(std::move(columns), std::move(names));
}

inline TimeSeriesPanel simulate(const SimulationRecipe& recipe) {
    Rng rng(recipe.seed);
    return simulate_with_noise(recipe,
                               [&rng, &recipe](std::size_t) { return recipe.noise.sample(rng); });
}

/// Random digraph: each ordered pair (i, j), i != j, carries an edge
/// independently with probability edge_prob. Draw order is row-major, so the
/// result is a pure function of the engine state.
inline SummaryGraph random_graph(std::size_t m, double edge_prob, Rng& rng,
                                 const std::string& name_prefix = "X") {
    if (m < 1) throw std::invalid_argument("graph needs at least one vertex");
    if (!(edge_prob >= 0.0 && edge_prob <= 1.0))
        throw std::invalid_argument("edge probability outside [0,1]");
    std::vector<std::string> names;
    names.reserve(m);
    for (std::size_t i = 0; i < m; ++i) names.push_back(name_prefix + std::to_string(i + 1));
    SummaryGraph graph(std::move(names));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            if (rng.uniform01() < edge_prob) graph.set_edge(i, j, true);
        }
    }
    return graph;
}

}  // namespace extcausal
