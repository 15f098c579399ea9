#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "extcausal/bootstrap.hpp"
#include "extcausal/estimator.hpp"
#include "extcausal/graph.hpp"
#include "extcausal/panel.hpp"
#include "extcausal/parallel.hpp"

namespace extcausal {

/// Pairwise classification: causal in extremes iff gamma_hat exceeds the
/// midpoint between the baseline estimate and 1.
struct PairDecision {
    bool causes = false;
    double threshold = 0.0;  // (1 + baseline_hat) / 2
    GammaEstimate gamma;
};

/// A pair decision that may have failed for data reasons (empty index sets).
/// Failures stay distinct from causes=false so callers can treat them
/// conservatively instead of silently dropping edges.
struct PairOutcome {
    std::optional<PairDecision> decision;
    std::string failure;
    bool decidable() const { return decision.has_value(); }
};

inline PairOutcome classify_pair(const TimeSeriesPanel& panel, std::string_view cause,
                                 std::string_view effect,
                                 const std::vector<std::string>& conditioners,
                                 const ConditioningSpec& spec) {
    PairOutcome out;
    try {
        GammaEstimate estimate = gamma_pair(panel, cause, effect, conditioners, spec);
        PairDecision decision;
        decision.threshold = (1.0 + estimate.baseline_hat) / 2.0;
        decision.causes = estimate.gamma_hat > decision.threshold;
        decision.gamma = std::move(estimate);
        out.decision = std::move(decision);
    } catch (const degeneracy_error& e) {
        out.failure = e.what();
    }
    return out;
}

struct ClassifierBackend {};

struct BootstrapBackend {
    BootstrapConfig config;
};

/// How an edge decision is made: the classification rule or the
/// block-bootstrap test (edge kept iff the no-tail-causality null is
/// rejected).
using DecisionBackend = std::variant<ClassifierBackend, BootstrapBackend>;

struct GraphEstimate {
    SummaryGraph graph;     // final output
    SummaryGraph pairwise;  // after the pairwise pass, before conditioning
    std::vector<std::string> warnings;
};

namespace detail {

enum class EdgeCall { Keep, Remove, Undecidable };

struct EdgeResult {
    EdgeCall call = EdgeCall::Keep;
    std::string failure;
};

inline EdgeResult decide_edge(const TimeSeriesPanel& panel, std::size_t from, std::size_t to,
                              const std::vector<std::string>& conditioners,
                              const ConditioningSpec& spec, const DecisionBackend& backend,
                              std::uint64_t salt) {
    EdgeResult result;
    const auto& names = panel.names();
    if (std::holds_alternative<ClassifierBackend>(backend)) {
        const PairOutcome outcome =
            classify_pair(panel, names[from], names[to], conditioners, spec);
        if (!outcome.decidable()) {
            result.call = EdgeCall::Undecidable;
            result.failure = outcome.failure;
        } else {
            result.call = outcome.decision->causes ? EdgeCall::Keep : EdgeCall::Remove;
        }
        return result;
    }
    BootstrapConfig config = std::get<BootstrapBackend>(backend).config;
    // Per-pair sub-seed: independent of evaluation order, so parallel pair
    // scheduling cannot change the output.
    config.seed = derive_seed(derive_seed(config.seed, salt),
                              from * panel.cols() + to);
    config.threads = 1;
    try {
        const TestResult test =
            tail_causality_test(panel, names[from], names[to], conditioners, spec, config);
        result.call = test.reject ? EdgeCall::Keep : EdgeCall::Remove;
    } catch (const degeneracy_error& e) {
        result.call = EdgeCall::Undecidable;
        result.failure = e.what();
    }
    return result;
}

}  // namespace detail

/// Two-phase summary-graph estimation. The pairwise pass decides every
/// ordered pair with no conditioning; the multivariate pass re-decides each
/// surviving edge conditioning on the common parents read from the frozen
/// pairwise graph, so removals cannot cascade within the pass. Undecidable
/// pairs keep their edge and produce a warning. Pair decisions within a pass
/// are independent and may run on several threads with identical output.
inline GraphEstimate estimate_summary_graph(const TimeSeriesPanel& panel,
                                            const ConditioningSpec& spec,
                                            const DecisionBackend& backend = ClassifierBackend{},
                                            unsigned threads = 1) {
    const std::size_t m = panel.cols();
    if (m < 2) throw std::invalid_argument("graph estimation needs at least two series");
    const auto& names = panel.names();

    struct Pair {
        std::size_t from, to;
    };
    std::vector<Pair> pairs;
    pairs.reserve(m * (m - 1));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i != j) pairs.push_back({i, j});
        }
    }

    GraphEstimate out;
    SummaryGraph graph = SummaryGraph::complete(names);

    // Pairwise pass: conditioners empty.
    {
        std::vector<detail::EdgeResult> results(pairs.size());
        parallel_for(pairs.size(), threads, [&](std::size_t p) {
            results[p] = detail::decide_edge(panel, pairs[p].from, pairs[p].to, {}, spec,
                                             backend, /*salt=*/1);
        });
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            if (results[p].call == detail::EdgeCall::Remove) {
                graph.set_edge(pairs[p].from, pairs[p].to, false);
            } else if (results[p].call == detail::EdgeCall::Undecidable) {
                out.warnings.push_back("pairwise pass: " + names[pairs[p].from] + " -> " +
                                       names[pairs[p].to] + " not decidable (" +
                                       results[p].failure + "); edge retained");
            }
        }
    }
    out.pairwise = graph;

    // Multivariate pass over surviving edges; parents come from the frozen
    // pairwise graph and the pair's own columns are excluded.
    std::vector<Pair> survivors;
    for (const auto& pr : pairs) {
        if (graph.edge(pr.from, pr.to)) survivors.push_back(pr);
    }
    std::vector<detail::EdgeResult> results(survivors.size());
    parallel_for(survivors.size(), threads, [&](std::size_t p) {
        const auto [from, to] = survivors[p];
        const auto pa_from = out.pairwise.parents(from);
        const auto pa_to = out.pairwise.parents(to);
        std::vector<std::string> conditioners;
        for (std::size_t v : pa_from) {
            if (v == from || v == to) continue;
            for (std::size_t w : pa_to) {
                if (v == w) {
                    conditioners.push_back(names[v]);
                    break;
                }
            }
        }
        results[p] = detail::decide_edge(panel, from, to, conditioners, spec, backend,
                                         /*salt=*/2);
    });
    for (std::size_t p = 0; p < survivors.size(); ++p) {
        if (results[p].call == detail::EdgeCall::Remove) {
            graph.set_edge(survivors[p].from, survivors[p].to, false);
        } else if (results[p].call == detail::EdgeCall::Undecidable) {
            out.warnings.push_back("multivariate pass: " + names[survivors[p].from] + " -> " +
                                   names[survivors[p].to] + " not decidable (" +
                                   results[p].failure + "); edge retained");
        }
    }
    out.graph = std::move(graph);
    return out;
}

}  // namespace extcausal
