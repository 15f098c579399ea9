#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "extcausal/discovery.hpp"
#include "extcausal/rng.hpp"
#include "extcausal/simulation.hpp"

using namespace extcausal;

namespace {

TimeSeriesPanel ar_panel(Rng& rng, std::size_t n, std::size_t m) {
    std::vector<std::vector<double>> cols(m, std::vector<double>(n));
    std::vector<std::string> names;
    for (std::size_t c = 0; c < m; ++c) {
        names.push_back("C" + std::to_string(c + 1));
        double carry = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            carry = 0.3 * carry + rng.gaussian();
            cols[c][r] = carry;
        }
    }
    return TimeSeriesPanel(std::move(cols), std::move(names));
}

}  // namespace

TEST_CASE("classification rule: strictly above the baseline midpoint") {
    // The rule itself, recomputed from the returned estimate.
    Rng rng(47);
    for (int round = 0; round < 20; ++round) {
        const TimeSeriesPanel panel = ar_panel(rng, 150, 2);
        const PairOutcome outcome = classify_pair(panel, "C1", "C2", {}, ConditioningSpec{});
        REQUIRE(outcome.decidable());
        const PairDecision& d = *outcome.decision;
        CHECK(d.threshold == (1.0 + d.gamma.baseline_hat) / 2.0);
        CHECK(d.causes == (d.gamma.gamma_hat > d.threshold));
    }
}

TEST_CASE("constant effect classifies as non-causal despite gamma == 1") {
    std::vector<double> x{3, 1, 4, 1, 5, 9, 2, 6};
    std::vector<double> y(8, 2.5);
    const TimeSeriesPanel panel({x, y}, {"X", "Y"});
    ConditioningSpec spec;
    spec.q_f = 0.0;
    const PairOutcome outcome = classify_pair(panel, "X", "Y", {}, spec);
    REQUIRE(outcome.decidable());
    CHECK(outcome.decision->gamma.gamma_hat == 1.0);
    CHECK(outcome.decision->gamma.baseline_hat == 1.0);
    CHECK_FALSE(outcome.decision->causes);  // 1.0 > 1.0 is false
}

TEST_CASE("undecidable pairs keep their edge and produce warnings") {
    Rng rng(53);
    const TimeSeriesPanel panel = ar_panel(rng, 80, 3);
    ConditioningSpec spec;
    spec.variant = IndexVariant::BothTailsSPM;
    spec.x_band = QuantileBand{0.0, 1.0};  // no row can be outside this band
    const GraphEstimate estimate = estimate_summary_graph(panel, spec);
    CHECK(estimate.graph.edge_count() == 6);  // complete graph retained
    CHECK(estimate.warnings.size() == 12);    // both passes warn per pair
}

TEST_CASE("monotone pruning: final edges within pairwise edges") {
    Rng rng(59);
    for (int round = 0; round < 5; ++round) {
        const TimeSeriesPanel panel = ar_panel(rng, 200, 4);
        const GraphEstimate estimate = estimate_summary_graph(panel, ConditioningSpec{});
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                if (i == j) continue;
                if (estimate.graph.edge(i, j)) CHECK(estimate.pairwise.edge(i, j));
            }
        }
    }
}

TEST_CASE("graph estimation rejects single-column panels") {
    const TimeSeriesPanel panel({{1.0, 2.0, 3.0, 4.0}}, {"A"});
    CHECK_THROWS_AS(estimate_summary_graph(panel, ConditioningSpec{}), std::invalid_argument);
}

TEST_CASE("parallel pair decisions match sequential ones") {
    Rng rng(61);
    const TimeSeriesPanel panel = ar_panel(rng, 300, 5);
    const ConditioningSpec spec;
    const GraphEstimate sequential = estimate_summary_graph(panel, spec, ClassifierBackend{}, 1);
    const GraphEstimate parallel = estimate_summary_graph(panel, spec, ClassifierBackend{}, 4);
    CHECK(sequential.graph == parallel.graph);
    CHECK(sequential.pairwise == parallel.pairwise);
    CHECK(sequential.warnings == parallel.warnings);
}

TEST_CASE("bootstrap backend is deterministic and order-independent") {
    Rng rng(67);
    const TimeSeriesPanel panel = ar_panel(rng, 250, 3);
    ConditioningSpec spec;
    BootstrapConfig config;
    config.draws = 40;
    config.seed = 99;
    const DecisionBackend backend = BootstrapBackend{config};
    const GraphEstimate a = estimate_summary_graph(panel, spec, backend, 1);
    const GraphEstimate b = estimate_summary_graph(panel, spec, backend, 3);
    const GraphEstimate c = estimate_summary_graph(panel, spec, backend, 1);
    CHECK(a.graph == b.graph);
    CHECK(a.graph == c.graph);
}

TEST_CASE("rank invariance of the estimated graph under per-column monotone maps") {
    Rng rng(71);
    for (int round = 0; round < 5; ++round) {
        const TimeSeriesPanel panel = ar_panel(rng, 200, 3);
        const GraphEstimate base = estimate_summary_graph(panel, ConditioningSpec{});
        std::vector<std::vector<double>> mapped(3);
        for (std::size_t c = 0; c < 3; ++c) {
            const auto col = panel.column(c);
            mapped[c].reserve(col.size());
            for (double v : col) {
                mapped[c].push_back(c == 0 ? std::exp(v) : c == 1 ? 2.0 * v + 3.0 : v * v * v);
            }
        }
        const TimeSeriesPanel transformed(std::move(mapped), panel.names());
        const GraphEstimate other = estimate_summary_graph(transformed, ConditioningSpec{});
        CHECK(base.graph == other.graph);
    }
}

TEST_CASE("strong trivariate signal recovers the causal direction") {
    // X drives Y with Pareto noise; the detected direction should dominate.
    std::size_t correct_forward = 0;
    std::size_t false_reverse = 0;
    const int reps = 25;
    for (int rep = 0; rep < reps; ++rep) {
        SimulationRecipe recipe;
        recipe.kind = ModelKind::Var3;
        recipe.alpha_x = 0.5;
        recipe.alpha_y = 0.5;
        recipe.alpha_z = 0.5;
        recipe.n = 3000;
        recipe.burn_in = 100;
        recipe.noise.family = NoiseFamily::Pareto;
        recipe.seed = 1000 + static_cast<std::uint64_t>(rep);
        const TimeSeriesPanel panel = simulate(recipe);
        const ConditioningSpec spec;
        const PairOutcome forward = classify_pair(panel, "X", "Y", {"Z"}, spec);
        const PairOutcome reverse = classify_pair(panel, "Y", "X", {"Z"}, spec);
        REQUIRE(forward.decidable());
        REQUIRE(reverse.decidable());
        correct_forward += forward.decision->causes;
        false_reverse += reverse.decision->causes;
    }
    CHECK(correct_forward >= 23);
    CHECK(false_reverse <= 2);
}
