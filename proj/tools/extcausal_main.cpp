#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "extcausal/csv.hpp"
#include "extcausal/discovery.hpp"
#include "extcausal/evaluation.hpp"
#include "extcausal/graph_io.hpp"
#include "extcausal/simulation.hpp"

namespace {

using namespace extcausal;
using nlohmann::json;

struct SpecOptions {
    std::string variant = "s1";
    std::optional<double> nu;
    bool hidden_confounding = false;
    double q_f = 0.5;
    double q_y = 0.8;
    std::vector<double> q_z;
    double radius = 0.0;
    std::vector<double> center;
    std::size_t p_x = 1;
    std::size_t p_y = 1;
    std::vector<double> x_band;
    std::vector<double> y_band;
    std::vector<double> z_bands;

    ConditioningSpec build() const {
        ConditioningSpec spec;
        if (variant == "unadjusted") {
            spec.variant = IndexVariant::Unadjusted;
        } else if (variant == "s1") {
            spec.variant = IndexVariant::ThresholdS1;
        } else if (variant == "s2") {
            spec.variant = IndexVariant::BallS2;
        } else if (variant == "both-tails") {
            spec.variant = IndexVariant::BothTailsSPM;
        } else if (variant == "lagged") {
            spec.variant = IndexVariant::LaggedS1;
        } else {
            throw std::invalid_argument("unknown variant '" + variant + "'");
        }
        spec.nu = nu ? *nu : (hidden_confounding ? 0.5 : 1.0 / 3.0);
        spec.q_f = q_f;
        spec.q_y = q_y;
        spec.q_z = q_z;
        spec.radius = radius;
        spec.center = center;
        spec.p_x = p_x;
        spec.p_y = p_y;
        auto band_from = [](const std::vector<double>& v, const char* what) {
            if (v.size() != 2)
                throw std::invalid_argument(std::string(what) +
                                            " band needs exactly lower,upper");
            return QuantileBand{v[0], v[1]};
        };
        if (!x_band.empty()) spec.x_band = band_from(x_band, "cause");
        if (!y_band.empty()) spec.y_band = band_from(y_band, "effect");
        if (!z_bands.empty()) {
            if (z_bands.size() % 2 != 0)
                throw std::invalid_argument("confounder bands need lower,upper pairs");
            for (std::size_t i = 0; i + 1 < z_bands.size(); i += 2)
                spec.z_bands.push_back(QuantileBand{z_bands[i], z_bands[i + 1]});
        }
        return spec;
    }
};

void add_spec_flags(CLI::App* cmd, SpecOptions& opts) {
    cmd->add_option("--variant", opts.variant,
                    "conditioning variant: unadjusted, s1, s2, both-tails, lagged")
        ->check(CLI::IsMember({"unadjusted", "s1", "s2", "both-tails", "lagged"}))
        ->capture_default_str();
    cmd->add_option("--nu", opts.nu, "extreme-count exponent: k = floor(|baseline|^nu)");
    cmd->add_flag("--hidden-confounding", opts.hidden_confounding,
                  "use nu = 1/2 (default 1/3) when a strong unobserved confounder is suspected");
    cmd->add_option("--q-f", opts.q_f, "ECDF truncation quantile")->capture_default_str();
    cmd->add_option("--q-y", opts.q_y, "effect threshold quantile")->capture_default_str();
    cmd->add_option("--q-z", opts.q_z,
                    "confounder threshold quantiles (comma list; default 0.9 or 1-0.2/d)")
        ->delimiter(',');
    cmd->add_option("--radius", opts.radius, "ball radius (s2)");
    cmd->add_option("--center", opts.center, "ball center y0,z0,... (s2)")->delimiter(',');
    cmd->add_option("--px", opts.p_x, "past window length")->capture_default_str();
    cmd->add_option("--py", opts.p_y, "future window length")->capture_default_str();
    cmd->add_option("--x-band", opts.x_band, "cause quantile band lower,upper (both-tails)")
        ->delimiter(',');
    cmd->add_option("--y-band", opts.y_band, "effect quantile band lower,upper (both-tails)")
        ->delimiter(',');
    cmd->add_option("--z-band", opts.z_bands,
                    "confounder quantile band lower,upper (both-tails; repeatable)")
        ->delimiter(',');
}

unsigned resolve_threads(const std::optional<unsigned>& flag) {
    if (flag) return *flag > 0 ? *flag : 1;
    if (const char* env = std::getenv("EXTCAUSAL_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed > 0) return static_cast<unsigned>(parsed);
    }
    return 1;
}

void emit(const std::string& text, const std::string& output_path) {
    if (output_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + output_path);
    out << text;
}

// ---------------------------------------------------------------------------
// discover
// ---------------------------------------------------------------------------

struct DiscoverOptions {
    std::string input, output, cause, effect;
    std::vector<std::string> conditioners;
    SpecOptions spec;
};

int run_discover(const DiscoverOptions& opts) {
    const TimeSeriesPanel panel = read_panel_csv(opts.input);
    const ConditioningSpec spec = opts.spec.build();
    const PairOutcome outcome =
        classify_pair(panel, opts.cause, opts.effect, opts.conditioners, spec);
    if (!outcome.decidable()) throw degeneracy_error(outcome.failure);
    const PairDecision& decision = *outcome.decision;
    const json report{{"cause", opts.cause},
                      {"effect", opts.effect},
                      {"gamma_hat", decision.gamma.gamma_hat},
                      {"baseline_hat", decision.gamma.baseline_hat},
                      {"threshold", decision.threshold},
                      {"causes", decision.causes},
                      {"n_extreme", decision.gamma.n_extreme},
                      {"n_baseline", decision.gamma.n_baseline}};
    emit(report.dump(2) + "\n", opts.output);
    return 0;
}

// ---------------------------------------------------------------------------
// test
// ---------------------------------------------------------------------------

struct TestOptions {
    std::string input, output, cause, effect;
    std::vector<std::string> conditioners;
    SpecOptions spec;
    std::size_t draws = 200;
    std::size_t block_length = 0;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::optional<unsigned> threads;
};

int run_test(const TestOptions& opts) {
    const TimeSeriesPanel panel = read_panel_csv(opts.input);
    const ConditioningSpec spec = opts.spec.build();
    BootstrapConfig config;
    config.draws = opts.draws;
    config.block_length = opts.block_length;
    config.alpha = opts.alpha;
    config.seed = opts.seed;
    config.threads = resolve_threads(opts.threads);
    const TestResult result =
        tail_causality_test(panel, opts.cause, opts.effect, opts.conditioners, spec, config);
    const json report{{"reject", result.reject},
                      {"alpha_quantile_of_delta", result.alpha_quantile_of_delta},
                      {"B", opts.draws},
                      {"b", result.config.block_length},
                      {"alpha", result.config.alpha},
                      {"n_failed_draws", result.n_failed_draws},
                      {"p_hat", result.p_hat},
                      {"low_reliability", result.low_reliability}};
    emit(report.dump(2) + "\n", opts.output);
    return 0;
}

// ---------------------------------------------------------------------------
// graph
// ---------------------------------------------------------------------------

struct GraphOptions {
    std::string input, output;
    std::string format = "json";
    std::string backend = "classifier";
    SpecOptions spec;
    std::size_t draws = 200;
    std::size_t block_length = 0;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::optional<unsigned> threads;
};

int run_graph(const GraphOptions& opts) {
    const TimeSeriesPanel panel = read_panel_csv(opts.input);
    const ConditioningSpec spec = opts.spec.build();
    DecisionBackend backend = ClassifierBackend{};
    if (opts.backend == "bootstrap") {
        BootstrapConfig config;
        config.draws = opts.draws;
        config.block_length = opts.block_length;
        config.alpha = opts.alpha;
        config.seed = opts.seed;
        backend = BootstrapBackend{config};
    }
    const auto start = std::chrono::steady_clock::now();
    const GraphEstimate estimate =
        estimate_summary_graph(panel, spec, backend, resolve_threads(opts.threads));
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (opts.format == "dot") {
        emit(to_dot(estimate.graph), opts.output);
    } else {
        json report = graph_to_json(estimate.graph);
        report["warnings"] = estimate.warnings;
        emit(report.dump(2) + "\n", opts.output);
    }
    for (const auto& warning : estimate.warnings) std::cerr << "warning: " << warning << '\n';
    std::fprintf(stderr, "edges=%zu wall_seconds=%.3f\n", estimate.graph.edge_count(), wall);
    return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOptions {
    std::string kind = "var3";
    std::size_t n = 0;
    std::size_t m = 3;
    double alpha_x = 0.5, alpha_y = 0.5, alpha_z = 0.5;
    std::string noise;
    std::optional<std::size_t> burn_in;
    std::optional<double> edge_prob;
    std::uint64_t seed = 0;
    std::string output;
    std::string graph_output;
};

int run_simulate(const SimulateOptions& opts) {
    SimulationRecipe recipe;
    bool graph_kind = false;
    if (opts.kind == "var3") {
        recipe.kind = ModelKind::Var3;
    } else if (opts.kind == "garch3") {
        recipe.kind = ModelKind::Garch3;
    } else if (opts.kind == "var-graph") {
        recipe.kind = ModelKind::VarGraph;
        graph_kind = true;
    } else if (opts.kind == "garch-graph") {
        recipe.kind = ModelKind::GarchGraph;
        graph_kind = true;
    } else {
        throw std::invalid_argument("unknown kind '" + opts.kind + "'");
    }
    recipe.n = opts.n;
    recipe.alpha_x = opts.alpha_x;
    recipe.alpha_y = opts.alpha_y;
    recipe.alpha_z = opts.alpha_z;
    recipe.burn_in = opts.burn_in ? *opts.burn_in : (graph_kind ? 0 : 100);
    if (!opts.noise.empty()) {
        if (opts.noise == "gaussian") recipe.noise.family = NoiseFamily::Gaussian;
        else if (opts.noise == "pareto") recipe.noise.family = NoiseFamily::Pareto;
        else if (opts.noise == "cauchy") recipe.noise.family = NoiseFamily::Cauchy;
        else throw std::invalid_argument("unknown noise '" + opts.noise + "'");
    }

    if (graph_kind) {
        if (opts.m < 2) throw std::invalid_argument("graph kinds need --m >= 2");
        const double prob =
            opts.edge_prob ? *opts.edge_prob : 1.0 / static_cast<double>(opts.m);
        Rng graph_rng(derive_seed(opts.seed, 1));
        recipe.graph = random_graph(opts.m, prob, graph_rng);
        recipe.seed = derive_seed(opts.seed, 2);
    } else {
        recipe.seed = opts.seed;
    }

    const TimeSeriesPanel panel = simulate(recipe);
    if (opts.output.empty()) throw std::invalid_argument("simulate needs --output");
    write_panel_csv(panel, opts.output);
    if (graph_kind) {
        const std::string sidecar =
            opts.graph_output.empty() ? opts.output + ".graph.json" : opts.graph_output;
        std::ofstream out(sidecar, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot open file for writing: " + sidecar);
        out << graph_to_json(recipe.graph).dump(2) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// benchmark
// ---------------------------------------------------------------------------

struct BenchmarkOptions {
    std::vector<std::size_t> m_values{3, 5, 7};
    std::vector<std::size_t> n_values{500, 5000};
    std::vector<std::string> models{"var-pareto", "var-gaussian"};
    std::vector<std::string> methods{"extreme", "random"};
    std::size_t replications = 100;
    std::uint64_t seed = 0;
    std::optional<unsigned> threads;
    std::string output;
    bool no_timings = false;
    SpecOptions spec;
};

std::string format_double(double v) { return detail::format_double(v); }

std::string report_to_csv(const BenchmarkReport& report, bool with_timings) {
    std::string out = "m,n,model,noise,method,mean_error,stderr,mean_runtime_seconds,R,failures\n";
    for (const auto& row : report.rows) {
        out += std::to_string(row.m) + ',' + std::to_string(row.n) + ',';
        out += std::string(model_label(row.model)) + ',' + noise_label(row.model) + ',';
        out += std::string(method_label(row.method)) + ',';
        out += format_double(row.mean_error) + ',' + format_double(row.stderr_error) + ',';
        out += (with_timings ? format_double(row.mean_runtime_seconds) : std::string("0")) + ',';
        out += std::to_string(row.replications) + ',' + std::to_string(row.failures) + '\n';
    }
    return out;
}

std::string report_to_table(const BenchmarkReport& report) {
    char line[160];
    std::snprintf(line, sizeof(line), "%4s %6s %-6s %-9s %-8s %10s %9s %12s %5s %5s\n", "m",
                  "n", "model", "noise", "method", "mean_err", "stderr", "runtime_s", "R",
                  "fail");
    std::string out = line;
    for (const auto& row : report.rows) {
        std::snprintf(line, sizeof(line), "%4zu %6zu %-6s %-9s %-8s %10.4f %9.4f %12.6f %5zu %5zu\n",
                      row.m, row.n, model_label(row.model), noise_label(row.model),
                      method_label(row.method), row.mean_error, row.stderr_error,
                      row.mean_runtime_seconds, row.replications, row.failures);
        out += line;
    }
    return out;
}

int run_benchmark_cmd(const BenchmarkOptions& opts) {
    BenchmarkGrid grid;
    grid.m_values = opts.m_values;
    grid.n_values = opts.n_values;
    grid.models.clear();
    for (const auto& name : opts.models) {
        if (name == "var-pareto") grid.models.push_back(BenchmarkModel::VarPareto);
        else if (name == "var-gaussian") grid.models.push_back(BenchmarkModel::VarGaussian);
        else if (name == "garch-cauchy") grid.models.push_back(BenchmarkModel::GarchCauchy);
        else if (name == "garch-gaussian") grid.models.push_back(BenchmarkModel::GarchGaussian);
        else throw std::invalid_argument("unknown model '" + name + "'");
    }
    grid.methods.clear();
    for (const auto& name : opts.methods) {
        if (name == "extreme") grid.methods.push_back(BenchmarkMethod::ExtremeClassifier);
        else if (name == "random") grid.methods.push_back(BenchmarkMethod::RandomHalf);
        else throw std::invalid_argument("unknown method '" + name + "'");
    }
    grid.replications = opts.replications;
    grid.seed = opts.seed;
    grid.threads = resolve_threads(opts.threads);
    grid.spec = opts.spec.build();

    const BenchmarkReport report = run_benchmark(grid);
    std::cout << report_to_table(report);
    if (!opts.output.empty()) {
        std::ofstream out(opts.output, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot open file for writing: " + opts.output);
        out << report_to_csv(report, !opts.no_timings);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal discovery from extreme events in multivariate time series"};
    app.require_subcommand(1);

    DiscoverOptions discover;
    auto* discover_cmd =
        app.add_subcommand("discover", "Classify one directed pair as causal in extremes");
    discover_cmd->add_option("--input", discover.input, "panel CSV")->required();
    discover_cmd->add_option("--output", discover.output, "write the JSON report here");
    discover_cmd->add_option("--cause", discover.cause, "cause column")->required();
    discover_cmd->add_option("--effect", discover.effect, "effect column")->required();
    discover_cmd->add_option("--conditioners", discover.conditioners,
                             "comma-separated conditioner columns")
        ->delimiter(',');
    add_spec_flags(discover_cmd, discover.spec);

    TestOptions test;
    auto* test_cmd =
        app.add_subcommand("test", "Block-bootstrap test of the no-tail-causality null");
    test_cmd->add_option("--input", test.input, "panel CSV")->required();
    test_cmd->add_option("--output", test.output, "write the JSON report here");
    test_cmd->add_option("--cause", test.cause, "cause column")->required();
    test_cmd->add_option("--effect", test.effect, "effect column")->required();
    test_cmd->add_option("--conditioners", test.conditioners,
                         "comma-separated conditioner columns")
        ->delimiter(',');
    test_cmd->add_option("--draws", test.draws, "bootstrap draws B")->capture_default_str();
    test_cmd->add_option("--block-length", test.block_length,
                         "block length b (default floor(sqrt(n)))");
    test_cmd->add_option("--alpha", test.alpha, "significance level")->capture_default_str();
    test_cmd->add_option("--seed", test.seed, "bootstrap seed")->capture_default_str();
    test_cmd->add_option("--threads", test.threads,
                         "worker threads (default $EXTCAUSAL_THREADS or 1)");
    add_spec_flags(test_cmd, test.spec);

    GraphOptions graph;
    auto* graph_cmd = app.add_subcommand("graph", "Estimate the summary causal graph");
    graph_cmd->add_option("--input", graph.input, "panel CSV")->required();
    graph_cmd->add_option("--output", graph.output, "write the graph here");
    graph_cmd->add_option("--format", graph.format, "output format")
        ->check(CLI::IsMember({"json", "dot"}))
        ->capture_default_str();
    graph_cmd->add_option("--backend", graph.backend, "edge decision backend")
        ->check(CLI::IsMember({"classifier", "bootstrap"}))
        ->capture_default_str();
    graph_cmd->add_option("--draws", graph.draws, "bootstrap draws B (bootstrap backend)")
        ->capture_default_str();
    graph_cmd->add_option("--block-length", graph.block_length,
                          "block length b (default floor(sqrt(n)))");
    graph_cmd->add_option("--alpha", graph.alpha, "significance level (bootstrap backend)")
        ->capture_default_str();
    graph_cmd->add_option("--seed", graph.seed, "bootstrap seed")->capture_default_str();
    graph_cmd->add_option("--threads", graph.threads,
                          "worker threads (default $EXTCAUSAL_THREADS or 1)");
    add_spec_flags(graph_cmd, graph.spec);

    SimulateOptions simulate_opts;
    auto* simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic panel CSV");
    simulate_cmd->add_option("--kind", simulate_opts.kind,
                             "var3, garch3, var-graph, garch-graph")
        ->check(CLI::IsMember({"var3", "garch3", "var-graph", "garch-graph"}))
        ->capture_default_str();
    simulate_cmd->add_option("--n", simulate_opts.n, "rows to keep")->required();
    simulate_cmd->add_option("--m", simulate_opts.m, "series count (graph kinds)")
        ->capture_default_str();
    simulate_cmd->add_option("--alpha-x", simulate_opts.alpha_x, "causal strength")
        ->capture_default_str();
    simulate_cmd->add_option("--alpha-y", simulate_opts.alpha_y, "effect autocorrelation")
        ->capture_default_str();
    simulate_cmd->add_option("--alpha-z", simulate_opts.alpha_z, "confounding strength")
        ->capture_default_str();
    simulate_cmd->add_option("--noise", simulate_opts.noise, "gaussian, pareto, cauchy")
        ->check(CLI::IsMember({"gaussian", "pareto", "cauchy"}));
    simulate_cmd->add_option("--burn-in", simulate_opts.burn_in,
                             "rows to discard (default 100 trivariate, 0 graph kinds)");
    simulate_cmd->add_option("--edge-prob", simulate_opts.edge_prob,
                             "truth edge probability (default 1/m)");
    simulate_cmd->add_option("--seed", simulate_opts.seed, "generator seed")
        ->capture_default_str();
    simulate_cmd->add_option("--output", simulate_opts.output, "panel CSV path")->required();
    simulate_cmd->add_option("--graph-output", simulate_opts.graph_output,
                             "truth graph JSON path (default <output>.graph.json)");

    BenchmarkOptions benchmark;
    auto* benchmark_cmd =
        app.add_subcommand("benchmark", "Monte-Carlo study of graph estimation error");
    benchmark_cmd->add_option("--m-values", benchmark.m_values, "series counts")
        ->delimiter(',');
    benchmark_cmd->add_option("--n-values", benchmark.n_values, "sample sizes")
        ->delimiter(',');
    benchmark_cmd
        ->add_option("--models", benchmark.models,
                     "var-pareto, var-gaussian, garch-cauchy, garch-gaussian")
        ->delimiter(',');
    benchmark_cmd->add_option("--methods", benchmark.methods, "extreme, random")
        ->delimiter(',');
    benchmark_cmd->add_option("--replications", benchmark.replications, "repetitions per cell")
        ->capture_default_str();
    benchmark_cmd->add_option("--seed", benchmark.seed, "study seed")->capture_default_str();
    benchmark_cmd->add_option("--threads", benchmark.threads,
                              "worker threads (default $EXTCAUSAL_THREADS or 1)");
    benchmark_cmd->add_option("--output", benchmark.output, "report CSV path");
    benchmark_cmd->add_flag("--no-timings", benchmark.no_timings,
                            "zero the runtime column for byte-stable output");
    add_spec_flags(benchmark_cmd, benchmark.spec);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 2;
    }

    try {
        if (discover_cmd->parsed()) return run_discover(discover);
        if (test_cmd->parsed()) return run_test(test);
        if (graph_cmd->parsed()) return run_graph(graph);
        if (simulate_cmd->parsed()) return run_simulate(simulate_opts);
        if (benchmark_cmd->parsed()) return run_benchmark_cmd(benchmark);
    } catch (const degeneracy_error& e) {
        std::cerr << "error: " << e.what() << '\n'
                  << "hint: raise q-y/q-z (or widen bands), lower nu, or provide more data\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
