#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "extcausal/csv.hpp"
#include "extcausal/rng.hpp"
#include "extcausal/stats.hpp"

using namespace extcausal;

TEST_CASE("ecdf_fit examples") {
    const std::vector<double> sample{1, 2, 3, 4, 5};
    const EcdfTransform truncated = ecdf_fit(sample, 0.5);
    CHECK(truncated.evaluate(3.0) == doctest::Approx(0.6));
    CHECK(truncated.evaluate(2.0) == 0.0);
    CHECK(truncated.truncation_value() == 3.0);

    const std::vector<double> single{7};
    CHECK(ecdf_fit(single, 0.0).evaluate(7.0) == 1.0);
}

TEST_CASE("ecdf_fit rejects bad input") {
    CHECK_THROWS_WITH_AS(ecdf_fit(std::vector<double>{}, 0.0),
                         doctest::Contains("empty sample"), std::invalid_argument);
    const std::vector<double> bad{1.0, std::nan("")};
    CHECK_THROWS_WITH_AS(ecdf_fit(bad, 0.0), doctest::Contains("non-finite value"),
                         std::invalid_argument);
    const std::vector<double> ok{1.0, 2.0};
    CHECK_THROWS_AS(ecdf_fit(ok, 1.0), std::invalid_argument);
}

TEST_CASE("plain ecdf equals rank/n at every sample point") {
    Rng rng(7);
    for (int round = 0; round < 20; ++round) {
        const std::size_t n = 1 + rng.uniform_below(60);
        std::vector<double> sample(n);
        for (auto& v : sample) v = rng.gaussian();
        const EcdfTransform transform = ecdf_fit(sample, 0.0);
        for (double t : sample) {
            std::size_t count = 0;  // naive double loop
            for (double v : sample) count += v <= t;
            CHECK(transform.evaluate(t) ==
                  static_cast<double>(count) / static_cast<double>(n));
        }
    }
}

TEST_CASE("ecdf is non-decreasing and within [0,1]") {
    Rng rng(11);
    std::vector<double> sample(50);
    for (auto& v : sample) v = rng.cauchy();
    const EcdfTransform transform = ecdf_fit(sample, 0.3);
    double prev = -1.0;
    for (double t = -30.0; t <= 30.0; t += 0.25) {
        const double value = transform.evaluate(t);
        CHECK(value >= 0.0);
        CHECK(value <= 1.0);
        CHECK(value >= prev);
        prev = value;
    }
}

TEST_CASE("ecdf rank invariance under strictly increasing maps") {
    Rng rng(13);
    std::vector<double> sample(40);
    for (auto& v : sample) v = rng.gaussian();
    const EcdfTransform base = ecdf_fit(sample, 0.5);

    auto transformed_matches = [&](auto&& map) {
        std::vector<double> mapped(sample.size());
        std::transform(sample.begin(), sample.end(), mapped.begin(), map);
        const EcdfTransform other = ecdf_fit(mapped, 0.5);
        for (double t : sample) {
            if (other.evaluate(map(t)) != base.evaluate(t)) return false;
        }
        return true;
    };
    CHECK(transformed_matches([](double v) { return 2.0 * v + 3.0; }));
    CHECK(transformed_matches([](double v) { return std::exp(v); }));
    CHECK(transformed_matches([](double v) { return v * v * v; }));
}

TEST_CASE("empirical_quantile examples") {
    const std::vector<double> sample{10, 20, 30, 40};
    CHECK(empirical_quantile(sample, 0.5) == 20.0);
    const std::vector<double> single{5};
    CHECK(empirical_quantile(single, 0.99) == 5.0);
    const std::vector<double> three{3, 1, 2};
    CHECK(empirical_quantile(three, 1.0) == 3.0);
    CHECK(empirical_quantile(three, 0.0) == 1.0);
    CHECK_THROWS_AS(empirical_quantile(std::vector<double>{}, 0.5), std::invalid_argument);
}

TEST_CASE("quantile rank handles inexact decimal products") {
    // 0.8 * 5 lands just above 4 in floating point; the rank must still be 4.
    CHECK(quantile_rank(0.8, 5) == 4);
    CHECK(quantile_rank(0.8, 6) == 5);
    CHECK(quantile_rank(0.5, 5) == 3);
    CHECK(quantile_rank(0.0, 9) == 1);
    CHECK(quantile_rank(1.0, 9) == 9);
}

TEST_CASE("kth_largest examples and sort oracle") {
    const std::vector<double> sample{4, 1, 9, 7};
    CHECK(kth_largest(sample, 2) == 7.0);
    const std::vector<double> constant{5, 5, 5};
    CHECK(kth_largest(constant, 1) == 5.0);
    const std::vector<double> two{1, 2};
    CHECK(kth_largest(two, 2) == 1.0);
    CHECK_THROWS_AS(kth_largest(two, 0), std::invalid_argument);
    CHECK_THROWS_AS(kth_largest(two, 3), std::invalid_argument);

    Rng rng(17);
    for (int round = 0; round < 30; ++round) {
        const std::size_t n = 1 + rng.uniform_below(100);
        std::vector<double> v(n);
        for (auto& x : v) x = rng.cauchy();
        std::vector<double> sorted = v;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t k = 1; k <= n; ++k) {
            CHECK(kth_largest(v, k) == sorted[n - k]);
        }
    }
}

TEST_CASE("csv round trip") {
    const std::vector<std::vector<double>> columns{{1.5, -2.25, 3.125}, {0.1, 0.2, 0.3}};
    const TimeSeriesPanel panel(columns, {"A", "B"});
    const std::string text = panel_to_csv(panel);
    const TimeSeriesPanel back = parse_panel_csv(text);
    CHECK(back.rows() == 3);
    CHECK(back.names() == std::vector<std::string>{"A", "B"});
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 2; ++c) CHECK(back.at(r, c) == panel.at(r, c));
    }
}

TEST_CASE("csv errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_panel_csv("A,B\n1,2\n3\n"), doctest::Contains("line 3"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_panel_csv("A,B\n1,x\n"), doctest::Contains("line 2"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_panel_csv("A,B\n1,inf\n2,3\n"),
                         doctest::Contains("non-finite"), std::invalid_argument);
}

TEST_CASE("panel invariants") {
    CHECK_THROWS_AS(TimeSeriesPanel({{1.0}}, {"A"}), std::invalid_argument);  // n < 2
    CHECK_THROWS_AS(TimeSeriesPanel({{1.0, 2.0}, {1.0, 2.0}}, {"A", "A"}),
                    std::invalid_argument);
    CHECK_THROWS_AS(TimeSeriesPanel({{1.0, 2.0}}, {""}), std::invalid_argument);
    const std::vector<std::vector<double>> with_nan{{1.0, std::nan("")}};
    CHECK_THROWS_AS(TimeSeriesPanel(with_nan, {"A"}), std::invalid_argument);
    const TimeSeriesPanel panel({{1.0, 2.0}, {3.0, 4.0}}, {"A", "B"});
    CHECK_THROWS_AS(panel.column_index("C"), std::invalid_argument);
}
