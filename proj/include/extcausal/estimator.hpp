#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "extcausal/errors.hpp"
#include "extcausal/panel.hpp"
#include "extcausal/stats.hpp"

namespace extcausal {

/// Which conditioning set backs the estimator.
enum class IndexVariant {
    Unadjusted,    // no conditioning on (Y, Z); cause threshold only
    ThresholdS1,   // (Y_t, Z_t) below upper-quantile thresholds
    BallS2,        // (Y_t, Z_t) inside a sup-norm ball around a chosen center
    BothTailsSPM,  // (Y_t, Z_t) inside two-sided bands, cause outside its band
    LaggedS1,      // ThresholdS1 condition held over the past p_x steps
};

/// A two-sided band given as a (lower, upper) quantile pair.
struct QuantileBand {
    double lower = 0.0;
    double upper = 1.0;
};

/// Every knob of the conditioning scheme. Defaults follow the recommended
/// values: nu = 1/3 (1/2 when strong hidden confounding is suspected),
/// q_F = 0.5, q_Y = 0.8, and q_Z = 0.9 for one confounder or 1 - 0.2/d for d
/// of them.
struct ConditioningSpec {
    IndexVariant variant = IndexVariant::ThresholdS1;
    double nu = 1.0 / 3.0;  // number of retained extremes: k = floor(|baseline|^nu)
    double q_f = 0.5;       // ECDF truncation quantile
    double q_y = 0.8;       // effect threshold quantile
    std::vector<double> q_z;  // per-confounder quantiles; empty -> default rule, size 1 broadcasts
    double radius = 0.0;             // BallS2
    std::vector<double> center;      // BallS2: (y0, z0_1, ..., z0_d)
    std::size_t p_x = 1;             // past window length for LaggedS1
    std::size_t p_y = 1;             // future window length for the response
    std::optional<QuantileBand> x_band;  // BothTailsSPM; default derived from nu
    std::optional<QuantileBand> y_band;  // BothTailsSPM; default (1 - q_y, q_y)
    std::vector<QuantileBand> z_bands;   // BothTailsSPM; default (1 - q_z_i, q_z_i)

    double q_z_for(std::size_t i, std::size_t d) const {
        if (!q_z.empty()) return q_z.size() == 1 ? q_z.front() : q_z.at(i);
        return d <= 1 ? 0.9 : 1.0 - 0.2 / static_cast<double>(d);
    }

    QuantileBand y_band_or_default() const {
        return y_band ? *y_band : QuantileBand{1.0 - q_y, q_y};
    }

    QuantileBand z_band_or_default(std::size_t i, std::size_t d) const {
        if (!z_bands.empty()) return z_bands.size() == 1 ? z_bands.front() : z_bands.at(i);
        const double q = q_z_for(i, d);
        return QuantileBand{1.0 - q, q};
    }

    void validate(std::size_t d) const {
        if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("nu must lie in (0,1)");
        if (!(q_f >= 0.0 && q_f < 1.0)) throw std::invalid_argument("q_F must lie in [0,1)");
        if (!(q_y > 0.0 && q_y < 1.0)) throw std::invalid_argument("q_Y must lie in (0,1)");
        if (!q_z.empty() && q_z.size() != 1 && q_z.size() != d)
            throw std::invalid_argument("q_Z must have one entry per confounder");
        for (double q : q_z) {
            if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("q_Z must lie in (0,1)");
        }
        if (p_x < 1 || p_y < 1) throw std::invalid_argument("lags p_x, p_y must be >= 1");
        if (variant == IndexVariant::BallS2) {
            if (!(radius > 0.0)) throw std::invalid_argument("BallS2 needs a positive radius");
            if (center.size() != d + 1)
                throw std::invalid_argument("BallS2 center must have 1 + d coordinates");
        }
        if (variant == IndexVariant::BothTailsSPM) {
            auto check = [](const QuantileBand& b, const char* what) {
                if (!(b.lower >= 0.0 && b.upper <= 1.0 && b.lower < b.upper))
                    throw std::invalid_argument(std::string(what) +
                                                " band must satisfy 0 <= lower < upper <= 1");
            };
            if (x_band) check(*x_band, "cause");
            if (y_band) check(*y_band, "effect");
            if (!z_bands.empty() && z_bands.size() != 1 && z_bands.size() != d)
                throw std::invalid_argument("need one band per confounder");
            for (const auto& b : z_bands) check(b, "confounder");
        }
    }
};

/// k = floor(s^nu), clamped to [1, s]. The slack keeps integer powers such as
/// 125^(1/3) from flooring one below their exact value.
inline std::size_t extreme_count_rule(std::size_t set_size, double nu) {
    const double k = std::floor(std::pow(static_cast<double>(set_size), nu) + 1e-9);
    if (!(k >= 1.0)) return 1;
    return std::min(set_size, static_cast<std::size_t>(k));
}

/// Realized conditioning sets. Indices are 0-based positions t for which the
/// response window t+1 .. t+p_y stays inside the sample; `extreme` is always a
/// subset of `baseline`.
struct IndexSets {
    std::vector<std::size_t> extreme;   // S
    std::vector<std::size_t> baseline;  // S-tilde
    double tau_x_upper = std::numeric_limits<double>::quiet_NaN();
    double tau_x_lower = -std::numeric_limits<double>::infinity();  // BothTailsSPM only
    std::vector<double> tau_upper;  // realized (tau_Y, tau_Z_1, ...) upper bounds
    std::vector<double> tau_lower;  // realized lower bounds; -inf where one-sided
    std::size_t k = 0;              // realized extreme count rule (0 for BothTailsSPM)
};

inline IndexSets build_index_sets(std::span<const double> x, std::span<const double> y,
                                  const std::vector<std::span<const double>>& z,
                                  const ConditioningSpec& spec) {
    const std::size_t n = x.size();
    if (y.size() != n) throw std::invalid_argument("cause/effect series lengths differ");
    for (const auto& col : z) {
        if (col.size() != n) throw std::invalid_argument("confounder series length differs");
    }
    const std::size_t d = z.size();
    spec.validate(d);
    if (n < spec.p_x + spec.p_y + 1)
        throw std::invalid_argument("sample too short for the requested lags");

    constexpr double kInf = std::numeric_limits<double>::infinity();
    IndexSets out;
    const std::size_t t_max = n - 1 - spec.p_y;  // inclusive; keeps y[t + p_y] in range

    // Baseline membership: the "everything else is non-extreme" condition.
    switch (spec.variant) {
        case IndexVariant::Unadjusted:
            for (std::size_t t = 0; t <= t_max; ++t) out.baseline.push_back(t);
            break;
        case IndexVariant::ThresholdS1:
        case IndexVariant::LaggedS1: {
            const double tau_y = empirical_quantile(y, spec.q_y);
            std::vector<double> tau_z(d);
            for (std::size_t i = 0; i < d; ++i)
                tau_z[i] = empirical_quantile(z[i], spec.q_z_for(i, d));
            auto below = [&](std::size_t s) {
                if (y[s] > tau_y) return false;
                for (std::size_t i = 0; i < d; ++i) {
                    if (z[i][s] > tau_z[i]) return false;
                }
                return true;
            };
            const std::size_t window = spec.variant == IndexVariant::LaggedS1 ? spec.p_x : 1;
            for (std::size_t t = window - 1; t <= t_max; ++t) {
                bool ok = true;
                for (std::size_t back = 0; back < window && ok; ++back) ok = below(t - back);
                if (ok) out.baseline.push_back(t);
            }
            out.tau_upper.push_back(tau_y);
            out.tau_lower.push_back(-kInf);
            for (std::size_t i = 0; i < d; ++i) {
                out.tau_upper.push_back(tau_z[i]);
                out.tau_lower.push_back(-kInf);
            }
            break;
        }
        case IndexVariant::BallS2: {
            const double y0 = spec.center[0];
            for (std::size_t t = 0; t <= t_max; ++t) {
                bool ok = std::abs(y[t] - y0) < spec.radius;
                for (std::size_t i = 0; i < d && ok; ++i)
                    ok = std::abs(z[i][t] - spec.center[i + 1]) < spec.radius;
                if (ok) out.baseline.push_back(t);
            }
            out.tau_upper.push_back(y0 + spec.radius);
            out.tau_lower.push_back(y0 - spec.radius);
            for (std::size_t i = 0; i < d; ++i) {
                out.tau_upper.push_back(spec.center[i + 1] + spec.radius);
                out.tau_lower.push_back(spec.center[i + 1] - spec.radius);
            }
            break;
        }
        case IndexVariant::BothTailsSPM: {
            const QuantileBand yb = spec.y_band_or_default();
            const double y_lo = empirical_quantile(y, yb.lower);
            const double y_hi = empirical_quantile(y, yb.upper);
            std::vector<double> z_lo(d), z_hi(d);
            for (std::size_t i = 0; i < d; ++i) {
                const QuantileBand zb = spec.z_band_or_default(i, d);
                z_lo[i] = empirical_quantile(z[i], zb.lower);
                z_hi[i] = empirical_quantile(z[i], zb.upper);
            }
            for (std::size_t t = 0; t <= t_max; ++t) {
                bool ok = y[t] >= y_lo && y[t] <= y_hi;
                for (std::size_t i = 0; i < d && ok; ++i)
                    ok = z[i][t] >= z_lo[i] && z[i][t] <= z_hi[i];
                if (ok) out.baseline.push_back(t);
            }
            out.tau_upper.push_back(y_hi);
            out.tau_lower.push_back(y_lo);
            for (std::size_t i = 0; i < d; ++i) {
                out.tau_upper.push_back(z_hi[i]);
                out.tau_lower.push_back(z_lo[i]);
            }
            break;
        }
    }

    if (out.baseline.empty()) throw degeneracy_error("baseline set empty — loosen thresholds");

    // Extremes of the cause within the baseline set.
    std::vector<double> x_in_baseline;
    x_in_baseline.reserve(out.baseline.size());
    for (std::size_t t : out.baseline) x_in_baseline.push_back(x[t]);

    if (spec.variant == IndexVariant::BothTailsSPM) {
        QuantileBand xb;
        if (spec.x_band) {
            xb = *spec.x_band;
        } else {
            // Default: split the usual extreme budget k across both tails.
            const std::size_t k = extreme_count_rule(x_in_baseline.size(), spec.nu);
            const double half = static_cast<double>(k) /
                                (2.0 * static_cast<double>(x_in_baseline.size()));
            xb = QuantileBand{half, 1.0 - half};
        }
        out.tau_x_lower = empirical_quantile(x_in_baseline, xb.lower);
        out.tau_x_upper = empirical_quantile(x_in_baseline, xb.upper);
        for (std::size_t t : out.baseline) {
            if (x[t] < out.tau_x_lower || x[t] > out.tau_x_upper) out.extreme.push_back(t);
        }
    } else {
        out.k = extreme_count_rule(out.baseline.size(), spec.nu);
        out.tau_x_upper = kth_largest(x_in_baseline, out.k);
        for (std::size_t t : out.baseline) {
            if (x[t] >= out.tau_x_upper) out.extreme.push_back(t);
        }
    }

    if (out.extreme.empty()) throw degeneracy_error("no extreme events under spec");
    return out;
}

/// The estimated coefficient together with its baseline and the realized
/// conditioning, which is echoed back for reporting.
struct GammaEstimate {
    double gamma_hat = 0.0;
    double baseline_hat = 0.0;
    std::size_t n_extreme = 0;
    std::size_t n_baseline = 0;
    ConditioningSpec spec;
    IndexSets sets;
};

/// Covariate-adjusted coefficient estimate: the truncated-ECDF value of the
/// effect's future window, averaged once over the extreme set (gamma_hat) and
/// once over the baseline set (baseline_hat). For BothTailsSPM the ECDF is
/// fitted on |y| and evaluated at |y|, matching the two-sided notion.
inline GammaEstimate gamma_hat(std::span<const double> x, std::span<const double> y,
                               const std::vector<std::span<const double>>& z,
                               const ConditioningSpec& spec) {
    GammaEstimate out;
    out.spec = spec;
    out.sets = build_index_sets(x, y, z, spec);

    const bool absolute = spec.variant == IndexVariant::BothTailsSPM;
    std::vector<double> abs_y;
    if (absolute) {
        abs_y.reserve(y.size());
        for (double v : y) abs_y.push_back(std::abs(v));
    }
    const EcdfTransform transform =
        absolute ? ecdf_fit(abs_y, spec.q_f) : ecdf_fit(y, spec.q_f);

    auto window_max = [&](std::size_t t) {
        double best = 0.0;
        for (std::size_t j = 1; j <= spec.p_y; ++j) {
            const double v = absolute ? std::abs(y[t + j]) : y[t + j];
            best = std::max(best, transform.evaluate(v));
        }
        return best;
    };
    auto mean_over = [&](const std::vector<std::size_t>& idx) {
        double sum = 0.0;
        for (std::size_t t : idx) sum += window_max(t);
        return sum / static_cast<double>(idx.size());
    };

    out.gamma_hat = mean_over(out.sets.extreme);
    out.baseline_hat = mean_over(out.sets.baseline);
    out.n_extreme = out.sets.extreme.size();
    out.n_baseline = out.sets.baseline.size();
    return out;
}

/// Column-selection wrapper: extracts cause/effect/conditioner columns from a
/// panel and delegates to gamma_hat.
inline GammaEstimate gamma_pair(const TimeSeriesPanel& panel, std::string_view cause,
                                std::string_view effect,
                                const std::vector<std::string>& conditioners,
                                const ConditioningSpec& spec) {
    const std::size_t cause_col = panel.column_index(cause);
    const std::size_t effect_col = panel.column_index(effect);
    if (cause_col == effect_col) throw std::invalid_argument("cause and effect must differ");
    std::vector<std::span<const double>> z;
    z.reserve(conditioners.size());
    for (const auto& name : conditioners) {
        const std::size_t col = panel.column_index(name);
        if (col == cause_col || col == effect_col)
            throw std::invalid_argument("conditioner '" + name + "' overlaps cause/effect");
        z.push_back(panel.column(col));
    }
    return gamma_hat(panel.column(cause_col), panel.column(effect_col), z, spec);
}

}  // namespace extcausal
