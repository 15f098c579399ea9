#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace extcausal {

/// 1-based rank of the ceil(q*n) order statistic, clamped to [1, n].
/// The small slack absorbs floating products like 0.8*5 landing a hair above
/// the exact integer; quantile inputs are short decimals, so the nearest
/// genuine non-integer product is many orders of magnitude further away.
inline std::size_t quantile_rank(double q, std::size_t n) {
    const double r = std::ceil(q * static_cast<double>(n) - 1e-9);
    if (!(r >= 1.0)) return 1;
    if (r >= static_cast<double>(n)) return n;
    return static_cast<std::size_t>(r);
}

/// Order-statistic quantile: the ceil(q*n)-th smallest value (1-based), the
/// minimum for q = 0. No interpolation; duplicates count with multiplicity.
inline double empirical_quantile(std::span<const double> sample, double q) {
    if (sample.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
    if (!(q >= 0.0 && q <= 1.0))
        throw std::invalid_argument("empirical_quantile: q outside [0,1]");
    std::vector<double> v(sample.begin(), sample.end());
    const std::size_t rank = quantile_rank(q, v.size());
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(rank - 1), v.end());
    return v[rank - 1];
}

/// k-th largest order statistic, duplicates counted with multiplicity.
inline double kth_largest(std::span<const double> sample, std::size_t k) {
    if (k < 1 || k > sample.size()) throw std::invalid_argument("kth_largest: k out of range");
    std::vector<double> v(sample.begin(), sample.end());
    const std::size_t idx = v.size() - k;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(idx), v.end());
    return v[idx];
}

/// Empirical CDF with lower truncation: values below the truncation quantile
/// of the fitted sample map to 0, everything else to the plain count-based
/// ECDF with weak inequality (so the sample maximum maps to exactly 1).
/// Truncation quantile 0 yields the plain ECDF.
class EcdfTransform {
public:
    EcdfTransform(std::vector<double> sorted_values, double truncation_quantile,
                  double truncation_value)
        : sorted_(std::move(sorted_values)),
          truncation_quantile_(truncation_quantile),
          truncation_value_(truncation_value) {}

    double evaluate(double t) const {
        if (t < truncation_value_) return 0.0;
        const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
        return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
    }

    const std::vector<double>& sorted_values() const { return sorted_; }
    double truncation_quantile() const { return truncation_quantile_; }
    double truncation_value() const { return truncation_value_; }

private:
    std::vector<double> sorted_;
    double truncation_quantile_;
    double truncation_value_;
};

inline EcdfTransform ecdf_fit(std::span<const double> sample, double q_f) {
    if (sample.empty()) throw std::invalid_argument("ecdf_fit: empty sample");
    if (!(q_f >= 0.0 && q_f < 1.0)) throw std::invalid_argument("ecdf_fit: q_F outside [0,1)");
    for (double v : sample) {
        if (!std::isfinite(v)) throw std::invalid_argument("ecdf_fit: non-finite value");
    }
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const double truncation = sorted[quantile_rank(q_f, sorted.size()) - 1];
    return EcdfTransform(std::move(sorted), q_f, truncation);
}

}  // namespace extcausal
