#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace extcausal {

/// An n x m panel of equally spaced observations, one column per series.
/// Row order is time order. Validated once at construction and immutable
/// afterwards, so instances can be shared freely across threads.
class TimeSeriesPanel {
public:
    TimeSeriesPanel(std::vector<std::vector<double>> columns, std::vector<std::string> names)
        : columns_(std::move(columns)), names_(std::move(names)) {
        if (columns_.empty()) throw std::invalid_argument("panel needs at least one column");
        if (columns_.size() != names_.size())
            throw std::invalid_argument("panel column/name count mismatch");
        const std::size_t n = columns_.front().size();
        if (n < 2) throw std::invalid_argument("panel needs at least two rows");
        for (std::size_t c = 0; c < columns_.size(); ++c) {
            if (columns_[c].size() != n)
                throw std::invalid_argument("panel columns differ in length");
            for (double v : columns_[c]) {
                if (!std::isfinite(v))
                    throw std::invalid_argument("non-finite value in column '" + names_[c] + "'");
            }
        }
        for (std::size_t c = 0; c < names_.size(); ++c) {
            if (names_[c].empty()) throw std::invalid_argument("empty column name");
            for (std::size_t d = c + 1; d < names_.size(); ++d) {
                if (names_[c] == names_[d])
                    throw std::invalid_argument("duplicate column name '" + names_[c] + "'");
            }
        }
    }

    std::size_t rows() const { return columns_.front().size(); }
    std::size_t cols() const { return columns_.size(); }
    const std::vector<std::string>& names() const { return names_; }

    std::span<const double> column(std::size_t c) const { return columns_.at(c); }
    std::span<const double> column(std::string_view name) const {
        return columns_[column_index(name)];
    }

    std::size_t column_index(std::string_view name) const {
        for (std::size_t c = 0; c < names_.size(); ++c) {
            if (names_[c] == name) return c;
        }
        throw std::invalid_argument("unknown column '" + std::string(name) + "'");
    }

    double at(std::size_t row, std::size_t col) const { return columns_[col][row]; }

private:
    std::vector<std::vector<double>> columns_;
    std::vector<std::string> names_;
};

}  // namespace extcausal
