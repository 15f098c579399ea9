#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace extcausal {

/// Directed summary graph over a set of named series. Entry (i, j) true means
/// an edge i -> j; the diagonal is always false (no self-loops).
class SummaryGraph {
public:
    SummaryGraph() = default;

    explicit SummaryGraph(std::vector<std::string> names)
        : names_(std::move(names)), adj_(names_.size() * names_.size(), 0) {}

    static SummaryGraph complete(std::vector<std::string> names) {
        SummaryGraph g(std::move(names));
        for (std::size_t i = 0; i < g.size(); ++i) {
            for (std::size_t j = 0; j < g.size(); ++j) {
                if (i != j) g.set_edge(i, j, true);
            }
        }
        return g;
    }

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

    bool edge(std::size_t from, std::size_t to) const { return adj_.at(from * size() + to) != 0; }

    void set_edge(std::size_t from, std::size_t to, bool present) {
        if (from >= size() || to >= size()) throw std::out_of_range("graph vertex out of range");
        if (from == to && present) throw std::invalid_argument("self-loops are not allowed");
        adj_[from * size() + to] = present ? 1 : 0;
    }

    std::size_t edge_count() const {
        std::size_t count = 0;
        for (char bit : adj_) count += bit != 0;
        return count;
    }

    /// Vertices with an edge into `node`.
    std::vector<std::size_t> parents(std::size_t node) const {
        std::vector<std::size_t> out;
        for (std::size_t from = 0; from < size(); ++from) {
            if (from != node && edge(from, node)) out.push_back(from);
        }
        return out;
    }

    friend bool operator==(const SummaryGraph&, const SummaryGraph&) = default;

private:
    std::vector<std::string> names_;
    std::vector<char> adj_;  // row-major, [from * m + to]
};

}  // namespace extcausal
