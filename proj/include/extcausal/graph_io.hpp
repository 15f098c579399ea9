#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "extcausal/graph.hpp"

namespace extcausal {

namespace detail {

inline std::string dot_quote(const std::string& name) {
    std::string out = "\"";
    for (char ch : name) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    out += '"';
    return out;
}

}  // namespace detail

/// DOT digraph with one node statement per series (in column order) and one
/// edge statement per adjacency entry.
inline std::string to_dot(const SummaryGraph& graph) {
    std::string out = "digraph G {\n";
    for (const auto& name : graph.names()) {
        out += "  " + detail::dot_quote(name) + ";\n";
    }
    for (std::size_t i = 0; i < graph.size(); ++i) {
        for (std::size_t j = 0; j < graph.size(); ++j) {
            if (graph.edge(i, j))
                out += "  " + detail::dot_quote(graph.names()[i]) + " -> " +
                       detail::dot_quote(graph.names()[j]) + ";\n";
        }
    }
    out += "}\n";
    return out;
}

/// Reads back the dialect emitted by to_dot (quoted or bare identifiers,
/// node and edge statements). Node order follows first appearance.
inline SummaryGraph parse_dot(std::string_view text) {
    struct Cursor {
        std::string_view text;
        std::size_t pos = 0;

        void skip_space() {
            while (pos < text.size() &&
                   (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
                    text[pos] == '\r'))
                ++pos;
        }
        bool done() { return pos >= text.size(); }
        char peek() { return text[pos]; }
        bool consume(std::string_view token) {
            skip_space();
            if (text.substr(pos, token.size()) == token) {
                pos += token.size();
                return true;
            }
            return false;
        }
        std::string name() {
            skip_space();
            if (done()) throw std::invalid_argument("dot: unexpected end of input");
            std::string out;
            if (peek() == '"') {
                ++pos;
                while (pos < text.size() && text[pos] != '"') {
                    if (text[pos] == '\\' && pos + 1 < text.size()) ++pos;
                    out += text[pos++];
                }
                if (pos >= text.size()) throw std::invalid_argument("dot: unterminated string");
                ++pos;
            } else {
                while (pos < text.size() && text[pos] != ' ' && text[pos] != '\t' &&
                       text[pos] != '\n' && text[pos] != '\r' && text[pos] != ';' &&
                       text[pos] != '{' && text[pos] != '}')
                    out += text[pos++];
            }
            if (out.empty()) throw std::invalid_argument("dot: expected a name");
            return out;
        }
    };

    Cursor cur{text};
    if (!cur.consume("digraph")) throw std::invalid_argument("dot: expected 'digraph'");
    cur.skip_space();
    if (!cur.done() && cur.peek() != '{') cur.name();  // optional graph name
    if (!cur.consume("{")) throw std::invalid_argument("dot: expected '{'");

    std::vector<std::string> names;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    auto vertex = [&](const std::string& name) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == name) return i;
        }
        names.push_back(name);
        return names.size() - 1;
    };

    while (true) {
        cur.skip_space();
        if (cur.done()) throw std::invalid_argument("dot: expected '}'");
        if (cur.peek() == '}') {
            ++cur.pos;
            break;
        }
        const std::size_t from = vertex(cur.name());
        if (cur.consume("->")) {
            const std::size_t to = vertex(cur.name());
            edges.emplace_back(from, to);
        }
        cur.consume(";");
    }

    SummaryGraph graph(std::move(names));
    for (const auto& [from, to] : edges) graph.set_edge(from, to, true);
    return graph;
}

inline nlohmann::json graph_to_json(const SummaryGraph& graph) {
    nlohmann::json adjacency = nlohmann::json::array();
    for (std::size_t i = 0; i < graph.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < graph.size(); ++j) row.push_back(graph.edge(i, j) ? 1 : 0);
        adjacency.push_back(std::move(row));
    }
    return nlohmann::json{{"m", graph.size()},
                          {"names", graph.names()},
                          {"adjacency", std::move(adjacency)},
                          {"edge_count", graph.edge_count()}};
}

inline SummaryGraph graph_from_json(const nlohmann::json& j) {
    SummaryGraph graph(j.at("names").get<std::vector<std::string>>());
    const auto& adjacency = j.at("adjacency");
    if (adjacency.size() != graph.size())
        throw std::invalid_argument("adjacency rows do not match names");
    for (std::size_t i = 0; i < graph.size(); ++i) {
        if (adjacency[i].size() != graph.size())
            throw std::invalid_argument("adjacency matrix is not square");
        for (std::size_t jx = 0; jx < graph.size(); ++jx) {
            if (adjacency[i][jx].get<int>() != 0) graph.set_edge(i, jx, true);
        }
    }
    return graph;
}

}  // namespace extcausal
