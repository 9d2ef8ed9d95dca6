#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cpr {

struct Edge {
    std::string name;
    std::string src;
    std::string tgt;
    std::optional<long> mult = 1;  // nullopt means infinitely many parallel copies
};

struct FiniteGraph {
    std::vector<std::string> vertices;
    std::vector<Edge> edges;

    int vertex_index(const std::string& v) const;  // -1 if absent
    int edge_index(const std::string& e) const;
    bool has_infinite_edges() const;
    // Replaces every edge of multiplicity n > 1 by n edges "name.1" .. "name.n".
    FiniteGraph expanded() const;
    void validate() const;
};

FiniteGraph graph_from_json(const nlohmann::json& j);
nlohmann::json graph_to_json(const FiniteGraph& g);

// Small named graphs used by tests, the acceptance suite and the CLI docs.
FiniteGraph line_graph(int n);   // v1 -> v2 -> ... -> vn
FiniteGraph rose_graph(int k);   // one vertex with k loops
FiniteGraph cycle_graph(int n);

} // namespace cpr
