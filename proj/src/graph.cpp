#include "cpr/graph.hpp"

#include "cpr/errors.hpp"

#include <set>

namespace cpr {

int FiniteGraph::vertex_index(const std::string& v) const {
    for (std::size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == v) return static_cast<int>(i);
    return -1;
}

int FiniteGraph::edge_index(const std::string& e) const {
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].name == e) return static_cast<int>(i);
    return -1;
}

bool FiniteGraph::has_infinite_edges() const {
    for (const auto& e : edges)
        if (!e.mult) return true;
    return false;
}

void FiniteGraph::validate() const {
    std::set<std::string> names(vertices.begin(), vertices.end());
    if (names.size() != vertices.size()) throw FormatError("duplicate vertex name");
    std::set<std::string> enames;
    for (const auto& e : edges) {
        if (!enames.insert(e.name).second) throw FormatError("duplicate edge name '" + e.name + "'");
        if (!names.count(e.src) || !names.count(e.tgt))
            throw FormatError("edge '" + e.name + "' references an unknown vertex");
        if (e.mult && *e.mult < 0) throw FormatError("edge '" + e.name + "' has negative multiplicity");
    }
}

FiniteGraph FiniteGraph::expanded() const {
    FiniteGraph g;
    g.vertices = vertices;
    for (const auto& e : edges) {
        if (!e.mult) throw InfiniteMultiplicity("edge '" + e.name + "' has infinite multiplicity");
        if (*e.mult == 1) {
            g.edges.push_back(e);
            continue;
        }
        for (long k = 1; k <= *e.mult; ++k) g.edges.push_back({e.name + "." + std::to_string(k), e.src, e.tgt, 1});
    }
    g.validate();
    return g;
}

FiniteGraph graph_from_json(const nlohmann::json& j) {
    try {
        FiniteGraph g;
        for (const auto& v : j.at("vertices")) g.vertices.push_back(v.get<std::string>());
        for (const auto& e : j.at("edges")) {
            Edge ed{e.at("name").get<std::string>(), e.at("src").get<std::string>(), e.at("tgt").get<std::string>(), 1};
            if (e.contains("mult")) {
                const auto& m = e.at("mult");
                if (m.is_string()) {
                    if (m.get<std::string>() != "inf") throw FormatError("mult must be a positive integer or \"inf\"");
                    ed.mult = std::nullopt;
                } else {
                    long n = m.get<long>();
                    if (n < 1) throw FormatError("mult must be a positive integer or \"inf\"");
                    ed.mult = n;
                }
            }
            g.edges.push_back(std::move(ed));
        }
        g.validate();
        return g;
    } catch (const nlohmann::json::exception& ex) {
        throw FormatError(std::string("graph file: ") + ex.what());
    }
}

nlohmann::json graph_to_json(const FiniteGraph& g) {
    nlohmann::json j;
    j["vertices"] = g.vertices;
    j["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges) {
        nlohmann::json je{{"name", e.name}, {"src", e.src}, {"tgt", e.tgt}};
        if (e.mult)
            je["mult"] = *e.mult;
        else
            je["mult"] = "inf";
        j["edges"].push_back(je);
    }
    return j;
}

FiniteGraph line_graph(int n) {
    FiniteGraph g;
    for (int i = 1; i <= n; ++i) g.vertices.push_back("v" + std::to_string(i));
    for (int i = 1; i < n; ++i)
        g.edges.push_back({"e" + std::to_string(i), "v" + std::to_string(i), "v" + std::to_string(i + 1), 1});
    return g;
}

FiniteGraph rose_graph(int k) {
    FiniteGraph g;
    g.vertices = {"v"};
    for (int i = 1; i <= k; ++i) g.edges.push_back({k == 1 ? "e" : "e" + std::to_string(i), "v", "v", 1});
    return g;
}

FiniteGraph cycle_graph(int n) {
    FiniteGraph g;
    for (int i = 1; i <= n; ++i) g.vertices.push_back("v" + std::to_string(i));
    for (int i = 1; i <= n; ++i)
        g.edges.push_back({"e" + std::to_string(i), "v" + std::to_string(i), "v" + std::to_string(i % n + 1), 1});
    return g;
}

} // namespace cpr
