#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "demis/graph.hpp"

namespace demis {

// Graph document: {"n": int, "edges": [[u,v],...], "labels": [str,...]?}
// Register document: {"positions_um": [[x,y],...], "blockade_radius_um": number}

inline nlohmann::ordered_json graph_to_json(const Graph& g) {
    nlohmann::ordered_json j;
    j["n"] = g.n();
    auto edges = nlohmann::ordered_json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    j["edges"] = std::move(edges);
    if (!g.labels().empty()) j["labels"] = g.labels();
    return j;
}

inline std::string serialize_graph(const Graph& g) { return graph_to_json(g).dump(2) + "\n"; }

namespace detail {
inline nlohmann::json parse_document(const std::string& text, const char* what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // e.byte is the offset of the failure; translate to line/column.
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ValidationError(std::string(what) + ": malformed document at line " +
                              std::to_string(line) + ", column " + std::to_string(col) + ": " +
                              e.what());
    }
}
}  // namespace detail

inline Graph graph_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw ValidationError("graph document: expected object with fields 'n' and 'edges'");
    if (!j["n"].is_number_integer()) throw ValidationError("graph document: 'n' must be an integer");
    int n = j["n"].get<int>();
    std::vector<std::pair<int, int>> edges;
    if (!j["edges"].is_array()) throw ValidationError("graph document: 'edges' must be an array");
    for (std::size_t i = 0; i < j["edges"].size(); ++i) {
        const auto& e = j["edges"][i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer())
            throw ValidationError("graph document: edges[" + std::to_string(i) +
                                  "] must be a pair of integers");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        if (!j["labels"].is_array())
            throw ValidationError("graph document: 'labels' must be an array of strings");
        for (const auto& s : j["labels"]) labels.push_back(s.get<std::string>());
    }
    return Graph::from_edges(n, std::move(edges), std::move(labels));
}

inline Graph parse_graph(const std::string& text) {
    return graph_from_json(detail::parse_document(text, "graph document"));
}

inline nlohmann::ordered_json register_to_json(const Register& reg) {
    nlohmann::ordered_json j;
    auto pos = nlohmann::ordered_json::array();
    for (const auto& p : reg.positions_um) pos.push_back({p[0], p[1]});
    j["positions_um"] = std::move(pos);
    j["blockade_radius_um"] = reg.blockade_radius_um;
    return j;
}

inline Register register_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("positions_um") || !j.contains("blockade_radius_um"))
        throw ValidationError(
            "register document: expected fields 'positions_um' and 'blockade_radius_um'");
    Register reg;
    for (std::size_t i = 0; i < j["positions_um"].size(); ++i) {
        const auto& p = j["positions_um"][i];
        if (!p.is_array() || p.size() != 2)
            throw ValidationError("register document: positions_um[" + std::to_string(i) +
                                  "] must be [x, y]");
        reg.positions_um.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    reg.blockade_radius_um = j["blockade_radius_um"].get<double>();
    reg.validate();
    return reg;
}

inline Register parse_register(const std::string& text) {
    return register_from_json(detail::parse_document(text, "register document"));
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << content;
}

inline Graph load_graph(const std::string& path) { return parse_graph(read_text_file(path)); }
inline Register load_register(const std::string& path) {
    return parse_register(read_text_file(path));
}

}  // namespace demis
