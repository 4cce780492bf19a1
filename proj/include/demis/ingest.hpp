#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "demis/graph.hpp"
#include "demis/mis.hpp"
#include "demis/noise.hpp"
#include "demis/shots_io.hpp"

namespace demis {

struct IngestResult {
    Graph graph;
    MisResult mis;
    std::vector<ShotRecord> shots;          // normalized: reindexed 0..m-1
    CalibrationReport calibration;
    std::vector<std::size_t> overweight_shots;  // indices with weight > MIS size
    nlohmann::ordered_json metadata;
};

/// Normalizes measured shots against a graph: validates lengths, solves for
/// the reference MIS witness, calibrates (p01, p10, p_eff) against it and
/// flags shots whose weight exceeds the MIS size.
inline IngestResult ingest_measurements(Graph graph, const std::vector<ShotRecord>& records,
                                        const std::string& graph_id = "ingest") {
    if (records.empty()) throw ValidationError("ingest: shots document is empty");
    IngestResult out;
    out.graph = std::move(graph);
    const std::size_t n = static_cast<std::size_t>(out.graph.n());
    std::map<std::string, std::size_t> per_id;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].bits.size() != n)
            throw ValidationError("ingest: shot record " + std::to_string(i) + " has length " +
                                  std::to_string(records[i].bits.size()) + ", graph order is " +
                                  std::to_string(n));
        ++per_id[records[i].graph_id];
    }
    out.mis = tarjan_mis(out.graph);
    std::vector<Bitstring> bits;
    bits.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        bits.push_back(records[i].bits);
        ShotRecord norm;
        norm.graph_id = graph_id;
        norm.shot = static_cast<std::int64_t>(i);
        norm.bits = records[i].bits;
        out.shots.push_back(std::move(norm));
        if (static_cast<int>(records[i].bits.weight()) > out.mis.size)
            out.overweight_shots.push_back(i);
    }
    out.calibration = calibrate(out.mis.witness, bits);

    out.metadata["graph_id"] = graph_id;
    out.metadata["n"] = out.graph.n();
    out.metadata["mis_size"] = out.mis.size;
    out.metadata["shots"] = records.size();
    out.metadata["overweight_shots"] = out.overweight_shots.size();
    auto ids = nlohmann::ordered_json::object();
    for (const auto& [id, count] : per_id) ids[id] = count;
    out.metadata["source_graph_ids"] = std::move(ids);  // per-id breakdown when pooling
    return out;
}

inline nlohmann::ordered_json calibration_to_json(const CalibrationReport& rep) {
    nlohmann::ordered_json j;
    auto rate = [](const std::optional<RateEstimate>& e) -> nlohmann::ordered_json {
        if (!e) return nullptr;
        nlohmann::ordered_json r;
        r["value"] = e->value;
        r["std_error"] = e->std_error;
        r["flips"] = e->flips;
        r["exposures"] = e->exposures;
        if (e->clipped) r["clipped"] = true;
        return r;
    };
    j["p01_hat"] = rate(rep.p01_hat);
    j["p10_hat"] = rate(rep.p10_hat);
    j["f0"] = rep.f0;
    j["f1"] = rep.f1;
    j["p_eff"] = rep.p_eff;
    j["shots"] = rep.shots;
    return j;
}

}  // namespace demis
