#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "demis/bitstring.hpp"

namespace demis {

// Shots document: one JSON record per line,
//   {"graph_id": str, "shot": int, "bits": "0101..."}

struct ShotRecord {
    std::string graph_id;
    std::int64_t shot = 0;
    Bitstring bits;
};

inline void write_shots(std::ostream& out, const std::string& graph_id,
                        const std::vector<Bitstring>& shots, std::int64_t first_index = 0) {
    for (std::size_t s = 0; s < shots.size(); ++s) {
        nlohmann::ordered_json j;
        j["graph_id"] = graph_id;
        j["shot"] = first_index + static_cast<std::int64_t>(s);
        j["bits"] = shots[s].to_string();
        out << j.dump() << "\n";
    }
}

inline std::vector<ShotRecord> read_shots(std::istream& in) {
    std::vector<ShotRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ValidationError("shots document line " + std::to_string(line_no) + ": " +
                                  e.what());
        }
        if (!j.is_object() || !j.contains("graph_id") || !j.contains("shot") ||
            !j.contains("bits"))
            throw ValidationError("shots document line " + std::to_string(line_no) +
                                  ": expected fields graph_id, shot, bits");
        ShotRecord r;
        try {
            r.graph_id = j["graph_id"].get<std::string>();
            r.shot = j["shot"].get<std::int64_t>();
            r.bits = Bitstring::from_string(j["bits"].get<std::string>());
        } catch (const std::exception& e) {
            throw ValidationError("shots document line " + std::to_string(line_no) + ": " +
                                  e.what());
        }
        records.push_back(std::move(r));
    }
    return records;
}

inline std::vector<ShotRecord> parse_shots(const std::string& text) {
    std::istringstream in(text);
    return read_shots(in);
}

}  // namespace demis
