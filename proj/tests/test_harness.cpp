#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "demis/campaign.hpp"
#include "demis/ingest.hpp"
#include "demis/shots_io.hpp"

using namespace demis;

namespace {

nlohmann::ordered_json strip_wall_time(const std::vector<ResultRow>& rows) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        auto j = row_to_json(r);
        j.erase("wall_time_ns");
        arr.push_back(std::move(j));
    }
    return arr;
}

}  // namespace

TEST_CASE("shots document round trip and line-numbered errors") {
    auto a = Bitstring::from_string("0101");
    auto b = Bitstring::from_string("1100");
    std::ostringstream out;
    write_shots(out, "g0", {a, b});
    auto records = parse_shots(out.str());
    REQUIRE(records.size() == 2);
    REQUIRE(records[0].graph_id == "g0");
    REQUIRE(records[0].shot == 0);
    REQUIRE(records[1].shot == 1);
    REQUIRE(records[0].bits == a);
    REQUIRE(records[1].bits == b);

    REQUIRE_THROWS_WITH(parse_shots("{\"graph_id\": \"g\", \"shot\": 0, \"bits\": \"01\"}\nnot json\n"),
                        Catch::Matchers::ContainsSubstring("line 2"));
    REQUIRE_THROWS_WITH(parse_shots("{\"graph_id\": \"g\", \"shot\": 0}\n"),
                        Catch::Matchers::ContainsSubstring("line 1"));
}

TEST_CASE("campaign config parsing is strict") {
    const std::string good = R"({
      "schema_version": 1,
      "id": "demo",
      "graphs": [{"lattice": {"family": "square", "rows": 3, "cols": 3}}],
      "noise": {"p": 0.1},
      "shots_per_instance": 2,
      "seed": 7,
      "mode": "bf_dem",
      "k_rule": "mis_size"
    })";
    Campaign c = parse_campaign(good);
    REQUIRE(c.id == "demo");
    REQUIRE(c.noise_points.size() == 1);
    REQUIRE(c.noise_points[0].symmetric());
    REQUIRE(c.k_rule.mis_size);

    auto mutate = [&](const std::string& from, const std::string& to) {
        std::string s = good;
        auto pos = s.find(from);
        REQUIRE(pos != std::string::npos);
        s.replace(pos, from.size(), to);
        return s;
    };
    REQUIRE_THROWS_WITH(parse_campaign(mutate("\"seed\": 7", "\"seed\": 7, \"extra\": 1")),
                        Catch::Matchers::ContainsSubstring("unknown field 'extra'"));
    REQUIRE_THROWS_AS(parse_campaign(mutate("\"schema_version\": 1", "\"schema_version\": 2")),
                      ValidationError);
    REQUIRE_THROWS_AS(parse_campaign(mutate("\"mode\": \"bf_dem\"", "\"mode\": \"magic\"")),
                      ValidationError);

    Campaign explicit_k = parse_campaign(mutate("\"k_rule\": \"mis_size\"", "\"k_rule\": {\"explicit\": 4}"));
    REQUIRE_FALSE(explicit_k.k_rule.mis_size);
    REQUIRE(explicit_k.k_rule.explicit_k == 4);

    Campaign grid = parse_campaign(mutate("\"noise\": {\"p\": 0.1}",
                                          "\"noise\": {\"p_grid\": [0.1, 0.2]}"));
    REQUIRE(grid.noise_points.size() == 2);
    Campaign pairs = parse_campaign(mutate("\"noise\": {\"p\": 0.1}",
                                           "\"noise\": {\"pairs\": [[0.1, 0.2], [0.3, 0.4]]}"));
    REQUIRE(pairs.noise_points.size() == 2);
    REQUIRE(pairs.noise_points[1].p10 == 0.4);
}

TEST_CASE("a noiseless single-shot campaign yields one YES row at ops 1") {
    Campaign c;
    c.id = "noiseless";
    CampaignGraphRef ref;
    ref.kind = CampaignGraphRef::Kind::lattice;
    ref.lattice = {LatticeFamily::square, 3, 3, std::nullopt};
    c.graphs.push_back(ref);
    c.noise_points.push_back(NoiseModel::symmetric_rate(0.0));
    c.shots_per_instance = 1;
    c.seed = 1;
    c.mode = CampaignMode::bf_dem;
    CampaignOutput out = run_campaign(c);
    REQUIRE(out.rows.size() == 1);
    const ResultRow& row = out.rows[0];
    REQUIRE(row.decision == "YES");
    REQUIRE(row.cost == 1);
    REQUIRE(row.n == 9);
    REQUIRE(row.k == 5);
    REQUIRE(row.p_eff == 0.0);
    REQUIRE(row.graph_id == "square_3x3");
}

TEST_CASE("campaign reruns are identical except wall time") {
    Campaign c;
    c.id = "repro";
    CampaignGraphRef ref;
    ref.kind = CampaignGraphRef::Kind::lattice;
    ref.lattice = {LatticeFamily::square, 3, 4, std::nullopt};
    c.graphs.push_back(ref);
    CampaignGraphRef emb;
    emb.kind = CampaignGraphRef::Kind::embed16;
    emb.lattice = {LatticeFamily::square, 6, 6, std::nullopt};
    c.graphs.push_back(emb);
    c.noise_points = {NoiseModel::symmetric_rate(0.2), NoiseModel(0.1, 0.3)};
    c.shots_per_instance = 8;
    c.instances_per_point = 2;
    c.seed = 33;
    c.mode = CampaignMode::both;
    CampaignOutput a = run_campaign(c);
    CampaignOutput b = run_campaign(c);
    REQUIRE(strip_wall_time(a.rows) == strip_wall_time(b.rows));
    // (8 bf rows + 1 tarjan row) x 2 noise points x 2 instances x 2 entries
    REQUIRE(a.rows.size() == 9 * 2 * 2 * 2);
    REQUIRE(a.metadata["placement"] == "contiguous-block");
}

TEST_CASE("campaign rows re-validate from their persisted form") {
    Campaign c;
    c.id = "sound";
    CampaignGraphRef ref;
    ref.kind = CampaignGraphRef::Kind::lattice;
    ref.lattice = {LatticeFamily::kings, 3, 3, std::nullopt};
    c.graphs.push_back(ref);
    c.noise_points = {NoiseModel::symmetric_rate(0.25)};
    c.shots_per_instance = 12;
    c.seed = 5;
    c.mode = CampaignMode::bf_dem;
    CampaignOutput out = run_campaign(c);
    REQUIRE(out.instances.size() == 1);
    const Graph& g = out.instances[0].graph;
    for (const auto& row : out.rows) {
        ResultRow parsed = row_from_json(row_to_json(row));  // JSONL round trip
        REQUIRE(parsed.decision == row.decision);
        if (parsed.decision == "YES") {
            Bitstring w = Bitstring::from_string(parsed.output);
            REQUIRE(is_independent_set(g, w));
            REQUIRE(static_cast<int>(w.weight()) >= parsed.k);
        }
    }
}

TEST_CASE("scaling table shape and theory column") {
    Campaign c;
    c.id = "scaling";
    for (int L : {3, 4}) {
        CampaignGraphRef ref;
        ref.kind = CampaignGraphRef::Kind::lattice;
        ref.lattice = {LatticeFamily::square, 3, L, std::nullopt};
        c.graphs.push_back(ref);
    }
    c.noise_points = {NoiseModel::symmetric_rate(0.1), NoiseModel::symmetric_rate(0.2)};
    c.shots_per_instance = 16;
    c.seed = 11;
    c.mode = CampaignMode::bf_dem;
    CampaignOutput out = run_campaign(c);
    std::string table = emit_table(out.rows, TableKind::scaling);
    std::istringstream lines(table);
    std::string header;
    std::getline(lines, header);
    REQUIRE(header == "p01,p10,p_eff,n,median_ops,iqr,theory_ops");
    int data_lines = 0;
    std::string line;
    while (std::getline(lines, line))
        if (!line.empty()) ++data_lines;
    REQUIRE(data_lines == 4);  // 2 sizes x 2 rates
    // theory for n=9, p=0.1: T = 1 + 9 = 10
    REQUIRE(table.find(",10\n") != std::string::npos);
}

TEST_CASE("rate sweep and exponent tables") {
    Campaign c;
    c.id = "sweep";
    CampaignGraphRef ref;
    ref.kind = CampaignGraphRef::Kind::lattice;
    ref.lattice = {LatticeFamily::square, 4, 4, std::nullopt};
    c.graphs.push_back(ref);
    c.noise_points = {NoiseModel::symmetric_rate(0.1), NoiseModel::symmetric_rate(0.3)};
    c.shots_per_instance = 10;
    c.seed = 21;
    c.mode = CampaignMode::bf_dem;
    CampaignOutput out = run_campaign(c);
    std::string sweep = emit_table(out.rows, TableKind::rate_sweep);
    REQUIRE(sweep.rfind("graph_id,n,p,median_ops,theory_ops", 0) == 0);
    REQUIRE_THROWS_AS(emit_table(out.rows, TableKind::exponent), ValidationError);

    // exponent table needs tarjan rows over >= 3 sizes
    Campaign t;
    t.id = "exponent";
    for (int L : {4, 5, 6}) {
        CampaignGraphRef r2;
        r2.kind = CampaignGraphRef::Kind::lattice;
        r2.lattice = {LatticeFamily::square, L, L, std::nullopt};
        t.graphs.push_back(r2);
    }
    t.noise_points = {NoiseModel::symmetric_rate(0.5)};
    t.shots_per_instance = 1;
    t.seed = 2;
    t.mode = CampaignMode::tarjan_dem;
    CampaignOutput tout = run_campaign(t);
    REQUIRE(tout.rows.size() == 3);
    std::string table = emit_table(tout.rows, TableKind::exponent);
    std::istringstream lines(table);
    std::string header, row;
    std::getline(lines, header);
    REQUIRE(header == "p,c_emp,stderr,c_bf,c_th");
    std::getline(lines, row);
    // node counts 103, 533, 4025 -> c_emp = exp(0.183297) = 1.20117
    REQUIRE(row.rfind("0.5,1.20117", 0) == 0);
    REQUIRE(row.find(",2,") != std::string::npos);       // c_bf = 2^H2(0.5)
    REQUIRE(row.find("1.25992") != std::string::npos);   // c_th = 2^(1/3)
}

TEST_CASE("ingest closed loop recovers rates and flags overweight shots") {
    Graph g = build_lattice({LatticeFamily::square, 5, 5, std::nullopt});
    MisResult mis = tarjan_mis(g);
    NoiseModel model(0.33, 0.40);
    auto bits = apply_channel(mis.witness, model, 8080, 5000);
    std::vector<ShotRecord> records;
    for (std::size_t i = 0; i < bits.size(); ++i)
        records.push_back({"dev", static_cast<std::int64_t>(i), bits[i]});
    IngestResult res = ingest_measurements(g, records, "sq5");
    REQUIRE(res.mis.size == 13);
    REQUIRE(std::abs(res.calibration.p01_hat->value - model.p01) <
            3 * res.calibration.p01_hat->std_error);
    REQUIRE(std::abs(res.calibration.p10_hat->value - model.p10) <
            3 * res.calibration.p10_hat->std_error);
    REQUIRE(res.shots.size() == 5000);
    REQUIRE(res.shots[412].graph_id == "sq5");
    REQUIRE(res.shots[412].shot == 412);
    for (std::size_t idx : res.overweight_shots)
        REQUIRE(static_cast<int>(records[idx].bits.weight()) > res.mis.size);
    REQUIRE(res.metadata["source_graph_ids"]["dev"] == 5000);

    // identical shots: zero rates
    std::vector<ShotRecord> clean = {{"dev", 0, mis.witness}, {"dev", 1, mis.witness}};
    IngestResult zero = ingest_measurements(g, clean);
    REQUIRE(zero.calibration.p01_hat->value == 0.0);
    REQUIRE(zero.calibration.p10_hat->value == 0.0);
    REQUIRE(zero.overweight_shots.empty());

    // length mismatch
    std::vector<ShotRecord> bad = {{"dev", 0, Bitstring::from_string("01")}};
    REQUIRE_THROWS_AS(ingest_measurements(g, bad), ValidationError);
}
