// demis: deterministic error mitigation toolkit for k-independent-set
// experiments. Subcommands: graph gen, mis solve, noise emulate|calibrate,
// dem run|tarjan, analyze volume|fit|breakeven, campaign run, ingest.
//
// Exit codes: 0 success, 2 validation error, 3 budget exhausted.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "demis/analytics.hpp"
#include "demis/campaign.hpp"
#include "demis/dem.hpp"
#include "demis/graph.hpp"
#include "demis/graph_io.hpp"
#include "demis/ingest.hpp"
#include "demis/mis.hpp"
#include "demis/noise.hpp"
#include "demis/pattern.hpp"
#include "demis/shots_io.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitBudget = 3;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        demis::write_text_file(out_path, text);
    }
}

std::vector<demis::ShotRecord> load_shot_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw demis::ValidationError("cannot open shots file: " + path);
    return demis::read_shots(in);
}

struct GraphGenArgs {
    std::string family = "square";
    int rows = 0, cols = 0;
    std::string register_file;
    bool embed16 = false;
    std::uint64_t placement_seed = 0;
    std::string out;
};

int run_graph_gen(const GraphGenArgs& a) {
    demis::Graph g;
    if (!a.register_file.empty()) {
        g = demis::unit_disk_graph(demis::load_register(a.register_file));
    } else {
        if (a.rows < 1 || a.cols < 1)
            throw demis::ValidationError("graph gen: --rows and --cols are required (>= 1)");
        demis::LatticeSpec spec{demis::lattice_family_from_string(a.family), a.rows, a.cols,
                                std::nullopt};
        if (a.embed16) {
            demis::Graph base = demis::build_lattice(
                demis::LatticeSpec{spec.family, 4, 4, std::nullopt});
            spec = demis::embed_filling_fraction(base, spec, a.placement_seed);
        }
        g = demis::build_lattice(spec);
    }
    emit(demis::serialize_graph(g), a.out);
    return 0;
}

int run_mis_solve(const std::string& graph_file, const std::string& method, int cap) {
    demis::Graph g = demis::load_graph(graph_file);
    demis::MisResult r;
    if (method == "brute")
        r = demis::brute_force_mis(g, cap);
    else if (method == "tarjan")
        r = demis::tarjan_mis(g);
    else
        throw demis::ValidationError("mis solve: --method must be brute|tarjan");
    ordered_json j;
    j["size"] = r.size;
    j["witness"] = r.witness.to_string();
    j["node_count"] = r.node_count;
    std::cout << j.dump() << "\n";
    return 0;
}

struct EmulateArgs {
    std::string graph_file, ideal, graph_id = "emulated", out;
    double p01 = 0.0, p10 = 0.0;
    int shots = 1;
    std::uint64_t seed = 0;
};

int run_noise_emulate(const EmulateArgs& a) {
    demis::Graph g = demis::load_graph(a.graph_file);
    demis::Bitstring ideal = demis::Bitstring::from_string(a.ideal);
    if (static_cast<int>(ideal.size()) != g.n())
        throw demis::ValidationError("noise emulate: --ideal length must equal the graph order");
    auto shots = demis::apply_channel(ideal, demis::NoiseModel(a.p01, a.p10), a.seed,
                                      static_cast<std::size_t>(a.shots));
    std::ostringstream out;
    demis::write_shots(out, a.graph_id, shots);
    emit(out.str(), a.out);
    return 0;
}

int run_noise_calibrate(const std::string& ideal_str, const std::string& shots_file) {
    demis::Bitstring ideal = demis::Bitstring::from_string(ideal_str);
    auto records = load_shot_records(shots_file);
    std::vector<demis::Bitstring> bits;
    for (const auto& r : records) bits.push_back(r.bits);
    demis::CalibrationReport rep = demis::calibrate(ideal, bits);
    std::cout << demis::calibration_to_json(rep).dump(2) << "\n";
    return 0;
}

struct DemRunArgs {
    std::string graph_file, shots_file, out;
    int k = 0;
    std::optional<std::uint64_t> budget;
};

int run_dem_run(const DemRunArgs& a) {
    demis::Graph g = demis::load_graph(a.graph_file);
    auto records = load_shot_records(a.shots_file);
    if (records.empty()) throw demis::ValidationError("dem run: shots file is empty");
    const std::uint64_t budget = a.budget ? *a.budget : demis::default_dem_budget(g.n());
    std::ostringstream lines;
    bool any_yes = false, any_truncated = false;
    std::vector<double> ops;
    std::int64_t success_shot = -1;
    for (const auto& rec : records) {
        demis::DemResult r = demis::bf_dem(g, a.k, rec.bits, budget);
        ordered_json j;
        j["shot"] = rec.shot;
        j["decision"] = r.yes ? "YES" : "NO";
        j["ops"] = r.ops;
        j["hd_explored"] = r.max_distance_reached;
        lines << j.dump() << "\n";
        ops.push_back(static_cast<double>(r.ops));
        if (r.budget_truncated) any_truncated = true;
        if (r.yes && !any_yes) {
            any_yes = true;
            success_shot = rec.shot;
        }
    }
    ordered_json agg;
    agg["aggregate"] = ordered_json{{"decision", any_yes ? "YES" : "NO"},
                                    {"shots", records.size()},
                                    {"median_ops", demis::median(ops)},
                                    {"mean_ops", demis::mean(ops)},
                                    {"first_success_shot", success_shot},
                                    {"budget", budget},
                                    {"budget_exhausted", any_truncated}};
    lines << agg.dump() << "\n";
    emit(lines.str(), a.out);
    return (!any_yes && any_truncated) ? kExitBudget : 0;
}

int run_dem_tarjan(const std::string& graph_file, double p) {
    demis::Graph g = demis::load_graph(graph_file);
    demis::TarjanDemResult r = demis::tarjan_dem(g, p);
    ordered_json j;
    j["size"] = r.size;
    j["K"] = r.budget_k;
    j["node_count"] = r.node_count;
    j["depth_rule"] = "include-only";
    std::cout << j.dump() << "\n";
    return 0;
}

int run_analyze_volume(long n, double p, long cap) {
    demis::CostModel m = demis::search_volume(n, p, cap);
    ordered_json j;
    j["n"] = m.n;
    j["p"] = m.p;
    j["radius_ceil"] = m.radius_ceil;
    j["radius_floor"] = m.radius_floor;
    if (m.exact_available) j["t_exact"] = m.t_exact.str();
    j["log2_t_exact"] = m.log2_t_exact;
    if (!std::isnan(m.log2_t_asymptotic)) j["log2_t_asymptotic"] = m.log2_t_asymptotic;
    j["log2_identity"] = m.log2_identity;
    if (p > 0.0) j["log2_m_eff"] = demis::effective_search_space(n, p);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_analyze_fit(const std::string& points_file, double p) {
    std::ifstream in(points_file);
    if (!in) throw demis::ValidationError("cannot open points file: " + points_file);
    std::vector<std::pair<double, double>> points;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.rfind("n,", 0) == 0) continue;  // header or blank
        std::istringstream ls(line);
        double n = 0, cost = 0;
        char comma = 0;
        if (!(ls >> n >> comma >> cost) || comma != ',')
            throw demis::ValidationError("points file line " + std::to_string(line_no) +
                                         ": expected 'n,cost'");
        points.emplace_back(n, cost);
    }
    demis::ExponentFit fit = demis::fit_exponent_base(points, p);
    ordered_json j;
    j["p"] = fit.p;
    j["c_emp"] = fit.c_emp();
    j["ln_c_emp"] = fit.ln_c_emp;
    j["intercept"] = fit.intercept;
    j["stderr"] = fit.stderr_slope;
    j["points"] = fit.points;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_analyze_breakeven(double p_eff, double budget) {
    demis::BreakevenReport r = demis::breakeven_size(p_eff, budget);
    ordered_json j;
    j["p_eff"] = r.p_eff;
    j["budget_ops"] = r.budget_ops;
    j["interpretations"] = ordered_json::object();
    j["interpretations"]["ratio"] = ordered_json{
        {"reading", "smallest N with log2 T(N,0.5) - log2 T(N,p_eff) >= log2 budget"},
        {"n", r.n_ratio}};
    j["interpretations"]["literal_difference"] = ordered_json{
        {"reading", "smallest N with T(N,0.5) - T(N,p_eff) >= budget"},
        {"n", r.n_literal ? ordered_json(*r.n_literal) : ordered_json(nullptr)}};
    std::cout << j.dump(2) << "\n";
    return 0;
}

int run_campaign_run(const std::string& config_file, const std::string& out_dir) {
    demis::Campaign c = demis::parse_campaign(demis::read_text_file(config_file));
    const std::string base_dir = fs::path(config_file).parent_path().string();
    demis::CampaignOutput out = demis::run_campaign(c, base_dir);
    fs::create_directories(out_dir);
    fs::create_directories(fs::path(out_dir) / "graphs");

    std::ostringstream rows;
    for (const auto& r : out.rows) rows << demis::row_to_json(r).dump() << "\n";
    demis::write_text_file((fs::path(out_dir) / "rows.jsonl").string(), rows.str());

    for (const auto& inst : out.instances)
        demis::write_text_file((fs::path(out_dir) / "graphs" / (inst.graph_id + ".json")).string(),
                               demis::serialize_graph(inst.graph));

    ordered_json summary;
    summary["campaign_id"] = c.id;
    summary["rows"] = out.rows.size();
    summary["instances"] = out.instances.size();
    auto tables = ordered_json::array();
    const bool has_bf = c.mode != demis::CampaignMode::tarjan_dem;
    const bool has_tarjan = c.mode != demis::CampaignMode::bf_dem;
    if (has_bf) {
        demis::write_text_file((fs::path(out_dir) / "scaling.csv").string(),
                               demis::emit_table(out.rows, demis::TableKind::scaling));
        demis::write_text_file((fs::path(out_dir) / "rate_sweep.csv").string(),
                               demis::emit_table(out.rows, demis::TableKind::rate_sweep));
        tables.push_back("scaling.csv");
        tables.push_back("rate_sweep.csv");
    }
    if (has_tarjan) {
        // the exponent fit needs >= 3 distinct sizes; skip the table otherwise
        try {
            demis::write_text_file((fs::path(out_dir) / "exponent.csv").string(),
                                   demis::emit_table(out.rows, demis::TableKind::exponent));
            tables.push_back("exponent.csv");
        } catch (const demis::ValidationError&) {
        }
    }
    summary["tables"] = tables;
    demis::write_text_file((fs::path(out_dir) / "metadata.json").string(),
                           out.metadata.dump(2) + "\n");
    demis::write_text_file((fs::path(out_dir) / "summary.json").string(), summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    return 0;
}

struct IngestArgs {
    std::string register_file, graph_file, shots_file, out_dir, graph_id = "ingest";
};

int run_ingest(const IngestArgs& a) {
    if (a.register_file.empty() == a.graph_file.empty())
        throw demis::ValidationError("ingest: provide exactly one of --register or --graph");
    demis::Graph g = a.graph_file.empty()
                         ? demis::unit_disk_graph(demis::load_register(a.register_file))
                         : demis::load_graph(a.graph_file);
    auto records = load_shot_records(a.shots_file);
    demis::IngestResult res = demis::ingest_measurements(std::move(g), records, a.graph_id);
    ordered_json report;
    report["metadata"] = res.metadata;
    report["calibration"] = demis::calibration_to_json(res.calibration);
    if (!a.out_dir.empty()) {
        fs::create_directories(a.out_dir);
        std::ostringstream shots;
        for (const auto& rec : res.shots) {
            ordered_json j;
            j["graph_id"] = rec.graph_id;
            j["shot"] = rec.shot;
            j["bits"] = rec.bits.to_string();
            shots << j.dump() << "\n";
        }
        demis::write_text_file((fs::path(a.out_dir) / "normalized_shots.jsonl").string(),
                               shots.str());
        demis::write_text_file((fs::path(a.out_dir) / "calibration.json").string(),
                               report.dump(2) + "\n");
        demis::write_text_file((fs::path(a.out_dir) / "graph.json").string(),
                               demis::serialize_graph(res.graph));
    }
    std::cout << report.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic error mitigation for k-independent-set instances"};
    app.require_subcommand(1);

    // graph gen
    auto* graph = app.add_subcommand("graph", "graph construction");
    graph->require_subcommand(1);
    GraphGenArgs gen_args;
    auto* gen = graph->add_subcommand("gen", "generate a graph document");
    gen->add_option("--family", gen_args.family, "square|kings");
    gen->add_option("--rows", gen_args.rows, "lattice rows");
    gen->add_option("--cols", gen_args.cols, "lattice cols");
    gen->add_option("--register", gen_args.register_file, "register document (unit-disk graph)");
    gen->add_flag("--embed16", gen_args.embed16, "embed the 4x4 block into the target grid");
    gen->add_option("--placement-seed", gen_args.placement_seed, "embedding anchor seed");
    gen->add_option("-o,--out", gen_args.out, "output file (default stdout)");

    // mis solve
    auto* mis = app.add_subcommand("mis", "exact solvers");
    mis->require_subcommand(1);
    auto* solve = mis->add_subcommand("solve", "solve for the maximum independent set");
    std::string mis_graph, mis_method = "tarjan";
    int mis_cap = 24;
    solve->add_option("--graph", mis_graph, "graph document")->required();
    solve->add_option("--method", mis_method, "brute|tarjan (default tarjan)");
    solve->add_option("--cap", mis_cap, "brute-force size cap (default 24)");

    // noise emulate | calibrate
    auto* noise = app.add_subcommand("noise", "bit-flip channel emulation and calibration");
    noise->require_subcommand(1);
    EmulateArgs em;
    auto* emulate = noise->add_subcommand("emulate", "sample noisy shots around an ideal word");
    emulate->add_option("--graph", em.graph_file, "graph document")->required();
    emulate->add_option("--ideal", em.ideal, "ideal bitstring")->required();
    emulate->add_option("--p01", em.p01, "P(1|0)")->required();
    emulate->add_option("--p10", em.p10, "P(0|1)")->required();
    emulate->add_option("--shots", em.shots, "number of shots")->required();
    emulate->add_option("--seed", em.seed, "channel seed")->required();
    emulate->add_option("--graph-id", em.graph_id, "graph id for the shot records");
    emulate->add_option("-o,--out", em.out, "output file (default stdout)");
    std::string cal_ideal, cal_shots;
    auto* calibrate_cmd = noise->add_subcommand("calibrate", "estimate rates from shots");
    calibrate_cmd->add_option("--ideal", cal_ideal, "ideal bitstring")->required();
    calibrate_cmd->add_option("--shots", cal_shots, "shots document")->required();

    // dem run | tarjan
    auto* dem = app.add_subcommand("dem", "deterministic error mitigation");
    dem->require_subcommand(1);
    DemRunArgs dr;
    std::uint64_t dem_budget = 0;
    auto* dem_run = dem->add_subcommand("run", "BF-DEM over a shots document");
    dem_run->add_option("--graph", dr.graph_file, "graph document")->required();
    dem_run->add_option("--k", dr.k, "target independent-set size")->required();
    dem_run->add_option("--shots", dr.shots_file, "shots document")->required();
    auto* budget_opt = dem_run->add_option("--budget", dem_budget, "candidate-evaluation cap");
    dem_run->add_option("-o,--out", dr.out, "output file (default stdout)");
    std::string tg_graph;
    double tg_p = 0.5;
    auto* dem_tarjan = dem->add_subcommand("tarjan", "entropy-pruned branch-and-reduce");
    dem_tarjan->add_option("--graph", tg_graph, "graph document")->required();
    dem_tarjan->add_option("--p", tg_p, "effective bit-flip rate in (0, 0.5]")->required();

    // analyze volume | fit | breakeven
    auto* analyze = app.add_subcommand("analyze", "cost-model analytics");
    analyze->require_subcommand(1);
    long av_n = 0, av_cap = 10000;
    double av_p = 0.0;
    auto* volume = analyze->add_subcommand("volume", "cumulative-binomial search volume");
    volume->add_option("--n", av_n, "system size")->required();
    volume->add_option("--p", av_p, "error rate in [0, 0.5]")->required();
    volume->add_option("--cap", av_cap, "exact-summation cap (default 10000)");
    std::string fit_points;
    double fit_p = 0.0;
    auto* fit = analyze->add_subcommand("fit", "exponent-base fit of cost vs n");
    fit->add_option("--points", fit_points, "CSV file with 'n,cost' rows")->required();
    fit->add_option("--p", fit_p, "rate label for the fit")->required();
    double be_p = 0.0, be_budget = 1e10;
    auto* breakeven = analyze->add_subcommand("breakeven", "budget breakeven system size");
    breakeven->add_option("--p-eff", be_p, "effective rate in (0, 0.5)")->required();
    breakeven->add_option("--budget", be_budget, "operation budget (default 1e10)");

    // campaign run
    auto* campaign = app.add_subcommand("campaign", "seeded batch execution");
    campaign->require_subcommand(1);
    std::string camp_config, camp_out;
    auto* camp_run = campaign->add_subcommand("run", "run a campaign config");
    camp_run->add_option("--config", camp_config, "campaign config document")->required();
    camp_run->add_option("--out", camp_out, "output directory")->required();

    // ingest
    IngestArgs ia;
    auto* ingest = app.add_subcommand("ingest", "normalize and calibrate measured shots");
    ingest->add_option("--register", ia.register_file, "register document");
    ingest->add_option("--graph", ia.graph_file, "graph document");
    ingest->add_option("--shots", ia.shots_file, "shots document")->required();
    ingest->add_option("--out", ia.out_dir, "output directory");
    ingest->add_option("--graph-id", ia.graph_id, "id for normalized records");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (gen->parsed()) return run_graph_gen(gen_args);
        if (solve->parsed()) return run_mis_solve(mis_graph, mis_method, mis_cap);
        if (emulate->parsed()) return run_noise_emulate(em);
        if (calibrate_cmd->parsed()) return run_noise_calibrate(cal_ideal, cal_shots);
        if (dem_run->parsed()) {
            if (budget_opt->count() > 0) dr.budget = dem_budget;
            return run_dem_run(dr);
        }
        if (dem_tarjan->parsed()) return run_dem_tarjan(tg_graph, tg_p);
        if (volume->parsed()) return run_analyze_volume(av_n, av_p, av_cap);
        if (fit->parsed()) return run_analyze_fit(fit_points, fit_p);
        if (breakeven->parsed()) return run_analyze_breakeven(be_p, be_budget);
        if (camp_run->parsed()) return run_campaign_run(camp_config, camp_out);
        if (ingest->parsed()) return run_ingest(ia);
    } catch (const demis::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
