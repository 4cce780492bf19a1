#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "demis/analytics.hpp"
#include "demis/dem.hpp"
#include "demis/graph.hpp"
#include "demis/graph_io.hpp"
#include "demis/mis.hpp"
#include "demis/noise.hpp"
#include "demis/stats.hpp"

namespace demis {

enum class CampaignMode { bf_dem, tarjan_dem, both };

inline std::string to_string(CampaignMode m) {
    switch (m) {
        case CampaignMode::bf_dem: return "bf_dem";
        case CampaignMode::tarjan_dem: return "tarjan_dem";
        default: return "both";
    }
}

struct CampaignGraphRef {
    enum class Kind { lattice, graph_file, register_file, embed16 };
    Kind kind = Kind::lattice;
    std::string id;           // optional explicit id
    LatticeSpec lattice;      // lattice / embed16 target
    std::string path;         // graph_file / register_file
};

struct KRule {
    bool mis_size = true;
    int explicit_k = 0;
};

struct Campaign {
    std::string id;
    std::vector<CampaignGraphRef> graphs;
    std::vector<NoiseModel> noise_points;
    int shots_per_instance = 1;
    int instances_per_point = 1;
    std::uint64_t seed = 0;
    CampaignMode mode = CampaignMode::bf_dem;
    KRule k_rule;
    std::optional<std::uint64_t> budget;
};

struct ResultRow {
    std::string campaign_id;
    std::string graph_id;
    int n = 0;
    double p01 = 0.0;
    double p10 = 0.0;
    double p_eff = 0.0;
    int k = 0;
    std::int64_t shot = -1;  // -1 for tarjan_dem rows
    std::string method;      // bf_dem | tarjan_dem
    std::string decision;    // YES | NO
    std::uint64_t cost = 0;  // ops (bf_dem) or node_count (tarjan_dem)
    std::uint64_t wall_time_ns = 0;
    int distance_explored = 0;  // bf_dem: deepest shell evaluated; tarjan_dem: budget K
    std::string output;
};

namespace detail {

inline void require_known_fields(const nlohmann::json& j,
                                 const std::vector<std::string>& allowed, const std::string& ctx) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const auto& a : allowed)
            if (it.key() == a) known = true;
        if (!known)
            throw ValidationError("campaign config: unknown field '" + it.key() + "' in " + ctx);
    }
}

}  // namespace detail

inline Campaign campaign_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("campaign config: expected a JSON object");
    detail::require_known_fields(
        j,
        {"schema_version", "id", "graphs", "noise", "shots_per_instance", "instances_per_point",
         "seed", "mode", "k_rule", "budget"},
        "top level");
    if (!j.contains("schema_version") || j["schema_version"] != 1)
        throw ValidationError("campaign config: schema_version must be 1");
    Campaign c;
    c.id = j.at("id").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.shots_per_instance = j.at("shots_per_instance").get<int>();
    if (c.shots_per_instance < 1)
        throw ValidationError("campaign config: shots_per_instance must be >= 1");
    if (j.contains("instances_per_point")) {
        c.instances_per_point = j["instances_per_point"].get<int>();
        if (c.instances_per_point < 1)
            throw ValidationError("campaign config: instances_per_point must be >= 1");
    }
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "bf_dem")
        c.mode = CampaignMode::bf_dem;
    else if (mode == "tarjan_dem")
        c.mode = CampaignMode::tarjan_dem;
    else if (mode == "both")
        c.mode = CampaignMode::both;
    else
        throw ValidationError("campaign config: mode must be bf_dem|tarjan_dem|both");
    // k_rule: "mis_size" or {"explicit": k}
    const auto& kr = j.at("k_rule");
    if (kr.is_string() && kr == "mis_size") {
        c.k_rule.mis_size = true;
    } else if (kr.is_object() && kr.contains("explicit")) {
        detail::require_known_fields(kr, {"explicit"}, "k_rule");
        c.k_rule.mis_size = false;
        c.k_rule.explicit_k = kr["explicit"].get<int>();
        if (c.k_rule.explicit_k < 0)
            throw ValidationError("campaign config: explicit k must be >= 0");
    } else {
        throw ValidationError("campaign config: k_rule must be \"mis_size\" or {\"explicit\": k}");
    }
    if (j.contains("budget")) c.budget = j["budget"].get<std::uint64_t>();

    // noise: {"p":x} | {"p01":x,"p10":y} | {"p_grid":[...]} | {"pairs":[[a,b],...]}
    const auto& nj = j.at("noise");
    detail::require_known_fields(nj, {"p", "p01", "p10", "p_grid", "pairs"}, "noise");
    if (nj.contains("p")) {
        c.noise_points.push_back(NoiseModel::symmetric_rate(nj["p"].get<double>()));
    } else if (nj.contains("p01") || nj.contains("p10")) {
        c.noise_points.emplace_back(nj.at("p01").get<double>(), nj.at("p10").get<double>());
    } else if (nj.contains("p_grid")) {
        for (const auto& p : nj["p_grid"])
            c.noise_points.push_back(NoiseModel::symmetric_rate(p.get<double>()));
    } else if (nj.contains("pairs")) {
        for (const auto& pr : nj["pairs"]) {
            if (!pr.is_array() || pr.size() != 2)
                throw ValidationError("campaign config: noise pairs must be [p01, p10]");
            c.noise_points.emplace_back(pr[0].get<double>(), pr[1].get<double>());
        }
    } else {
        throw ValidationError("campaign config: noise must specify p, p01/p10, p_grid or pairs");
    }
    if (c.noise_points.empty()) throw ValidationError("campaign config: empty noise grid");

    for (const auto& gj : j.at("graphs")) {
        detail::require_known_fields(gj, {"id", "lattice", "graph_file", "register_file", "embed16"},
                                     "graphs entry");
        CampaignGraphRef ref;
        if (gj.contains("id")) ref.id = gj["id"].get<std::string>();
        auto parse_lattice = [](const nlohmann::json& lj) {
            detail::require_known_fields(lj, {"family", "rows", "cols", "active_sites"}, "lattice");
            LatticeSpec spec;
            spec.family = lattice_family_from_string(lj.at("family").get<std::string>());
            spec.rows = lj.at("rows").get<int>();
            spec.cols = lj.at("cols").get<int>();
            if (lj.contains("active_sites")) {
                std::vector<std::pair<int, int>> sites;
                for (const auto& s : lj["active_sites"]) sites.emplace_back(s[0].get<int>(), s[1].get<int>());
                spec.active_sites = std::move(sites);
            }
            spec.validate();
            return spec;
        };
        if (gj.contains("lattice")) {
            ref.kind = CampaignGraphRef::Kind::lattice;
            ref.lattice = parse_lattice(gj["lattice"]);
        } else if (gj.contains("graph_file")) {
            ref.kind = CampaignGraphRef::Kind::graph_file;
            ref.path = gj["graph_file"].get<std::string>();
        } else if (gj.contains("register_file")) {
            ref.kind = CampaignGraphRef::Kind::register_file;
            ref.path = gj["register_file"].get<std::string>();
        } else if (gj.contains("embed16")) {
            ref.kind = CampaignGraphRef::Kind::embed16;
            ref.lattice = parse_lattice(gj["embed16"]);
            if (ref.lattice.active_sites)
                throw ValidationError("campaign config: embed16 target must not list active_sites");
        } else {
            throw ValidationError(
                "campaign config: graphs entry needs lattice, graph_file, register_file or embed16");
        }
        c.graphs.push_back(std::move(ref));
    }
    if (c.graphs.empty()) throw ValidationError("campaign config: empty graphs list");
    return c;
}

inline Campaign parse_campaign(const std::string& text) {
    return campaign_from_json(detail::parse_document(text, "campaign config"));
}

struct ResolvedInstance {
    std::string graph_id;
    Graph graph;
    double filling_fraction = 1.0;
    std::string family;
};

namespace detail {

inline std::string auto_graph_id(const CampaignGraphRef& ref, int instance, int instances) {
    std::string base;
    switch (ref.kind) {
        case CampaignGraphRef::Kind::lattice:
            base = to_string(ref.lattice.family) + "_" + std::to_string(ref.lattice.rows) + "x" +
                   std::to_string(ref.lattice.cols);
            if (ref.lattice.active_sites) base += "_sub" + std::to_string(ref.lattice.active_sites->size());
            break;
        case CampaignGraphRef::Kind::embed16:
            base = to_string(ref.lattice.family) + "_" + std::to_string(ref.lattice.rows) + "x" +
                   std::to_string(ref.lattice.cols) + "_embed16";
            break;
        default: {
            // strip directories from the file path
            base = ref.path;
            auto cut = base.find_last_of("/\\");
            if (cut != std::string::npos) base = base.substr(cut + 1);
        }
    }
    if (!ref.id.empty()) base = ref.id;
    if (instances > 1) base += "_r" + std::to_string(instance);
    return base;
}

inline std::string join_path(const std::string& dir, const std::string& file) {
    if (file.empty() || file.front() == '/' || dir.empty()) return file;
    return dir.back() == '/' ? dir + file : dir + "/" + file;
}

}  // namespace detail

inline ResolvedInstance resolve_instance(const Campaign& c, std::size_t entry_index, int instance,
                                         const std::string& base_dir) {
    const auto& ref = c.graphs[entry_index];
    ResolvedInstance out;
    out.graph_id = detail::auto_graph_id(ref, instance, c.instances_per_point);
    switch (ref.kind) {
        case CampaignGraphRef::Kind::lattice:
            out.graph = build_lattice(ref.lattice);
            out.filling_fraction = ref.lattice.filling_fraction();
            out.family = to_string(ref.lattice.family);
            break;
        case CampaignGraphRef::Kind::embed16: {
            Graph base = build_lattice(LatticeSpec{ref.lattice.family, 4, 4, std::nullopt});
            const std::uint64_t placement_seed =
                hash_key(c.seed ^ 0xE3BEDu, entry_index, static_cast<std::uint64_t>(instance));
            LatticeSpec placed = embed_filling_fraction(base, ref.lattice, placement_seed);
            out.graph = build_lattice(placed);
            out.filling_fraction = placed.filling_fraction();
            out.family = to_string(ref.lattice.family);
            break;
        }
        case CampaignGraphRef::Kind::graph_file:
            out.graph = load_graph(detail::join_path(base_dir, ref.path));
            out.family = "file";
            break;
        case CampaignGraphRef::Kind::register_file:
            out.graph = unit_disk_graph(load_register(detail::join_path(base_dir, ref.path)));
            out.family = "register";
            break;
    }
    if (out.graph.n() < 1)
        throw ValidationError("campaign: instance '" + out.graph_id + "' resolved to an empty graph");
    return out;
}

struct CampaignOutput {
    std::vector<ResultRow> rows;
    std::vector<ResolvedInstance> instances;
    nlohmann::ordered_json metadata;
};

/// Executes the campaign: per instance, solve for the MIS witness, derive k,
/// sample the channel (keyed per shot, scheduling-independent) and run the
/// selected DEM mode. Row order is (entry, instance, noise point, shot).
inline CampaignOutput run_campaign(const Campaign& c, const std::string& base_dir = "") {
    CampaignOutput out;
    nlohmann::ordered_json meta_graphs = nlohmann::ordered_json::array();
    for (std::size_t e = 0; e < c.graphs.size(); ++e) {
        for (int inst = 0; inst < c.instances_per_point; ++inst) {
            ResolvedInstance ri = resolve_instance(c, e, inst, base_dir);
            const Graph& g = ri.graph;
            MisResult mis = tarjan_mis(g);
            const int k = c.k_rule.mis_size ? mis.size : c.k_rule.explicit_k;
            const double f1 = static_cast<double>(mis.witness.weight()) / g.n();
            const double f0 = 1.0 - f1;
            const std::uint64_t budget = c.budget ? *c.budget : default_dem_budget(g.n());
            nlohmann::ordered_json mg;
            mg["graph_id"] = ri.graph_id;
            mg["n"] = g.n();
            mg["mis_size"] = mis.size;
            mg["k"] = k;
            mg["f1"] = f1;
            mg["filling_fraction"] = ri.filling_fraction;
            mg["family"] = ri.family;
            meta_graphs.push_back(mg);

            for (std::size_t np = 0; np < c.noise_points.size(); ++np) {
                const NoiseModel& model = c.noise_points[np];
                const double p_eff = effective_rate(model.p01, model.p10, f0, f1);
                const std::uint64_t stream =
                    hash_key(c.seed, e * 1000003ULL + static_cast<std::uint64_t>(inst), np);

                if (c.mode == CampaignMode::bf_dem || c.mode == CampaignMode::both) {
                    auto shots = apply_channel(mis.witness, model, stream,
                                               static_cast<std::size_t>(c.shots_per_instance));
                    for (std::size_t s = 0; s < shots.size(); ++s) {
                        const auto t0 = std::chrono::steady_clock::now();
                        DemResult r = bf_dem(g, k, shots[s], budget);
                        const auto t1 = std::chrono::steady_clock::now();
                        ResultRow row;
                        row.campaign_id = c.id;
                        row.graph_id = ri.graph_id;
                        row.n = g.n();
                        row.p01 = model.p01;
                        row.p10 = model.p10;
                        row.p_eff = p_eff;
                        row.k = k;
                        row.shot = static_cast<std::int64_t>(s);
                        row.method = "bf_dem";
                        row.decision = r.yes ? "YES" : "NO";
                        row.cost = r.ops;
                        row.wall_time_ns = static_cast<std::uint64_t>(
                            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
                        row.distance_explored = r.max_distance_reached;
                        row.output = r.output.to_string();
                        out.rows.push_back(std::move(row));
                    }
                }
                if (c.mode == CampaignMode::tarjan_dem || c.mode == CampaignMode::both) {
                    const auto t0 = std::chrono::steady_clock::now();
                    TarjanDemResult r = tarjan_dem(g, p_eff);
                    const auto t1 = std::chrono::steady_clock::now();
                    ResultRow row;
                    row.campaign_id = c.id;
                    row.graph_id = ri.graph_id;
                    row.n = g.n();
                    row.p01 = model.p01;
                    row.p10 = model.p10;
                    row.p_eff = p_eff;
                    row.k = k;
                    row.shot = -1;
                    row.method = "tarjan_dem";
                    row.decision = r.size >= k ? "YES" : "NO";
                    row.cost = r.node_count;
                    row.wall_time_ns = static_cast<std::uint64_t>(
                        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
                    row.distance_explored = r.budget_k;
                    row.output = r.chosen.to_string();
                    out.rows.push_back(std::move(row));
                }
            }
            out.instances.push_back(std::move(ri));
        }
    }
    out.metadata["campaign_id"] = c.id;
    out.metadata["schema_version"] = 1;
    out.metadata["seed"] = c.seed;
    out.metadata["mode"] = to_string(c.mode);
    out.metadata["k_rule"] = c.k_rule.mis_size ? nlohmann::ordered_json("mis_size")
                                               : nlohmann::ordered_json{{"explicit", c.k_rule.explicit_k}};
    out.metadata["shots_per_instance"] = c.shots_per_instance;
    out.metadata["instances_per_point"] = c.instances_per_point;
    out.metadata["placement"] = "contiguous-block";
    out.metadata["depth_rule"] = "include-only";
    out.metadata["graphs"] = std::move(meta_graphs);
    return out;
}

inline nlohmann::ordered_json row_to_json(const ResultRow& r) {
    nlohmann::ordered_json j;
    j["campaign_id"] = r.campaign_id;
    j["graph_id"] = r.graph_id;
    j["n"] = r.n;
    j["p01"] = r.p01;
    j["p10"] = r.p10;
    j["p_eff"] = r.p_eff;
    j["k"] = r.k;
    j["shot"] = r.shot;
    j["method"] = r.method;
    j["decision"] = r.decision;
    j["cost"] = r.cost;
    j["wall_time_ns"] = r.wall_time_ns;
    j["distance_explored"] = r.distance_explored;
    j["output"] = r.output;
    return j;
}

inline ResultRow row_from_json(const nlohmann::json& j) {
    ResultRow r;
    r.campaign_id = j.at("campaign_id").get<std::string>();
    r.graph_id = j.at("graph_id").get<std::string>();
    r.n = j.at("n").get<int>();
    r.p01 = j.at("p01").get<double>();
    r.p10 = j.at("p10").get<double>();
    r.p_eff = j.at("p_eff").get<double>();
    r.k = j.at("k").get<int>();
    r.shot = j.at("shot").get<std::int64_t>();
    r.method = j.at("method").get<std::string>();
    r.decision = j.at("decision").get<std::string>();
    r.cost = j.at("cost").get<std::uint64_t>();
    r.wall_time_ns = j.at("wall_time_ns").get<std::uint64_t>();
    r.distance_explored = j.at("distance_explored").get<int>();
    r.output = j.at("output").get<std::string>();
    return r;
}

enum class TableKind { scaling, rate_sweep, exponent };

namespace detail {

inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

inline double theory_volume(int n, double p_eff) {
    if (p_eff <= 0.0) return 1.0;
    return std::exp2(search_volume(n, p_eff).log2_t_exact);
}

}  // namespace detail

/// Plot-ready delimited tables (CSV with a header row, deterministic order).
///   scaling:    p01,p10,p_eff,n,median_ops,iqr,theory_ops
///   rate_sweep: graph_id,n,p,median_ops,theory_ops
///   exponent:   p,c_emp,stderr,c_bf,c_th
inline std::string emit_table(const std::vector<ResultRow>& rows, TableKind kind) {
    if (rows.empty()) throw ValidationError("emit_table: no rows");
    std::string outstr;
    auto want_method = kind == TableKind::exponent ? std::string("tarjan_dem") : std::string("bf_dem");
    std::vector<const ResultRow*> sel;
    for (const auto& r : rows)
        if (r.method == want_method) sel.push_back(&r);
    if (sel.empty())
        throw ValidationError("emit_table: no rows for the requested table kind");

    if (kind == TableKind::scaling) {
        std::map<std::tuple<double, double, int>, std::vector<double>> groups;
        std::map<std::tuple<double, double, int>, double> peff_of;
        for (const auto* r : sel) {
            auto key = std::make_tuple(r->p01, r->p10, r->n);
            groups[key].push_back(static_cast<double>(r->cost));
            peff_of[key] = r->p_eff;
        }
        outstr = "p01,p10,p_eff,n,median_ops,iqr,theory_ops\n";
        for (auto& [key, costs] : groups) {
            auto [p01, p10, n] = key;
            std::sort(costs.begin(), costs.end());
            const double med = quantile_sorted(costs, 0.5);
            const double iqr = quantile_sorted(costs, 0.75) - quantile_sorted(costs, 0.25);
            outstr += detail::fmt_double(p01) + std::string(",") + detail::fmt_double(p10) + "," +
                      detail::fmt_double(peff_of[key]) + "," + std::to_string(n) + "," +
                      detail::fmt_double(med) + "," + detail::fmt_double(iqr) + "," +
                      detail::fmt_double(detail::theory_volume(n, peff_of[key])) + "\n";
        }
        return outstr;
    }
    if (kind == TableKind::rate_sweep) {
        std::map<std::pair<std::string, double>, std::vector<double>> groups;
        std::map<std::pair<std::string, double>, int> n_of;
        for (const auto* r : sel) {
            auto key = std::make_pair(r->graph_id, r->p_eff);
            groups[key].push_back(static_cast<double>(r->cost));
            n_of[key] = r->n;
        }
        outstr = "graph_id,n,p,median_ops,theory_ops\n";
        for (auto& [key, costs] : groups) {
            const auto& [gid, p] = key;
            std::sort(costs.begin(), costs.end());
            outstr += gid + "," + std::to_string(n_of[key]) + "," + detail::fmt_double(p) + "," +
                      detail::fmt_double(quantile_sorted(costs, 0.5)) + "," +
                      detail::fmt_double(detail::theory_volume(n_of[key], p)) + "\n";
        }
        return outstr;
    }
    // exponent: fit ln(cost) vs n per noise point
    std::map<double, std::map<int, std::vector<double>>> by_p;
    for (const auto* r : sel) by_p[r->p_eff][r->n].push_back(static_cast<double>(r->cost));
    outstr = "p,c_emp,stderr,c_bf,c_th\n";
    for (auto& [p, by_n] : by_p) {
        std::vector<std::pair<double, double>> points;
        for (auto& [n, costs] : by_n)
            points.emplace_back(static_cast<double>(n), median(costs));
        ExponentFit fit = fit_exponent_base(points, p);
        const double c_emp = fit.c_emp();
        const double c_bf = std::exp2(binary_entropy(p));
        const double c_th = pruned_base(p, std::exp2(1.0 / 3.0));
        outstr += detail::fmt_double(p) + "," + detail::fmt_double(c_emp) + "," +
                  detail::fmt_double(fit.stderr_slope) + "," + detail::fmt_double(c_bf) + "," +
                  detail::fmt_double(c_th) + "\n";
    }
    return outstr;
}

}  // namespace demis
