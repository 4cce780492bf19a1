#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "demis/analytics.hpp"
#include "demis/bitstring.hpp"
#include "demis/graph.hpp"
#include "demis/mis.hpp"
#include "demis/pattern.hpp"
#include "demis/stats.hpp"

namespace demis {

struct DemResult {
    bool yes = false;
    Bitstring output;                // YES: the accepting candidate; NO: best improvement over z (or z)
    std::uint64_t ops = 0;           // candidate evaluations executed
    int max_distance_reached = 0;    // weight of the last pattern evaluated
    bool budget_truncated = false;   // NO because the budget ran out before the space was scanned
};

/// Default candidate budget: min(2^n, 1e9).
inline std::uint64_t default_dem_budget(int n) {
    constexpr std::uint64_t cap = 1000000000ULL;
    if (n >= 63) return cap;
    return std::min(std::uint64_t{1} << n, cap);
}

namespace detail {
inline bool independent_fast(const Graph& g, const Bitstring& cand) {
    const auto& words = cand.words();
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
        std::uint64_t x = words[wi];
        while (x) {
            const int v = static_cast<int>((wi << 6) + static_cast<std::size_t>(std::countr_zero(x)));
            if (g.neighbor_mask(v).intersects(cand)) return false;
            x &= x - 1;
        }
    }
    return true;
}
}  // namespace detail

/// Brute-force DEM: enumerate error patterns around z in nondecreasing Hamming
/// weight (colex within each shell) and evaluate candidates w' = z xor e.
/// Decision YES as soon as a candidate is independent with weight >= k; the
/// returned bitstring on NO is the best independent improvement over z
/// (first found among equal weights), or z itself when none exists.
inline DemResult bf_dem(const Graph& g, int k, const Bitstring& z, std::uint64_t budget) {
    const int n = g.n();
    if (n < 1) throw ValidationError("bf_dem: graph must have at least one vertex");
    if (static_cast<int>(z.size()) != n)
        throw ValidationError("bf_dem: shot length " + std::to_string(z.size()) +
                              " != graph order " + std::to_string(n));
    if (k < 0) throw ValidationError("bf_dem: k must be >= 0");
    if (budget < 1) throw ValidationError("bf_dem: budget must be >= 1");

    DemResult res;
    res.output = z;
    std::size_t best_weight = z.weight();
    ErrorPatternCursor cursor(n);
    Bitstring cand = z;
    while (true) {
        // materialize candidate = z xor pattern
        cand = z;
        for (int pos : cursor.positions()) cand.flip(static_cast<std::size_t>(pos));
        ++res.ops;
        res.max_distance_reached = cursor.weight();
        const std::size_t wt = cand.weight();
        if ((static_cast<int>(wt) >= k || wt > best_weight) && detail::independent_fast(g, cand)) {
            if (static_cast<int>(wt) >= k) {
                res.yes = true;
                res.output = cand;
                return res;
            }
            if (wt > best_weight) {
                best_weight = wt;
                res.output = cand;
            }
        }
        if (res.ops >= budget) {
            res.budget_truncated = cursor.advance();  // anything left unscanned?
            return res;
        }
        if (!cursor.advance()) return res;  // full space scanned
    }
}

struct DecideReport {
    bool yes = false;
    std::optional<std::size_t> successful_shot;
    std::vector<std::uint64_t> per_shot_ops;
    std::vector<DemResult> results;
    double median_ops = 0.0;
    double mean_ops = 0.0;
};

/// Runs bf_dem shot by shot, stopping at the first YES.
inline DecideReport decide_k_is(const Graph& g, int k, const std::vector<Bitstring>& shots,
                                std::uint64_t budget) {
    if (shots.empty()) throw ValidationError("decide_k_is: need at least one shot");
    DecideReport rep;
    for (std::size_t s = 0; s < shots.size(); ++s) {
        DemResult r = bf_dem(g, k, shots[s], budget);
        rep.per_shot_ops.push_back(r.ops);
        rep.results.push_back(std::move(r));
        if (rep.results.back().yes) {
            rep.yes = true;
            rep.successful_shot = s;
            break;
        }
    }
    std::vector<double> ops(rep.per_shot_ops.begin(), rep.per_shot_ops.end());
    rep.median_ops = median(ops);
    rep.mean_ops = mean(ops);
    return rep;
}

struct TarjanDemResult {
    int size = 0;
    int budget_k = 0;
    std::uint64_t node_count = 0;
    Bitstring chosen;
};

/// Entropy-pruned branch-and-reduce: include-depth budget K = ceil(n*H2(p)).
/// For K below the true MIS size the returned value is a faithful
/// underestimate (min(MIS, K)); p = 0.5 gives K = n and the exact MIS.
inline TarjanDemResult tarjan_dem(const Graph& g, double p) {
    if (!(p > 0.0 && p <= 0.5)) throw ValidationError("tarjan_dem: p must be in (0, 0.5]");
    const int n = g.n();
    const int budget = static_cast<int>(ceil_np(n, binary_entropy(p)));
    MisResult r = budgeted_mis(g, budget);
    TarjanDemResult out;
    out.size = r.size;
    out.budget_k = budget;
    out.node_count = r.node_count;
    out.chosen = std::move(r.witness);
    return out;
}

}  // namespace demis
