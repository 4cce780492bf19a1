#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "demis/bitstring.hpp"
#include "demis/graph.hpp"

namespace demis {

struct MisResult {
    int size = 0;
    Bitstring witness;
    std::uint64_t node_count = 0;  // recursive invocations (branch-and-reduce) or subsets examined (brute force)
};

/// Called at every branch node with the chosen pivot and the residual state.
/// degree[v] and present[v] are valid for the duration of the call only.
using PivotObserver = std::function<void(int pivot, const std::vector<int>& degree,
                                         const std::vector<std::uint8_t>& present)>;

namespace detail {

// Vertex set for solver witnesses; the exact solver is capped at 128 vertices.
struct VertexSet128 {
    std::array<std::uint64_t, 2> w{0, 0};
    void set(int v) { w[static_cast<std::size_t>(v >> 6)] |= std::uint64_t{1} << (v & 63); }
    void merge(const VertexSet128& o) {
        w[0] |= o.w[0];
        w[1] |= o.w[1];
    }
};

// Branch-and-reduce MIS search with an include-depth budget K. Reductions:
// degree-0 vertex inclusion and connected-component decomposition; branching
// follows the max-degree rule with lowest-index tie break, and depth counts
// inclusions only. The residual graph supports O(degree) deletion with an
// explicit undo stack.
class BranchAndReduceSolver {
  public:
    BranchAndReduceSolver(const Graph& g, int budget, PivotObserver observer)
        : n_(g.n()), budget_(budget), observer_(std::move(observer)) {
        if (n_ > 128)
            throw ValidationError("branch-and-reduce solver supports at most 128 vertices, got " +
                                  std::to_string(n_));
        adj_.resize(static_cast<std::size_t>(n_));
        for (int v = 0; v < n_; ++v) adj_[static_cast<std::size_t>(v)] = g.neighbors(v);
        present_.assign(static_cast<std::size_t>(n_), 1);
        degree_.resize(static_cast<std::size_t>(n_));
        for (int v = 0; v < n_; ++v)
            degree_[static_cast<std::size_t>(v)] = static_cast<int>(adj_[static_cast<std::size_t>(v)].size());
        live_ = n_;
    }

    MisResult run() {
        VertexSet128 chosen;
        int size = solve(0, chosen);
        MisResult res;
        res.size = size;
        res.node_count = node_count_;
        res.witness = Bitstring::zeros(static_cast<std::size_t>(n_));
        for (int v = 0; v < n_; ++v)
            if ((chosen.w[static_cast<std::size_t>(v >> 6)] >> (v & 63)) & 1)
                res.witness.set(static_cast<std::size_t>(v), true);
        return res;
    }

  private:
    void remove_vertex(int v) {
        present_[static_cast<std::size_t>(v)] = 0;
        --live_;
        for (int u : adj_[static_cast<std::size_t>(v)])
            if (present_[static_cast<std::size_t>(u)]) --degree_[static_cast<std::size_t>(u)];
        undo_.push_back(v);
    }

    void restore_to(std::size_t mark) {
        while (undo_.size() > mark) {
            int v = undo_.back();
            undo_.pop_back();
            present_[static_cast<std::size_t>(v)] = 1;
            ++live_;
            for (int u : adj_[static_cast<std::size_t>(v)])
                if (present_[static_cast<std::size_t>(u)]) ++degree_[static_cast<std::size_t>(u)];
        }
    }

    std::vector<std::vector<int>> components() const {
        std::vector<std::vector<int>> comps;
        std::vector<std::uint8_t> seen(static_cast<std::size_t>(n_), 0);
        std::vector<int> stack;
        for (int s = 0; s < n_; ++s) {
            if (!present_[static_cast<std::size_t>(s)] || seen[static_cast<std::size_t>(s)]) continue;
            comps.emplace_back();
            stack.push_back(s);
            seen[static_cast<std::size_t>(s)] = 1;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                comps.back().push_back(v);
                for (int u : adj_[static_cast<std::size_t>(v)]) {
                    if (present_[static_cast<std::size_t>(u)] && !seen[static_cast<std::size_t>(u)]) {
                        seen[static_cast<std::size_t>(u)] = 1;
                        stack.push_back(u);
                    }
                }
            }
        }
        return comps;
    }

    // depth = inclusions committed along the current path.
    int solve(int depth, VertexSet128& chosen) {
        ++node_count_;
        chosen = VertexSet128{};
        if (live_ == 0 || depth >= budget_) return 0;

        const std::size_t mark = undo_.size();
        int acc = 0;
        VertexSet128 acc_set;

        // degree-0 inclusion, lowest index first
        while (depth + acc < budget_) {
            int z = -1;
            for (int v = 0; v < n_; ++v) {
                if (present_[static_cast<std::size_t>(v)] && degree_[static_cast<std::size_t>(v)] == 0) {
                    z = v;
                    break;
                }
            }
            if (z < 0) break;
            remove_vertex(z);
            ++acc;
            acc_set.set(z);
        }
        if (live_ == 0 || depth + acc >= budget_) {
            chosen = acc_set;
            restore_to(mark);
            return acc;
        }

        auto comps = components();
        if (comps.size() > 1) {
            int total = acc;
            VertexSet128 total_set = acc_set;
            for (const auto& comp : comps) {
                const std::size_t mark2 = undo_.size();
                // confine the sub-solve to this component
                std::vector<std::uint8_t> keep(static_cast<std::size_t>(n_), 0);
                for (int v : comp) keep[static_cast<std::size_t>(v)] = 1;
                for (int v = 0; v < n_; ++v)
                    if (present_[static_cast<std::size_t>(v)] && !keep[static_cast<std::size_t>(v)])
                        remove_vertex(v);
                VertexSet128 comp_set;
                total += solve(depth + total, comp_set);
                total_set.merge(comp_set);
                restore_to(mark2);
            }
            chosen = total_set;
            restore_to(mark);
            return total;
        }

        // max-degree pivot, lowest index tie break
        int pivot = -1, best_degree = -1;
        for (int v = 0; v < n_; ++v) {
            if (present_[static_cast<std::size_t>(v)] && degree_[static_cast<std::size_t>(v)] > best_degree) {
                best_degree = degree_[static_cast<std::size_t>(v)];
                pivot = v;
            }
        }
        if (observer_) observer_(pivot, degree_, present_);

        // include branch
        std::size_t mark2 = undo_.size();
        for (int u : adj_[static_cast<std::size_t>(pivot)])
            if (present_[static_cast<std::size_t>(u)]) remove_vertex(u);
        remove_vertex(pivot);
        VertexSet128 in_set;
        int s_in = 1 + solve(depth + acc + 1, in_set);
        in_set.set(pivot);
        restore_to(mark2);

        // exclude branch
        remove_vertex(pivot);
        VertexSet128 out_set;
        int s_out = solve(depth + acc, out_set);
        restore_to(mark2);

        restore_to(mark);
        if (s_in >= s_out) {
            acc_set.merge(in_set);
            chosen = acc_set;
            return acc + s_in;
        }
        acc_set.merge(out_set);
        chosen = acc_set;
        return acc + s_out;
    }

    int n_;
    int budget_;
    PivotObserver observer_;
    std::vector<std::vector<int>> adj_;
    std::vector<std::uint8_t> present_;
    std::vector<int> degree_;
    std::vector<int> undo_;
    int live_ = 0;
    std::uint64_t node_count_ = 0;
};

inline void verify_witness(const Graph& g, const MisResult& r, const char* what) {
    if (static_cast<int>(r.witness.weight()) != r.size || !is_independent_set(g, r.witness))
        throw std::logic_error(std::string(what) + ": witness verification failed");
}

}  // namespace detail

/// Exact maximum by enumerating all 2^n subsets; ties broken by the
/// lexicographically smallest witness string. node_count = subsets examined.
inline MisResult brute_force_mis(const Graph& g, int cap = 24) {
    const int n = g.n();
    if (n > cap)
        throw ValidationError("brute_force_mis: n=" + std::to_string(n) + " exceeds cap " +
                              std::to_string(cap));
    std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
    for (auto [u, v] : g.edges()) {
        adj[static_cast<std::size_t>(u)] |= std::uint32_t{1} << v;
        adj[static_cast<std::size_t>(v)] |= std::uint32_t{1} << u;
    }
    const std::uint64_t total = std::uint64_t{1} << n;
    int best_size = -1;
    std::uint32_t best_mask = 0;
    for (std::uint64_t m = 0; m < total; ++m) {
        auto mask = static_cast<std::uint32_t>(m);
        bool ok = true;
        for (std::uint32_t rest = mask; rest;) {
            int v = std::countr_zero(rest);
            if (adj[static_cast<std::size_t>(v)] & mask) {
                ok = false;
                break;
            }
            rest &= rest - 1;
        }
        if (!ok) continue;
        int size = std::popcount(mask);
        if (size > best_size) {
            best_size = size;
            best_mask = mask;
        } else if (size == best_size && size >= 0) {
            // lex-smaller string: 0 at the first differing index
            std::uint32_t diff = mask ^ best_mask;
            if (diff && !((mask >> std::countr_zero(diff)) & 1)) best_mask = mask;
        }
    }
    MisResult res;
    res.size = best_size;
    res.node_count = total;
    res.witness = Bitstring::zeros(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        if ((best_mask >> v) & 1) res.witness.set(static_cast<std::size_t>(v), true);
    detail::verify_witness(g, res, "brute_force_mis");
    return res;
}

/// Branch-and-reduce search with an include-depth budget: the returned size is
/// the largest independent set of cardinality <= budget (so min(MIS, budget)),
/// and node_count counts every invocation of the recursive solve, leaves
/// included. With budget >= n the result is the exact MIS.
inline MisResult budgeted_mis(const Graph& g, int budget, PivotObserver observer = nullptr) {
    detail::BranchAndReduceSolver solver(g, budget, std::move(observer));
    MisResult res = solver.run();
    detail::verify_witness(g, res, "budgeted_mis");
    return res;
}

/// Exact MIS via branch-and-reduce (Tarjan-style max-degree branching).
inline MisResult tarjan_mis(const Graph& g, PivotObserver observer = nullptr) {
    return budgeted_mis(g, g.n(), std::move(observer));
}

}  // namespace demis
