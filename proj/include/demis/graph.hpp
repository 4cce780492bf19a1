#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "demis/bitstring.hpp"
#include "demis/rng.hpp"

namespace demis {

/// Undirected graph on n vertices. Immutable after construction; edges are
/// stored normalized (u < v, sorted, unique) and adjacency is precomputed as
/// per-vertex bit masks for fast independence checks.
class Graph {
  public:
    Graph() = default;

    static Graph from_edges(int n, std::vector<std::pair<int, int>> edges,
                            std::vector<std::string> labels = {}) {
        if (n < 0) throw ValidationError("graph: vertex count must be >= 0");
        if (!labels.empty() && static_cast<int>(labels.size()) != n)
            throw ValidationError("graph: labels size must equal n");
        for (auto& [u, v] : edges) {
            if (u == v) throw ValidationError("graph: self-loop at vertex " + std::to_string(u));
            if (u < 0 || v < 0 || u >= n || v >= n)
                throw ValidationError("graph: edge (" + std::to_string(u) + "," +
                                      std::to_string(v) + ") out of range for n=" +
                                      std::to_string(n));
            if (u > v) std::swap(u, v);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        Graph g;
        g.n_ = n;
        g.edges_ = std::move(edges);
        g.labels_ = std::move(labels);
        g.masks_.assign(static_cast<std::size_t>(n), Bitstring::zeros(static_cast<std::size_t>(n)));
        for (auto [u, v] : g.edges_) {
            g.masks_[static_cast<std::size_t>(u)].set(static_cast<std::size_t>(v), true);
            g.masks_[static_cast<std::size_t>(v)].set(static_cast<std::size_t>(u), true);
        }
        return g;
    }

    int n() const { return n_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<std::string>& labels() const { return labels_; }

    bool adjacent(int u, int v) const {
        return masks_[static_cast<std::size_t>(u)].get(static_cast<std::size_t>(v));
    }

    /// Bit mask of the neighbors of v.
    const Bitstring& neighbor_mask(int v) const { return masks_[static_cast<std::size_t>(v)]; }

    int degree(int v) const {
        return static_cast<int>(masks_[static_cast<std::size_t>(v)].weight());
    }

    std::vector<int> neighbors(int v) const {
        std::vector<int> out;
        masks_[static_cast<std::size_t>(v)].for_each_set_bit(
            [&](std::size_t u) { out.push_back(static_cast<int>(u)); });
        return out;
    }

    bool operator==(const Graph& o) const {
        return n_ == o.n_ && edges_ == o.edges_ && labels_ == o.labels_;
    }

  private:
    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::string> labels_;
    std::vector<Bitstring> masks_;
};

/// True iff no edge has both endpoints set in x.
inline bool is_independent_set(const Graph& g, const Bitstring& x) {
    if (static_cast<int>(x.size()) != g.n())
        throw ValidationError("is_independent_set: bitstring length " + std::to_string(x.size()) +
                              " != graph order " + std::to_string(g.n()));
    for (int v = 0; v < g.n(); ++v) {
        if (x.get(static_cast<std::size_t>(v)) && g.neighbor_mask(v).intersects(x)) return false;
    }
    return true;
}

enum class LatticeFamily { square, kings };

inline std::string to_string(LatticeFamily f) {
    return f == LatticeFamily::square ? "square" : "kings";
}

inline LatticeFamily lattice_family_from_string(const std::string& s) {
    if (s == "square") return LatticeFamily::square;
    if (s == "kings") return LatticeFamily::kings;
    throw ValidationError("unknown lattice family '" + s + "' (expected square|kings)");
}

/// Lattice description: rows x cols cell grid, optionally restricted to a
/// subset of active cells (row, col) for filling-fraction embeddings.
struct LatticeSpec {
    LatticeFamily family = LatticeFamily::square;
    int rows = 1;
    int cols = 1;
    std::optional<std::vector<std::pair<int, int>>> active_sites;

    void validate() const {
        if (rows < 1 || cols < 1) throw ValidationError("lattice: rows and cols must be >= 1");
        if (active_sites) {
            if (active_sites->empty()) throw ValidationError("lattice: active_sites is empty");
            std::set<std::pair<int, int>> seen;
            for (auto [r, c] : *active_sites) {
                if (r < 0 || r >= rows || c < 0 || c >= cols)
                    throw ValidationError("lattice: active site (" + std::to_string(r) + "," +
                                          std::to_string(c) + ") outside the grid");
                if (!seen.insert({r, c}).second)
                    throw ValidationError("lattice: duplicate active site (" + std::to_string(r) +
                                          "," + std::to_string(c) + ")");
            }
        }
    }

    /// Active cells in row-major order (all cells when no subset is given).
    std::vector<std::pair<int, int>> cells() const {
        std::vector<std::pair<int, int>> out;
        if (active_sites) {
            out = *active_sites;
            std::sort(out.begin(), out.end());
        } else {
            out.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c) out.emplace_back(r, c);
        }
        return out;
    }

    double filling_fraction() const {
        double cells_total = static_cast<double>(rows) * static_cast<double>(cols);
        double active = active_sites ? static_cast<double>(active_sites->size()) : cells_total;
        return active / cells_total;
    }
};

/// Vertices are the active cells in row-major order; edges connect cells at
/// grid distance 1 (square) or additionally diagonal neighbors (kings).
inline Graph build_lattice(const LatticeSpec& spec) {
    spec.validate();
    auto cells = spec.cells();
    const int n = static_cast<int>(cells.size());
    std::vector<std::pair<int, int>> edges;
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(n));
    for (auto [r, c] : cells) labels.push_back(std::to_string(r) + "," + std::to_string(c));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            int dr = cells[static_cast<std::size_t>(j)].first - cells[static_cast<std::size_t>(i)].first;
            int dc = cells[static_cast<std::size_t>(j)].second - cells[static_cast<std::size_t>(i)].second;
            if (dr < 0) dr = -dr;
            if (dc < 0) dc = -dc;
            bool adj = spec.family == LatticeFamily::square ? (dr + dc == 1)
                                                            : (dr <= 1 && dc <= 1 && dr + dc > 0);
            if (adj) edges.emplace_back(i, j);
        }
    }
    return Graph::from_edges(n, std::move(edges), std::move(labels));
}

/// 2D atom register: coordinates in micrometers plus the blockade radius.
struct Register {
    std::vector<std::array<double, 2>> positions_um;
    double blockade_radius_um = 0.0;

    void validate() const {
        if (blockade_radius_um <= 0.0) throw ValidationError("register: blockade radius must be > 0");
        for (std::size_t i = 0; i < positions_um.size(); ++i)
            for (std::size_t j = i + 1; j < positions_um.size(); ++j)
                if (positions_um[i] == positions_um[j])
                    throw ValidationError("register: duplicate coordinates at positions " +
                                          std::to_string(i) + " and " + std::to_string(j));
    }
};

/// Edge (u,v) iff squared Euclidean distance <= Rb^2 (boundary inclusive).
/// Vertex order follows the position list.
inline Graph unit_disk_graph(const Register& reg) {
    reg.validate();
    const int n = static_cast<int>(reg.positions_um.size());
    const double r2 = reg.blockade_radius_um * reg.blockade_radius_um;
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double dx = reg.positions_um[static_cast<std::size_t>(i)][0] -
                        reg.positions_um[static_cast<std::size_t>(j)][0];
            double dy = reg.positions_um[static_cast<std::size_t>(i)][1] -
                        reg.positions_um[static_cast<std::size_t>(j)][1];
            if (dx * dx + dy * dy <= r2) edges.emplace_back(i, j);
        }
    }
    return Graph::from_edges(n, std::move(edges));
}

/// Regular grid register with the given spacing, row-major positions.
inline Register grid_register(int rows, int cols, double spacing_um, double blockade_radius_um) {
    Register reg;
    reg.blockade_radius_um = blockade_radius_um;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            reg.positions_um.push_back({static_cast<double>(c) * spacing_um,
                                        static_cast<double>(r) * spacing_um});
    return reg;
}

/// Places the fixed 16-vertex base pattern (the full 4x4 block of the target's
/// lattice family) as a contiguous block whose anchor cell is chosen uniformly
/// by placement_seed. The base graph must match the 4x4 block of that family.
inline LatticeSpec embed_filling_fraction(const Graph& base, const LatticeSpec& target,
                                          std::uint64_t placement_seed) {
    target.validate();
    if (target.active_sites)
        throw ValidationError("embed: target spec must not already restrict active sites");
    if (static_cast<std::int64_t>(target.rows) * target.cols < 16)
        throw ValidationError("embed: target grid has fewer than 16 cells");
    LatticeSpec block{target.family, 4, 4, std::nullopt};
    Graph block_graph = build_lattice(block);
    if (base.n() != 16 || base.edges() != block_graph.edges())
        throw ValidationError(
            "embed: infeasible placement; base graph is not the 4x4 " + to_string(target.family) +
            " block");
    if (target.rows < 4 || target.cols < 4)
        throw ValidationError("embed: infeasible placement; grid cannot hold a 4x4 block");
    const std::uint64_t anchors =
        static_cast<std::uint64_t>(target.rows - 3) * static_cast<std::uint64_t>(target.cols - 3);
    const std::uint64_t pick = keyed_uniform_index(placement_seed, 0, 0, anchors);
    const int r0 = static_cast<int>(pick / static_cast<std::uint64_t>(target.cols - 3));
    const int c0 = static_cast<int>(pick % static_cast<std::uint64_t>(target.cols - 3));
    LatticeSpec out = target;
    std::vector<std::pair<int, int>> active;
    active.reserve(16);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) active.emplace_back(r0 + r, c0 + c);
    out.active_sites = std::move(active);
    return out;
}

}  // namespace demis
