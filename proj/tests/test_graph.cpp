#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "demis/graph.hpp"
#include "demis/graph_io.hpp"

using namespace demis;

namespace {

// Oracle: edge count by direct pair enumeration over cell coordinates.
std::size_t count_lattice_edges(const LatticeSpec& spec) {
    auto cells = spec.cells();
    std::size_t count = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (std::size_t j = i + 1; j < cells.size(); ++j) {
            int dr = std::abs(cells[i].first - cells[j].first);
            int dc = std::abs(cells[i].second - cells[j].second);
            bool adj = spec.family == LatticeFamily::square ? dr + dc == 1
                                                            : dr <= 1 && dc <= 1;
            if (adj) ++count;
        }
    }
    return count;
}

}  // namespace

TEST_CASE("square 3x3 lattice") {
    Graph g = build_lattice({LatticeFamily::square, 3, 3, std::nullopt});
    REQUIRE(g.n() == 9);
    REQUIRE(g.edges().size() == 12);  // 2*L*(L-1)
    REQUIRE(g.adjacent(0, 1));
    REQUIRE(g.adjacent(1, 0));
    REQUIRE_FALSE(g.adjacent(0, 4));  // no diagonals
}

TEST_CASE("kings 3x3 lattice has 20 edges") {
    LatticeSpec spec{LatticeFamily::kings, 3, 3, std::nullopt};
    Graph g = build_lattice(spec);
    REQUIRE(g.n() == 9);
    REQUIRE(g.edges().size() == count_lattice_edges(spec));
    REQUIRE(g.edges().size() == 20);
    REQUIRE(g.adjacent(0, 4));  // diagonal
}

TEST_CASE("lattice edge-count formulas for L <= 6") {
    for (int L = 1; L <= 6; ++L) {
        Graph sq = build_lattice({LatticeFamily::square, L, L, std::nullopt});
        REQUIRE(sq.edges().size() == static_cast<std::size_t>(2 * L * (L - 1)));
        Graph kg = build_lattice({LatticeFamily::kings, L, L, std::nullopt});
        REQUIRE(kg.edges().size() == count_lattice_edges({LatticeFamily::kings, L, L, std::nullopt}));
        if (L >= 2)
            REQUIRE(kg.edges().size() == static_cast<std::size_t>(4 * L * L - 6 * L + 2));
    }
}

TEST_CASE("full active_sites subset equals the plain lattice") {
    std::vector<std::pair<int, int>> all;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) all.emplace_back(r, c);
    Graph a = build_lattice({LatticeFamily::square, 4, 4, all});
    Graph b = build_lattice({LatticeFamily::square, 4, 4, std::nullopt});
    REQUIRE(a.n() == b.n());
    REQUIRE(a.edges() == b.edges());
}

TEST_CASE("lattice validation") {
    LatticeSpec empty{LatticeFamily::square, 3, 3, std::vector<std::pair<int, int>>{}};
    REQUIRE_THROWS_AS(build_lattice(empty), ValidationError);
    LatticeSpec dup{LatticeFamily::square, 3, 3,
                    std::vector<std::pair<int, int>>{{0, 0}, {0, 0}}};
    REQUIRE_THROWS_AS(build_lattice(dup), ValidationError);
    LatticeSpec outside{LatticeFamily::square, 3, 3, std::vector<std::pair<int, int>>{{3, 0}}};
    REQUIRE_THROWS_AS(build_lattice(outside), ValidationError);
}

TEST_CASE("unit-disk graph on the experimental grid equals the square lattice") {
    Register reg = grid_register(3, 3, 5.4, 7.2);
    Graph udg = unit_disk_graph(reg);
    Graph sq = build_lattice({LatticeFamily::square, 3, 3, std::nullopt});
    REQUIRE(udg.n() == 9);
    REQUIRE(udg.edges() == sq.edges());  // next-nearest at 5.4*sqrt(2) > 7.2
}

TEST_CASE("unit-disk boundary is inclusive") {
    Register reg;
    reg.blockade_radius_um = 7.2;
    reg.positions_um = {{0.0, 0.0}, {7.2, 0.0}};
    REQUIRE(unit_disk_graph(reg).edges().size() == 1);
    reg.positions_um = {{0.0, 0.0}};
    Graph single = unit_disk_graph(reg);
    REQUIRE(single.n() == 1);
    REQUIRE(single.edges().empty());
    reg.positions_um = {{0.0, 0.0}, {0.0, 0.0}};
    REQUIRE_THROWS_AS(unit_disk_graph(reg), ValidationError);
}

TEST_CASE("unit-disk radius windows reproduce square and kings lattices") {
    for (int L = 2; L <= 6; ++L) {
        Register reg = grid_register(L, L, 1.0, 1.2);  // 1 < r < sqrt(2)
        REQUIRE(unit_disk_graph(reg).edges() ==
                build_lattice({LatticeFamily::square, L, L, std::nullopt}).edges());
        reg.blockade_radius_um = 1.9;  // sqrt(2) < r < 2
        REQUIRE(unit_disk_graph(reg).edges() ==
                build_lattice({LatticeFamily::kings, L, L, std::nullopt}).edges());
    }
}

TEST_CASE("independence checks on the 3x3 lattice") {
    Graph g = build_lattice({LatticeFamily::square, 3, 3, std::nullopt});
    REQUIRE(is_independent_set(g, Bitstring::from_string("101010101")));
    REQUIRE_FALSE(is_independent_set(g, Bitstring::from_string("101001101")));
    REQUIRE(is_independent_set(g, Bitstring::from_string("000000000")));
    REQUIRE_THROWS_AS(is_independent_set(g, Bitstring::from_string("10")), ValidationError);
}

TEST_CASE("independence agrees with a double loop over vertex pairs") {
    Graph g = build_lattice({LatticeFamily::kings, 3, 4, std::nullopt});
    const int n = g.n();
    REQUIRE(n == 12);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        Bitstring x = Bitstring::zeros(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            if ((mask >> i) & 1) x.set(static_cast<std::size_t>(i), true);
        bool direct = true;
        for (int u = 0; u < n && direct; ++u)
            for (int v = u + 1; v < n && direct; ++v)
                if (x.get(static_cast<std::size_t>(u)) && x.get(static_cast<std::size_t>(v)) &&
                    g.adjacent(u, v))
                    direct = false;
        REQUIRE(is_independent_set(g, x) == direct);
    }
}

TEST_CASE("embedding the 4x4 block at varying filling fractions") {
    Graph base = build_lattice({LatticeFamily::square, 4, 4, std::nullopt});

    LatticeSpec identity = embed_filling_fraction(base, {LatticeFamily::square, 4, 4, std::nullopt}, 0);
    REQUIRE(identity.filling_fraction() == 1.0);
    REQUIRE(build_lattice(identity).edges() == base.edges());

    LatticeSpec quarter = embed_filling_fraction(base, {LatticeFamily::square, 8, 8, std::nullopt}, 3);
    REQUIRE(quarter.filling_fraction() == Catch::Approx(16.0 / 64.0));

    LatticeSpec ff44 = embed_filling_fraction(base, {LatticeFamily::square, 6, 6, std::nullopt}, 0);
    REQUIRE(ff44.filling_fraction() == Catch::Approx(16.0 / 36.0));
    // induced subgraph on the active cells is the base pattern
    Graph placed = build_lattice(ff44);
    REQUIRE(placed.n() == 16);
    REQUIRE(placed.edges() == base.edges());

    // determinism and seed dependence
    REQUIRE(embed_filling_fraction(base, {LatticeFamily::square, 8, 8, std::nullopt}, 3).active_sites ==
            quarter.active_sites);

    // kings family
    Graph kbase = build_lattice({LatticeFamily::kings, 4, 4, std::nullopt});
    LatticeSpec kf = embed_filling_fraction(kbase, {LatticeFamily::kings, 6, 6, std::nullopt}, 1);
    REQUIRE(build_lattice(kf).edges() == kbase.edges());

    // infeasible placements
    REQUIRE_THROWS_AS(embed_filling_fraction(base, {LatticeFamily::square, 3, 3, std::nullopt}, 0),
                      ValidationError);
    REQUIRE_THROWS_AS(embed_filling_fraction(base, {LatticeFamily::square, 2, 8, std::nullopt}, 0),
                      ValidationError);
    REQUIRE_THROWS_AS(embed_filling_fraction(base, {LatticeFamily::kings, 6, 6, std::nullopt}, 0),
                      ValidationError);  // family mismatch
}

TEST_CASE("graph document round trip") {
    Graph g = build_lattice({LatticeFamily::square, 3, 3, std::nullopt});
    Graph back = parse_graph(serialize_graph(g));
    REQUIRE(back == g);

    Graph single = parse_graph(R"({"n": 1, "edges": []})");
    REQUIRE(single.n() == 1);
    REQUIRE(single.edges().empty());

    REQUIRE_THROWS_AS(parse_graph(R"({"n": 2, "edges": [[0, 2]]})"), ValidationError);
    REQUIRE_THROWS_AS(parse_graph(R"({"n": 2, "edges": [[0, 0]]})"), ValidationError);
    REQUIRE_THROWS_WITH(parse_graph("{\"n\": 2,\n  \"edges\": [[0,"),
                        Catch::Matchers::ContainsSubstring("line"));
}

TEST_CASE("register document round trip") {
    Register reg = grid_register(2, 2, 5.4, 7.2);
    Register back = parse_register(register_to_json(reg).dump());
    REQUIRE(back.positions_um == reg.positions_um);
    REQUIRE(back.blockade_radius_um == reg.blockade_radius_um);
    REQUIRE_THROWS_AS(parse_register(R"({"positions_um": [[0,0]]})"), ValidationError);
}

TEST_CASE("graph construction validation") {
    REQUIRE_THROWS_AS(Graph::from_edges(2, {{0, 2}}), ValidationError);
    REQUIRE_THROWS_AS(Graph::from_edges(2, {{1, 1}}), ValidationError);
    Graph g = Graph::from_edges(3, {{2, 0}, {0, 2}, {0, 1}});  // normalized + deduplicated
    REQUIRE(g.edges() == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}});
    // adjacency symmetry
    for (int u = 0; u < 3; ++u)
        for (int v = 0; v < 3; ++v) REQUIRE(g.adjacent(u, v) == g.adjacent(v, u));
}
