#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "demis/analytics.hpp"
#include "demis/dem.hpp"
#include "demis/graph.hpp"
#include "demis/mis.hpp"
#include "demis/noise.hpp"

using namespace demis;

namespace {
Graph square3() { return build_lattice({LatticeFamily::square, 3, 3, std::nullopt}); }
}  // namespace

TEST_CASE("bf_dem repairs the Fig. 1 defective shot within the distance-2 shell") {
    Graph g = square3();
    auto z = Bitstring::from_string("101001101");
    DemResult r = bf_dem(g, 5, z, 512);
    REQUIRE(r.yes);
    REQUIRE(r.output.to_string() == "101010101");
    REQUIRE(r.ops <= 46);
    REQUIRE(r.ops == 25);  // 1 + 9 + colex position of the {4,5} flip pair
    REQUIRE(r.max_distance_reached == 2);
    REQUIRE_FALSE(r.budget_truncated);
}

TEST_CASE("a valid measured shot terminates at ops = 1") {
    Graph g = square3();
    auto z = Bitstring::from_string("101010101");
    DemResult r = bf_dem(g, 5, z, 512);
    REQUIRE(r.yes);
    REQUIRE(r.ops == 1);
    REQUIRE(r.output == z);
    REQUIRE(r.max_distance_reached == 0);
}

TEST_CASE("k above the MIS size scans the full space and answers NO") {
    Graph g = square3();
    auto z = Bitstring::from_string("101001101");
    DemResult r = bf_dem(g, 6, z, 512);
    REQUIRE_FALSE(r.yes);
    REQUIRE(r.ops == 512);
    REQUIRE_FALSE(r.budget_truncated);  // space exhausted, definitive NO
    REQUIRE(r.max_distance_reached == 9);
    // no independent candidate outweighs the weight-5 shot, so w stays z
    REQUIRE(r.output == z);

    // a low-weight defective shot does pick up the best improvement over z
    auto weak = Bitstring::from_string("110000000");
    DemResult r2 = bf_dem(g, 6, weak, 512);
    REQUIRE_FALSE(r2.yes);
    REQUIRE(is_independent_set(g, r2.output));
    REQUIRE(r2.output.to_string() == "101010101");  // the unique weight-5 set
}

TEST_CASE("budget truncation is flagged") {
    Graph g = square3();
    auto z = Bitstring::from_string("101001101");
    DemResult r = bf_dem(g, 6, z, 10);
    REQUIRE_FALSE(r.yes);
    REQUIRE(r.ops == 10);
    REQUIRE(r.budget_truncated);
    REQUIRE_THROWS_AS(bf_dem(g, 6, z, 0), ValidationError);
    REQUIRE_THROWS_AS(bf_dem(g, -1, z, 10), ValidationError);
    REQUIRE_THROWS_AS(bf_dem(g, 5, Bitstring::from_string("1010"), 10), ValidationError);
}

TEST_CASE("bf_dem soundness on random shots") {
    std::mt19937_64 rng(99);
    for (LatticeFamily fam : {LatticeFamily::square, LatticeFamily::kings}) {
        Graph g = build_lattice({fam, 3, 4, std::nullopt});
        const int alpha = brute_force_mis(g).size;
        for (int trial = 0; trial < 40; ++trial) {
            Bitstring z = Bitstring::zeros(static_cast<std::size_t>(g.n()));
            for (int i = 0; i < g.n(); ++i) z.set(static_cast<std::size_t>(i), rng() & 1);
            const int k = static_cast<int>(rng() % static_cast<std::uint64_t>(alpha + 2));
            DemResult r = bf_dem(g, k, z, default_dem_budget(g.n()));
            if (r.yes) {
                REQUIRE(is_independent_set(g, r.output));
                REQUIRE(static_cast<int>(r.output.weight()) >= k);
            }
        }
    }
}

TEST_CASE("bf_dem at full budget decides exactly like the oracle") {
    std::mt19937_64 rng(7);
    for (int n : {6, 9, 12, 14}) {
        Graph g = build_lattice({LatticeFamily::square, 3, n / 3, std::nullopt});
        REQUIRE(g.n() == 3 * (n / 3));
        const int alpha = brute_force_mis(g).size;
        for (int k = std::max(0, alpha - 1); k <= alpha + 1; ++k) {
            for (int trial = 0; trial < 8; ++trial) {
                Bitstring z = Bitstring::zeros(static_cast<std::size_t>(g.n()));
                for (int i = 0; i < g.n(); ++i) z.set(static_cast<std::size_t>(i), rng() & 1);
                DemResult r = bf_dem(g, k, z, std::uint64_t{1} << g.n());
                REQUIRE(r.yes == (alpha >= k));
            }
        }
    }
}

TEST_CASE("ops concentrate near the analytic volume") {
    Graph g = square3();
    MisResult mis = tarjan_mis(g);
    const double p = 0.3;
    auto shots = apply_channel(mis.witness, NoiseModel::symmetric_rate(p), 31337, 200);
    std::vector<double> ops;
    for (const auto& z : shots)
        ops.push_back(static_cast<double>(bf_dem(g, mis.size, z, 512).ops));
    const double med = median(ops);
    const double theory = search_volume(9, p).t_exact.convert_to<double>();
    REQUIRE(med <= 10.0 * theory);
    REQUIRE(med >= theory / 10.0);
}

TEST_CASE("decide_k_is stops at the first YES") {
    Graph g = square3();
    MisResult mis = tarjan_mis(g);
    std::vector<Bitstring> shots(5, mis.witness);
    DecideReport rep = decide_k_is(g, mis.size, shots, 512);
    REQUIRE(rep.yes);
    REQUIRE(rep.successful_shot == 0);
    REQUIRE(rep.per_shot_ops.size() == 1);
    REQUIRE(rep.median_ops == 1.0);
    REQUIRE(rep.mean_ops == 1.0);
}

TEST_CASE("decide_k_is above threshold exhausts every shot") {
    Graph g = build_lattice({LatticeFamily::square, 3, 4, std::nullopt});
    MisResult mis = tarjan_mis(g);
    auto shots = apply_channel(mis.witness, NoiseModel::symmetric_rate(0.2), 5, 4);
    DecideReport rep = decide_k_is(g, mis.size + 1, shots, std::uint64_t{1} << g.n());
    REQUIRE_FALSE(rep.yes);
    REQUIRE(rep.per_shot_ops.size() == 4);
    for (auto ops : rep.per_shot_ops) REQUIRE(ops == (std::uint64_t{1} << g.n()));
    REQUIRE_FALSE(rep.successful_shot.has_value());
    REQUIRE_THROWS_AS(decide_k_is(g, 1, {}, 16), ValidationError);
}

TEST_CASE("tarjan_dem with p = 0.5 is the exact solver") {
    for (LatticeFamily fam : {LatticeFamily::square, LatticeFamily::kings}) {
        Graph g = build_lattice({fam, 3, 3, std::nullopt});
        MisResult exact = tarjan_mis(g);
        TarjanDemResult dem = tarjan_dem(g, 0.5);
        REQUIRE(dem.budget_k == g.n());
        REQUIRE(dem.size == exact.size);
        REQUIRE(dem.node_count == exact.node_count);
        REQUIRE(is_independent_set(g, dem.chosen));
    }
    Graph sq3 = square3();
    REQUIRE(tarjan_dem(sq3, 0.5).size == 5);
    REQUIRE_THROWS_AS(tarjan_dem(sq3, 0.0), ValidationError);
    REQUIRE_THROWS_AS(tarjan_dem(sq3, 0.6), ValidationError);
}

TEST_CASE("entropy budget at K = MIS size cannot bind; below it, it prunes") {
    Graph g = build_lattice({LatticeFamily::square, 4, 4, std::nullopt});
    MisResult exact = tarjan_mis(g);
    REQUIRE(exact.size == 8);

    // p = 0.1: K = ceil(16 * 0.4690) = 8 = MIS size. Any path's inclusions form
    // an independent set, so depth never exceeds 8 and the size survives; the
    // node count equals the unpruned one (the budget cannot bind at K >= MIS).
    TarjanDemResult d1 = tarjan_dem(g, 0.1);
    REQUIRE(d1.budget_k == 8);
    REQUIRE(d1.size == 8);
    REQUIRE(d1.node_count <= exact.node_count);

    // p = 0.05: K = ceil(16 * 0.2864) = 5 < 8; faithful underestimate, and the
    // pruning now strictly reduces the explored tree.
    TarjanDemResult d2 = tarjan_dem(g, 0.05);
    REQUIRE(d2.budget_k == 5);
    REQUIRE(d2.size == 5);
    REQUIRE(d2.node_count < exact.node_count);
}

TEST_CASE("tarjan_dem never exceeds the exact size and is deterministic") {
    std::mt19937_64 rng(404);
    Graph g = build_lattice({LatticeFamily::kings, 3, 4, std::nullopt});
    MisResult exact = tarjan_mis(g);
    for (double p : {0.05, 0.1, 0.2, 0.35, 0.5}) {
        TarjanDemResult a = tarjan_dem(g, p);
        TarjanDemResult b = tarjan_dem(g, p);
        REQUIRE(a.size <= exact.size);
        REQUIRE(a.size == b.size);
        REQUIRE(a.node_count == b.node_count);
    }
}

TEST_CASE("bf_dem determinism") {
    Graph g = square3();
    auto z = Bitstring::from_string("110001101");
    DemResult a = bf_dem(g, 5, z, 512);
    DemResult b = bf_dem(g, 5, z, 512);
    REQUIRE(a.ops == b.ops);
    REQUIRE(a.yes == b.yes);
    REQUIRE(a.output == b.output);
}
