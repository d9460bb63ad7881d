#include <doctest.h>

#include "helpers.hpp"

using namespace chainrec;
using namespace testutil;

TEST_CASE("chain transitivity basics") {
    SpaceModel two = line_space(2);
    Relation cyc(2, {{0, 1}, {1, 0}});
    CHECK(is_chain_transitive(two, cyc, 0.0));

    SpaceModel line = line_space(3);
    CHECK(!is_chain_transitive(line, line_relation(3), 0.0)); // not surjective

    SpaceModel s = two_cycles_space();
    Relation f = two_cycles_relation();
    CHECK(!is_chain_transitive(s, f, 0.5));
    CHECK(is_chain_transitive(s, f, 9.0));
}

TEST_CASE("component periods") {
    SpaceModel two = line_space(2);
    Relation cyc(2, {{0, 1}, {1, 0}});
    ChainStructure cs = chain_structure(two, cyc, 0.0);
    REQUIRE(cs.components.size() == 1);
    CHECK(component_period(cs, 0) == 2);

    // self-loop forces period 1
    Relation with_loop(2, {{0, 1}, {1, 0}, {0, 0}});
    ChainStructure csl = chain_structure(two, with_loop, 0.0);
    CHECK(component_period(csl, 0) == 1);

    // 3-cycle with a chord: gcd(3, 2) = 1
    SpaceModel three = line_space(3);
    Relation chord(3, {{0, 1}, {1, 2}, {2, 0}, {1, 0}});
    ChainStructure csc = chain_structure(three, chord, 0.0);
    REQUIRE(csc.components.size() == 1);
    CHECK(component_period(csc, 0) == 1);

    // 4-cycle: period 4 and exact residues
    SpaceModel four = line_space(4);
    Relation ring(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
    ChainStructure cs4 = chain_structure(four, ring, 0.0);
    CHECK(component_period(cs4, 0) == 4);
    CyclicFactor factor = cyclic_factor(cs4, 0, 0);
    CHECK(factor.k == 4);
    CHECK(factor.classes ==
          std::vector<std::pair<Index, Index>>{{0, 0}, {1, 1}, {2, 2}, {3, 3}});
}

TEST_CASE("cyclic factor normalization and morphism property") {
    SpaceModel two = line_space(2);
    Relation cyc(2, {{0, 1}, {1, 0}});
    ChainStructure cs = chain_structure(two, cyc, 0.0);
    CyclicFactor factor = cyclic_factor(cs, 0, 0);
    CHECK(factor.k == 2);
    CHECK(factor.base == 0);
    CHECK(factor.classes == std::vector<std::pair<Index, Index>>{{0, 0}, {1, 1}});

    // every step edge advances the residue by one
    std::mt19937 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const Index n = 3 + trial % 10;
        SpaceModel s = random_cloud(rng, n);
        Relation f = random_strongly_connected(rng, n, n);
        ChainStructure c = chain_structure(s, f, 0.0);
        REQUIRE(c.components.size() == 1);
        CyclicFactor fac = cyclic_factor(c, 0, c.components[0].front());
        std::vector<Index> residue(n);
        for (auto [p, r] : fac.classes) residue[p] = r;
        for (const auto& [a, b] : c.step.pairs)
            CHECK(residue[b] == (residue[a] + 1) % fac.k);
    }
}

TEST_CASE("mixing verdicts on the small models") {
    SpaceModel two = line_space(2);
    Relation cyc(2, {{0, 1}, {1, 0}});
    MixingResult res = is_chain_mixing(two, cyc, 0.0);
    CHECK(res.transitive);
    CHECK(!res.mixing);
    REQUIRE(res.witness.has_value());
    CHECK(res.witness->k == 2);

    Relation looped(2, {{0, 1}, {1, 0}, {0, 0}});
    MixingResult res2 = is_chain_mixing(two, looped, 0.0);
    CHECK(res2.mixing);
    CHECK(res2.period == 1);

    // mixing passes to the inverse relation
    MixingResult res3 = is_chain_mixing(two, inverse(looped), 0.0);
    CHECK(res3.mixing);
}

TEST_CASE("product transitivity oracle agrees with the period test") {
    SpaceModel two = line_space(2);
    Relation cyc(2, {{0, 1}, {1, 0}});
    CHECK(!product_transitivity_oracle(two, cyc, 0.0));
    Relation looped(2, {{0, 1}, {1, 0}, {0, 0}});
    CHECK(product_transitivity_oracle(two, looped, 0.0));
    CHECK(!product_transitivity_oracle(line_space(3), line_relation(3), 0.0));

    std::mt19937 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const Index n = 3 + trial % 10; // up to 12
        SpaceModel s = random_cloud(rng, n);
        Relation f = random_strongly_connected(rng, n, n / 2);
        MixingResult res = is_chain_mixing(s, f, 0.0);
        CHECK(res.mixing == product_transitivity_oracle(s, f, 0.0));
        if (res.mixing) {
            MixingResult inv = is_chain_mixing(s, inverse(f), 0.0);
            CHECK(inv.mixing);
        }
    }
}

TEST_CASE("budget guard on the product oracle") {
    std::mt19937 rng(7);
    SpaceModel s = random_cloud(rng, 10);
    Relation f = random_strongly_connected(rng, 10, 5);
    CHECK_THROWS_AS(product_transitivity_oracle(s, f, 0.0, 8), BudgetError);
}

TEST_CASE("iterate class decomposition for maps") {
    // 2-cycle: two singleton fibers, each trivially mixing under f^2
    SpaceModel two = line_space(2);
    Relation cyc(2, {{0, 1}, {1, 0}});
    IterateClassReport rep = iterate_class_mixing(two, cyc, 0.0);
    CHECK(rep.k == 2);
    REQUIRE(rep.fibers.size() == 2);
    CHECK(rep.fibers[0] == IndexSet{0});
    CHECK(rep.fibers[1] == IndexSet{1});
    CHECK(rep.fiber_mixing == std::vector<bool>{true, true});

    // 6-cycle: six fibers
    GridModel six = build_catalog_model("k-cycle", 6);
    IterateClassReport rep6 = iterate_class_mixing(six.space, six.relation, 0.0);
    CHECK(rep6.k == 6);
    CHECK(rep6.fibers.size() == 6);

    // a mixing map: nearest doubling on an odd cell count is a bijection
    GridModel doub = build_catalog_model("doubling-nearest", 127);
    IterateClassReport repd =
        iterate_class_mixing(doub.space, doub.relation, doub.resolution);
    CHECK(repd.k == 1);
    REQUIRE(repd.fibers.size() == 1);
    CHECK(repd.fibers[0] == full_set(127));
    CHECK(repd.fiber_mixing[0]);

    // relations with branching are rejected
    Relation branchy(2, {{0, 0}, {0, 1}, {1, 0}});
    CHECK_THROWS_AS(iterate_class_mixing(two, branchy, 0.0), NotAMapError);
}

TEST_CASE("mixing maps have chain transitive iterates") {
    GridModel doub = build_catalog_model("doubling-nearest", 127);
    MixingResult res = is_chain_mixing(doub.space, doub.relation, doub.resolution);
    REQUIRE(res.mixing);
    Relation fk = doub.relation;
    for (Index k = 1; k <= 6; ++k) {
        if (k > 1) fk = compose(fk, doub.relation);
        CHECK(is_chain_transitive(doub.space, fk, doub.resolution));
    }
}

TEST_CASE("connected-at-scale models: transitive iff mixing") {
    // circle grids are connected at one-cell scale
    for (Index cells : {16, 24, 36}) {
        GridModel rot = build_catalog_model("rotation", cells, {{"shift", 1}});
        const double eps = rot.resolution;
        const bool transitive = is_chain_transitive(rot.space, rot.relation, eps);
        const MixingResult mix = is_chain_mixing(rot.space, rot.relation, eps);
        CHECK(transitive == mix.mixing);

        GridModel doub = build_catalog_model("doubling", cells);
        const bool t2 = is_chain_transitive(doub.space, doub.relation, doub.resolution);
        const MixingResult m2 = is_chain_mixing(doub.space, doub.relation, doub.resolution);
        CHECK(t2 == m2.mixing);
    }
}

TEST_CASE("length bound certificate") {
    SpaceModel two = line_space(2);
    Relation cyc(2, {{0, 1}, {1, 0}});
    ChainStructure cs = chain_structure(two, cyc, 0.0);
    CHECK(mixing_length_bound(cs, 0) == 4); // shortest cycle 2

    Relation looped(2, {{0, 0}, {0, 1}, {1, 0}});
    ChainStructure csl = chain_structure(two, looped, 0.0);
    CHECK(mixing_length_bound(csl, 0) == 1);
}
