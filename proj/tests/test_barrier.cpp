#include <doctest.h>

#include "helpers.hpp"

using namespace chainrec;
using namespace testutil;

namespace {
constexpr double kTol = 1e-12;

void check_equal(const Matrix& a, const Matrix& b, double tol = kTol) {
    REQUIRE(a.size() == b.size());
    for (Index i = 0; i < a.size(); ++i)
        for (Index j = 0; j < a.size(); ++j)
            CHECK(std::abs(a.at(i, j) - b.at(i, j)) <= tol);
}
} // namespace

TEST_CASE("chain length and bound") {
    SpaceModel s = line_space(3);
    Chain c{0, {{0, 1}, {1, 2}}, 2};
    CHECK(chain_length(s, c) == 0.0);
    CHECK(chain_bound(s, c) == 0.0);
    Chain back{2, {{0, 1}}, 0};
    CHECK(chain_length(s, back) == 3.0); // d(2,0) + d(1,0)
    CHECK(chain_bound(s, back) == 2.0);
    CHECK_THROWS_AS(chain_length(s, Chain{0, {}, 1}), ParamError);
}

TEST_CASE("identity relation reproduces the metric for the length kind") {
    std::mt19937 rng(3);
    for (int t = 0; t < 20; ++t) {
        SpaceModel s = random_cloud(rng, 2 + t % 5);
        BarrierMatrix l = barrier(s, identity(s), BarrierKind::length);
        for (Index i = 0; i < s.size(); ++i)
            for (Index j = 0; j < s.size(); ++j) CHECK(l.values.at(i, j) == s.d(i, j));
    }
}

TEST_CASE("rectangle closed form on the 4-point line") {
    SpaceModel s = line_space(4);
    Relation rect = rectangle(4, {0}, {3});
    BarrierMatrix m = barrier(s, rect, BarrierKind::bound);
    CHECK(m.values.at(2, 1) == 2.0); // max(d(2,0), d(1,3))
}

TEST_CASE("3-point line barriers match the worked values") {
    SpaceModel s = line_space(3);
    Relation f = line_relation(3);
    BarrierMatrix m = barrier(s, f, BarrierKind::bound);
    BarrierMatrix l = barrier(s, f, BarrierKind::length);
    CHECK(m.values.at(0, 2) == 0.0);
    CHECK(l.values.at(0, 2) == 0.0);
    CHECK(m.values.at(2, 0) == 2.0);
    CHECK(l.values.at(2, 0) == 3.0);
    // oracle agreement on all nine entries
    check_equal(m.values, brute_force_barrier(s, f, BarrierKind::bound).values, 0.0);
    check_equal(l.values, brute_force_barrier(s, f, BarrierKind::length).values, 0.0);
}

TEST_CASE("asymmetric kinds on the 3-point line") {
    SpaceModel s = line_space(3);
    Relation f = line_relation(3);
    BarrierMatrix M = barrier_asymmetric(s, f, BarrierKind::bound_anchored);
    BarrierMatrix L = barrier_asymmetric(s, f, BarrierKind::length_anchored);
    CHECK(M.values.at(0, 2) == 0.0);
    for (Index y = 0; y < 3; ++y) CHECK(M.values.at(2, y) == 2.0);   // f(2) empty
    for (Index y = 0; y < 3; ++y) CHECK(L.values.at(2, y) == 4.0);
    CHECK(L.values.at(1, 0) == 2.0); // single chain starting (1,2)
}

TEST_CASE("empty relation conventions") {
    SpaceModel s = line_space(3);
    Relation empty(3, {});
    for (auto kind : {BarrierKind::bound, BarrierKind::length}) {
        BarrierMatrix b = barrier(s, empty, kind);
        const double expect = kind == BarrierKind::bound ? 2.0 : 4.0;
        for (Index i = 0; i < 3; ++i)
            for (Index j = 0; j < 3; ++j) CHECK(b.values.at(i, j) == expect);
        check_equal(b.values, brute_force_barrier(s, empty, kind).values, 0.0);
    }
}

TEST_CASE("symmetrize") {
    SpaceModel s = line_space(3);
    Relation f = line_relation(3);
    BarrierMatrix sm = symmetrize(barrier(s, f, BarrierKind::bound));
    BarrierMatrix sl = symmetrize(barrier(s, f, BarrierKind::length));
    CHECK(sm.kind == BarrierKind::sym_bound);
    CHECK(sm.values.at(0, 2) == 2.0);
    CHECK(sl.values.at(0, 2) == 3.0);
    CHECK_THROWS_AS(symmetrize(sm), KindError);

    // symmetric relation forces a symmetric bound matrix already
    Relation sym(3, {{0, 1}, {1, 0}});
    BarrierMatrix m = barrier(s, sym, BarrierKind::bound);
    check_equal(symmetrize(m).values, m.values, 0.0);
}

TEST_CASE("oracle equivalence on random small models, all four kinds") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 120; ++trial) {
        const Index n = 2 + trial % 5; // up to 6
        SpaceModel s = random_cloud(rng, n);
        Relation f = random_relation(rng, n, 8);
        for (auto kind : {BarrierKind::bound, BarrierKind::length, BarrierKind::bound_anchored,
                          BarrierKind::length_anchored}) {
            BarrierMatrix fast = is_anchored_kind(kind) ? barrier_asymmetric(s, f, kind)
                                                        : barrier(s, f, kind);
            BarrierMatrix slow = brute_force_barrier(s, f, kind);
            check_equal(fast.values, slow.values);
        }
    }
}

TEST_CASE("dense and heap relaxation agree bitwise") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
        const Index n = 2 + trial % 6;
        SpaceModel s = random_cloud(rng, n);
        Relation f = random_relation(rng, n, 10);
        for (auto kind : {BarrierKind::bound, BarrierKind::length}) {
            BarrierMatrix dense = barrier(s, f, kind, 1, 1u << 30);
            BarrierMatrix heap = barrier(s, f, kind, 1, 0);
            CHECK(dense.values == heap.values);
        }
    }
}

TEST_CASE("threaded rows are bitwise identical to serial rows") {
    std::mt19937 rng(29);
    SpaceModel s = random_cloud(rng, 8);
    Relation f = random_relation(rng, 8, 14);
    for (auto kind : {BarrierKind::bound, BarrierKind::length}) {
        BarrierMatrix serial = barrier(s, f, kind, 1);
        BarrierMatrix par = barrier(s, f, kind, 8);
        CHECK(serial.values == par.values);
    }
}

TEST_CASE("barrier algebra laws on random models") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 150; ++trial) {
        const Index n = 2 + trial % 5;
        SpaceModel s = random_cloud(rng, n);
        Relation f = random_relation(rng, n, 8);
        BarrierMatrix m = barrier(s, f, BarrierKind::bound);
        BarrierMatrix l = barrier(s, f, BarrierKind::length);
        BarrierMatrix M = barrier_asymmetric(s, f, BarrierKind::bound_anchored);
        BarrierMatrix L = barrier_asymmetric(s, f, BarrierKind::length_anchored);

        for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y) {
                // bounds and pair-zero property
                CHECK(m.values.at(x, y) >= 0.0);
                CHECK(m.values.at(x, y) <= s.diam() + kTol);
                CHECK(l.values.at(x, y) <= 2 * s.diam() + kTol);
                CHECK(m.values.at(x, y) <= l.values.at(x, y) + kTol);
                if (f.contains(x, y)) {
                    CHECK(m.values.at(x, y) == 0.0);
                    CHECK(l.values.at(x, y) == 0.0);
                }
                // inversion symmetry
                CHECK(m.values.at(x, y) ==
                      barrier(s, inverse(f), BarrierKind::bound).values.at(y, x));
                // anchored dominates symmetric
                CHECK(m.values.at(x, y) <= M.values.at(x, y) + kTol);
                CHECK(l.values.at(x, y) <= L.values.at(x, y) + kTol);
                for (Index z = 0; z < n; ++z) {
                    CHECK(m.values.at(x, y) <=
                          m.values.at(x, z) + m.values.at(z, y) + kTol);
                    CHECK(l.values.at(x, y) <=
                          l.values.at(x, z) + l.values.at(z, y) + kTol);
                    CHECK(m.values.at(x, y) <=
                          std::max(m.values.at(x, z) + m.values.at(z, z),
                                   m.values.at(z, z) + m.values.at(z, y)) + kTol);
                    CHECK(M.values.at(x, y) <=
                          std::max(M.values.at(x, z), M.values.at(z, y)) + kTol);
                }
            }

        // Lipschitz constant 2 in the pair
        for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y)
                for (Index w = 0; w < n; ++w)
                    for (Index z = 0; z < n; ++z) {
                        CHECK(std::abs(m.values.at(x, y) - m.values.at(w, z)) <=
                              s.d(x, w) + s.d(z, y) + kTol);
                        CHECK(std::abs(l.values.at(x, y) - l.values.at(w, z)) <=
                              s.d(x, w) + s.d(z, y) + kTol);
                    }

        // monotonicity under enlarging the relation
        Relation g = relation_union(f, random_relation(rng, n, 4));
        BarrierMatrix mg = barrier(s, g, BarrierKind::bound);
        BarrierMatrix lg = barrier(s, g, BarrierKind::length);
        for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y) {
                CHECK(mg.values.at(x, y) <= m.values.at(x, y) + kTol);
                CHECK(lg.values.at(x, y) <= l.values.at(x, y) + kTol);
            }
    }
}

TEST_CASE("idempotence and closure invariance") {
    std::mt19937 rng(37);
    for (int trial = 0; trial < 80; ++trial) {
        const Index n = 2 + trial % 5;
        SpaceModel s = random_cloud(rng, n);
        Relation f = random_relation(rng, n, 8);
        BarrierMatrix m = barrier(s, f, BarrierKind::bound);
        BarrierMatrix l = barrier(s, f, BarrierKind::length);

        std::vector<IndexPair> zp;
        for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y)
                if (m.values.at(x, y) == 0.0) zp.emplace_back(x, y);
        Relation mzero(n, std::move(zp));
        CHECK(barrier(s, mzero, BarrierKind::bound).values == m.values);

        std::vector<IndexPair> lp;
        for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y)
                if (l.values.at(x, y) == 0.0) lp.emplace_back(x, y);
        Relation lzero(n, std::move(lp));
        check_equal(barrier(s, lzero, BarrierKind::length).values, l.values);

        // augmenting by the zero relation on either side changes nothing
        Relation z = zero_relation(s);
        Relation aug = relation_union(f, compose(compose(z, f), z));
        CHECK(barrier(s, aug, BarrierKind::bound).values == m.values);
        check_equal(barrier(s, aug, BarrierKind::length).values, l.values);
    }
}

TEST_CASE("symmetrized bound barrier is an ultrametric on the recurrent part") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = 3 + trial % 4;
        SpaceModel s = random_cloud(rng, n);
        Relation f = random_relation(rng, n, 8);
        BarrierMatrix m = barrier(s, f, BarrierKind::bound);
        BarrierMatrix sm = symmetrize(m);
        IndexSet rec;
        for (Index x = 0; x < n; ++x)
            if (m.values.at(x, x) == 0.0) rec.push_back(x);
        for (Index x : rec)
            for (Index y : rec)
                for (Index z : rec)
                    CHECK(sm.values.at(x, y) <=
                          std::max(sm.values.at(x, z), sm.values.at(z, y)));
        // recurrent target pulls the symmetrized value under the metric
        for (Index y : rec)
            for (Index x = 0; x < n; ++x) CHECK(sm.values.at(x, y) <= s.d(x, y) + kTol);
    }
}

TEST_CASE("closed forms with integer metrics, exact equality") {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = 3 + trial % 4;
        SpaceModel s = random_integer_metric(rng, n);
        std::uniform_int_distribution<Index> pick(0, n - 1);
        IndexSet a = canonical_set({pick(rng), pick(rng)});
        IndexSet b = canonical_set({pick(rng), pick(rng)});
        const Index z = pick(rng);
        Relation f = random_relation(rng, n, 6);

        auto dset = [&](Index x, const IndexSet& set) {
            double best = kInf;
            for (Index i : set) best = std::min(best, s.d(x, i));
            return best;
        };

        // rectangle formulas
        BarrierMatrix mr = barrier(s, rectangle(n, a, b), BarrierKind::bound);
        BarrierMatrix lr = barrier(s, rectangle(n, a, b), BarrierKind::length);
        for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y) {
                CHECK(mr.values.at(x, y) == std::max(dset(x, a), dset(y, b)));
                CHECK(lr.values.at(x, y) == dset(x, a) + dset(y, b));
            }

        // identity over a subset: l^(1_A)(x,y) = min over a in A of d(x,a)+d(a,y)
        Relation oneA = rectangle(n, a, a);
        std::vector<IndexPair> idp;
        for (Index i : a) idp.emplace_back(i, i);
        Relation idA(n, std::move(idp));
        BarrierMatrix lA = barrier(s, idA, BarrierKind::length);
        for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y) {
                double expect = kInf;
                for (Index i : a) expect = std::min(expect, s.d(x, i) + s.d(i, y));
                CHECK(lA.values.at(x, y) == expect);
            }

        // union with the subset identity: min of the two length barriers
        BarrierMatrix lf = barrier(s, f, BarrierKind::length);
        BarrierMatrix lu = barrier(s, relation_union(idA, f), BarrierKind::length);
        for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y)
                CHECK(lu.values.at(x, y) == std::min(lf.values.at(x, y), lA.values.at(x, y)));

        // identity union rectangle: min(d(x,y), d(x,A)+d(y,B))
        BarrierMatrix lur =
            barrier(s, relation_union(identity(s), rectangle(n, a, b)), BarrierKind::length);
        for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y)
                CHECK(lur.values.at(x, y) == std::min(s.d(x, y), dset(x, a) + dset(y, b)));

        // adjoining a single loop at z
        BarrierMatrix mf = barrier(s, f, BarrierKind::bound);
        Relation loop(n, {{z, z}});
        BarrierMatrix ml = barrier(s, relation_union(f, loop), BarrierKind::bound);
        for (Index x = 0; x < n; ++x)
            for (Index y = 0; y < n; ++y) {
                const double via_z = std::max(std::min(mf.values.at(x, z), s.d(x, z)),
                                              std::min(mf.values.at(z, y), s.d(z, y)));
                CHECK(ml.values.at(x, y) == std::min(mf.values.at(x, y), via_z));
            }
        // with z = y the closed form collapses to min(m(x,y), d(x,y))
        Relation loop_y(n, {{static_cast<Index>(0), static_cast<Index>(0)}});
        BarrierMatrix my = barrier(s, relation_union(f, loop_y), BarrierKind::bound);
        for (Index x = 0; x < n; ++x)
            CHECK(my.values.at(x, 0) == std::min(mf.values.at(x, 0), s.d(x, 0)));
    }
}

TEST_CASE("budget guard on the oracle") {
    SpaceModel s = line_space(6);
    Relation f = line_relation(6);
    CHECK_THROWS_AS(brute_force_barrier(s, f, BarrierKind::length, 5, 10), BudgetError);
}
