#include <doctest.h>

#include "helpers.hpp"

using namespace chainrec;
using namespace testutil;

TEST_CASE("minimal well-formed model loads") {
    const char* doc = R"({"points":["a","b"],"metric":[[0,1],[1,0]],"relation":[[0,1]]})";
    Model m = load_space(doc);
    CHECK(m.space.size() == 2);
    CHECK(m.relation.pairs == std::vector<IndexPair>{{0, 1}});
    CHECK(m.space.diam() == 1.0);
}

TEST_CASE("symmetry violation rejected") {
    const char* doc = R"({"points":["a","b"],"metric":[[0,1],[2,0]],"relation":[]})";
    CHECK_THROWS_AS(load_space(doc), MetricError);
}

TEST_CASE("schema violations rejected") {
    CHECK_THROWS_AS(load_space("not json"), SchemaError);
    CHECK_THROWS_AS(load_space(R"({"points":[],"metric":[],"relation":[]})"), SchemaError);
    CHECK_THROWS_AS(load_space(R"({"points":["a"],"metric":[[0]],"relation":[[0,5]]})"),
                    IndexError);
    CHECK_THROWS_AS(load_space(R"({"points":["a","b"],"metric":[[0],[1,0]],"relation":[]})"),
                    SchemaError);
}

TEST_CASE("triangle violation rejected, nonzero diagonal rejected") {
    const char* tri = R"({"points":["a","b","c"],
        "metric":[[0,1,9],[1,0,1],[9,1,0]],"relation":[]})";
    CHECK_THROWS_AS(load_space(tri), MetricError);
    const char* diag = R"({"points":["a","b"],"metric":[[0.5,1],[1,0]],"relation":[]})";
    CHECK_THROWS_AS(load_space(diag), MetricError);
}

TEST_CASE("line reference model") {
    SpaceModel s = line_space(3);
    Relation f = line_relation(3);
    CHECK(s.diam() == 2.0);
    CHECK(f.pairs == std::vector<IndexPair>{{0, 1}, {1, 2}});
    CHECK(ball(s, 1, 1.0) == IndexSet{0, 1, 2});
    CHECK(zero_relation(s) == identity(s));
}

TEST_CASE("relation algebra basics") {
    Relation f(3, {{0, 1}, {1, 2}});
    CHECK(inverse(f).pairs == std::vector<IndexPair>{{1, 0}, {2, 1}});
    CHECK(power(f, 2).pairs == std::vector<IndexPair>{{0, 2}});
    Relation g(3, {{0, 0}, {0, 1}});
    CHECK(cyclic_set(g) == IndexSet{0});
    CHECK(domain(f) == IndexSet{0, 1});
    CHECK(restrict(f, IndexSet{0, 1}).pairs == std::vector<IndexPair>{{0, 1}});
}

TEST_CASE("relation algebra properties on random inputs") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const Index n = 2 + trial % 7;
        Relation f = random_relation(rng, n, 12);
        CHECK(inverse(inverse(f)) == f);

        std::uniform_int_distribution<Index> pick(0, n - 1);
        IndexSet a = canonical_set({pick(rng), pick(rng), pick(rng)});
        CHECK(restrict(restrict(f, a), a) == restrict(f, a));

        // power additivity on small relations
        Relation f2 = compose(f, f);
        CHECK(power(f, 3) == compose(f2, f));
        CHECK(power(f, 3) == compose(f, f2));

        // rectangle absorption: (A x B) o g o (A x B) subset of A x B
        IndexSet b = canonical_set({pick(rng), pick(rng)});
        Relation rect = rectangle(n, a, b);
        Relation sandwich = compose(compose(rect, f), rect);
        CHECK(sandwich.subset_of(rect));
    }
}

TEST_CASE("metric validation accepts random clouds and integer metrics") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        CHECK_NOTHROW(random_cloud(rng, 2 + trial % 6));
        CHECK_NOTHROW(random_integer_metric(rng, 2 + trial % 6));
    }
}

TEST_CASE("relation intersection supports metric-family sweeps") {
    Relation f(3, {{0, 1}, {1, 2}, {2, 2}});
    Relation g(3, {{1, 2}, {2, 2}, {0, 0}});
    CHECK(relation_intersection(f, g).pairs == std::vector<IndexPair>{{1, 2}, {2, 2}});
    CHECK(relation_intersection(f, Relation(3, {})).empty());
    std::mt19937 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        Relation a = random_relation(rng, 5, 10);
        Relation b = random_relation(rng, 5, 10);
        Relation both = relation_intersection(a, b);
        CHECK(both.subset_of(a));
        CHECK(both.subset_of(b));
        CHECK(relation_intersection(a, a) == a);
    }
}

TEST_CASE("product space carries the max metric") {
    SpaceModel s = line_space(2);
    Relation f(2, {{0, 1}});
    ProductModel p = product(s, f, s, f);
    CHECK(p.space.size() == 4);
    CHECK(p.space.d(0, 3) == 1.0); // max(1, 1)
    CHECK(p.space.d(0, 1) == 1.0);
    CHECK(p.relation.pairs == std::vector<IndexPair>{{0, 3}});
}

TEST_CASE("ball, diam, zero relation conventions") {
    SpaceModel s = line_space(3);
    CHECK(diam(s) == 2.0);
    CHECK(ball(s, 0, 0.0) == IndexSet{0});
    // pseudo-metric with duplicate points
    Matrix d(3);
    d.at(0, 1) = d.at(1, 0) = 0.0;
    d.at(0, 2) = d.at(2, 0) = 1.0;
    d.at(1, 2) = d.at(2, 1) = 1.0;
    SpaceModel pseudo({"a", "a2", "b"}, d);
    Relation z = zero_relation(pseudo);
    CHECK(z.contains(0, 1));
    CHECK(z.contains(1, 0));
    CHECK(!z.contains(0, 2));
}
