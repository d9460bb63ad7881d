#pragma once

#include <random>

#include <chainrec/chainrec.hpp>

namespace testutil {

using namespace chainrec;

// Line space {0, 1, ..., n-1} with d(i,j) = |i - j|.
inline SpaceModel line_space(Index n) {
    std::vector<std::string> labels;
    Matrix d(n);
    for (Index i = 0; i < n; ++i) {
        labels.push_back("p" + std::to_string(i));
        for (Index j = 0; j < n; ++j)
            d.at(i, j) = i > j ? double(i - j) : double(j - i);
    }
    return SpaceModel(std::move(labels), std::move(d));
}

// Space from explicit coordinates on a line.
inline SpaceModel coord_space(const std::vector<double>& xs) {
    std::vector<std::string> labels;
    Matrix d(xs.size());
    for (Index i = 0; i < xs.size(); ++i) {
        labels.push_back("p" + std::to_string(i));
        for (Index j = 0; j < xs.size(); ++j) d.at(i, j) = std::abs(xs[i] - xs[j]);
    }
    return SpaceModel(std::move(labels), std::move(d));
}

// Random planar point cloud with Euclidean metric.
inline SpaceModel random_cloud(std::mt19937& rng, Index n) {
    std::uniform_real_distribution<double> u(0.0, 10.0);
    std::vector<double> xs(n), ys(n);
    for (Index i = 0; i < n; ++i) { xs[i] = u(rng); ys[i] = u(rng); }
    std::vector<std::string> labels;
    Matrix d(n);
    for (Index i = 0; i < n; ++i) {
        labels.push_back("p" + std::to_string(i));
        for (Index j = 0; j < n; ++j)
            d.at(i, j) = std::hypot(xs[i] - xs[j], ys[i] - ys[j]);
    }
    return SpaceModel(std::move(labels), std::move(d));
}

// Random integer-valued metric: shortest paths of a random weighted graph.
// Sums of such distances stay exact in double arithmetic.
inline SpaceModel random_integer_metric(std::mt19937& rng, Index n, int wmax = 9) {
    std::uniform_int_distribution<int> w(1, wmax);
    Matrix d(n);
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j) {
            const double v = w(rng);
            d.at(i, j) = v;
            d.at(j, i) = v;
        }
    // Floyd closure to enforce the triangle inequality.
    for (Index k = 0; k < n; ++k)
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                d.at(i, j) = std::min(d.at(i, j), d.at(i, k) + d.at(k, j));
    std::vector<std::string> labels;
    for (Index i = 0; i < n; ++i) labels.push_back("p" + std::to_string(i));
    return SpaceModel(std::move(labels), std::move(d));
}

inline Relation random_relation(std::mt19937& rng, Index n, Index max_pairs) {
    std::uniform_int_distribution<Index> pick(0, n - 1);
    std::uniform_int_distribution<Index> count(0, max_pairs);
    std::vector<IndexPair> pairs;
    const Index m = count(rng);
    for (Index k = 0; k < m; ++k) pairs.emplace_back(pick(rng), pick(rng));
    return Relation(n, std::move(pairs));
}

// Random total map as a relation.
inline Relation random_map(std::mt19937& rng, Index n) {
    std::uniform_int_distribution<Index> pick(0, n - 1);
    std::vector<IndexPair> pairs;
    for (Index i = 0; i < n; ++i) pairs.emplace_back(i, pick(rng));
    return Relation(n, std::move(pairs));
}

// Random permutation as a relation.
inline Relation random_bijection(std::mt19937& rng, Index n) {
    std::vector<Index> perm(n);
    for (Index i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<IndexPair> pairs;
    for (Index i = 0; i < n; ++i) pairs.emplace_back(i, perm[i]);
    return Relation(n, std::move(pairs));
}

// Strongly connected surjective relation: a full cycle plus random chords.
inline Relation random_strongly_connected(std::mt19937& rng, Index n, Index extra) {
    std::vector<Index> perm(n);
    for (Index i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<IndexPair> pairs;
    for (Index i = 0; i < n; ++i) pairs.emplace_back(perm[i], perm[(i + 1) % n]);
    std::uniform_int_distribution<Index> pick(0, n - 1);
    for (Index k = 0; k < extra; ++k) pairs.emplace_back(pick(rng), pick(rng));
    return Relation(n, std::move(pairs));
}

// Small fixed models shared across the suites.
inline Relation line_relation(Index n) {
    std::vector<IndexPair> pairs;
    for (Index i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
    return Relation(n, std::move(pairs));
}

inline SpaceModel two_cycles_space() { return coord_space({0, 1, 10, 11}); }

inline Relation two_cycles_relation() {
    return Relation(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});
}

inline SpaceModel sink_space() { return line_space(2); }
inline Relation sink_relation() { return Relation(2, {{0, 1}, {1, 1}}); }

} // namespace testutil
