#pragma once

#include <cmath>
#include <utility>

#include "core.hpp"

namespace chainrec {

/// Finite pseudo-metric space: ordered point labels plus a distance matrix.
/// Distances are validated once at construction; everything downstream
/// trusts the axioms. Labels are carried for reporting only.
class SpaceModel {
  public:
    SpaceModel(std::vector<std::string> points, Matrix dist)
        : points_(std::move(points)), dist_(std::move(dist)) {
        validate();
    }

    Index size() const { return points_.size(); }
    const std::vector<std::string>& points() const { return points_; }
    const std::string& label(Index i) const { return points_[i]; }
    const Matrix& dist() const { return dist_; }
    double d(Index i, Index j) const { return dist_.at(i, j); }
    double diam() const { return diam_; }

    /// Metric-axiom tolerance: absolute plus relative in the diameter.
    double metric_tolerance() const { return 1e-9 * std::max(1.0, diam_); }

  private:
    void validate() {
        const Index n = points_.size();
        if (n == 0) throw SchemaError("model must have at least one point");
        if (dist_.size() != n) throw SchemaError("metric matrix size does not match point count");
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                if (!std::isfinite(dist_.at(i, j)))
                    throw MetricError("non-finite distance entry");
        diam_ = dist_.max_entry();
        const double tol = metric_tolerance();
        for (Index i = 0; i < n; ++i) {
            if (std::abs(dist_.at(i, i)) > tol)
                throw MetricError("nonzero diagonal at point " + points_[i]);
            for (Index j = 0; j < n; ++j) {
                if (dist_.at(i, j) < -tol)
                    throw MetricError("negative distance");
                if (std::abs(dist_.at(i, j) - dist_.at(j, i)) > tol)
                    throw MetricError("asymmetric distance between " + points_[i] + " and " + points_[j]);
            }
        }
        for (Index i = 0; i < n; ++i)
            for (Index k = 0; k < n; ++k) {
                const double dik = dist_.at(i, k);
                for (Index j = 0; j < n; ++j)
                    if (dist_.at(i, j) > dik + dist_.at(k, j) + tol)
                        throw MetricError("triangle inequality violated at (" + points_[i] + "," +
                                          points_[j] + "," + points_[k] + ")");
            }
    }

    std::vector<std::string> points_;
    Matrix dist_;
    double diam_ = 0.0;
};

/// Relation on a space of n points: canonical (sorted, duplicate-free) pair list.
/// Equality of relations is sequence equality of the canonical form.
struct Relation {
    Index n = 0;
    std::vector<IndexPair> pairs;

    Relation() = default;
    Relation(Index n_, std::vector<IndexPair> p) : n(n_), pairs(std::move(p)) {
        canonicalize();
    }

    void canonicalize() {
        for (const auto& [a, b] : pairs)
            if (a >= n || b >= n) throw IndexError("relation pair out of range");
        std::sort(pairs.begin(), pairs.end());
        pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    }

    bool empty() const { return pairs.empty(); }
    Index size() const { return pairs.size(); }
    bool contains(Index a, Index b) const {
        return std::binary_search(pairs.begin(), pairs.end(), IndexPair{a, b});
    }
    bool operator==(const Relation& o) const { return n == o.n && pairs == o.pairs; }
    bool operator!=(const Relation& o) const { return !(*this == o); }

    bool subset_of(const Relation& o) const {
        return std::includes(o.pairs.begin(), o.pairs.end(), pairs.begin(), pairs.end());
    }

    /// Image f(A).
    IndexSet image(const IndexSet& a) const {
        IndexSet out;
        for (const auto& [s, t] : pairs)
            if (set_contains(a, s)) out.push_back(t);
        return canonical_set(std::move(out));
    }

    std::vector<std::vector<Index>> adjacency() const {
        std::vector<std::vector<Index>> adj(n);
        for (const auto& [a, b] : pairs) adj[a].push_back(b);
        return adj;
    }
};

inline Relation inverse(const Relation& f) {
    std::vector<IndexPair> p;
    p.reserve(f.pairs.size());
    for (const auto& [a, b] : f.pairs) p.emplace_back(b, a);
    return Relation(f.n, std::move(p));
}

inline Relation relation_union(const Relation& f, const Relation& g) {
    if (f.n != g.n) throw IndexError("union of relations over different spaces");
    std::vector<IndexPair> p(f.pairs);
    p.insert(p.end(), g.pairs.begin(), g.pairs.end());
    return Relation(f.n, std::move(p));
}

inline Relation relation_intersection(const Relation& f, const Relation& g) {
    if (f.n != g.n) throw IndexError("intersection of relations over different spaces");
    std::vector<IndexPair> p;
    std::set_intersection(f.pairs.begin(), f.pairs.end(), g.pairs.begin(), g.pairs.end(),
                          std::back_inserter(p));
    return Relation(f.n, std::move(p));
}

inline Relation restrict(const Relation& f, const IndexSet& a) {
    std::vector<IndexPair> p;
    for (const auto& [s, t] : f.pairs)
        if (set_contains(a, s) && set_contains(a, t)) p.emplace_back(s, t);
    return Relation(f.n, std::move(p));
}

/// g after f: (x,z) iff there is y with (x,y) in f and (y,z) in g.
inline Relation compose(const Relation& f, const Relation& g) {
    if (f.n != g.n) throw IndexError("composition of relations over different spaces");
    auto adj = g.adjacency();
    std::vector<IndexPair> p;
    for (const auto& [x, y] : f.pairs)
        for (Index z : adj[y]) p.emplace_back(x, z);
    return Relation(f.n, std::move(p));
}

inline Relation identity(Index n) {
    std::vector<IndexPair> p;
    p.reserve(n);
    for (Index i = 0; i < n; ++i) p.emplace_back(i, i);
    return Relation(n, std::move(p));
}

inline Relation identity(const SpaceModel& space) { return identity(space.size()); }

inline Relation power(const Relation& f, Index k) {
    if (k == 0) throw IndexError("power requires a positive exponent");
    Relation acc = f;
    for (Index i = 1; i < k; ++i) acc = compose(acc, f);
    return acc;
}

inline Relation rectangle(Index n, const IndexSet& a, const IndexSet& b) {
    std::vector<IndexPair> p;
    p.reserve(a.size() * b.size());
    for (Index x : a)
        for (Index y : b) p.emplace_back(x, y);
    return Relation(n, std::move(p));
}

inline IndexSet cyclic_set(const Relation& f) {
    IndexSet s;
    for (const auto& [a, b] : f.pairs)
        if (a == b) s.push_back(a);
    return s; // pairs sorted, so s is sorted
}

inline IndexSet domain(const Relation& f) {
    IndexSet s;
    s.reserve(f.pairs.size());
    for (const auto& [a, b] : f.pairs) s.push_back(a);
    return canonical_set(std::move(s));
}

/// Union of f^1 .. f^k.
inline Relation iterate_union(const Relation& f, Index k) {
    Relation acc = f;
    Relation fi = f;
    for (Index i = 2; i <= k; ++i) {
        fi = compose(fi, f);
        acc = relation_union(acc, fi);
    }
    return acc;
}

/// Closed ball around point i.
inline IndexSet ball(const SpaceModel& space, Index i, double eps) {
    if (i >= space.size()) throw IndexError("ball center out of range");
    IndexSet s;
    for (Index j = 0; j < space.size(); ++j)
        if (space.d(i, j) <= eps) s.push_back(j);
    return s;
}

/// Closed eps-ball around a set.
inline IndexSet ball(const SpaceModel& space, const IndexSet& a, double eps) {
    std::vector<bool> in(space.size(), false);
    for (Index i : a)
        for (Index j = 0; j < space.size(); ++j)
            if (space.d(i, j) <= eps) in[j] = true;
    IndexSet s;
    for (Index j = 0; j < space.size(); ++j)
        if (in[j]) s.push_back(j);
    return s;
}

/// Pairs at distance <= tau; with tau = 0 this is Z_d, the zero-distance relation.
inline Relation zero_relation(const SpaceModel& space, double tau = 0.0) {
    std::vector<IndexPair> p;
    for (Index i = 0; i < space.size(); ++i)
        for (Index j = 0; j < space.size(); ++j)
            if (space.d(i, j) <= tau) p.emplace_back(i, j);
    return Relation(space.size(), std::move(p));
}

inline double diam(const SpaceModel& space) { return space.diam(); }

/// Product space with max-combined distance, and the product relation over it.
struct ProductModel {
    SpaceModel space;
    Relation relation;
};

inline ProductModel product(const SpaceModel& s1, const Relation& f1,
                            const SpaceModel& s2, const Relation& f2) {
    const Index n1 = s1.size(), n2 = s2.size();
    std::vector<std::string> labels;
    labels.reserve(n1 * n2);
    for (Index i = 0; i < n1; ++i)
        for (Index j = 0; j < n2; ++j) labels.push_back(s1.label(i) + "|" + s2.label(j));
    Matrix dist(n1 * n2);
    for (Index i = 0; i < n1; ++i)
        for (Index j = 0; j < n2; ++j)
            for (Index k = 0; k < n1; ++k)
                for (Index l = 0; l < n2; ++l)
                    dist.at(i * n2 + j, k * n2 + l) = std::max(s1.d(i, k), s2.d(j, l));
    std::vector<IndexPair> p;
    p.reserve(f1.size() * f2.size());
    for (const auto& [a1, b1] : f1.pairs)
        for (const auto& [a2, b2] : f2.pairs)
            p.emplace_back(a1 * n2 + a2, b1 * n2 + b2);
    return ProductModel{SpaceModel(std::move(labels), std::move(dist)),
                        Relation(n1 * n2, std::move(p))};
}

} // namespace chainrec
