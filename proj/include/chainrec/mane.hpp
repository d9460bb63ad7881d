#pragma once

#include <map>

#include "mixing.hpp"

namespace chainrec {

/// x is interior to S at radius r iff the closed r-ball around x stays in S.
inline IndexSet metric_interior(const SpaceModel& space, const IndexSet& s, double r) {
    if (r < 0) throw ParamError("interior radius must be nonnegative");
    IndexSet out;
    for (Index x : s)
        if (set_subset(ball(space, x, r), s)) out.push_back(x);
    return out;
}

namespace detail {

inline void require_map(const Relation& f) {
    for (Index i = 0; i + 1 < f.pairs.size(); ++i)
        if (f.pairs[i].first == f.pairs[i + 1].first)
            throw NotAMapError("relation has a source with two targets");
}

inline void require_bijection(const Relation& f) {
    require_map(f);
    if (domain(f).size() != f.n || domain(inverse(f)).size() != f.n ||
        f.pairs.size() != f.n)
        throw NotABijectionError("relation is not a bijective map");
    detail::require_map(inverse(f)); // injectivity
}

} // namespace detail

struct ManeReport {
    IndexSet fixed_set;       // |f|
    IndexSet interior_fixed;  // interior of |f| at radius r
    IndexSet k_set;           // X minus interior_fixed
    IndexSet mane_cyclic;     // |f| ∪ recurrent(f restricted to K) at eps
    double r = 0.0;
    double eps = 0.0;
    std::map<Index, IndexSet> per_sets; // period p -> |f^p|, when requested
    std::string method = "restricted-fixed-set formula";
};

/// Cyclic-set estimate |f| ∪ |C(f|K)| with K the complement of the metric
/// interior of |f|. Requires a (possibly partial) map with f⁻¹(|f|) = |f|;
/// otherwise the formula's hypothesis fails and PreconditionError is thrown.
inline ManeReport mane_set(const SpaceModel& space, const Relation& f, double r, double eps,
                           Index max_period = 0) {
    detail::require_map(f);
    ManeReport report;
    report.r = r;
    report.eps = eps;
    report.fixed_set = cyclic_set(f);
    if (inverse(f).image(report.fixed_set) != report.fixed_set)
        throw PreconditionError("formula requires the preimage of the fixed set to equal it");
    report.interior_fixed = metric_interior(space, report.fixed_set, r);
    report.k_set = set_difference(full_set(space.size()), report.interior_fixed);
    const Relation restricted = restrict(f, report.k_set);
    const ChainStructure cs = chain_structure(space, restricted, eps, ChainKind::conley);
    report.mane_cyclic = set_union(report.fixed_set, cs.recurrent);
    for (Index p = 1; p <= max_period; ++p) report.per_sets[p] = cyclic_set(power(f, p));
    return report;
}

/// Full relation estimate 1_{|f|} ∪ reach(f|K, eps), exported on request.
inline Relation mane_relation(const SpaceModel& space, const Relation& f, double r, double eps) {
    detail::require_map(f);
    const IndexSet fixed = cyclic_set(f);
    const IndexSet interior = metric_interior(space, fixed, r);
    const IndexSet k = set_difference(full_set(space.size()), interior);
    const ChainStructure cs = chain_structure(space, restrict(f, k), eps, ChainKind::conley);
    std::vector<IndexPair> pairs = cs.reach.pairs;
    for (Index x : fixed) pairs.emplace_back(x, x);
    return Relation(space.size(), std::move(pairs));
}

struct PeriodicSets {
    std::map<Index, IndexSet> per;  // p -> |f^p|
    IndexSet per_union;             // ∪_{p<=P} |f^p|
    IndexSet per_interior_union;    // ∪_{p<=P} interior(|f^p|, r)
};

inline PeriodicSets periodic_sets(const SpaceModel& space, const Relation& f, Index max_period,
                                  double r) {
    detail::require_map(f);
    if (max_period < 1) throw ParamError("max period must be at least 1");
    PeriodicSets out;
    Relation fp = f;
    for (Index p = 1; p <= max_period; ++p) {
        if (p > 1) fp = compose(fp, f);
        IndexSet cyc = cyclic_set(fp);
        out.per_union = set_union(out.per_union, cyc);
        out.per_interior_union =
            set_union(out.per_interior_union, metric_interior(space, cyc, r));
        out.per[p] = std::move(cyc);
    }
    return out;
}

struct LipschitzBoundReport {
    IndexSet lhs;  // recurrent set of the length-kind structure at eps
    IndexSet rhs;  // Per_P ∪ recurrent(f restricted to X ∖ Per_P°°) at eps
    bool inclusion = false; // lhs ⊆ rhs (advisory: P truncates the periodic set)
    Index max_period = 0;
    double r = 0.0;
    double eps = 0.0;
};

/// Finite check of the iterate bound for bijective maps: the length-kind
/// recurrent set against periodic points plus the recurrence of the
/// restriction off their interior.
inline LipschitzBoundReport lipschitz_mane_bound_check(const SpaceModel& space, const Relation& f,
                                                       Index max_period, double r, double eps) {
    detail::require_bijection(f);
    LipschitzBoundReport report;
    report.max_period = max_period;
    report.r = r;
    report.eps = eps;
    report.lhs = chain_structure(space, f, eps, ChainKind::aubry).recurrent;
    const PeriodicSets pers = periodic_sets(space, f, max_period, r);
    const IndexSet k = set_difference(full_set(space.size()), pers.per_interior_union);
    const ChainStructure sub = chain_structure(space, restrict(f, k), eps, ChainKind::conley);
    report.rhs = set_union(pers.per_union, sub.recurrent);
    report.inclusion = set_subset(report.lhs, report.rhs);
    return report;
}

} // namespace chainrec
