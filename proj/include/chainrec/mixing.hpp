#pragma once

#include <numeric>

#include "chainrel.hpp"

namespace chainrec {

/// Factor map of a chain component onto the k-cycle: residues advance by one
/// along every step edge, and the base point carries residue 0.
struct CyclicFactor {
    Index k = 1;
    Index base = 0;
    std::vector<std::pair<Index, Index>> classes; // (point, residue), sorted by point
};

/// Surjective relation whose eps-reach joins every ordered pair.
inline bool is_chain_transitive(const SpaceModel& space, const Relation& f, double eps) {
    const Index n = space.size();
    if (domain(f).size() != n || domain(inverse(f)).size() != n) return false;
    // Reach = X x X iff the step digraph is one strongly connected component
    // with a cycle; avoids materializing the closure.
    const ChainStructure cs = chain_structure(space, f, eps, ChainKind::conley);
    return cs.components.size() == 1 && cs.components.front().size() == n;
}

/// Digraph period of a strongly connected chain component: gcd of all cycle
/// lengths through it, from BFS level differences.
inline Index component_period(const ChainStructure& cs, Index component) {
    if (component >= cs.components.size()) throw IndexError("component index out of range");
    const IndexSet& members = cs.components[component];
    auto adj = cs.step.adjacency();
    constexpr Index unset = static_cast<Index>(-1);
    std::vector<Index> level(cs.step.n, unset);
    std::vector<Index> queue;
    level[members.front()] = 0;
    queue.push_back(members.front());
    for (Index head = 0; head < queue.size(); ++head) {
        const Index u = queue[head];
        for (Index v : adj[u]) {
            if (!set_contains(members, v)) continue;
            if (level[v] == unset) {
                level[v] = level[u] + 1;
                queue.push_back(v);
            }
        }
    }
    long long g = 0;
    for (Index u : members)
        for (Index v : adj[u]) {
            if (!set_contains(members, v)) continue;
            const long long diff = static_cast<long long>(level[u]) + 1 - static_cast<long long>(level[v]);
            g = std::gcd(g, diff < 0 ? -diff : diff);
        }
    return g == 0 ? 1 : static_cast<Index>(g);
}

/// Residue classification of a component modulo its period. All step-path
/// lengths between two fixed points are congruent mod the period; the
/// congruence is re-checked edge by edge (PeriodError guards a bug).
inline CyclicFactor cyclic_factor(const ChainStructure& cs, Index component, Index base) {
    const IndexSet& members = cs.components.at(component);
    if (!set_contains(members, base)) throw IndexError("base point not in component");
    const Index k = component_period(cs, component);
    auto adj = cs.step.adjacency();
    constexpr Index unset = static_cast<Index>(-1);
    std::vector<Index> residue(cs.step.n, unset);
    std::vector<Index> queue;
    residue[base] = 0;
    queue.push_back(base);
    for (Index head = 0; head < queue.size(); ++head) {
        const Index u = queue[head];
        for (Index v : adj[u]) {
            if (!set_contains(members, v)) continue;
            if (residue[v] == unset) {
                residue[v] = (residue[u] + 1) % k;
                queue.push_back(v);
            }
        }
    }
    for (Index u : members)
        for (Index v : adj[u])
            if (set_contains(members, v) && residue[v] != (residue[u] + 1) % k)
                throw PeriodError("step-path lengths are not congruent mod the period");
    CyclicFactor factor;
    factor.k = k;
    factor.base = base;
    for (Index u : members) factor.classes.emplace_back(u, residue[u]);
    return factor;
}

struct MixingResult {
    bool mixing = false;
    bool transitive = false;
    Index period = 1;
    std::optional<CyclicFactor> witness; // the Z_k factor when not mixing but transitive
};

/// Chain mixing: chain transitive with component period 1. When the period
/// is k > 1 the result carries the factor map onto Z_k as a witness.
inline MixingResult is_chain_mixing(const SpaceModel& space, const Relation& f, double eps) {
    MixingResult res;
    res.transitive = is_chain_transitive(space, f, eps);
    if (!res.transitive) return res;
    const ChainStructure cs = chain_structure(space, f, eps, ChainKind::conley);
    res.period = component_period(cs, 0);
    res.mixing = res.period == 1;
    if (!res.mixing) res.witness = cyclic_factor(cs, 0, cs.components.front().front());
    return res;
}

/// Independent mixing test: f is chain mixing iff f x f is chain transitive
/// over the max-metric product.
inline bool product_transitivity_oracle(const SpaceModel& space, const Relation& f, double eps,
                                        Index budget_points = 64) {
    if (space.size() > budget_points)
        throw BudgetError("product oracle limited to small models");
    ProductModel prod = product(space, f, space, f);
    return is_chain_transitive(prod.space, prod.relation, eps);
}

struct IterateClassReport {
    Index k = 1;
    std::vector<IndexSet> fibers;     // residue fibers X_0..X_{k-1}
    std::vector<bool> fiber_mixing;   // f^k restricted to each fiber
    std::string chain_convention =
        "step chains may open with an eps-jump from the source; chains anchored at the "
        "source coincide with them at eps = 0 for maps";
};

/// For a chain-transitive map: period k, residue fibers, and chain mixing of
/// f^k on each fiber.
inline IterateClassReport iterate_class_mixing(const SpaceModel& space, const Relation& f,
                                               double eps) {
    {
        auto adj = f.adjacency();
        for (const auto& targets : adj)
            if (targets.size() > 1) throw NotAMapError("relation has a source with two targets");
    }
    if (!is_chain_transitive(space, f, eps))
        throw PreconditionError("iterate analysis requires a chain transitive relation");
    const ChainStructure cs = chain_structure(space, f, eps, ChainKind::conley);
    IterateClassReport report;
    report.k = component_period(cs, 0);
    const CyclicFactor factor = cyclic_factor(cs, 0, cs.components.front().front());
    report.fibers.assign(report.k, {});
    for (const auto& [point, residue] : factor.classes) report.fibers[residue].push_back(point);
    const Relation fk = power(f, report.k);
    for (Index i = 0; i < report.k; ++i) {
        const Relation restricted = restrict(fk, report.fibers[i]);
        // Mixing of the restriction, judged inside the fiber: strongly
        // connected step digraph on the fiber with period 1.
        const ChainStructure sub = chain_structure(space, restricted, eps, ChainKind::conley);
        bool ok = false;
        if (sub.components.size() >= 1) {
            for (Index c = 0; c < sub.components.size(); ++c)
                if (sub.components[c] == report.fibers[i]) {
                    ok = component_period(sub, c) == 1;
                    break;
                }
        }
        report.fiber_mixing.push_back(ok);
    }
    return report;
}

/// Certificate bound for "chains of every length >= N exist": N = m^2 with m
/// the shortest closed step walk through the component.
inline Index mixing_length_bound(const ChainStructure& cs, Index component) {
    const IndexSet& members = cs.components.at(component);
    auto adj = cs.step.adjacency();
    constexpr Index unset = static_cast<Index>(-1);
    Index shortest = unset;
    for (Index s : members) {
        // BFS shortest closed walk through s
        std::vector<Index> dist(cs.step.n, unset);
        std::vector<Index> queue;
        for (Index v : adj[s])
            if (set_contains(members, v) && dist[v] == unset) {
                dist[v] = 1;
                queue.push_back(v);
            }
        for (Index head = 0; head < queue.size(); ++head) {
            const Index u = queue[head];
            if (u == s) break;
            for (Index v : adj[u]) {
                if (!set_contains(members, v) || dist[v] != unset) continue;
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
        if (dist[s] != unset) shortest = std::min(shortest, dist[s]);
    }
    if (shortest == unset) throw PeriodError("component has no closed step walk");
    return shortest * shortest;
}

} // namespace chainrec
