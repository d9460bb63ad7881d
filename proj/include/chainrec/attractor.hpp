#pragma once

#include "lyapunov.hpp"

namespace chainrec {

struct AttractorRecord {
    IndexSet inward;    // witness set, when constructed from one
    double eps = 0.0;   // inwardness radius of the witness
    IndexSet attractor;
    IndexSet repellor;
    IndexSet trace;           // attractor ∩ recurrent set
    IndexSet repellor_trace;  // repellor ∩ recurrent set
};

/// Greatest S ⊆ A with S ⊆ rel(S), via the shrinking iteration
/// T ← T ∩ rel(T). For a forward-invariant A this is the maximum
/// rel-invariant subset; finite models stabilize in at most |A| rounds.
inline IndexSet maximal_invariant(const Relation& rel, IndexSet a) {
    for (;;) {
        IndexSet next = set_intersection(a, rel.image(a));
        if (next == a) return a;
        a = std::move(next);
    }
}

/// Attractor generated by an eps-inward set A, with the dual repellor grown
/// from the complement of the eps-collar of f(A). Images are taken under the
/// eps = 0 chain relation, per the chain-invariance formulation.
inline AttractorRecord attractor_from_inward(const SpaceModel& space, const Relation& f,
                                             const IndexSet& a, double eps) {
    if (!is_inward(space, f, a, eps)) throw InwardError("set is not eps-inward");
    const ChainStructure cs = chain_structure(space, f, 0.0, ChainKind::conley);
    AttractorRecord rec;
    rec.inward = a;
    rec.eps = eps;
    rec.attractor = maximal_invariant(cs.reach, a);
    const IndexSet b = set_difference(full_set(space.size()), ball(space, f.image(a), eps));
    rec.repellor = maximal_invariant(inverse(cs.reach), b);
    rec.trace = set_intersection(rec.attractor, cs.recurrent);
    rec.repellor_trace = set_intersection(rec.repellor, cs.recurrent);
    return rec;
}

/// All attractors of the eps-chain structure: one per forward-closed set of
/// recurrent components in the condensation, as chain images of the
/// component union. Duals are chain preimages of the complementary trace.
inline std::vector<AttractorRecord> attractor_lattice(const SpaceModel& space, const Relation& f,
                                                      double eps = 0.0, Index lattice_cap = 16) {
    const ChainStructure cs = chain_structure(space, f, eps, ChainKind::conley);
    const Index k = cs.components.size();
    if (k > lattice_cap)
        throw CapError("recurrent component count exceeds the lattice cap");

    // Reachability between recurrent components (via arbitrary points).
    std::vector<std::vector<char>> creach(k, std::vector<char>(k, 0));
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j)
            creach[i][j] =
                i == j || cs.reach.contains(cs.components[i].front(), cs.components[j].front());

    const Relation reach_inv = inverse(cs.reach);
    std::vector<AttractorRecord> lattice;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
        bool closed = true;
        for (Index i = 0; i < k && closed; ++i) {
            if (!((mask >> i) & 1)) continue;
            for (Index j = 0; j < k; ++j)
                if (!((mask >> j) & 1) && creach[i][j]) { closed = false; break; }
        }
        if (!closed) continue;
        IndexSet trace, dual_trace;
        for (Index i = 0; i < k; ++i) {
            auto& dst = ((mask >> i) & 1) ? trace : dual_trace;
            dst.insert(dst.end(), cs.components[i].begin(), cs.components[i].end());
        }
        trace = canonical_set(std::move(trace));
        dual_trace = canonical_set(std::move(dual_trace));
        AttractorRecord rec;
        rec.eps = eps;
        rec.trace = trace;
        rec.repellor_trace = dual_trace;
        rec.attractor = cs.reach.image(trace);
        rec.repellor = reach_inv.image(dual_trace);
        lattice.push_back(std::move(rec));
    }
    return lattice;
}

struct ConleyReport {
    bool intersection_identity = false; // recurrent = ⋂ (attractor ∪ repellor)
    bool class_identity = false;        // class(x) = ⋂ {attractor/repellor containing x}
    std::vector<IndexSet> classes;      // per recurrent component, as recovered from the lattice
};

/// Verifies the two decomposition identities on a computed lattice; they are
/// theorems, so failure signals an implementation bug (IdentityError).
inline ConleyReport conley_identities(const SpaceModel& space, const Relation& f,
                                      const std::vector<AttractorRecord>& lattice,
                                      double eps = 0.0) {
    const ChainStructure cs = chain_structure(space, f, eps, ChainKind::conley);
    ConleyReport report;

    IndexSet inter = full_set(space.size());
    for (const auto& rec : lattice)
        inter = set_intersection(inter, set_union(rec.attractor, rec.repellor));
    report.intersection_identity = inter == cs.recurrent;
    if (!report.intersection_identity)
        throw IdentityError("attractor-repellor intersection identity failed");

    report.class_identity = true;
    for (Index x : cs.recurrent) {
        IndexSet cls = full_set(space.size());
        for (const auto& rec : lattice) {
            if (set_contains(rec.attractor, x)) cls = set_intersection(cls, rec.attractor);
            if (set_contains(rec.repellor, x)) cls = set_intersection(cls, rec.repellor);
        }
        if (cls != cs.components[cs.component_of(x)]) {
            report.class_identity = false;
            throw IdentityError("attractor-repellor class identity failed");
        }
    }
    report.classes = cs.components;
    return report;
}

} // namespace chainrec
