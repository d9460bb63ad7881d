#pragma once

#include "chainrel.hpp"

namespace chainrec {

enum class LyapunovKind { length_dominated, bound_dominated, elementary, extended, complete };

/// One generator of a complete Lyapunov function: the rank-quantized
/// pointwise barrier function at `target`, entering the sum with `weight`.
struct LyapunovGenerator {
    Index target = 0;
    double weight = 0.0;
    std::vector<double> values;
};

struct LyapunovFn {
    std::vector<double> values;
    LyapunovKind kind = LyapunovKind::complete;
    double domination_constant = 0.0; // K, when applicable
    std::vector<LyapunovGenerator> provenance;
};

/// (x,y) in F implies L(x) <= L(y); functions increase along orbits.
inline bool is_lyapunov(const LyapunovFn& fn, const Relation& rel) {
    for (const auto& [x, y] : rel.pairs)
        if (fn.values[x] > fn.values[y]) return false;
    return true;
}

/// Critical points: both projections of the equal-value pairs of f. Points
/// with no incident pair are regular.
inline IndexSet critical_points(const LyapunovFn& fn, const Relation& f, double tol = 0.0) {
    IndexSet out;
    for (const auto& [x, y] : f.pairs)
        if (std::abs(fn.values[x] - fn.values[y]) <= tol) {
            out.push_back(x);
            out.push_back(y);
        }
    return canonical_set(std::move(out));
}

/// L(x) - L(y) <= K * B[x][y] for all x, y.
inline bool is_dominated(const LyapunovFn& fn, double k_const, const BarrierMatrix& b,
                         double tol = 0.0) {
    if (k_const <= 0) throw ParamError("domination constant must be positive");
    const Index n = b.values.size();
    for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y)
            if (fn.values[x] - fn.values[y] > k_const * b.values.at(x, y) + tol) return false;
    return true;
}

/// The barrier-based Lyapunov function vanishing at z:
///   bound kind:  w -> min(m(w,z), d(w,z))   (barrier of f with (z,z) adjoined)
///   length kind: w -> min(l(w,z), d(w,z))   (barrier of f with the identity adjoined)
/// 1-dominated for its kind, hence a Lyapunov function for the eps = 0 chain relation.
inline LyapunovFn pointwise_lyapunov(const SpaceModel& space, const Relation& f, Index z,
                                     ChainKind kind) {
    if (z >= space.size()) throw IndexError("base point out of range");
    const BarrierMatrix b = barrier(space, f,
                                    kind == ChainKind::conley ? BarrierKind::bound
                                                              : BarrierKind::length);
    LyapunovFn fn;
    fn.kind = kind == ChainKind::conley ? LyapunovKind::bound_dominated
                                        : LyapunovKind::length_dominated;
    fn.domination_constant = 1.0;
    fn.values.resize(space.size());
    for (Index w = 0; w < space.size(); ++w)
        fn.values[w] = std::min(b.values.at(w, z), space.d(w, z));
    return fn;
}

namespace detail {

// Order-faithful quantization to ranks j/(r-1) in [0,1]; values closer than
// tol collapse to one rank. Keeps mathematically equal values identical and
// the smallest strict gap far above accumulated rounding.
inline std::vector<double> rank_quantize(const std::vector<double>& v, double tol) {
    std::vector<double> sorted(v);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> reps;
    for (double x : sorted)
        if (reps.empty() || x - reps.back() > tol) reps.push_back(x);
    std::vector<double> out(v.size());
    const double denom = reps.size() > 1 ? static_cast<double>(reps.size() - 1) : 1.0;
    for (Index i = 0; i < v.size(); ++i) {
        // largest representative <= v[i]; values inside a tol-run share it
        const Index r = std::upper_bound(reps.begin(), reps.end(), v[i]) - reps.begin();
        out[i] = static_cast<double>(r - 1) / denom;
    }
    return out;
}

} // namespace detail

/// A single Lyapunov function whose generating family recovers the chain
/// order exactly: the intersection of the generator preorders equals
/// Z_d ∪ F (F the eps = 0 chain relation of the requested kind), the sum is
/// strictly decreasing across one-way pairs of F, and its critical set is
/// |F|. One generator per target point, rank-quantized; weights 2^{-k}.
/// The contract is re-verified before returning.
inline LyapunovFn complete_lyapunov(const SpaceModel& space, const Relation& f, ChainKind kind) {
    const Index n = space.size();
    const ChainStructure cs = chain_structure(space, f, 0.0, kind);
    const Relation z_rel = zero_relation(space);
    auto in_order = [&](Index x, Index y) {
        return x == y || cs.reach.contains(x, y) || z_rel.contains(x, y);
    };

    const BarrierMatrix b = barrier(space, f,
                                    kind == ChainKind::conley ? BarrierKind::bound
                                                              : BarrierKind::length);
    LyapunovFn fn;
    fn.kind = LyapunovKind::complete;
    fn.values.assign(n, 0.0);

    // Targets that witness at least one pair outside the order.
    IndexSet targets;
    for (Index zp = 0; zp < n; ++zp)
        for (Index x = 0; x < n; ++x)
            if (!in_order(x, zp)) {
                targets.push_back(zp);
                break;
            }

    double weight = 0.5;
    const double qtol = 1e-12 * (1.0 + space.diam());
    for (Index zp : targets) {
        std::vector<double> raw(n);
        for (Index w = 0; w < n; ++w) raw[w] = std::min(b.values.at(w, zp), space.d(w, zp));
        LyapunovGenerator gen;
        gen.target = zp;
        gen.weight = weight;
        gen.values = detail::rank_quantize(raw, qtol);
        for (Index w = 0; w < n; ++w) fn.values[w] += weight * gen.values[w];
        fn.provenance.push_back(std::move(gen));
        weight *= 0.5;
    }

    // Post-hoc contract verification; failure here is an implementation bug.
    for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y) {
            bool all_le = true;
            for (const auto& gen : fn.provenance)
                if (gen.values[x] > gen.values[y]) { all_le = false; break; }
            if (all_le != in_order(x, y))
                throw IdentityError("complete Lyapunov family does not recover the chain order");
            if (in_order(y, x) && !in_order(x, y) && !(fn.values[y] < fn.values[x]))
                throw IdentityError("complete Lyapunov function is not strict off the relation");
        }
    {
        LyapunovFn probe;
        probe.values = fn.values;
        const IndexSet crit = critical_points(probe, cs.reach);
        if (crit != cs.recurrent)
            throw IdentityError("complete Lyapunov critical set differs from the recurrent set");
    }
    return fn;
}

/// Extend a partial Lyapunov function on X0 to all of X for a transitive F:
/// L(x) = max({a} ∪ {L0(z) : z in X0, x in F(z) or x = z}), clipped into [a,b].
inline LyapunovFn extend_lyapunov(const SpaceModel& space, const Relation& f_trans,
                                  const IndexSet& x0, const std::vector<double>& l0, double lo,
                                  double hi) {
    if (x0.size() != l0.size()) throw ParamError("X0 and L0 length mismatch");
    if (lo > hi) throw ParamError("empty value interval");
    for (double v : l0)
        if (v < lo || v > hi) throw ParamError("L0 leaves the value interval");
    // Consistency of L0 on F restricted to X0.
    for (Index i = 0; i < x0.size(); ++i)
        for (Index j = 0; j < x0.size(); ++j)
            if (f_trans.contains(x0[i], x0[j]) && l0[i] > l0[j])
                throw ConsistencyError("L0 decreases along F inside X0; no extension exists");
    LyapunovFn fn;
    fn.kind = LyapunovKind::extended;
    fn.values.assign(space.size(), lo);
    for (Index x = 0; x < space.size(); ++x) {
        double v = lo;
        for (Index i = 0; i < x0.size(); ++i)
            if (x0[i] == x || f_trans.contains(x0[i], x)) v = std::max(v, l0[i]);
        fn.values[x] = v;
    }
    return fn;
}

/// Inwardness of A at radius eps: the closed eps-ball around f(A) stays in A.
inline bool is_inward(const SpaceModel& space, const Relation& f, const IndexSet& a, double eps) {
    if (eps < 0) throw EpsilonError("eps must be nonnegative");
    return set_subset(ball(space, f.image(a), eps), a);
}

/// Elementary Lyapunov function supported on the eps-collar of f(A):
/// L(x) = max(eps - d(x, f(A)), 0) / eps. Requires A eps-inward.
inline LyapunovFn elementary_from_inward(const SpaceModel& space, const Relation& f,
                                         const IndexSet& a, double eps) {
    if (eps <= 0) throw ParamError("elementary construction needs eps > 0");
    if (!is_inward(space, f, a, eps)) throw InwardError("set is not eps-inward");
    const IndexSet img = f.image(a);
    LyapunovFn fn;
    fn.kind = LyapunovKind::elementary;
    fn.values.assign(space.size(), 0.0);
    for (Index x = 0; x < space.size(); ++x) {
        double dist = kInf;
        for (Index i : img) dist = std::min(dist, space.d(x, i));
        const double v = (eps - dist) / eps;
        fn.values[x] = v > 0.0 ? v : 0.0;
    }
    return fn;
}

/// Checks the elementary property: values in [0,1] and (x,y) in f with
/// L(x) > 0 forces L(y) = 1.
inline bool is_elementary(const LyapunovFn& fn, const Relation& f) {
    for (double v : fn.values)
        if (v < 0.0 || v > 1.0) return false;
    for (const auto& [x, y] : f.pairs)
        if (fn.values[x] > 0.0 && fn.values[y] != 1.0) return false;
    return true;
}

} // namespace chainrec
