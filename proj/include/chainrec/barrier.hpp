#pragma once

#include <atomic>
#include <functional>
#include <queue>
#include <thread>

#include "space.hpp"

namespace chainrec {

/// Barrier kinds. "bound" minimizes the largest jump of a chain, "length"
/// minimizes the summed jumps. Anchored kinds restrict to chains whose first
/// pair starts exactly at the source point. Symmetric kinds are max(B, Bᵀ).
enum class BarrierKind { bound, length, bound_anchored, length_anchored, sym_bound, sym_length };

inline const char* to_string(BarrierKind k) {
    switch (k) {
        case BarrierKind::bound: return "m";
        case BarrierKind::length: return "l";
        case BarrierKind::bound_anchored: return "M";
        case BarrierKind::length_anchored: return "L";
        case BarrierKind::sym_bound: return "sm";
        case BarrierKind::sym_length: return "sl";
    }
    return "?";
}

inline bool is_sum_kind(BarrierKind k) {
    return k == BarrierKind::length || k == BarrierKind::length_anchored ||
           k == BarrierKind::sym_length;
}
inline bool is_anchored_kind(BarrierKind k) {
    return k == BarrierKind::bound_anchored || k == BarrierKind::length_anchored;
}
inline bool is_symmetric_kind(BarrierKind k) {
    return k == BarrierKind::sym_bound || k == BarrierKind::sym_length;
}

struct BarrierMatrix {
    BarrierKind kind;
    Matrix values;
};

/// A chain: a nonempty run of relation pairs bridging x to y.
struct Chain {
    Index x;
    std::vector<IndexPair> steps;
    Index y;
};

inline double chain_length(const SpaceModel& space, const Chain& c) {
    if (c.steps.empty()) throw ParamError("chain must have at least one step");
    double s = space.d(c.x, c.steps.front().first);
    for (Index i = 0; i + 1 < c.steps.size(); ++i)
        s += space.d(c.steps[i].second, c.steps[i + 1].first);
    return s + space.d(c.steps.back().second, c.y);
}

inline double chain_bound(const SpaceModel& space, const Chain& c) {
    if (c.steps.empty()) throw ParamError("chain must have at least one step");
    double m = space.d(c.x, c.steps.front().first);
    for (Index i = 0; i + 1 < c.steps.size(); ++i)
        m = std::max(m, space.d(c.steps[i].second, c.steps[i + 1].first));
    return std::max(m, space.d(c.steps.back().second, c.y));
}

namespace detail {

// Label-setting relaxation over the pair digraph (node = relation pair,
// arc weight d(b_p, a_q)). Starting labels come from the caller; the
// combine op is + (sum kinds) or max (bound kinds). Nodes settle in
// (label, index) order under both extract-min strategies, so the dense
// scan and the heap produce bitwise-identical labels.
inline void relax_pair_graph(const SpaceModel& space, const std::vector<IndexPair>& pairs,
                             std::vector<double>& label, bool sum_kind, Index dense_cutoff) {
    const Index p = pairs.size();
    std::vector<char> settled(p, 0);
    auto relax_from = [&](Index u) {
        const Index bu = pairs[u].second;
        const double base = label[u];
        for (Index v = 0; v < p; ++v) {
            if (settled[v]) continue;
            const double w = space.d(bu, pairs[v].first);
            const double cand = sum_kind ? base + w : std::max(base, w);
            if (cand < label[v]) label[v] = cand;
        }
    };
    if (p <= dense_cutoff) {
        for (Index round = 0; round < p; ++round) {
            Index u = p;
            double best = kInf;
            for (Index v = 0; v < p; ++v)
                if (!settled[v] && label[v] < best) { best = label[v]; u = v; }
            if (u == p) break;
            settled[u] = 1;
            relax_from(u);
        }
    } else {
        using Entry = std::pair<double, Index>;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
        for (Index v = 0; v < p; ++v)
            if (label[v] < kInf) heap.emplace(label[v], v);
        while (!heap.empty()) {
            auto [val, u] = heap.top();
            heap.pop();
            if (settled[u] || val > label[u]) continue;
            settled[u] = 1;
            const Index bu = pairs[u].second;
            for (Index v = 0; v < p; ++v) {
                if (settled[v]) continue;
                const double w = space.d(bu, pairs[v].first);
                const double cand = sum_kind ? val + w : std::max(val, w);
                if (cand < label[v]) { label[v] = cand; heap.emplace(cand, v); }
            }
        }
    }
}

inline void for_each_source(Index n, unsigned threads, const std::function<void(Index)>& body) {
    if (threads <= 1 || n < 2) {
        for (Index x = 0; x < n; ++x) body(x);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<Index> next{0};
    const unsigned count = std::min<unsigned>(threads, n);
    for (unsigned t = 0; t < count; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const Index x = next.fetch_add(1);
                if (x >= n) return;
                body(x);
            }
        });
    for (auto& th : pool) th.join();
}

} // namespace detail

/// All-pairs barrier values for the symmetric kinds (chains may open with a
/// jump from x). Exact infimum over all chains; rows are computed
/// independently so the result is schedule-independent.
inline BarrierMatrix barrier(const SpaceModel& space, const Relation& f, BarrierKind kind,
                             unsigned threads = 1, Index dense_cutoff = 2048) {
    if (kind != BarrierKind::bound && kind != BarrierKind::length)
        throw KindError("barrier computes kinds m and l; use barrier_asymmetric or symmetrize");
    const Index n = space.size();
    const bool sum = is_sum_kind(kind);
    Matrix out(n);
    if (f.empty()) {
        const double fill = sum ? 2.0 * space.diam() : space.diam();
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) out.at(i, j) = fill;
        return {kind, std::move(out)};
    }
    const auto& pairs = f.pairs;
    detail::for_each_source(n, threads, [&](Index x) {
        std::vector<double> label(pairs.size());
        for (Index p = 0; p < pairs.size(); ++p) label[p] = space.d(x, pairs[p].first);
        detail::relax_pair_graph(space, pairs, label, sum, dense_cutoff);
        double* row = out.row(x);
        for (Index y = 0; y < n; ++y) {
            double best = kInf;
            for (Index p = 0; p < pairs.size(); ++p) {
                const double tail = space.d(pairs[p].second, y);
                const double cand = sum ? label[p] + tail : std::max(label[p], tail);
                if (cand < best) best = cand;
            }
            row[y] = best;
        }
    });
    return {kind, std::move(out)};
}

/// Anchored kinds M and L: the infimum runs over chains whose first pair
/// starts at x. Rows of points with no outgoing pair fall back to the
/// diam / 2·diam convention.
inline BarrierMatrix barrier_asymmetric(const SpaceModel& space, const Relation& f,
                                        BarrierKind kind, unsigned threads = 1,
                                        Index dense_cutoff = 2048) {
    if (!is_anchored_kind(kind))
        throw KindError("barrier_asymmetric computes kinds M and L");
    const Index n = space.size();
    const bool sum = is_sum_kind(kind);
    const double fill = sum ? 2.0 * space.diam() : space.diam();
    Matrix out(n);
    const auto& pairs = f.pairs;
    detail::for_each_source(n, threads, [&](Index x) {
        double* row = out.row(x);
        bool has_start = false;
        std::vector<double> label(pairs.size(), kInf);
        for (Index p = 0; p < pairs.size(); ++p)
            if (pairs[p].first == x) { label[p] = 0.0; has_start = true; }
        if (!has_start) {
            for (Index y = 0; y < n; ++y) row[y] = fill;
            return;
        }
        detail::relax_pair_graph(space, pairs, label, sum, dense_cutoff);
        for (Index y = 0; y < n; ++y) {
            double best = kInf;
            for (Index p = 0; p < pairs.size(); ++p) {
                if (label[p] == kInf) continue;
                const double tail = space.d(pairs[p].second, y);
                const double cand = sum ? label[p] + tail : std::max(label[p], tail);
                if (cand < best) best = cand;
            }
            row[y] = best;
        }
    });
    return {kind, std::move(out)};
}

/// max(B, Bᵀ) of an m- or l-kind matrix.
inline BarrierMatrix symmetrize(const BarrierMatrix& b) {
    BarrierKind out_kind;
    if (b.kind == BarrierKind::bound) out_kind = BarrierKind::sym_bound;
    else if (b.kind == BarrierKind::length) out_kind = BarrierKind::sym_length;
    else throw KindError("symmetrize expects kind m or l input");
    const Index n = b.values.size();
    Matrix out(n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) out.at(i, j) = std::max(b.values.at(i, j), b.values.at(j, i));
    return {out_kind, std::move(out)};
}

/// Independent oracle: exhaustive minimum over all chains of at most max_len
/// steps with no repeated pair. Optimal walks in the pair digraph never
/// repeat a node under nonnegative (min,+)/(min,max) costs, so with
/// max_len >= |f| this equals barrier()/barrier_asymmetric() exactly.
inline BarrierMatrix brute_force_barrier(const SpaceModel& space, const Relation& f,
                                         BarrierKind kind, Index max_len = 0,
                                         std::uint64_t budget = 10'000'000) {
    if (is_symmetric_kind(kind)) throw KindError("brute force covers kinds m, l, M, L");
    const Index n = space.size();
    const bool sum = is_sum_kind(kind);
    const bool anchored = is_anchored_kind(kind);
    const double fill = sum ? 2.0 * space.diam() : space.diam();
    if (max_len == 0) max_len = f.size();
    Matrix out(n);
    if (f.empty()) {
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) out.at(i, j) = fill;
        return {kind, std::move(out)};
    }
    const auto& pairs = f.pairs;
    std::uint64_t visited = 0;
    std::vector<char> used(pairs.size(), 0);
    std::vector<double> best(n);
    double best_cap = 0.0; // stays >= max over y of best[y]

    // DFS over pair sequences; every prefix is a complete chain candidate.
    std::function<void(Index, double, Index)> dfs = [&](Index last, double cost, Index depth) {
        if (++visited > budget) throw BudgetError("chain enumeration budget exceeded");
        const Index b_last = pairs[last].second;
        for (Index y = 0; y < n; ++y) {
            const double tail = space.d(b_last, y);
            const double total = sum ? cost + tail : std::max(cost, tail);
            if (total < best[y]) best[y] = total;
        }
        if (depth >= max_len) return;
        best_cap = 0.0;
        for (Index y = 0; y < n; ++y) best_cap = std::max(best_cap, best[y]);
        for (Index q = 0; q < pairs.size(); ++q) {
            if (used[q]) continue;
            const double w = space.d(b_last, pairs[q].first);
            const double next = sum ? cost + w : std::max(cost, w);
            if (next >= best_cap) continue;
            used[q] = 1;
            dfs(q, next, depth + 1);
            used[q] = 0;
        }
    };

    for (Index x = 0; x < n; ++x) {
        bool has_start = false;
        for (Index y = 0; y < n; ++y) best[y] = fill;
        for (Index p = 0; p < pairs.size(); ++p) {
            if (anchored && pairs[p].first != x) continue;
            has_start = true;
            const double head = anchored ? 0.0 : space.d(x, pairs[p].first);
            used[p] = 1;
            dfs(p, head, 1);
            used[p] = 0;
        }
        if (anchored && !has_start)
            for (Index y = 0; y < n; ++y) best[y] = fill;
        for (Index y = 0; y < n; ++y) out.at(x, y) = best[y];
    }
    return {kind, std::move(out)};
}

} // namespace chainrec
