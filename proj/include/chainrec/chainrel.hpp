#pragma once

#include <numeric>
#include <optional>

#include "barrier.hpp"

namespace chainrec {

/// Which barrier notion a chain structure is tied to: bound-kind (largest
/// jump, the Conley relation at eps = 0) or length-kind (summed jumps, the
/// Aubry-Mather relation at eps = 0). The step digraph is the same for both;
/// the kind selects the quotient metric.
enum class ChainKind { conley, aubry };

inline const char* to_string(ChainKind k) {
    return k == ChainKind::conley ? "m" : "l";
}

namespace detail {

/// Iterative Tarjan; returns component id per node, ids in reverse
/// topological order of the condensation (component 0 is a sink-most SCC).
inline Index tarjan_scc(const std::vector<std::vector<Index>>& adj, std::vector<Index>& comp) {
    const Index n = adj.size();
    constexpr Index none = static_cast<Index>(-1);
    std::vector<Index> low(n, 0), num(n, none), stack;
    std::vector<char> on_stack(n, 0);
    comp.assign(n, none);
    Index counter = 0, comps = 0;
    struct Frame { Index v; Index edge; };
    std::vector<Frame> call;
    for (Index root = 0; root < n; ++root) {
        if (num[root] != none) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            auto& [v, edge] = call.back();
            if (edge == 0) {
                num[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (edge < adj[v].size()) {
                const Index w = adj[v][edge++];
                if (num[w] == none) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], num[w]);
            }
            if (descended) continue;
            if (low[v] == num[v]) {
                Index w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = comps;
                } while (w != v);
                ++comps;
            }
            const Index child = v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[child]);
        }
    }
    return comps;
}

/// Bitset rows for reachability closure.
class BitGrid {
  public:
    explicit BitGrid(Index n) : n_(n), words_((n + 63) / 64), bits_(n * words_, 0) {}
    void set(Index i, Index j) { bits_[i * words_ + j / 64] |= std::uint64_t{1} << (j % 64); }
    bool get(Index i, Index j) const {
        return (bits_[i * words_ + j / 64] >> (j % 64)) & 1;
    }
    void or_row(Index dst, Index src) {
        for (Index w = 0; w < words_; ++w) bits_[dst * words_ + w] |= bits_[src * words_ + w];
    }
    Index size() const { return n_; }

  private:
    Index n_, words_;
    std::vector<std::uint64_t> bits_;
};

} // namespace detail

struct CondensationNode {
    IndexSet members;
    bool recurrent = false;
    // recurrent nodes: index into ChainStructure::components; transient: the point itself
    Index ref = 0;
};

/// Eps-chain structure of a relation: one-step digraph with eps-jumps at both
/// ends of each relation pair, its transitive closure, recurrent points,
/// strongly connected chain components and the condensation preorder.
struct ChainStructure {
    double eps = 0.0;
    ChainKind kind = ChainKind::conley;
    Relation relation;     // the relation the structure was derived from
    Relation step;         // {(x,y) : exists (a,b) in f, d(x,a) <= eps and d(b,y) <= eps}
    Relation reach;        // transitive closure of step
    IndexSet recurrent;    // {x : (x,x) in reach}
    std::vector<IndexSet> components;  // cyclic SCC classes on recurrent, by min member
    std::vector<CondensationNode> condensation;          // components first, then transient points
    std::vector<IndexPair> condensation_edges;           // dedup step edges between nodes
    std::vector<Index> node_of;                          // point -> condensation node

    Index component_of(Index x) const {
        const auto& node = condensation[node_of[x]];
        if (!node.recurrent) throw IndexError("point is not in a recurrent component");
        return node.ref;
    }
};

inline ChainStructure chain_structure(const SpaceModel& space, const Relation& f, double eps,
                                      ChainKind kind = ChainKind::conley) {
    if (eps < 0) throw EpsilonError("eps must be nonnegative");
    if (f.n != space.size()) throw IndexError("relation does not match space");
    const Index n = space.size();
    ChainStructure cs;
    cs.eps = eps;
    cs.kind = kind;
    cs.relation = f;

    // Step digraph.
    std::vector<char> edge(n * n, 0);
    {
        std::vector<IndexSet> near(n); // near[i] = eps-ball around i, reused both ways (d symmetric)
        for (Index i = 0; i < n; ++i) near[i] = ball(space, i, eps);
        for (const auto& [a, b] : f.pairs)
            for (Index x : near[a])
                for (Index y : near[b]) edge[x * n + y] = 1;
    }
    std::vector<IndexPair> step_pairs;
    std::vector<std::vector<Index>> adj(n);
    for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y)
            if (edge[x * n + y]) {
                step_pairs.emplace_back(x, y);
                adj[x].push_back(y);
            }
    cs.step = Relation(n, std::move(step_pairs));

    // SCC and closure over the condensation.
    std::vector<Index> comp;
    const Index comps = detail::tarjan_scc(adj, comp);
    std::vector<IndexSet> members(comps);
    for (Index v = 0; v < n; ++v) members[comp[v]].push_back(v);
    std::vector<char> cyclic(comps, 0);
    for (Index c = 0; c < comps; ++c)
        if (members[c].size() > 1) cyclic[c] = 1;
    for (const auto& [a, b] : cs.step.pairs)
        if (a == b) cyclic[comp[a]] = 1;

    detail::BitGrid creach(comps);
    for (Index c = 0; c < comps; ++c)
        if (cyclic[c]) creach.set(c, c);
    // Tarjan ids are reverse-topological: successors of c have smaller ids.
    for (Index c = 0; c < comps; ++c)
        for (Index v : members[c])
            for (Index w : adj[v]) {
                creach.set(c, comp[w]);
                creach.or_row(c, comp[w]);
            }

    std::vector<IndexPair> reach_pairs;
    for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y) {
            const bool same = comp[x] == comp[y];
            if ((same && cyclic[comp[x]]) || (!same && creach.get(comp[x], comp[y])))
                reach_pairs.emplace_back(x, y);
        }
    cs.reach = Relation(n, std::move(reach_pairs));

    for (Index x = 0; x < n; ++x)
        if (cyclic[comp[x]]) cs.recurrent.push_back(x);

    // Recurrent components ordered by minimal member.
    std::vector<Index> order;
    for (Index c = 0; c < comps; ++c)
        if (cyclic[c]) order.push_back(c);
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return members[a].front() < members[b].front(); });
    std::vector<Index> comp_slot(comps, static_cast<Index>(-1));
    for (Index i = 0; i < order.size(); ++i) {
        comp_slot[order[i]] = i;
        cs.components.push_back(members[order[i]]);
    }

    // Condensation nodes: recurrent components first, then transient points.
    cs.node_of.assign(n, 0);
    for (Index i = 0; i < order.size(); ++i) {
        CondensationNode node;
        node.members = members[order[i]];
        node.recurrent = true;
        node.ref = i;
        for (Index v : node.members) cs.node_of[v] = cs.condensation.size();
        cs.condensation.push_back(std::move(node));
    }
    for (Index v = 0; v < n; ++v) {
        if (cyclic[comp[v]]) continue;
        CondensationNode node;
        node.members = {v};
        node.recurrent = false;
        node.ref = v;
        cs.node_of[v] = cs.condensation.size();
        cs.condensation.push_back(std::move(node));
    }
    std::vector<IndexPair> cedges;
    for (const auto& [a, b] : cs.step.pairs)
        if (cs.node_of[a] != cs.node_of[b]) cedges.emplace_back(cs.node_of[a], cs.node_of[b]);
    std::sort(cedges.begin(), cedges.end());
    cedges.erase(std::unique(cedges.begin(), cedges.end()), cedges.end());
    cs.condensation_edges = std::move(cedges);
    return cs;
}

/// Plain transitive closure of a relation (no metric fattening).
inline Relation transitive_closure(const Relation& f) {
    auto adj = f.adjacency();
    std::vector<Index> comp;
    const Index comps = detail::tarjan_scc(adj, comp);
    std::vector<IndexSet> members(comps);
    for (Index v = 0; v < f.n; ++v) members[comp[v]].push_back(v);
    std::vector<char> cyclic(comps, 0);
    for (Index c = 0; c < comps; ++c)
        if (members[c].size() > 1) cyclic[c] = 1;
    for (const auto& [a, b] : f.pairs)
        if (a == b) cyclic[comp[a]] = 1;
    detail::BitGrid creach(comps);
    for (Index c = 0; c < comps; ++c)
        if (cyclic[c]) creach.set(c, c);
    for (Index c = 0; c < comps; ++c)
        for (Index v : members[c])
            for (Index w : adj[v]) {
                creach.set(c, comp[w]);
                creach.or_row(c, comp[w]);
            }
    std::vector<IndexPair> out;
    for (Index x = 0; x < f.n; ++x)
        for (Index y = 0; y < f.n; ++y) {
            const bool same = comp[x] == comp[y];
            if ((same && cyclic[comp[x]]) || (!same && creach.get(comp[x], comp[y])))
                out.emplace_back(x, y);
        }
    return Relation(f.n, std::move(out));
}

/// Smallest transitive relation containing f that absorbs the zero-distance
/// relation on both sides; the finite realization of the smallest closed
/// transitive relation containing f.
inline Relation transitive_closure_relation(const SpaceModel& space, const Relation& f,
                                            double tau_zero = 0.0) {
    const Relation z = zero_relation(space, tau_zero);
    return transitive_closure(compose(compose(z, f), z));
}

struct QuotientSpace {
    ChainKind kind = ChainKind::conley;
    IndexSet carrier;                  // the recurrent set
    std::vector<IndexSet> classes;     // partition of carrier, by min member
    Matrix qdist;                      // symmetrized barrier between class representatives
};

/// Quotient of the recurrent set by the zero set of the symmetrized barrier.
/// Exact only at eps = 0. For the bound kind the quotient distance satisfies
/// the strong triangle inequality.
inline QuotientSpace quotient(const SpaceModel& space, const ChainStructure& cs) {
    if (cs.eps != 0.0) throw EpsilonError("quotient requires a structure at eps = 0");
    BarrierMatrix base = barrier(space, cs.relation,
                                 cs.kind == ChainKind::conley ? BarrierKind::bound
                                                              : BarrierKind::length);
    BarrierMatrix sym = symmetrize(base);
    QuotientSpace q;
    q.kind = cs.kind;
    q.carrier = cs.recurrent;
    q.classes = cs.components;
    // Guard: the zero classes of the symmetrized barrier must be the chain
    // components. This is a theorem for the finite structure; a mismatch
    // means an implementation bug.
    for (Index i = 0; i < q.carrier.size(); ++i)
        for (Index j = 0; j < q.carrier.size(); ++j) {
            const Index x = q.carrier[i], y = q.carrier[j];
            const bool zero = sym.values.at(x, y) == 0.0;
            const bool same = cs.node_of[x] == cs.node_of[y];
            if (zero != same)
                throw IdentityError("symmetrized barrier zero classes disagree with components");
        }
    const Index k = q.classes.size();
    q.qdist = Matrix(k);
    for (Index a = 0; a < k; ++a)
        for (Index b = 0; b < k; ++b)
            q.qdist.at(a, b) = sym.values.at(q.classes[a].front(), q.classes[b].front());
    return q;
}

/// Partition of the space by minimax connectivity at gap delta: classes of
/// the threshold graph {d <= delta}. At delta = 0 these are the
/// zero-distance classes; on a genuine metric, singletons.
inline std::vector<IndexSet> quasi_components(const SpaceModel& space, double delta = 0.0) {
    const Index n = space.size();
    std::vector<Index> parent(n);
    std::iota(parent.begin(), parent.end(), Index{0});
    std::function<Index(Index)> find = [&](Index v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (Index i = 0; i < n; ++i)
        for (Index j = i + 1; j < n; ++j)
            if (space.d(i, j) <= delta) parent[find(i)] = find(j);
    std::vector<IndexSet> groups(n);
    for (Index i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<IndexSet> out;
    for (auto& g : groups)
        if (!g.empty()) out.push_back(std::move(g));
    std::sort(out.begin(), out.end(),
              [](const IndexSet& a, const IndexSet& b) { return a.front() < b.front(); });
    return out;
}

} // namespace chainrec
