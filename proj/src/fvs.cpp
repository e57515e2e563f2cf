#include "enumk/fvs.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <bit>
#include <climits>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "enumk/base64.hpp"
#include "enumk/subsets.hpp"

namespace enumk {

namespace {

void remove_vertices(MultiGraph& g, const VertexSet& vs) {
    for (VertexId v : vs) g.remove_vertex(v);
}

int entry_k_after(const FvsEntry& entry) {
    return std::visit([](const auto& e) { return e.k_after; }, entry);
}

// Index-compressed adjacency bitsets so the common-neighbour rule can scan
// all vertex pairs with popcounts instead of set intersections.
struct BitAdjacency {
    VertexSet ids;
    std::size_t words = 0;
    std::vector<std::vector<std::uint64_t>> rows;

    explicit BitAdjacency(const MultiGraph& g) : ids(g.vertices()) {
        words = (ids.size() + 63) / 64;
        rows.assign(ids.size(), std::vector<std::uint64_t>(words, 0));
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (VertexId w : g.neighbors(ids[i])) {
                std::size_t j =
                    std::lower_bound(ids.begin(), ids.end(), w) - ids.begin();
                rows[i][j / 64] |= std::uint64_t{1} << (j % 64);
            }
    }

    // |N(u) & N(v)| over vertices distinct from u and v: rows never contain
    // their own vertex, so the intersection cannot contain u or v.
    int common(std::size_t i, std::size_t j) const {
        int total = 0;
        for (std::size_t w = 0; w < words; ++w)
            total += std::popcount(rows[i][w] & rows[j][w]);
        return total;
    }
};

}  // namespace

// ----------------------------- local rules ---------------------------------

std::optional<FvsRuleOutcome> fvs_rule_basic(const MultiGraph& g, int k) {
    VertexSet vs = g.vertices();
    // (i) multiplicity >= 3 capped to 2, loops included; least pair (u, w)
    for (VertexId u : vs)
        for (const auto& [w, m] : g.adjacency(u)) {
            if (w < u) continue;
            count_step();
            if (m >= 3) {
                FvsRuleOutcome out{g, k, FvsBasicEntry{FvsBasicCase::CapMultiplicity, u, w, k, k}};
                out.g.set_edge_mult(u, w, 2);
                return out;
            }
        }
    // (ii) degree <= 1 vertices disappear
    for (VertexId v : vs)
        if (g.degree(v) <= 1) {
            FvsRuleOutcome out{g, k, FvsBasicEntry{FvsBasicCase::RemovePendant, 0, v, k, k}};
            out.g.remove_vertex(v);
            return out;
        }
    // (iii) >= k+2 common neighbours force a double edge (the pair survives
    // in no solution without one endpoint, else a 4-cycle remains)
    if (vs.size() >= 3) {
        BitAdjacency bits(g);
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = i + 1; j < vs.size(); ++j) {
                if (g.edge_mult(vs[i], vs[j]) >= 2) continue;
                if (bits.common(i, j) >= k + 2) {
                    FvsRuleOutcome out{
                        g, k, FvsBasicEntry{FvsBasicCase::AddCommonDouble, vs[i], vs[j], k, k}};
                    out.g.set_edge_mult(vs[i], vs[j], 2);
                    return out;
                }
            }
    }
    // (iv) a loop, or >= k+1 distinct double-edge neighbours: v is in every
    // solution within budget
    for (VertexId v : vs) {
        bool heavy = g.has_loop(v);
        if (!heavy) {
            int doubles = 0;
            for (const auto& [w, m] : g.adjacency(v))
                if (w != v && m >= 2) ++doubles;
            heavy = doubles >= k + 1;
        }
        if (heavy) {
            FvsRuleOutcome out{g, k - 1, FvsBasicEntry{FvsBasicCase::RemoveHeavy, 0, v, k, k - 1}};
            out.g.remove_vertex(v);
            return out;
        }
    }
    return std::nullopt;
}

std::optional<FvsRuleOutcome> fvs_rule_short_path(const MultiGraph& g, int k) {
    std::optional<std::array<VertexId, 3>> best;  // (a, x, b)
    for (VertexId x : g.vertices()) {
        if (g.degree(x) != 2) continue;
        VertexSet nb = g.neighbors(x);
        if (nb.size() != 2) continue;  // excludes loops and double edges
        VertexId a = nb[0], b = nb[1];
        if (g.edge_mult(a, b) != 0) continue;  // ab must be absent
        std::array<VertexId, 3> cand{a, x, b};
        if (!best || cand < *best) best = cand;
    }
    if (!best) return std::nullopt;
    auto [a, x, b] = *best;
    return FvsRuleOutcome{contract(g, x, a), k, FvsShortPathEntry{a, x, b, g, k, k}};
}

std::optional<FvsRuleOutcome> fvs_rule_twin_triangle(const MultiGraph& g, int k) {
    std::optional<std::array<VertexId, 3>> best;  // (u, x, y)
    for (VertexId x : g.vertices()) {
        if (g.degree(x) != 2) continue;
        VertexSet nbx = g.neighbors(x);
        if (nbx.size() != 2) continue;
        for (VertexId y : nbx) {
            if (y < x || g.degree(y) != 2) continue;
            VertexId u = nbx[0] == y ? nbx[1] : nbx[0];
            VertexSet nby = g.neighbors(y);
            if (nby != make_set({u, x})) continue;
            std::array<VertexId, 3> cand{u, x, y};
            if (!best || cand < *best) best = cand;
        }
    }
    if (!best) return std::nullopt;
    auto [u, x, y] = *best;
    FvsRuleOutcome out{g, k, FvsTwinTriangleEntry{u, x, y, k, k}};
    out.g.remove_vertex(y);
    out.g.set_edge_mult(u, x, 2);
    return out;
}

std::optional<FvsRuleOutcome> fvs_rule_pending_doubles(const MultiGraph& g, int k) {
    for (VertexId u : g.vertices()) {
        VertexSet eps;  // degree-2 double-edge neighbours: their only edges
        for (const auto& [w, m] : g.adjacency(u))
            if (w != u && m >= 2 && g.degree(w) == 2) eps.push_back(w);
        if (eps.empty()) continue;
        FvsRuleOutcome out{g, k - 1, FvsPendingDoublesEntry{u, eps, g, k, k - 1}};
        out.g.remove_vertex(u);
        remove_vertices(out.g, eps);
        return out;
    }
    return std::nullopt;
}

std::optional<FvsRuleOutcome> fvs_rule_multiflag(const MultiGraph& g, int k) {
    VertexSet vs = g.vertices();
    for (VertexId a : vs)
        for (VertexId b : vs) {
            if (b == a || g.edge_mult(a, b) < 1 || g.has_loop(b)) continue;
            VertexSet eps;  // degree-2 common neighbours, single edges to both
            for (VertexId w : g.neighbors(b)) {
                if (w == a) continue;
                if (g.degree(w) == 2 && g.edge_mult(w, a) == 1 && g.edge_mult(w, b) == 1)
                    eps.push_back(w);
            }
            if (eps.empty()) continue;
            if (g.neighbors(b) != set_union(eps, VertexSet{a})) continue;
            FvsRuleOutcome out{g, k - 1, FvsMultiFlagEntry{a, b, eps, g, k, k - 1}};
            out.g.remove_vertex(a);
            out.g.remove_vertex(b);
            remove_vertices(out.g, eps);
            return out;
        }
    return std::nullopt;
}

FvsRuleOutcome fvs_rule_flower(const MultiGraph& g, int k, VertexId v) {
    if (!g.has_vertex(v)) throw usage_error("fvs_rule_flower: vertex not in the graph");
    FvsRuleOutcome out{g, k - 1, FvsFlowerEntry{v, k, k - 1}};
    out.g.remove_vertex(v);
    return out;
}

// --------------------------- 2-approximation -------------------------------

namespace {

// A cycle of h with at most one vertex of degree >= 3, if one exists. The
// degree-2 vertices induce disjoint paths and cycles; an induced cycle is
// semidisjoint outright, and a path whose two outward attachment edges meet
// the same vertex closes one through it.
std::optional<VertexSet> find_semidisjoint_cycle(const MultiGraph& h) {
    VertexSet deg2;
    for (VertexId v : h.vertices())
        if (h.degree(v) == 2) deg2.push_back(v);
    if (deg2.empty()) return std::nullopt;
    MultiGraph sub = h.induced(deg2);
    for (const VertexSet& comp : connected_components(sub)) {
        if (!is_forest(sub.induced(comp))) return comp;
        std::vector<VertexId> out;
        for (VertexId v : comp)
            for (const auto& [w, m] : h.adjacency(v))
                if (!set_contains(comp, w))
                    for (int i = 0; i < m; ++i) out.push_back(w);
        if (out.size() == 2 && out[0] == out[1]) return set_union(comp, VertexSet{out[0]});
    }
    return std::nullopt;
}

}  // namespace

VertexSet two_approx_fvs(const MultiGraph& g) {
    MultiGraph h = g;
    auto cleanup = [&h]() {
        bool again = true;
        while (again) {
            again = false;
            for (VertexId v : h.vertices())
                if (h.degree(v) <= 1) {
                    h.remove_vertex(v);
                    again = true;
                }
        }
    };
    std::map<VertexId, mpq_class> weight;
    for (VertexId v : h.vertices()) weight[v] = 1;
    std::vector<VertexId> picked;
    cleanup();
    while (h.num_vertices() > 0) {
        // loops are mandatory picks
        bool haveLoop = false;
        for (VertexId v : h.vertices())
            if (h.has_loop(v)) {
                picked.push_back(v);
                h.remove_vertex(v);
                haveLoop = true;
                break;
            }
        if (haveLoop) {
            cleanup();
            continue;
        }
        if (auto semi = find_semidisjoint_cycle(h)) {
            mpq_class gamma;
            bool first = true;
            for (VertexId v : *semi)
                if (first || weight[v] < gamma) {
                    gamma = weight[v];
                    first = false;
                }
            for (VertexId v : *semi) weight[v] -= gamma;
        } else {
            mpq_class gamma;
            bool first = true;
            for (VertexId v : h.vertices()) {
                mpq_class cand = weight[v] / mpq_class(h.degree(v) - 1);
                if (first || cand < gamma) {
                    gamma = cand;
                    first = false;
                }
            }
            for (VertexId v : h.vertices()) weight[v] -= gamma * mpq_class(h.degree(v) - 1);
        }
        for (VertexId v : h.vertices())
            if (weight[v] == 0) {
                picked.push_back(v);
                h.remove_vertex(v);
            }
        cleanup();
    }
    // reverse scan: drop picks that later picks made redundant
    VertexSet sol = make_set(picked);
    for (auto it = picked.rbegin(); it != picked.rend(); ++it) {
        VertexSet cand = set_minus(sol, VertexSet{*it});
        if (is_forest(g, cand)) sol = cand;
    }
    return sol;
}

// --------------------------- flower or hitting -----------------------------

FlowerResult flower_or_hitting(const MultiGraph& g, const VertexSet& X, VertexId x, int k) {
    FlowerResult res;
    if (k < 0) {
        res.no_instance = true;
        return res;
    }
    if (!g.has_vertex(x)) throw usage_error("flower_or_hitting: x not in the graph");
    if ((int)X.size() > 2 * k)
        throw usage_error("flower_or_hitting: approximate solution larger than 2k");
    if (!is_forest(g, X))
        throw usage_error("flower_or_hitting: X is not a feedback vertex set");
    if (g.has_loop(x)) throw usage_error("flower_or_hitting: x carries a loop");

    VertexSet rest = set_minus(X, VertexSet{x});
    VertexSet excludedAll = set_union(rest, VertexSet{x});

    // attachment multiplicity of x on the forest G - (X - x) - x; a double
    // edge closes a petal at its endpoint alone, so 2 tokens suffice
    std::map<VertexId, int> amult;
    for (const auto& [w, m] : g.adjacency(x))
        if (w != x && !set_contains(rest, w)) amult[w] = std::min(m, 2);

    std::vector<VertexSet> petals;
    std::vector<VertexId> hit;
    for (const VertexSet& comp : connected_components(g, excludedAll)) {
        // rooted BFS tree of the component
        VertexId root = comp[0];
        std::map<VertexId, VertexId> parent;
        std::vector<VertexId> order;
        std::vector<VertexId> queue{root};
        parent[root] = root;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            VertexId v = queue[qi];
            order.push_back(v);
            for (VertexId w : g.neighbors(v)) {
                if (set_contains(excludedAll, w) || parent.count(w)) continue;
                parent[w] = v;
                queue.push_back(w);
            }
        }
        std::map<VertexId, std::vector<VertexId>> children;
        for (VertexId v : order)
            if (v != root) children[parent[v]].push_back(v);
        // bottom-up: close a petal wherever two attachment tokens meet; the
        // closing vertex joins the hitting set, nothing crosses it afterwards
        std::map<VertexId, int> exposed;
        std::map<VertexId, VertexId> token;
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            VertexId v = *it;
            std::vector<VertexId> toks;
            if (auto f = amult.find(v); f != amult.end()) {
                toks.push_back(v);
                if (f->second >= 2) toks.push_back(v);
            }
            for (VertexId c : children[v])
                if (exposed[c] > 0) toks.push_back(token[c]);
            if (toks.size() >= 2) {
                hit.push_back(v);
                VertexSet petal{x};
                for (int t = 0; t < 2; ++t)
                    for (VertexId cur = toks[t]; cur != v; cur = parent[cur]) set_insert(petal, cur);
                set_insert(petal, v);
                petals.push_back(petal);
                exposed[v] = 0;
            } else {
                exposed[v] = (int)toks.size();
                if (!toks.empty()) token[v] = toks[0];
            }
        }
    }

    if ((int)petals.size() >= k + 1) {
        res.has_flower = true;
        res.petals = std::move(petals);
        return res;
    }
    res.hitting = set_union(rest, make_set(hit));
    if ((int)res.hitting.size() > 3 * k)
        throw internal_error("flower_or_hitting: hitting set exceeds 3k");
    return res;
}

// -------------------------- auxiliary structure ----------------------------

AuxBipartite build_aux(const MultiGraph& g, VertexId v, const VertexSet& heads, int k) {
    if (!g.has_vertex(v)) throw usage_error("build_aux: v not in the graph");
    for (VertexId u : heads)
        if (u == v || !g.has_vertex(u)) throw usage_error("build_aux: invalid head set");
    AuxBipartite aux;
    aux.v = v;
    aux.heads = heads;
    VertexSet excl = set_union(heads, VertexSet{v});
    for (const VertexSet& comp : connected_components(g, excl)) {
        int attachments = 0;
        for (VertexId w : comp) {
            int m = g.edge_mult(v, w);
            if (m >= 2) throw internal_error("build_aux: double edge from v into a component");
            if (m == 1) ++attachments;
        }
        if (attachments == 0) continue;
        if (attachments > 1)
            throw internal_error("build_aux: component with two attachment edges");
        aux.components.push_back(comp);
        VertexSet hs;
        for (VertexId u : heads)
            for (VertexId w : comp)
                if (g.edge_mult(u, w) > 0) {
                    hs.push_back(u);
                    break;
                }
        if (hs.empty()) throw internal_error("build_aux: component with no head neighbour");
        aux.head_sets.push_back(hs);
    }
    if ((int)aux.components.size() <= 3 * k * (k + 1))
        throw internal_error("build_aux: too few attached components for the degree threshold");
    for (VertexId u : heads)
        if (g.edge_mult(u, v) == 2) set_insert(aux.doubled_heads, u);
    return aux;
}

std::optional<FvsRuleOutcome> fvs_rule_aux_double(const MultiGraph& g, int k,
                                                  const AuxBipartite& aux) {
    for (VertexId u : aux.heads) {
        if (g.edge_mult(u, aux.v) >= 2) continue;
        int deg = 0;
        for (const VertexSet& hs : aux.head_sets)
            if (set_contains(hs, u)) ++deg;
        if (deg >= k + 2) {
            FvsRuleOutcome out{g, k, FvsAuxDoubleEntry{u, aux.v, k, k}};
            out.g.set_edge_mult(u, aux.v, 2);
            return out;
        }
    }
    return std::nullopt;
}

std::optional<FvsRuleOutcome> fvs_rule_edge_delete(const MultiGraph& g, int k,
                                                   const AuxBipartite& aux) {
    VertexSet doubled;
    for (VertexId u : aux.heads)
        if (g.edge_mult(u, aux.v) == 2) set_insert(doubled, u);
    for (std::size_t i = 0; i < aux.components.size(); ++i) {
        VertexId w = 0;
        bool alive = false;
        for (VertexId z : aux.components[i])
            if (g.edge_mult(aux.v, z) == 1) {
                w = z;
                alive = true;
                break;
            }
        if (!alive) continue;  // attachment already deleted this phase
        if (!set_minus(aux.head_sets[i], doubled).empty()) continue;
        FvsRuleOutcome out{g, k, FvsEdgeDeleteEntry{aux.v, w, k, k}};
        out.g.set_edge_mult(aux.v, w, 0);
        return out;
    }
    return std::nullopt;
}

// ------------------------------ compression --------------------------------

FvsKernel fvs_compress(const MultiGraph& g, int k) {
    FvsKernel kern;
    kern.graph = g;
    kern.k = k;
    MultiGraph& cur = kern.graph;
    int& kk = kern.k;

    // Generous application cap: every rule either shrinks |V| + total
    // multiplicity or doubles a pair at most once ever, so a legitimate run
    // stays far below it.
    long long n0 = (long long)cur.num_vertices();
    long long cap = 2 * (n0 * n0 + n0 + cur.total_multiplicity() + std::max(k, 0) + 16);
    long long steps = 0;
    auto note = [&](FvsRuleOutcome&& o) {
        cur = std::move(o.g);
        kk = o.k;
        kern.trace.entries.push_back(std::move(o.entry));
        if (++steps > cap) throw internal_error("fvs_compress: rule application cap exceeded");
    };

    for (;;) {
        if (kk < 0) {
            kern.no_instance = true;
            return kern;
        }
        if (auto o = fvs_rule_basic(cur, kk)) {
            note(std::move(*o));
            continue;
        }
        if (auto o = fvs_rule_short_path(cur, kk)) {
            note(std::move(*o));
            continue;
        }
        if (auto o = fvs_rule_twin_triangle(cur, kk)) {
            note(std::move(*o));
            continue;
        }
        if (auto o = fvs_rule_pending_doubles(cur, kk)) {
            note(std::move(*o));
            continue;
        }
        if (auto o = fvs_rule_multiflag(cur, kk)) {
            note(std::move(*o));
            continue;
        }
        // high-degree phase
        long long thr = 3LL * kk * (kk + 1) + 5LL * kk;
        VertexId hv = 0;
        bool found = false;
        for (VertexId v : cur.vertices())
            if (cur.degree(v) > thr) {
                hv = v;
                found = true;
                break;
            }
        if (!found) break;
        VertexSet X = two_approx_fvs(cur);
        if ((int)X.size() > 2 * kk) {
            kern.no_instance = true;
            return kern;
        }
        FlowerResult fr = flower_or_hitting(cur, X, hv, kk);
        if (fr.no_instance) {
            kern.no_instance = true;
            return kern;
        }
        if (fr.has_flower) {
            note(fvs_rule_flower(cur, kk, hv));
            continue;
        }
        AuxBipartite aux = build_aux(cur, hv, fr.hitting, kk);
        while (auto o = fvs_rule_aux_double(cur, kk, aux)) note(std::move(*o));
        int deletions = 0;
        while (auto o = fvs_rule_edge_delete(cur, kk, aux)) {
            note(std::move(*o));
            ++deletions;
        }
        if (deletions == 0)
            throw internal_error("fvs_compress: auxiliary phase deleted no edge");
    }

    // quiescent with kk >= 0 and max degree within the threshold
    long long thr = 3LL * kk * (kk + 1) + 5LL * kk;
    if (cur.num_vertices() > 0 && (long long)cur.num_vertices() > (long long)kk * thr) {
        kern.no_instance = true;
        return kern;
    }
    if ((long long)cur.num_vertices() > 3LL * kk * kk * kk + 8LL * kk * kk)
        throw internal_error("fvs_compress: kernel vertex bound violated");
    for (VertexId v : cur.vertices())
        if (cur.degree(v) > thr) throw internal_error("fvs_compress: kernel degree bound violated");

    // the kernel may still be infeasible; one probe settles it
    SolutionStream probe = fvs_kernel_solutions(cur, kk);
    if (!probe.next()) {
        kern.no_instance = true;
        return kern;
    }
    return kern;
}

// -------------------------- kernel enumeration -----------------------------

namespace {

// Shortest cycle of g as a vertex set: loops first, then double edges, then
// BFS girth over the simple skeleton. For the final minimum the two BFS
// paths are disjoint, so the returned set is exactly a cycle.
std::optional<VertexSet> find_short_cycle(const MultiGraph& g) {
    VertexSet vs = g.vertices();
    for (VertexId v : vs)
        if (g.has_loop(v)) return VertexSet{v};
    for (VertexId v : vs)
        for (const auto& [w, m] : g.adjacency(v)) {
            if (w <= v) continue;
            count_step();
            if (m >= 2) return make_set({v, w});
        }
    std::optional<VertexSet> best;
    int bestLen = INT_MAX;
    for (VertexId s : vs) {
        std::map<VertexId, int> dist;
        std::map<VertexId, VertexId> par;
        std::vector<VertexId> queue{s};
        dist[s] = 0;
        par[s] = s;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            VertexId v = queue[qi];
            for (VertexId w : g.neighbors(v))
                if (!dist.count(w)) {
                    dist[w] = dist[v] + 1;
                    par[w] = v;
                    queue.push_back(w);
                }
        }
        for (VertexId u : queue)
            for (VertexId w : g.neighbors(u)) {
                if (w <= u || !dist.count(w)) continue;
                if (par[u] == w || par[w] == u) continue;
                int len = dist[u] + dist[w] + 1;
                if (len < bestLen) {
                    bestLen = len;
                    VertexSet cyc{s};
                    for (VertexId cur : {u, w})
                        for (; cur != s; cur = par[cur]) set_insert(cyc, cur);
                    best = cyc;
                }
            }
    }
    return best;
}

// Any cycle, found by DFS; cheaper than the girth scan, used for the
// disjoint-packing lower bound only.
std::optional<VertexSet> find_any_cycle(const MultiGraph& g) {
    VertexSet vs = g.vertices();
    for (VertexId v : vs)
        if (g.has_loop(v)) return VertexSet{v};
    for (VertexId v : vs)
        for (const auto& [w, m] : g.adjacency(v)) {
            if (w <= v) continue;
            if (m >= 2) return make_set({v, w});
        }
    std::map<VertexId, int> state;  // 1 on stack, 2 done
    std::map<VertexId, VertexId> par;
    VertexSet cyc;
    std::function<bool(VertexId)> dfs = [&](VertexId v) -> bool {
        state[v] = 1;
        for (VertexId w : g.neighbors(v)) {
            if (w == par[v]) continue;
            auto it = state.find(w);
            if (it == state.end()) {
                par[w] = v;
                if (dfs(w)) return true;
            } else if (it->second == 1) {
                for (VertexId cur = v; cur != w; cur = par[cur]) set_insert(cyc, cur);
                set_insert(cyc, w);
                return true;
            }
        }
        state[v] = 2;
        return false;
    };
    for (VertexId r : vs)
        if (!state.count(r)) {
            par[r] = r;
            if (dfs(r)) return cyc;
        }
    return std::nullopt;
}

// Vertex-disjoint cycles found greedily; every solution needs one fresh
// vertex per cycle, which bounds the remaining budget from below.
int packing_bound(const MultiGraph& g) {
    MultiGraph work = g;
    int count = 0;
    while (auto cyc = find_any_cycle(work)) {
        ++count;
        remove_vertices(work, *cyc);
    }
    return count;
}

SolutionStream fvs_branch(const MultiGraph* base, int k, VertexSet included, VertexSet excluded) {
    MultiGraph work = base->induced(set_minus(base->vertices(), included));
    // dead branch: some cycle consists of excluded vertices only
    if (!is_forest(work.induced(excluded))) co_return;
    auto cyc = find_short_cycle(work);
    if (!cyc) {
        int r = k - (int)included.size();
        VertexSet undecided = set_minus(set_minus(base->vertices(), included), excluded);
        for (VertexSet extra : subsets_up_to(undecided, r))
            co_yield set_union(included, extra);
        co_return;
    }
    if ((int)included.size() + packing_bound(work) > k) co_return;
    VertexSet exc = excluded;
    for (VertexId v : *cyc) {
        if (set_contains(exc, v)) continue;
        if ((int)included.size() + 1 <= k) {
            VertexSet inc = included;
            set_insert(inc, v);
            for (VertexSet s : fvs_branch(base, k, inc, exc)) co_yield std::move(s);
        }
        set_insert(exc, v);
    }
    co_return;
}

}  // namespace

SolutionStream fvs_kernel_solutions(MultiGraph g, int k) {
    if (k < 0) co_return;
    for (VertexSet s : fvs_branch(&g, k, {}, {})) co_yield std::move(s);
}

// -------------------------------- lifting ----------------------------------

SolutionStream fvs_lift_entry(FvsEntry entry, VertexSet sprime) {
    if ((int)sprime.size() > entry_k_after(entry))
        throw usage_error("fvs_lift_entry: solution exceeds the entry budget");

    if (auto* e = std::get_if<FvsBasicEntry>(&entry)) {
        switch (e->c) {
            case FvsBasicCase::CapMultiplicity:
            case FvsBasicCase::AddCommonDouble:
                co_yield std::move(sprime);
                co_return;
            case FvsBasicCase::RemovePendant:
                co_yield sprime;
                if ((int)sprime.size() < e->k_before)
                    co_yield set_union(sprime, VertexSet{e->v});
                co_return;
            case FvsBasicCase::RemoveHeavy:
                co_yield set_union(sprime, VertexSet{e->v});
                co_return;
        }
        co_return;
    }
    if (auto* e = std::get_if<FvsShortPathEntry>(&entry)) {
        co_yield sprime;
        if (set_contains(sprime, e->a)) {
            VertexSet swapped = set_union(set_minus(sprime, VertexSet{e->a}), VertexSet{e->x});
            if (is_forest(e->pre, swapped)) co_yield std::move(swapped);
            if ((int)sprime.size() <= e->k_before - 1)
                co_yield set_union(sprime, VertexSet{e->x});
        }
        co_return;
    }
    if (auto* e = std::get_if<FvsTwinTriangleEntry>(&entry)) {
        co_yield sprime;
        if (set_contains(sprime, e->x)) {
            co_yield set_union(set_minus(sprime, VertexSet{e->x}), VertexSet{e->y});
            if ((int)sprime.size() <= e->k_before - 1)
                co_yield set_union(sprime, VertexSet{e->y});
        }
        co_return;
    }
    if (auto* e = std::get_if<FvsPendingDoublesEntry>(&entry)) {
        int slack = e->k_before - (int)sprime.size();  // >= 1
        co_yield set_union(sprime, VertexSet{e->u});
        if ((int)e->eps.size() <= slack && is_forest(e->pre, set_union(sprime, e->eps)))
            co_yield set_union(sprime, e->eps);
        VertexSet withU = set_union(sprime, VertexSet{e->u});
        for (VertexSet z : subsets_up_to(e->eps, slack - 1))
            if (!z.empty()) co_yield set_union(withU, z);
        co_return;
    }
    if (auto* e = std::get_if<FvsMultiFlagEntry>(&entry)) {
        int slack = e->k_before - (int)sprime.size();  // >= 1
        VertexSet withA = set_union(sprime, VertexSet{e->a});
        co_yield withA;
        for (VertexSet z : subsets_up_to(set_union(e->eps, VertexSet{e->b}), slack - 1))
            if (!z.empty()) co_yield set_union(withA, z);
        VertexSet withB = set_union(sprime, VertexSet{e->b});
        if (is_forest(e->pre, set_union(withB, e->eps))) {
            // with b gone the flag vertices hang off a as pendants, so one
            // guard covers every subset below
            for (VertexSet z : subsets_up_to(e->eps, slack - 1))
                co_yield set_union(withB, z);
        }
        if ((int)e->eps.size() <= slack && is_forest(e->pre, set_union(sprime, e->eps)))
            co_yield set_union(sprime, e->eps);
        co_return;
    }
    if (auto* e = std::get_if<FvsFlowerEntry>(&entry)) {
        co_yield set_union(sprime, VertexSet{e->v});
        co_return;
    }
    // aux-double and edge-delete entries change the solution set not at all
    co_yield std::move(sprime);
    co_return;
}

namespace {

SolutionStream fvs_lift_from(const FvsTrace* trace, std::size_t idx, VertexSet s) {
    if (idx == 0) {
        co_yield std::move(s);
        co_return;
    }
    for (VertexSet up : fvs_lift_entry(trace->entries[idx - 1], s))
        for (VertexSet full : fvs_lift_from(trace, idx - 1, std::move(up)))
            co_yield std::move(full);
}

}  // namespace

SolutionStream fvs_lift(const FvsTrace& trace, VertexSet kernel_solution) {
    return fvs_lift_from(&trace, trace.entries.size(), std::move(kernel_solution));
}

SolutionStream fvs_enumerate(MultiGraph g, int k) {
    FvsKernel kern = fvs_compress(g, k);
    if (kern.no_instance) co_return;
    for (VertexSet ks : fvs_kernel_solutions(kern.graph, kern.k))
        for (VertexSet s : fvs_lift(kern.trace, std::move(ks)))
            co_yield std::move(s);
}

// ----------------------------- serialization -------------------------------

namespace {

std::string id_list(const VertexSet& s) {
    if (s.empty()) return "-";
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(s[i]);
    }
    return out;
}

std::string graph_payload(const MultiGraph& g) { return base64_encode(serialize_graph(g)); }

}  // namespace

std::string serialize_fvs_trace(const FvsTrace& trace) {
    std::ostringstream out;
    for (const FvsEntry& entry : trace.entries) {
        if (auto* e = std::get_if<FvsBasicEntry>(&entry)) {
            out << "basic kind=";
            switch (e->c) {
                case FvsBasicCase::CapMultiplicity:
                    out << "cap u=" << e->u << " v=" << e->v;
                    break;
                case FvsBasicCase::RemovePendant:
                    out << "pendant v=" << e->v;
                    break;
                case FvsBasicCase::AddCommonDouble:
                    out << "common u=" << e->u << " v=" << e->v;
                    break;
                case FvsBasicCase::RemoveHeavy:
                    out << "heavy v=" << e->v;
                    break;
            }
            out << " kb=" << e->k_before << " ka=" << e->k_after << "\n";
        } else if (auto* e = std::get_if<FvsShortPathEntry>(&entry)) {
            out << "shortpath a=" << e->a << " x=" << e->x << " b=" << e->b << " kb=" << e->k_before
                << " ka=" << e->k_after << " graph=" << graph_payload(e->pre) << "\n";
        } else if (auto* e = std::get_if<FvsTwinTriangleEntry>(&entry)) {
            out << "twintriangle u=" << e->u << " x=" << e->x << " y=" << e->y
                << " kb=" << e->k_before << " ka=" << e->k_after << "\n";
        } else if (auto* e = std::get_if<FvsPendingDoublesEntry>(&entry)) {
            out << "pendingdoubles u=" << e->u << " eps=" << id_list(e->eps)
                << " kb=" << e->k_before << " ka=" << e->k_after
                << " graph=" << graph_payload(e->pre) << "\n";
        } else if (auto* e = std::get_if<FvsMultiFlagEntry>(&entry)) {
            out << "multiflag a=" << e->a << " b=" << e->b << " eps=" << id_list(e->eps)
                << " kb=" << e->k_before << " ka=" << e->k_after
                << " graph=" << graph_payload(e->pre) << "\n";
        } else if (auto* e = std::get_if<FvsFlowerEntry>(&entry)) {
            out << "flower v=" << e->v << " kb=" << e->k_before << " ka=" << e->k_after << "\n";
        } else if (auto* e = std::get_if<FvsAuxDoubleEntry>(&entry)) {
            out << "auxdouble u=" << e->u << " v=" << e->v << " kb=" << e->k_before
                << " ka=" << e->k_after << "\n";
        } else if (auto* e = std::get_if<FvsEdgeDeleteEntry>(&entry)) {
            out << "edgedelete v=" << e->v << " w=" << e->w << " kb=" << e->k_before
                << " ka=" << e->k_after << "\n";
        }
    }
    return out.str();
}

MultiGraph replay_fvs_trace(MultiGraph g, const FvsTrace& trace) {
    auto need = [&g](VertexId v) {
        if (!g.has_vertex(v))
            throw internal_error("replay_fvs_trace: entry references a missing vertex");
    };
    for (const FvsEntry& entry : trace.entries) {
        if (auto* e = std::get_if<FvsBasicEntry>(&entry)) {
            switch (e->c) {
                case FvsBasicCase::CapMultiplicity:
                case FvsBasicCase::AddCommonDouble:
                    need(e->u);
                    need(e->v);
                    g.set_edge_mult(e->u, e->v, 2);
                    break;
                case FvsBasicCase::RemovePendant:
                case FvsBasicCase::RemoveHeavy:
                    need(e->v);
                    g.remove_vertex(e->v);
                    break;
            }
        } else if (auto* e = std::get_if<FvsShortPathEntry>(&entry)) {
            need(e->a);
            need(e->x);
            g = contract(g, e->x, e->a);
        } else if (auto* e = std::get_if<FvsTwinTriangleEntry>(&entry)) {
            need(e->y);
            need(e->u);
            need(e->x);
            g.remove_vertex(e->y);
            g.set_edge_mult(e->u, e->x, 2);
        } else if (auto* e = std::get_if<FvsPendingDoublesEntry>(&entry)) {
            need(e->u);
            g.remove_vertex(e->u);
            for (VertexId w : e->eps) {
                need(w);
                g.remove_vertex(w);
            }
        } else if (auto* e = std::get_if<FvsMultiFlagEntry>(&entry)) {
            need(e->a);
            need(e->b);
            g.remove_vertex(e->a);
            g.remove_vertex(e->b);
            for (VertexId w : e->eps) {
                need(w);
                g.remove_vertex(w);
            }
        } else if (auto* e = std::get_if<FvsFlowerEntry>(&entry)) {
            need(e->v);
            g.remove_vertex(e->v);
        } else if (auto* e = std::get_if<FvsAuxDoubleEntry>(&entry)) {
            need(e->u);
            need(e->v);
            g.set_edge_mult(e->u, e->v, 2);
        } else if (auto* e = std::get_if<FvsEdgeDeleteEntry>(&entry)) {
            need(e->v);
            need(e->w);
            g.set_edge_mult(e->v, e->w, 0);
        }
    }
    return g;
}

}  // namespace enumk
