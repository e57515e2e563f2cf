#include "enumk/vc.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

#include "enumk/base64.hpp"
#include "enumk/subsets.hpp"

namespace enumk {

namespace {

// Partner lookup that insists the vertex is matched; crowned instances
// saturate all of H, so a miss means the instance is malformed.
VertexId matched_partner(const Matching& m, VertexId v) {
    std::optional<VertexId> p = m.partner(v);
    if (!p) throw structure_error("crowned instance: head " + std::to_string(v) + " is unmatched");
    return *p;
}

// The instance induced on everything except `removed`.  Only called with
// M-closed removal sets (a head is removed iff its partner is), so the
// result is again a crowned instance.
CrownedInstance crowned_residual(const CrownedInstance& inst, const VertexSet& removed) {
    CrownedInstance sub;
    sub.H = set_minus(inst.H, removed);
    sub.C = set_minus(inst.C, removed);
    sub.g = inst.g.induced(set_union(sub.H, sub.C));
    for (const auto& [a, b] : inst.M.pairs) {
        if (!set_contains(removed, a) && !set_contains(removed, b)) sub.M.add(a, b);
    }
    sub.x = 0;
    return sub;
}

}  // namespace

std::optional<std::string> crowned_violation(const CrownedInstance& inst) {
    VertexSet both = set_intersect(inst.H, inst.C);
    if (!both.empty()) return "H and C overlap";
    VertexSet all = set_union(inst.H, inst.C);
    if (inst.g.vertices() != all) return "vertex set of g must be exactly H u C";
    for (VertexId v : all) {
        for (const auto& [w, mult] : inst.g.adjacency(v)) {
            if (w == v) return "crowned instance must have no loops";
            if (mult != 1) return "crowned instance must be a simple graph";
        }
    }
    for (VertexId c : inst.C) {
        for (VertexId w : inst.g.neighbors(c)) {
            if (set_contains(inst.C, w)) return "C is not independent";
        }
    }
    std::set<VertexId> used;
    for (const auto& [a, b] : inst.M.pairs) {
        bool a_head = set_contains(inst.H, a);
        VertexId h = a_head ? a : b;
        VertexId c = a_head ? b : a;
        if (!set_contains(inst.H, h) || !set_contains(inst.C, c)) return "M pair does not join H to C";
        if (inst.g.edge_mult(h, c) == 0) return "M pair is not an edge of g";
        if (!used.insert(a).second || !used.insert(b).second) return "M reuses a vertex";
    }
    for (VertexId h : inst.H) {
        if (!used.count(h)) return "M does not saturate H";
    }
    return std::nullopt;
}

PropResult prop_x(const CrownedInstance& inst, const VertexSet& X0) {
    for (VertexId v : X0) {
        if (!set_contains(inst.H, v)) {
            throw usage_error("prop_x: start set must consist of heads");
        }
    }
    // Reachability in the orientation: every M-edge points from its head to
    // its crown partner, every other H-C edge points from the crown side to
    // the head, H-H edges carry no arc.
    std::set<VertexId> seen(X0.begin(), X0.end());
    std::vector<VertexId> stack(X0.begin(), X0.end());
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        count_step();
        if (set_contains(inst.H, v)) {
            VertexId c = matched_partner(inst.M, v);
            if (seen.insert(c).second) stack.push_back(c);
        } else {
            VertexId back = matched_partner(inst.M, v);
            for (VertexId h : inst.g.neighbors(v)) {
                count_step();
                if (h == back) continue;  // the M-edge points into v, not out
                if (seen.insert(h).second) stack.push_back(h);
            }
        }
    }
    PropResult r;
    for (VertexId v : seen) {
        (set_contains(inst.H, v) ? r.F : r.Fbar).push_back(v);
    }
    return r;
}

PropResult prop_avoid(const CrownedInstance& inst, VertexId v) {
    if (!inst.is_small()) throw usage_error("prop_avoid: instance must be small");
    if (!set_contains(inst.H, v)) throw usage_error("prop_avoid: vertex must be a head");
    VertexSet Fbar = {v};
    PropResult r;
    while (true) {
        // F := N(Fbar); fail if some whole M-edge is forced in
        VertexSet F;
        for (VertexId u : Fbar) {
            for (VertexId w : inst.g.neighbors(u)) {
                count_step();
                set_insert(F, w);
            }
        }
        for (const auto& [a, b] : inst.M.pairs) {
            count_step();
            if (set_contains(F, a) && set_contains(F, b)) {
                r.failed = true;
                return r;
            }
        }
        // Fbar := M-image of F; fail if it is not independent
        VertexSet next;
        for (VertexId u : F) set_insert(next, matched_partner(inst.M, u));
        for (VertexId u : next) {
            for (VertexId w : inst.g.neighbors(u)) {
                count_step();
                if (w > u && set_contains(next, w)) {
                    r.failed = true;
                    return r;
                }
            }
        }
        if (next == Fbar) {
            r.F = std::move(F);
            r.Fbar = std::move(Fbar);
            return r;
        }
        Fbar = std::move(next);
    }
}

SolutionStream enum_small_crown(CrownedInstance inst) {
    if (inst.g.num_vertices() == 0) {
        co_yield VertexSet{};
        co_return;
    }
    VertexId v = inst.H.front();
    {
        // include branch: v in the cover
        PropResult in = prop_x(inst, {v});
        CrownedInstance sub = crowned_residual(inst, set_union(in.F, in.Fbar));
        for (VertexSet& s : enum_small_crown(std::move(sub))) {
            co_yield set_union(in.F, s);
        }
    }
    // exclude branch: v not in the cover, unless that is unavoidable
    PropResult out = prop_avoid(inst, v);
    if (!out.failed) {
        CrownedInstance sub = crowned_residual(inst, set_union(out.F, out.Fbar));
        for (VertexSet& s : enum_small_crown(std::move(sub))) {
            co_yield set_union(out.F, s);
        }
    }
}

PropBigResult prop_big(const CrownedInstance& inst, const VertexSet& C1, const VertexSet& C2) {
    VertexSet matchedC;
    VertexSet unmatchedC;
    for (VertexId c : inst.C) {
        (inst.M.covers(c) ? matchedC : unmatchedC).push_back(c);
    }
    if (!set_minus(C1, matchedC).empty()) {
        throw usage_error("prop_big: C1 must consist of matched crown vertices");
    }
    if (!set_minus(C2, unmatchedC).empty()) {
        throw usage_error("prop_big: C2 must consist of unmatched crown vertices");
    }
    if (static_cast<int>(C1.size() + C2.size()) != inst.x) {
        throw usage_error("prop_big: |C1| + |C2| must equal the slack");
    }
    PropBigResult r;
    r.X1bar = set_minus(unmatchedC, C2);
    // heads not matched into C1, with their partners
    CrownedInstance sub;
    for (VertexId h : inst.H) {
        VertexId c = matched_partner(inst.M, h);
        if (set_contains(C1, c)) continue;
        sub.H.push_back(h);
        set_insert(sub.C, c);
        sub.M.add(h, c);
    }
    sub.g = inst.g.induced(set_union(sub.H, sub.C));
    // neighbors of the forbidden unmatched crown vertices are forced in
    VertexSet X0;
    for (VertexId c : r.X1bar) {
        for (VertexId h : inst.g.neighbors(c)) {
            count_step();
            if (set_contains(sub.H, h)) set_insert(X0, h);
        }
    }
    PropResult pr = prop_x(sub, X0);
    r.F = std::move(pr.F);
    r.Fbar = std::move(pr.Fbar);
    return r;
}

SolutionStream enum_crown(CrownedInstance inst) {
    if (inst.x < 0 || inst.x > static_cast<int>(inst.C.size())) {
        throw usage_error("enum_crown: slack out of range");
    }
    VertexSet matchedC;
    VertexSet unmatchedC;
    for (VertexId c : inst.C) {
        (inst.M.covers(c) ? matchedC : unmatchedC).push_back(c);
    }
    const int x = inst.x;
    const int dmin = std::max(0, x - static_cast<int>(unmatchedC.size()));
    const int dmax = std::min(x, static_cast<int>(matchedC.size()));
    for (int d = dmin; d <= dmax; ++d) {
        for (VertexSet& C1 : combinations(matchedC, d)) {
            for (VertexSet& C2 : combinations(unmatchedC, x - d)) {
                PropBigResult pb = prop_big(inst, C1, C2);
                VertexSet headsC1;
                for (VertexId c : C1) set_insert(headsC1, matched_partner(inst.M, c));
                // C1, its matched heads, C2 and the propagated heads are in
                // every solution with this signature
                VertexSet forced = set_union(set_union(C1, headsC1), set_union(C2, pb.F));
                // residual small instance on the undecided heads and partners
                CrownedInstance sub;
                sub.H = set_minus(set_minus(inst.H, headsC1), pb.F);
                for (VertexId h : sub.H) {
                    VertexId c = matched_partner(inst.M, h);
                    set_insert(sub.C, c);
                    sub.M.add(h, c);
                }
                sub.g = inst.g.induced(set_union(sub.H, sub.C));
                for (VertexSet& s : enum_small_crown(std::move(sub))) {
                    co_yield set_union(forced, s);
                }
            }
        }
    }
}

VcRuleOutcome vc_rule_isolated(const MultiGraph& g, int k, VertexId v) {
    if (!g.has_vertex(v)) throw usage_error("vc_rule_isolated: no such vertex");
    if (g.degree(v) != 0) throw usage_error("vc_rule_isolated: vertex is not isolated");
    VcRuleOutcome out{g, k, VcIsolatedEntry{v, k, k}};
    out.g.remove_vertex(v);
    return out;
}

VcRuleOutcome vc_rule_crown(const MultiGraph& g, int k, const CrownDecomposition& d) {
    if (std::optional<std::string> why = crown_violation(g, d)) {
        throw usage_error("vc_rule_crown: " + *why);
    }
    if (static_cast<int>(d.H.size()) > k) {
        throw usage_error("vc_rule_crown: |H| exceeds the budget");
    }
    VcCrownEntry e;
    VertexSet hc = set_union(d.H, d.C);
    e.crown_graph = g.induced(hc);
    e.H = d.H;
    e.C = d.C;
    e.M = d.M;
    for (VertexId h : d.H) {
        for (VertexId b : g.neighbors(h)) {
            if (set_contains(d.B, b)) e.hb_edges.emplace_back(h, b);
        }
    }
    e.k_before = k;
    e.k_after = k - static_cast<int>(d.H.size());
    VcRuleOutcome out{g, e.k_after, e};
    for (VertexId v : hc) out.g.remove_vertex(v);
    return out;
}

VcKernel vc_compress(const MultiGraph& g, int k) {
    for (VertexId v : g.vertices()) {
        for (const auto& [w, mult] : g.adjacency(v)) {
            if (w == v || mult > 1) {
                throw usage_error("vc_compress: input must be a simple graph");
            }
        }
    }
    VcKernel out;
    if (k < 0) {
        out.no_instance = true;
        return out;
    }
    MultiGraph cur = g;
    int kk = k;
    while (true) {
        // removing an isolated vertex never isolates another, so one sweep
        // in id order exhausts the rule
        for (VertexId v : cur.vertices()) {
            if (cur.degree(v) != 0) continue;
            VcRuleOutcome step = vc_rule_isolated(cur, kk, v);
            cur = std::move(step.g);
            kk = step.k;
            out.trace.entries.push_back(std::move(step.entry));
        }
        if (static_cast<int>(cur.num_vertices()) <= 2 * kk) break;
        NtResult nt = nt_decompose(cur, kk);
        if (nt.no_half_integral_cover) {
            out.no_instance = true;
            return out;
        }
        VcRuleOutcome step = vc_rule_crown(cur, kk, nt.crown);
        cur = std::move(step.g);
        kk = step.k;
        out.trace.entries.push_back(std::move(step.entry));
    }
    // The kernel is only returned when it actually has a solution: an empty
    // solution set is reported as no_instance, so the two answers coincide
    // exactly with solvability.
    SolutionStream probe = vc_kernel_solutions(cur, kk);
    if (!probe.next()) {
        out.no_instance = true;
        return out;
    }
    out.graph = std::move(cur);
    out.k = kk;
    return out;
}

namespace {

// Greedy maximal matching among the edges not covered by `included`; any
// such matching lower-bounds the number of cover vertices still needed.
int uncovered_matching_bound(const MultiGraph& g, const VertexSet& included) {
    std::set<VertexId> used;
    int size = 0;
    for (VertexId u : g.vertices()) {
        if (set_contains(included, u) || used.count(u) != 0) continue;
        for (VertexId w : g.neighbors(u)) {
            count_step();
            if (w <= u) continue;  // each edge is considered at its lower endpoint
            if (set_contains(included, w) || used.count(w) != 0) continue;
            used.insert(u);
            used.insert(w);
            ++size;
            break;
        }
    }
    return size;
}

SolutionStream branch_cover(const MultiGraph& g, int k, VertexSet included, VertexSet excluded) {
    // least uncovered edge, lexicographic on (min endpoint, max endpoint)
    std::optional<std::pair<VertexId, VertexId>> edge;
    for (VertexId u : g.vertices()) {
        if (set_contains(included, u)) continue;
        for (VertexId w : g.neighbors(u)) {
            count_step();
            if (w < u || set_contains(included, w)) continue;
            edge = {u, w};
            break;
        }
        if (edge) break;
    }
    if (!edge) {
        // all edges covered; pad with subsets of the undecided vertices
        int r = k - static_cast<int>(included.size());
        VertexSet undecided = set_minus(set_minus(g.vertices(), included), excluded);
        for (VertexSet& extra : subsets_up_to(std::move(undecided), r)) {
            co_yield set_union(included, extra);
        }
        co_return;
    }
    const auto [u, w] = *edge;
    const bool u_free = !set_contains(excluded, u);
    const bool w_free = !set_contains(excluded, w);
    if (!u_free && !w_free) co_return;  // the edge can no longer be covered
    if (u_free) {
        VertexSet inc = included;
        set_insert(inc, u);
        if (static_cast<int>(inc.size()) + uncovered_matching_bound(g, inc) <= k) {
            for (VertexSet& s : branch_cover(g, k, std::move(inc), excluded)) co_yield s;
        }
    }
    if (w_free) {
        VertexSet inc = included;
        set_insert(inc, w);
        VertexSet exc = excluded;
        set_insert(exc, u);
        if (static_cast<int>(inc.size()) + uncovered_matching_bound(g, inc) <= k) {
            for (VertexSet& s : branch_cover(g, k, std::move(inc), std::move(exc))) co_yield s;
        }
    }
}

}  // namespace

SolutionStream vc_kernel_solutions(MultiGraph g, int k) {
    if (k < 0) co_return;
    if (uncovered_matching_bound(g, {}) > k) co_return;
    for (VertexSet& s : branch_cover(g, k, {}, {})) co_yield s;
}

SolutionStream vc_lift_isolated(VcIsolatedEntry entry, VertexSet sprime) {
    co_yield sprime;
    if (static_cast<int>(sprime.size()) < entry.k_before) {
        set_insert(sprime, entry.v);
        co_yield sprime;
    }
}

SolutionStream vc_lift_crown(VcCrownEntry entry, VertexSet sprime) {
    const int x = entry.k_after - static_cast<int>(sprime.size());
    if (x < 0) throw usage_error("vc_lift_crown: solution exceeds the entry budget");
    // heads with an edge to an uncovered body vertex are forced in
    VertexSet F;
    for (const auto& [h, b] : entry.hb_edges) {
        count_step();
        if (!set_contains(sprime, b)) set_insert(F, h);
    }
    VertexSet Hp = set_minus(entry.H, F);
    VertexSet base = set_union(sprime, F);
    const int lmax = std::min(static_cast<int>(entry.C.size()), x);
    // solutions with l crown vertices beyond the matched ones have size
    // |base| + |Hp| + l, so the per-l streams are pairwise disjoint
    for (int l = 0; l <= lmax; ++l) {
        CrownedInstance sub;
        sub.H = Hp;
        sub.C = entry.C;
        sub.g = entry.crown_graph.induced(set_union(Hp, entry.C));
        for (const auto& [a, b] : entry.M.pairs) {
            VertexId h = set_contains(entry.H, a) ? a : b;
            if (set_contains(Hp, h)) sub.M.add(a, b);
        }
        sub.x = l;
        for (VertexSet& s : enum_crown(std::move(sub))) {
            co_yield set_union(base, s);
        }
    }
}

namespace {

SolutionStream lift_from(const VcTrace& trace, int idx, VertexSet s) {
    if (idx < 0) {
        co_yield s;
        co_return;
    }
    const VcEntry& e = trace.entries[static_cast<std::size_t>(idx)];
    if (const auto* iso = std::get_if<VcIsolatedEntry>(&e)) {
        for (VertexSet& t : vc_lift_isolated(*iso, std::move(s))) {
            for (VertexSet& out : lift_from(trace, idx - 1, t)) co_yield out;
        }
    } else {
        const auto& crown = std::get<VcCrownEntry>(e);
        for (VertexSet& t : vc_lift_crown(crown, std::move(s))) {
            for (VertexSet& out : lift_from(trace, idx - 1, t)) co_yield out;
        }
    }
}

}  // namespace

SolutionStream vc_lift(const VcTrace& trace, VertexSet kernel_solution) {
    return lift_from(trace, static_cast<int>(trace.entries.size()) - 1, std::move(kernel_solution));
}

SolutionStream vc_enumerate(MultiGraph g, int k) {
    VcKernel kern = vc_compress(g, k);
    if (kern.no_instance) co_return;
    for (VertexSet& s : vc_kernel_solutions(kern.graph, kern.k)) {
        for (VertexSet& out : vc_lift(kern.trace, std::move(s))) co_yield out;
    }
}

namespace {

std::string join_ids(const VertexSet& s) {
    if (s.empty()) return "-";
    std::ostringstream out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i > 0) out << ",";
        out << s[i];
    }
    return out.str();
}

std::string join_pairs(const std::vector<std::pair<VertexId, VertexId>>& ps) {
    if (ps.empty()) return "-";
    std::ostringstream out;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (i > 0) out << ",";
        out << ps[i].first << ":" << ps[i].second;
    }
    return out.str();
}

}  // namespace

std::string serialize_vc_trace(const VcTrace& trace) {
    std::ostringstream out;
    for (const VcEntry& e : trace.entries) {
        if (const auto* iso = std::get_if<VcIsolatedEntry>(&e)) {
            out << "isolated v=" << iso->v << " kb=" << iso->k_before << " ka=" << iso->k_after
                << "\n";
        } else {
            const auto& c = std::get<VcCrownEntry>(e);
            // report M as head:crown regardless of pair normalization
            std::vector<std::pair<VertexId, VertexId>> m;
            for (const auto& [a, b] : c.M.pairs) {
                if (set_contains(c.H, a)) {
                    m.emplace_back(a, b);
                } else {
                    m.emplace_back(b, a);
                }
            }
            std::sort(m.begin(), m.end());
            out << "crown kb=" << c.k_before << " ka=" << c.k_after << " H=" << join_ids(c.H)
                << " C=" << join_ids(c.C) << " M=" << join_pairs(m)
                << " hb=" << join_pairs(c.hb_edges)
                << " graph=" << base64_encode(serialize_graph(c.crown_graph)) << "\n";
        }
    }
    return out.str();
}

}  // namespace enumk
