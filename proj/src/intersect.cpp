#include "dtrack/intersect.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include "dtrack/util.hpp"

namespace dtrack {

namespace {

int resolve_gap(const Pattern& t, const Gap& g) {
    return g.index < 0 ? static_cast<int>(t.on_edge[g.edge].size()) : g.index;
}

bool same_gap(const Pattern& t, const Gap& a, const Gap& b) {
    return a.edge == b.edge && resolve_gap(t, a) == resolve_gap(t, b);
}

bool end_gap_at(const Complex2& Y, const Pattern& t, const Gap& g, int v) {
    int n = static_cast<int>(t.on_edge[g.edge].size());
    int i = resolve_gap(t, g);
    const Edge& E = Y.edges[g.edge];
    return (i == 0 && E.from == v) || (i == n && E.to == v);
}

bool gap_at_frontier(const Complex2& Y, const Pattern& t, const Gap& g) {
    if (Y.frontier_edge[g.edge]) return true;
    int n = static_cast<int>(t.on_edge[g.edge].size());
    int i = resolve_gap(t, g);
    const Edge& E = Y.edges[g.edge];
    return (i == 0 && Y.frontier_vertex[E.from]) || (i == n && Y.frontier_vertex[E.to]);
}

}  // namespace

void check_path(const Complex2& Y, const Pattern& t, const CurvePath& c) {
    if (c.steps.empty()) throw std::invalid_argument("empty path");
    for (std::size_t i = 0; i < c.steps.size(); ++i) {
        const Step& s = c.steps[i];
        for (const Gap& g : {s.in, s.out}) {
            if (g.edge < 0 || g.edge >= Y.num_edges()) throw std::invalid_argument("gap on unknown edge");
            int n = static_cast<int>(t.on_edge[g.edge].size());
            if (g.index > n || g.index < -1) throw std::invalid_argument("gap index out of range");
        }
        switch (s.kind) {
            case Step::Kind::Tri:
                if (s.cell < 0 || s.cell >= Y.num_triangles() || Y.slot_of(s.cell, s.in.edge) < 0 ||
                    Y.slot_of(s.cell, s.out.edge) < 0)
                    throw std::invalid_argument("triangle step leaves its triangle");
                break;
            case Step::Kind::Along:
                if (s.in.edge != s.cell || s.out.edge != s.cell) throw std::invalid_argument("along step leaves its edge");
                break;
            case Step::Kind::Vertex:
                if (!end_gap_at(Y, t, s.in, s.cell) || !end_gap_at(Y, t, s.out, s.cell))
                    throw std::invalid_argument("vertex step between gaps not at the vertex");
                break;
        }
        if (i + 1 < c.steps.size() && !same_gap(t, s.out, c.steps[i + 1].in))
            throw std::invalid_argument("path breaks between steps " + std::to_string(i) + " and " +
                                        std::to_string(i + 1));
    }
    if (c.loop) {
        if (!same_gap(t, c.steps.back().out, c.steps.front().in)) throw std::invalid_argument("loop does not close");
    } else if (!gap_at_frontier(Y, t, c.steps.front().in) || !gap_at_frontier(Y, t, c.steps.back().out)) {
        throw std::invalid_argument("line must start and end at the frontier");
    }
}

namespace {

// Per-pattern lookup shared by many path evaluations.
struct PatternIndex {
    const Complex2& Y;
    const Pattern& t;
    std::vector<int> rank;
    std::vector<std::vector<int>> by_tri;
    std::vector<int> nu;

    PatternIndex(const Complex2& Y_, const Pattern& t_) : Y(Y_), t(t_), rank(t_.ranks()), by_tri(Y_.num_triangles()) {
        for (int c = 0; c < static_cast<int>(t.chords.size()); ++c) by_tri[t.chords[c].tri].push_back(c);
        auto n = point_normals(Y, t);
        if (!n) throw std::invalid_argument("intersection numbers need a coherently oriented pattern");
        nu = *n;
    }

    long evaluate(const CurvePath& c) const {
        long total = 0;
        for (const Step& s : c.steps) {
            if (s.kind == Step::Kind::Vertex) continue;
            if (s.kind == Step::Kind::Along) {
                int g1 = resolve_gap(t, s.in), g2 = resolve_gap(t, s.out);
                const auto& row = t.on_edge[s.cell];
                int dir = g2 > g1 ? 1 : -1;
                for (int r = std::min(g1, g2); r < std::max(g1, g2); ++r) total += nu[row[r]] == dir ? 1 : -1;
                continue;
            }
            auto B = boundary_order(Y, t, s.cell);
            int gin = B.gap_pos(Y.slot_of(s.cell, s.in.edge), resolve_gap(t, s.in));
            int gout = B.gap_pos(Y.slot_of(s.cell, s.out.edge), resolve_gap(t, s.out));
            if (gin == gout) continue;
            for (int ci : by_tri[s.cell]) {
                const Chord& ch = t.chords[ci];
                int pp = B.point_pos(Y.slot_of(s.cell, t.points[ch.p].edge), rank[ch.p]);
                int pq = B.point_pos(Y.slot_of(s.cell, t.points[ch.q].edge), rank[ch.q]);
                if (in_arc(pp, gin, gout, B.total) == in_arc(pq, gin, gout, B.total)) continue;
                bool exit_forward = in_arc(gout, pp, pq, B.total);
                int side = ch.side;
                total += (exit_forward == (side > 0)) ? 1 : -1;
            }
        }
        return total;
    }
};

}  // namespace

long intersection_number(const Complex2& Y, const CurvePath& c, const Pattern& t) {
    check_path(Y, t, c);
    return PatternIndex(Y, t).evaluate(c);
}

CurvePath skeleton_path(const Complex2& Y, const std::vector<int>& edges, int start_vertex, bool loop) {
    CurvePath c;
    c.loop = loop;
    int v = start_vertex;
    Gap prev{-1, 0};
    for (int e : edges) {
        const Edge& E = Y.edges[e];
        bool forward = E.from == v;
        if (!forward && E.to != v) throw std::invalid_argument("edge chain is not connected");
        Gap in{e, forward ? 0 : -1}, out{e, forward ? -1 : 0};
        if (prev.edge >= 0) c.steps.push_back({Step::Kind::Vertex, v, prev, in});
        c.steps.push_back({Step::Kind::Along, e, in, out});
        v = forward ? E.to : E.from;
        prev = out;
    }
    if (loop && !c.steps.empty()) {
        if (v != start_vertex) throw std::invalid_argument("edge chain does not close");
        c.steps.push_back({Step::Kind::Vertex, v, prev, c.steps.front().in});
    }
    return c;
}

Basis equivalence_basis(const Complex2& Y) {
    Basis B;
    // Dual graph: triangles joined through edges; arcs from the first incidence to each other one.
    struct Arc {
        int edge, a, b;
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<int>> adj(Y.num_triangles());
    for (int e = 0; e < Y.num_edges(); ++e)
        for (std::size_t i = 1; i < Y.star[e].size(); ++i) {
            arcs.push_back({e, Y.star[e][0].tri, Y.star[e][i].tri});
            adj[arcs.back().a].push_back(static_cast<int>(arcs.size()) - 1);
            adj[arcs.back().b].push_back(static_cast<int>(arcs.size()) - 1);
        }
    std::vector<int> parent_arc(Y.num_triangles(), -1), root(Y.num_triangles(), -1);
    std::vector<char> tree(arcs.size(), 0);
    for (int r = 0; r < Y.num_triangles(); ++r) {
        if (root[r] >= 0) continue;
        root[r] = r;
        std::deque<int> q{r};
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (int ai : adj[x]) {
                int y = arcs[ai].a == x ? arcs[ai].b : arcs[ai].a;
                if (root[y] >= 0) continue;
                root[y] = r;
                parent_arc[y] = ai;
                tree[ai] = 1;
                q.push_back(y);
            }
        }
    }
    // Triangles and crossed edges from the root down to x.
    auto down_path = [&](int x, std::vector<int>& tris, std::vector<int>& edges) {
        tris.clear();
        edges.clear();
        while (parent_arc[x] >= 0) {
            tris.push_back(x);
            const Arc& a = arcs[parent_arc[x]];
            edges.push_back(a.edge);
            x = a.a == x ? a.b : a.a;
        }
        tris.push_back(x);
        std::reverse(tris.begin(), tris.end());
        std::reverse(edges.begin(), edges.end());
    };
    for (std::size_t ai = 0; ai < arcs.size(); ++ai) {
        if (tree[ai]) continue;
        std::vector<int> ta, ea, tb, eb;
        down_path(arcs[ai].a, ta, ea);
        down_path(arcs[ai].b, tb, eb);
        std::vector<int> tris = ta, crossed = ea;
        crossed.push_back(arcs[ai].edge);
        for (int i = static_cast<int>(tb.size()) - 1; i >= 1; --i) tris.push_back(tb[i]);
        for (int i = static_cast<int>(eb.size()) - 1; i >= 0; --i) crossed.push_back(eb[i]);
        // tris[i] is left through crossed[i]; the last crossing returns to tris[0].
        CurvePath c;
        int k = static_cast<int>(tris.size());
        for (int i = 0; i < k; ++i)
            c.steps.push_back({Step::Kind::Tri, tris[i], Gap{crossed[(i + k - 1) % k], 0}, Gap{crossed[i], 0}});
        c.label = "dual:" + Y.edges[arcs[ai].edge].id + ":" + Y.triangles[arcs[ai].b].id;
        B.loops.push_back(std::move(c));
    }
    // 1-skeleton fundamental cycles.
    SpanningTree T = spanning_tree(Y);
    auto root_path = [&](int v) {
        std::vector<int> up;
        while (T.parent_edge[v] >= 0) {
            int e = T.parent_edge[v];
            up.push_back(e);
            v = Y.edges[e].from == v ? Y.edges[e].to : Y.edges[e].from;
        }
        std::reverse(up.begin(), up.end());
        return std::pair{v, up};
    };
    for (int e = 0; e < Y.num_edges(); ++e) {
        if (T.in_tree[e]) continue;
        auto [r, to_from] = root_path(Y.edges[e].from);
        auto [r2, to_to] = root_path(Y.edges[e].to);
        (void)r2;
        std::vector<int> chain = to_from;
        chain.push_back(e);
        chain.insert(chain.end(), to_to.rbegin(), to_to.rend());
        CurvePath c = skeleton_path(Y, chain, r, true);
        c.label = "edge:" + Y.edges[e].id;
        B.loops.push_back(std::move(c));
    }
    // Lines between frontier regions along shortest 1-skeleton paths.
    int regions = 0;
    auto label = frontier_regions(Y, &regions);
    auto incident = vertex_edges(Y);
    for (int i = 0; i < regions; ++i) {
        int start = -1;
        for (int v = 0; v < Y.num_vertices() && start < 0; ++v)
            if (label[v] == i) start = v;
        std::vector<int> via(Y.num_vertices(), -2);
        via[start] = -1;
        std::deque<int> q{start};
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (int e : incident[x]) {
                int y = Y.edges[e].from == x ? Y.edges[e].to : Y.edges[e].from;
                if (via[y] != -2) continue;
                via[y] = e;
                q.push_back(y);
            }
        }
        for (int j = i + 1; j < regions; ++j) {
            int target = -1;
            for (int v = 0; v < Y.num_vertices() && target < 0; ++v)
                if (label[v] == j && via[v] != -2) target = v;
            if (target < 0) continue;
            std::vector<int> chain;
            for (int v = target; via[v] >= 0;) {
                int e = via[v];
                chain.push_back(e);
                v = Y.edges[e].from == v ? Y.edges[e].to : Y.edges[e].from;
            }
            std::reverse(chain.begin(), chain.end());
            CurvePath c = skeleton_path(Y, chain, start, false);
            c.label = "line:" + std::to_string(i) + "-" + std::to_string(j);
            B.lines.push_back(std::move(c));
        }
    }
    return B;
}

std::vector<long> basis_numbers(const Complex2& Y, const Basis& B, const Pattern& t) {
    PatternIndex idx(Y, t);
    std::vector<long> out;
    for (const auto& c : B.loops) out.push_back(idx.evaluate(c));
    for (const auto& c : B.lines) out.push_back(idx.evaluate(c));
    return out;
}

bool equivalent(const Complex2& Y, const Pattern& t1, const Pattern& t2, const Basis& B) {
    if (!is_two_sided(Y, t1) || !is_two_sided(Y, t2))
        throw std::invalid_argument("equivalence is not defined for one-sided patterns");
    return basis_numbers(Y, B, t1) == basis_numbers(Y, B, t2);
}

namespace {

Gap parse_gap(const Complex2& Y, const std::string& tok, int line) {
    auto comma = tok.find(',');
    if (comma == std::string::npos) throw PatternError(line, "gap must be <edge>,<index|end>");
    auto e = Y.edge_index.find(tok.substr(0, comma));
    if (e == Y.edge_index.end()) throw PatternError(line, "unknown edge in gap '" + tok + "'");
    std::string idx = tok.substr(comma + 1);
    if (idx == "end") return {e->second, -1};
    try {
        return {e->second, std::stoi(idx)};
    } catch (const std::logic_error&) {
        throw PatternError(line, "bad gap index '" + idx + "'");
    }
}

std::string gap_text(const Complex2& Y, const Gap& g) {
    return Y.edges[g.edge].id + "," + (g.index < 0 ? std::string("end") : std::to_string(g.index));
}

}  // namespace

CurvePath parse_curve(const Complex2& Y, std::string_view text) {
    CurvePath c;
    std::istringstream in{std::string(text)};
    std::string line;
    int no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string s; ls >> s;) tok.push_back(s);
        if (tok.empty()) continue;
        if (!header) {
            if (tok[0] != "loop" && tok[0] != "line") throw PatternError(no, "curve must start with loop or line");
            c.loop = tok[0] == "loop";
            header = true;
            continue;
        }
        if (tok[0] == "step" && tok.size() == 4) {
            auto t = Y.tri_index.find(tok[1]);
            if (t == Y.tri_index.end()) throw PatternError(no, "unknown triangle '" + tok[1] + "'");
            c.steps.push_back({Step::Kind::Tri, t->second, parse_gap(Y, tok[2], no), parse_gap(Y, tok[3], no)});
        } else if (tok[0] == "along" && tok.size() == 4) {
            auto e = Y.edge_index.find(tok[1]);
            if (e == Y.edge_index.end()) throw PatternError(no, "unknown edge '" + tok[1] + "'");
            Gap a = parse_gap(Y, tok[1] + "," + tok[2], no), b = parse_gap(Y, tok[1] + "," + tok[3], no);
            c.steps.push_back({Step::Kind::Along, e->second, a, b});
        } else if (tok[0] == "vertex" && tok.size() == 4) {
            auto v = Y.vertex_index.find(tok[1]);
            if (v == Y.vertex_index.end()) throw PatternError(no, "unknown vertex '" + tok[1] + "'");
            c.steps.push_back({Step::Kind::Vertex, v->second, parse_gap(Y, tok[2], no), parse_gap(Y, tok[3], no)});
        } else {
            throw PatternError(no, "expected step/along/vertex line");
        }
    }
    if (!header) throw PatternError(no, "empty curve file");
    return c;
}

std::string write_curve(const Complex2& Y, const CurvePath& c) {
    std::ostringstream out;
    out << (c.loop ? "loop" : "line") << '\n';
    for (const auto& s : c.steps) {
        switch (s.kind) {
            case Step::Kind::Tri:
                out << "step " << Y.triangles[s.cell].id << ' ' << gap_text(Y, s.in) << ' ' << gap_text(Y, s.out);
                break;
            case Step::Kind::Along:
                out << "along " << Y.edges[s.cell].id << ' ' << (s.in.index < 0 ? "end" : std::to_string(s.in.index))
                    << ' ' << (s.out.index < 0 ? "end" : std::to_string(s.out.index));
                break;
            case Step::Kind::Vertex:
                out << "vertex " << Y.vertices[s.cell] << ' ' << gap_text(Y, s.in) << ' ' << gap_text(Y, s.out);
                break;
        }
        out << '\n';
    }
    return out.str();
}

namespace {

struct ChordGeom {
    int kp, kq;
    double a, b;
};

ChordGeom chord_geom(const Complex2& Y, const HypStructure& H, const Pattern& t, const Chord& c) {
    int kp = Y.slot_of(c.tri, t.points[c.p].edge), kq = Y.slot_of(c.tri, t.points[c.q].edge);
    return {kp, kq, slot_param(Y, H, c.tri, kp, t.points[c.p].coord), slot_param(Y, H, c.tri, kq, t.points[c.q].coord)};
}

std::array<double, 2> crossing_point(const Complex2& Y, const HypStructure& H, const Pattern& t, const Chord& x,
                                     const Chord& y) {
    auto g = chord_geom(Y, H, t, x), h = chord_geom(Y, H, t, y);
    auto X = klein_crossing(g.kp, g.a, g.kq, g.b, h.kp, h.a, h.kq, h.b);
    return X ? *X : klein_point(g.kp, g.a);
}

// Crossing pairs among chords of a pattern; `group` separates chords that must not be compared (-1: all).
Transversality crossings_of(const Complex2& Y, const HypStructure& H, const Pattern& t, const std::vector<int>& group,
                            bool between_groups_only) {
    Transversality T;
    auto rank = t.ranks();
    std::vector<std::vector<int>> by_tri(Y.num_triangles());
    for (int c = 0; c < static_cast<int>(t.chords.size()); ++c) by_tri[t.chords[c].tri].push_back(c);
    for (int tri = 0; tri < Y.num_triangles(); ++tri) {
        const auto& cs = by_tri[tri];
        if (cs.size() < 2) continue;
        auto B = boundary_order(Y, t, tri);
        auto pos = [&](int p) { return B.point_pos(Y.slot_of(tri, t.points[p].edge), rank[p]); };
        for (std::size_t i = 0; i < cs.size(); ++i)
            for (std::size_t j = i + 1; j < cs.size(); ++j) {
                int x = cs[i], y = cs[j];
                if (between_groups_only && group[x] == group[y]) continue;
                const Chord &cx = t.chords[x], &cy = t.chords[y];
                if (interleave(pos(cx.p), pos(cx.q), pos(cy.p), pos(cy.q), B.total))
                    T.crossings.push_back({tri, x, y, crossing_point(Y, H, t, cx, cy)});
            }
    }
    return T;
}

// Union of two patterns with the chords of t2 numbered after those of t1.
Pattern merged(const Complex2& Y, const Pattern& t1, const Pattern& t2, Transversality& T) {
    for (int e = 0; e < Y.num_edges(); ++e)
        for (int p : t1.on_edge[e])
            for (int q : t2.on_edge[e])
                if (std::abs(t1.points[p].coord - t2.points[q].coord) < 1e-12) {
                    T.transverse = false;
                    T.issues.push_back("shared point on edge " + Y.edges[e].id);
                }
    Pattern U = disjoint_union(Y, t1, t2);
    U.allow_crossings = true;
    return U;
}

}  // namespace

Transversality intersection_points(const Complex2& Y, const HypStructure& H, const Pattern& t1, const Pattern& t2) {
    Transversality pre;
    Pattern U = merged(Y, t1, t2, pre);
    if (!pre.transverse) return pre;
    int n1 = static_cast<int>(t1.chords.size());
    std::vector<int> group(U.chords.size());
    for (std::size_t c = 0; c < U.chords.size(); ++c) group[c] = static_cast<int>(c) < n1 ? 0 : 1;
    auto T = crossings_of(Y, H, U, group, true);
    for (auto& x : T.crossings) x.b -= n1;
    return T;
}

Transversality self_crossings(const Complex2& Y, const HypStructure& H, const Pattern& t) {
    std::vector<int> group(t.chords.size(), 0);
    return crossings_of(Y, H, t, group, false);
}

namespace {

// Resolution of all crossings of a singular pattern; `sides` replaces the chord side bits when given.
CutResult resolve_impl(const Complex2& Y, const HypStructure& H, const Pattern& U, CutPolicy policy,
                       const std::vector<int>& choices, const std::vector<int>& sides) {
    if (U.num_circles() > 0) throw std::invalid_argument("delete trivial circles before cut and paste");
    for (int e = 0; e < Y.num_edges(); ++e) {
        const auto& row = U.on_edge[e];
        for (std::size_t i = 1; i < row.size(); ++i)
            if (!(U.points[row[i - 1]].coord < U.points[row[i]].coord))
                throw std::invalid_argument("not transverse: coincident points on edge " + Y.edges[e].id);
    }
    CutResult R;
    R.before = {U.weight(), pattern_length(Y, H, U)};
    auto T = self_crossings(Y, H, U);
    R.crossings = static_cast<int>(T.crossings.size());
    if (policy == CutPolicy::Explicit && choices.size() != T.crossings.size())
        throw std::invalid_argument("explicit policy needs one choice per crossing");
    auto side = [&](int c) { return sides.empty() ? U.chords[c].side : sides[c]; };
    auto rank = U.ranks();

    // Crossing parameters along each chord (Euclidean in the Klein chart, monotone in distance).
    int nc = static_cast<int>(U.chords.size());
    std::vector<std::vector<std::pair<double, int>>> along(nc);
    for (int x = 0; x < static_cast<int>(T.crossings.size()); ++x) {
        const auto& X = T.crossings[x];
        for (int c : {X.a, X.b}) {
            auto g = chord_geom(Y, H, U, U.chords[c]);
            auto P = klein_point(g.kp, g.a), Q = klein_point(g.kq, g.b);
            double dx = Q[0] - P[0], dy = Q[1] - P[1];
            double s = ((X.at[0] - P[0]) * dx + (X.at[1] - P[1]) * dy) / (dx * dx + dy * dy);
            along[c].push_back({s, x});
        }
    }
    // node index of crossing x on chord c (1-based; 0 is p, size+1 is q)
    std::map<std::pair<int, int>, int> node_of;
    for (int c = 0; c < nc; ++c) {
        std::sort(along[c].begin(), along[c].end());
        for (int i = 0; i < static_cast<int>(along[c].size()); ++i) node_of[{c, along[c][i].second}] = i + 1;
    }
    // pairing[x]: 0 joins (a-, b-) and (a+, b+); 1 joins (a-, b+) and (a+, b-)
    std::vector<int> pairing(T.crossings.size(), 0);
    for (int x = 0; x < static_cast<int>(T.crossings.size()); ++x) {
        const auto& X = T.crossings[x];
        const Chord &A = U.chords[X.a], &Bc = U.chords[X.b];
        auto B = boundary_order(Y, U, X.tri);
        auto pos = [&](int p) { return B.point_pos(Y.slot_of(X.tri, U.points[p].edge), rank[p]); };
        if (policy == CutPolicy::Explicit) {
            pairing[x] = choices[x] ? 1 : 0;
        } else if (policy == CutPolicy::Oriented) {
            int sa = side(X.a), sb = side(X.b);
            if (sa == 0 || sb == 0) throw std::invalid_argument("oriented cut and paste needs oriented chords");
            // Quadrant between the rays towards p_A and p_B: on A's side of p_B and on B's side of p_A.
            int a_at_pb = in_arc(pos(Bc.p), pos(A.p), pos(A.q), B.total) ? sa : -sa;
            int b_at_pa = in_arc(pos(A.p), pos(Bc.p), pos(Bc.q), B.total) ? sb : -sb;
            pairing[x] = a_at_pb == b_at_pa ? 0 : 1;
        } else {
            auto e = [&](int p) { return U.points[p].edge; };
            bool zero_normal = e(A.p) != e(Bc.p) && e(A.q) != e(Bc.q);
            bool one_normal = e(A.p) != e(Bc.q) && e(A.q) != e(Bc.p);
            pairing[x] = (!zero_normal && one_normal) ? 1 : 0;
        }
    }
    // Pieces: (chord, i) runs from node i to node i+1.
    std::vector<int> piece_base(nc + 1, 0);
    for (int c = 0; c < nc; ++c) piece_base[c + 1] = piece_base[c] + static_cast<int>(along[c].size()) + 1;
    std::vector<char> used(piece_base[nc], 0);
    Pattern out = Pattern::empty(Y);
    out.points = U.points;
    out.on_edge = U.on_edge;
    out.free_nu = U.free_nu;
    std::vector<char> done_end(2 * nc, 0);  // chord end already consumed (2c = p, 2c+1 = q)
    auto trace = [&](int c, int node, int dir, int& end_point) {
        // Walk from `node` of chord c in direction dir until a boundary point is reached.
        while (true) {
            int piece = dir > 0 ? node : node - 1;
            used[piece_base[c] + piece] = 1;
            node += dir;
            int last = static_cast<int>(along[c].size()) + 1;
            if (node == 0 || node == last) {
                end_point = node == 0 ? U.chords[c].p : U.chords[c].q;
                done_end[2 * c + (node == 0 ? 0 : 1)] = 1;
                return;
            }
            int x = along[c][node - 1].second;
            const auto& X = T.crossings[x];
            bool on_a = X.a == c;
            int other = on_a ? X.b : X.a;
            // Arrived on ray (c, -dir side): arriving with dir>0 means we came along the minus ray.
            bool came_minus = dir > 0;
            bool go_minus = pairing[x] == 0 ? came_minus : !came_minus;
            int onode = node_of[{other, x}];
            c = other;
            node = onode;
            dir = go_minus ? -1 : 1;
        }
    };
    for (int c = 0; c < nc; ++c)
        for (int end = 0; end < 2; ++end) {
            if (done_end[2 * c + end]) continue;
            done_end[2 * c + end] = 1;
            int start_point = end == 0 ? U.chords[c].p : U.chords[c].q;
            int last = static_cast<int>(along[c].size()) + 1;
            int finish = -1;
            trace(c, end == 0 ? 0 : last, end == 0 ? 1 : -1, finish);
            Chord nc_{U.chords[c].tri, start_point, finish, 0};
            int s = side(c);
            if (s != 0) {
                int nu_start = end == 0 ? s * point_sigma(Y, U, nc_.tri, U.chords[c].p)
                                        : -s * point_sigma(Y, U, nc_.tri, U.chords[c].q);
                nc_.side = side_from_nu_p(Y, out, nc_, nu_start);
            }
            out.chords.push_back(nc_);
        }
    // Closed loops left over: unused pieces grouped into cycles.
    int loops = 0;
    for (int c = 0; c < nc; ++c)
        for (int i = 0; i <= static_cast<int>(along[c].size()); ++i) {
            if (used[piece_base[c] + i]) continue;
            ++loops;
            int cc = c, node = i, dir = 1;
            for (int guard = 0; guard < piece_base[nc] + 1; ++guard) {
                int piece = dir > 0 ? node : node - 1;
                if (used[piece_base[cc] + piece]) break;
                used[piece_base[cc] + piece] = 1;
                node += dir;
                int x = along[cc][node - 1].second;
                const auto& X = T.crossings[x];
                int other = X.a == cc ? X.b : X.a;
                bool came_minus = dir > 0;
                bool go_minus = pairing[x] == 0 ? came_minus : !came_minus;
                node = node_of[{other, x}];
                cc = other;
                dir = go_minus ? -1 : 1;
            }
        }
    R.dropped_circles = loops;
    R.pattern = std::move(out);
    R.after = {R.pattern.weight(), pattern_length(Y, H, R.pattern)};
    return R;
}

}  // namespace

CutResult resolve_crossings(const Complex2& Y, const HypStructure& H, const Pattern& singular, CutPolicy policy,
                            const std::vector<int>& choices) {
    return resolve_impl(Y, H, singular, policy, choices, {});
}

CutResult cut_and_paste(const Complex2& Y, const HypStructure& H, const Pattern& t1, const Pattern& t2,
                        CutPolicy policy, const std::vector<int>& choices) {
    Transversality T;
    Pattern U = merged(Y, t1, t2, T);
    if (!T.transverse) throw std::invalid_argument("not transverse: " + T.issues.front());
    return resolve_impl(Y, H, U, policy, choices, {});
}

CutResult resolve_one_sided(const Complex2& Y, const HypStructure& H, const Pattern& singular) {
    const Pattern& t = singular;
    std::vector<std::vector<int>> adj(t.points.size());
    for (int c = 0; c < static_cast<int>(t.chords.size()); ++c) {
        adj[t.chords[c].p].push_back(c);
        adj[t.chords[c].q].push_back(c);
    }
    std::vector<int> nu(t.points.size(), 0);
    std::vector<char> tree(t.chords.size(), 0);
    for (int r = 0; r < t.weight(); ++r) {
        if (nu[r] != 0) continue;
        nu[r] = 1;
        std::deque<int> q{r};
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            for (int c : adj[x]) {
                const Chord& ch = t.chords[c];
                int y = ch.p == x ? ch.q : ch.p;
                if (nu[y] != 0) continue;
                nu[y] = -nu[x] * point_sigma(Y, t, ch.tri, x) * point_sigma(Y, t, ch.tri, y);
                tree[c] = 1;
                q.push_back(y);
            }
        }
    }
    std::vector<int> sides(t.chords.size());
    for (int c = 0; c < static_cast<int>(t.chords.size()); ++c) {
        const Chord& ch = t.chords[c];
        sides[c] = tree[c] ? side_from_nu_p(Y, t, ch, nu[ch.p]) : -nu[ch.q] * point_sigma(Y, t, ch.tri, ch.q);
    }
    CutResult R = resolve_impl(Y, H, t, CutPolicy::Oriented, {}, sides);
    for (auto& c : R.pattern.chords) c.side = 0;
    std::fill(R.pattern.free_nu.begin(), R.pattern.free_nu.end(), 0);
    return R;
}

std::pair<std::vector<PartialPiece>, std::vector<PartialPiece>> split_partial_patterns(const Complex2& Y,
                                                                                      const HypStructure& H,
                                                                                      const Pattern& t1,
                                                                                      const Pattern& t2) {
    auto T = intersection_points(Y, H, t1, t2);
    if (!T.transverse) throw std::invalid_argument("not transverse: " + T.issues.front());
    auto pieces_of = [&](const Pattern& t, bool first) {
        int nc = static_cast<int>(t.chords.size());
        std::vector<std::vector<std::array<double, 2>>> cuts(nc);
        for (const auto& X : T.crossings) cuts[first ? X.a : X.b].push_back(X.at);
        // Segment distances from p, telescoped so each chord's segments sum to its length.
        std::vector<int> seg_base(nc + 1, 0);
        std::vector<double> seg_len;
        for (int c = 0; c < nc; ++c) {
            auto g = chord_geom(Y, H, t, t.chords[c]);
            std::vector<double> d;
            for (const auto& X : cuts[c]) d.push_back(klein_distance_from(g.kp, g.a, X));
            std::sort(d.begin(), d.end());
            double total = chord_length(Y, H, t, t.chords[c]);
            double prev = 0;
            for (double x : d) {
                seg_len.push_back(x - prev);
                prev = x;
            }
            seg_len.push_back(total - prev);
            seg_base[c + 1] = static_cast<int>(seg_len.size());
        }
        UnionFind uf(static_cast<int>(seg_len.size()));
        std::vector<int> first_seg_at(t.points.size(), -1);
        for (int c = 0; c < nc; ++c) {
            int s_p = seg_base[c], s_q = seg_base[c + 1] - 1;
            for (auto [pt, s] : {std::pair{t.chords[c].p, s_p}, std::pair{t.chords[c].q, s_q}}) {
                if (first_seg_at[pt] < 0)
                    first_seg_at[pt] = s;
                else
                    uf.unite(first_seg_at[pt], s);
            }
        }
        int n = 0;
        auto lab = uf.labels(&n);
        std::vector<PartialPiece> out(n);
        for (int c = 0; c < nc; ++c)
            for (int s = seg_base[c]; s < seg_base[c + 1]; ++s) {
                auto& P = out[lab[s]];
                P.length += seg_len[s];
                if (P.chords.empty() || P.chords.back() != c) P.chords.push_back(c);
                int k = s - seg_base[c];
                if (k > 0) ++P.ends;
                if (s + 1 < seg_base[c + 1]) ++P.ends;
            }
        return out;
    };
    return {pieces_of(t1, true), pieces_of(t2, false)};
}

}  // namespace dtrack
