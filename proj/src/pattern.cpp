#include "dtrack/pattern.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>

#include "dtrack/util.hpp"

namespace dtrack {

Pattern Pattern::empty(const Complex2& Y) {
    Pattern t;
    t.on_edge.assign(Y.num_edges(), {});
    t.circles.assign(Y.num_triangles(), 0);
    return t;
}

int Pattern::num_circles() const {
    int n = 0;
    for (int c : circles) n += c;
    return n;
}

int Pattern::add_point(int edge, int rank, double coord, std::string id) {
    int idx = static_cast<int>(points.size());
    if (id.empty()) id = "p" + std::to_string(idx);
    points.push_back({std::move(id), edge, coord});
    free_nu.push_back(0);
    auto& row = on_edge[edge];
    row.insert(row.begin() + rank, idx);
    return idx;
}

int Pattern::add_chord(int tri, int p, int q, int side) {
    chords.push_back({tri, p, q, side});
    return static_cast<int>(chords.size()) - 1;
}

std::vector<int> Pattern::ranks() const {
    std::vector<int> r(points.size(), -1);
    for (const auto& row : on_edge)
        for (int i = 0; i < static_cast<int>(row.size()); ++i) r[row[i]] = i;
    return r;
}

void Pattern::remove_chords(const std::vector<int>& drop) {
    std::vector<char> gone(chords.size(), 0);
    for (int c : drop) gone[c] = 1;
    std::vector<Chord> kept;
    for (std::size_t c = 0; c < chords.size(); ++c)
        if (!gone[c]) kept.push_back(chords[c]);
    chords = std::move(kept);
}

void Pattern::remove_points(const std::vector<int>& drop) {
    std::vector<char> gone(points.size(), 0);
    for (int p : drop) gone[p] = 1;
    std::vector<int> dead_chords;
    for (std::size_t c = 0; c < chords.size(); ++c)
        if (gone[chords[c].p] || gone[chords[c].q]) dead_chords.push_back(static_cast<int>(c));
    remove_chords(dead_chords);
    std::vector<int> remap(points.size(), -1);
    std::vector<EdgePoint> np;
    std::vector<int> nnu;
    for (std::size_t p = 0; p < points.size(); ++p) {
        if (gone[p]) continue;
        remap[p] = static_cast<int>(np.size());
        np.push_back(points[p]);
        nnu.push_back(free_nu[p]);
    }
    points = std::move(np);
    free_nu = std::move(nnu);
    for (auto& row : on_edge) {
        std::vector<int> r;
        for (int p : row)
            if (remap[p] >= 0) r.push_back(remap[p]);
        row = std::move(r);
    }
    for (auto& c : chords) {
        c.p = remap[c.p];
        c.q = remap[c.q];
    }
}

int BoundaryOrder::point_pos(int slot, int edge_rank) const {
    int n = count[slot];
    int tr = sign[slot] > 0 ? edge_rank : n - 1 - edge_rank;
    return base[slot] + 2 * tr + 1;
}

int BoundaryOrder::gap_pos(int slot, int edge_gap) const {
    int n = count[slot];
    int tg = sign[slot] > 0 ? edge_gap : n - edge_gap;
    return base[slot] + 2 * tg;
}

void BoundaryOrder::locate(int pos, int& slot, int& index, bool& is_point) const {
    slot = 2;
    while (slot > 0 && pos < base[slot]) --slot;
    int off = pos - base[slot];
    int n = count[slot];
    is_point = off % 2 == 1;
    if (is_point) {
        int tr = (off - 1) / 2;
        index = sign[slot] > 0 ? tr : n - 1 - tr;
    } else {
        int tg = off / 2;
        index = sign[slot] > 0 ? tg : n - tg;
    }
}

BoundaryOrder boundary_order(const Complex2& Y, const Pattern& t, int tri) {
    BoundaryOrder B;
    int acc = 0;
    for (int k = 0; k < 3; ++k) {
        const Slot& s = Y.triangles[tri].slots[k];
        B.count[k] = static_cast<int>(t.on_edge[s.edge].size());
        B.sign[k] = s.sign;
        B.base[k] = acc;
        acc += 2 * B.count[k] + 1;
    }
    B.total = acc;
    return B;
}

bool in_arc(int x, int a, int b, int total) {
    int dx = ((x - a) % total + total) % total;
    int db = ((b - a) % total + total) % total;
    return dx > 0 && dx < db;
}

bool interleave(int a, int b, int c, int d, int total) {
    if (a == c || a == d || b == c || b == d) return false;
    return in_arc(c, a, b, total) != in_arc(d, a, b, total);
}

int point_sigma(const Complex2& Y, const Pattern& t, int tri, int p) {
    int k = Y.slot_of(tri, t.points[p].edge);
    return Y.triangles[tri].slots[k].sign;
}

int chord_nu_p(const Complex2& Y, const Pattern& t, const Chord& c) {
    return c.side * point_sigma(Y, t, c.tri, c.p);
}

int chord_nu_q(const Complex2& Y, const Pattern& t, const Chord& c) {
    return -c.side * point_sigma(Y, t, c.tri, c.q);
}

int side_from_nu_p(const Complex2& Y, const Pattern& t, const Chord& c, int nu_p) {
    return nu_p * point_sigma(Y, t, c.tri, c.p);
}

namespace {

int chord_pos(const Complex2& Y, const Pattern& t, const BoundaryOrder& B, const std::vector<int>& rank, int tri,
              int p) {
    return B.point_pos(Y.slot_of(tri, t.points[p].edge), rank[p]);
}

}  // namespace

void validate(const Complex2& Y, const Pattern& t) {
    if (static_cast<int>(t.on_edge.size()) != Y.num_edges() || static_cast<int>(t.circles.size()) != Y.num_triangles())
        throw PatternError(0, "pattern does not match the complex");
    std::vector<int> seen(t.points.size(), 0);
    for (int e = 0; e < Y.num_edges(); ++e) {
        const auto& row = t.on_edge[e];
        for (std::size_t i = 0; i < row.size(); ++i) {
            int p = row[i];
            if (p < 0 || p >= t.weight() || t.points[p].edge != e) throw PatternError(0, "edge list corrupt");
            ++seen[p];
            if (i > 0 && t.points[row[i - 1]].coord > t.points[p].coord)
                throw PatternError(0, "coordinates out of order on edge " + Y.edges[e].id);
        }
    }
    for (int p = 0; p < t.weight(); ++p)
        if (seen[p] != 1) throw PatternError(0, "point " + t.points[p].id + " not on its edge list");
    std::vector<std::vector<int>> tris_at(t.points.size());
    for (const auto& c : t.chords) {
        if (c.p == c.q) throw PatternError(0, "chord with equal ends");
        for (int p : {c.p, c.q}) {
            if (Y.slot_of(c.tri, t.points[p].edge) < 0)
                throw PatternError(0, "chord end " + t.points[p].id + " not on triangle " + Y.triangles[c.tri].id);
            tris_at[p].push_back(c.tri);
        }
    }
    for (int p = 0; p < t.weight(); ++p) {
        auto want = std::vector<int>();
        for (const auto& inc : Y.star[t.points[p].edge]) want.push_back(inc.tri);
        auto got = tris_at[p];
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        if (got != want)
            throw PatternError(0, "point " + t.points[p].id + " needs exactly one chord in each triangle of its edge");
    }
    for (int c : t.circles)
        if (c < 0) throw PatternError(0, "negative circle count");
    if (!t.allow_crossings && !is_embedded(Y, t)) throw PatternError(0, "chords cross");
}

bool is_embedded(const Complex2& Y, const Pattern& t) {
    for (int e = 0; e < Y.num_edges(); ++e) {
        const auto& row = t.on_edge[e];
        for (std::size_t i = 1; i < row.size(); ++i)
            if (!(t.points[row[i - 1]].coord < t.points[row[i]].coord)) return false;
    }
    auto rank = t.ranks();
    std::vector<std::vector<int>> by_tri(Y.num_triangles());
    for (int c = 0; c < static_cast<int>(t.chords.size()); ++c) by_tri[t.chords[c].tri].push_back(c);
    for (int tri = 0; tri < Y.num_triangles(); ++tri) {
        const auto& cs = by_tri[tri];
        if (cs.size() < 2) continue;
        auto B = boundary_order(Y, t, tri);
        std::vector<std::pair<int, int>> ends;
        for (int c : cs)
            ends.push_back({chord_pos(Y, t, B, rank, tri, t.chords[c].p), chord_pos(Y, t, B, rank, tri, t.chords[c].q)});
        for (std::size_t i = 0; i < ends.size(); ++i)
            for (std::size_t j = i + 1; j < ends.size(); ++j)
                if (interleave(ends[i].first, ends[i].second, ends[j].first, ends[j].second, B.total)) return false;
    }
    return true;
}

NormalReport is_normal(const Complex2& Y, const Pattern& t) {
    NormalReport r;
    for (int tri = 0; tri < Y.num_triangles(); ++tri)
        if (t.circles[tri] > 0) r.circle_triangles.push_back(tri);
    for (int c = 0; c < static_cast<int>(t.chords.size()); ++c)
        if (t.points[t.chords[c].p].edge == t.points[t.chords[c].q].edge) r.returning_chords.push_back(c);
    r.normal = r.circle_triangles.empty() && r.returning_chords.empty();
    return r;
}

Components components(const Complex2& Y, const Pattern& t) {
    Components out;
    UnionFind uf(t.weight());
    for (const auto& c : t.chords) uf.unite(c.p, c.q);
    int n = 0;
    out.of_point = uf.labels(&n);
    out.of_chord.resize(t.chords.size());
    for (std::size_t c = 0; c < t.chords.size(); ++c) out.of_chord[c] = out.of_point[t.chords[c].p];
    for (int tri = 0; tri < Y.num_triangles(); ++tri)
        for (int k = 0; k < t.circles[tri]; ++k) out.circle_of.push_back({tri, n++});
    out.count = n;
    return out;
}

Pattern subpattern(const Complex2& Y, const Pattern& t, const std::vector<char>& keep_point) {
    Pattern s = Pattern::empty(Y);
    s.allow_crossings = t.allow_crossings;
    std::vector<int> map(t.points.size(), -1);
    for (int e = 0; e < Y.num_edges(); ++e)
        for (int p : t.on_edge[e]) {
            if (!keep_point[p]) continue;
            map[p] = s.add_point(e, static_cast<int>(s.on_edge[e].size()), t.points[p].coord, t.points[p].id);
            s.free_nu[map[p]] = t.free_nu[p];
        }
    for (const auto& c : t.chords)
        if (map[c.p] >= 0 && map[c.q] >= 0) s.add_chord(c.tri, map[c.p], map[c.q], c.side);
    return s;
}

std::vector<Pattern> component_split(const Complex2& Y, const Pattern& t) {
    auto C = components(Y, t);
    std::vector<Pattern> out;
    int point_comps = C.count - static_cast<int>(C.circle_of.size());
    for (int k = 0; k < point_comps; ++k) {
        std::vector<char> keep(t.points.size(), 0);
        for (int p = 0; p < t.weight(); ++p) keep[p] = C.of_point[p] == k;
        out.push_back(subpattern(Y, t, keep));
    }
    for (auto [tri, comp] : C.circle_of) {
        Pattern s = Pattern::empty(Y);
        s.circles[tri] = 1;
        out.push_back(s);
    }
    return out;
}

Pattern disjoint_union(const Complex2& Y, const Pattern& a, const Pattern& b) {
    Pattern u = Pattern::empty(Y);
    u.allow_crossings = a.allow_crossings || b.allow_crossings;
    std::vector<int> ma(a.points.size()), mb(b.points.size());
    for (int e = 0; e < Y.num_edges(); ++e) {
        std::vector<std::pair<double, std::pair<int, int>>> row;
        for (int p : a.on_edge[e]) row.push_back({a.points[p].coord, {0, p}});
        for (int p : b.on_edge[e]) row.push_back({b.points[p].coord, {1, p}});
        std::stable_sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        for (auto& [coord, src] : row) {
            const Pattern& from = src.first == 0 ? a : b;
            int idx = u.add_point(e, static_cast<int>(u.on_edge[e].size()), coord, from.points[src.second].id);
            u.free_nu[idx] = from.free_nu[src.second];
            (src.first == 0 ? ma : mb)[src.second] = idx;
        }
    }
    for (const auto& c : a.chords) u.add_chord(c.tri, ma[c.p], ma[c.q], c.side);
    for (const auto& c : b.chords) u.add_chord(c.tri, mb[c.p], mb[c.q], c.side);
    for (int tri = 0; tri < Y.num_triangles(); ++tri) u.circles[tri] = a.circles[tri] + b.circles[tri];
    return u;
}

Sidedness sidedness(const Complex2& Y, const Pattern& t, int component, int start_point) {
    auto C = components(Y, t);
    Sidedness r;
    r.nu.assign(t.points.size(), 0);
    std::vector<std::vector<int>> adj(t.points.size());
    for (int c = 0; c < static_cast<int>(t.chords.size()); ++c) {
        adj[t.chords[c].p].push_back(c);
        adj[t.chords[c].q].push_back(c);
    }
    if (start_point < 0)
        for (int p = 0; p < t.weight(); ++p)
            if (C.of_point[p] == component) {
                start_point = p;
                break;
            }
    if (start_point < 0) return r;  // circle component
    std::vector<int> parent_chord(t.points.size(), -1);
    std::deque<int> queue{start_point};
    r.nu[start_point] = 1;
    auto path_to_root = [&](int p) {
        std::vector<int> chords;
        while (p != start_point) {
            int c = parent_chord[p];
            chords.push_back(c);
            p = t.chords[c].p == p ? t.chords[c].q : t.chords[c].p;
        }
        return chords;
    };
    while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        for (int c : adj[x]) {
            const Chord& ch = t.chords[c];
            int y = ch.p == x ? ch.q : ch.p;
            int want = -r.nu[x] * point_sigma(Y, t, ch.tri, x) * point_sigma(Y, t, ch.tri, y);
            if (r.nu[y] == 0) {
                r.nu[y] = want;
                parent_chord[y] = c;
                queue.push_back(y);
            } else if (r.nu[y] != want && r.two_sided) {
                r.two_sided = false;
                auto px = path_to_root(x), py = path_to_root(y);
                while (!px.empty() && !py.empty() && px.back() == py.back()) {
                    px.pop_back();
                    py.pop_back();
                }
                r.witness_cycle = px;
                r.witness_cycle.push_back(c);
                r.witness_cycle.insert(r.witness_cycle.end(), py.rbegin(), py.rend());
            }
        }
    }
    return r;
}

std::optional<std::vector<int>> point_normals(const Complex2& Y, const Pattern& t) {
    std::vector<int> nu(t.points.size(), 0);
    for (const auto& c : t.chords) {
        if (c.side == 0) return std::nullopt;
        int a = chord_nu_p(Y, t, c), b = chord_nu_q(Y, t, c);
        for (auto [p, v] : {std::pair{c.p, a}, std::pair{c.q, b}}) {
            if (nu[p] != 0 && nu[p] != v) return std::nullopt;
            nu[p] = v;
        }
    }
    for (int p = 0; p < t.weight(); ++p) {
        if (nu[p] == 0) nu[p] = t.free_nu[p];
        if (nu[p] == 0) return std::nullopt;
    }
    return nu;
}

void apply_normals(const Complex2& Y, Pattern& t, const std::vector<int>& nu) {
    for (auto& c : t.chords) c.side = side_from_nu_p(Y, t, c, nu[c.p]);
    t.free_nu = nu;
}

bool is_two_sided(const Complex2& Y, const Pattern& t) {
    auto C = components(Y, t);
    for (int k = 0; k < C.count; ++k)
        if (!sidedness(Y, t, k).two_sided) return false;
    return true;
}

bool orient(const Complex2& Y, Pattern& t) {
    auto C = components(Y, t);
    std::vector<int> nu(t.points.size(), 1);
    bool ok = true;
    int point_comps = C.count - static_cast<int>(C.circle_of.size());
    for (int k = 0; k < point_comps; ++k) {
        auto s = sidedness(Y, t, k);
        if (!s.two_sided) ok = false;
        for (int p = 0; p < t.weight(); ++p)
            if (C.of_point[p] == k) nu[p] = s.nu[p];
    }
    if (ok) apply_normals(Y, t, nu);
    return ok;
}

void reverse_orientation(Pattern& t) {
    for (auto& c : t.chords) c.side = -c.side;
    for (int& v : t.free_nu) v = -v;
}

Pattern coboundary_pattern(const Complex2& Y, const std::vector<char>& in_E) {
    bool any_in = false, any_out = false;
    for (int v = 0; v < Y.num_vertices(); ++v) (in_E[v] ? any_in : any_out) = true;
    if (!any_in || !any_out) throw std::invalid_argument("bipartition needs two non-empty parts");
    Pattern t = Pattern::empty(Y);
    std::vector<int> at(Y.num_edges(), -1);
    std::vector<int> nu;
    for (int e = 0; e < Y.num_edges(); ++e) {
        const Edge& E = Y.edges[e];
        if (in_E[E.from] == in_E[E.to]) continue;
        at[e] = t.add_point(e, 0, 0.0);
        nu.push_back(in_E[E.from] ? 1 : -1);
    }
    for (int tri = 0; tri < Y.num_triangles(); ++tri) {
        std::vector<int> pts;
        for (const auto& s : Y.triangles[tri].slots)
            if (at[s.edge] >= 0) pts.push_back(at[s.edge]);
        if (pts.size() == 2) t.add_chord(tri, pts[0], pts[1]);
    }
    apply_normals(Y, t, nu);
    return t;
}

Pattern lift_pattern(const Cover& C, const Complex2& base, const Pattern& t) {
    const Complex2& X = C.space;
    Pattern L = Pattern::empty(X);
    L.allow_crossings = t.allow_crossings;
    std::map<std::pair<int, int>, int> at;  // (base point, cover edge)
    for (int e = 0; e < X.num_edges(); ++e) {
        int be = C.edge_proj[e];
        for (int p : t.on_edge[be]) {
            int idx = L.add_point(e, static_cast<int>(L.on_edge[e].size()), t.points[p].coord,
                                  t.points[p].id + "@" + format_sheet(C.edge_sheet[e]));
            L.free_nu[idx] = t.free_nu[p];
            at[{p, e}] = idx;
        }
    }
    std::vector<std::vector<int>> by_tri(base.num_triangles());
    for (int c = 0; c < static_cast<int>(t.chords.size()); ++c) by_tri[t.chords[c].tri].push_back(c);
    for (int tri = 0; tri < X.num_triangles(); ++tri) {
        int bt = C.tri_proj[tri];
        L.circles[tri] = t.circles[bt];
        for (int c : by_tri[bt]) {
            const Chord& ch = t.chords[c];
            int kp = base.slot_of(bt, t.points[ch.p].edge), kq = base.slot_of(bt, t.points[ch.q].edge);
            int ep = X.triangles[tri].slots[kp].edge, eq = X.triangles[tri].slots[kq].edge;
            L.add_chord(tri, at.at({ch.p, ep}), at.at({ch.q, eq}), ch.side);
        }
    }
    return L;
}

std::optional<long> carried_index(const Complex2& X, const Pattern& track, const std::vector<long>& psi) {
    for (const auto& pt : track.points)
        if (X.frontier_edge[pt.edge]) throw std::invalid_argument("track touches the frontier");
    auto from_corner = [&](int tri, int p) {
        int k = X.slot_of(tri, track.points[p].edge);
        return X.triangles[tri].slots[k].sign > 0 ? k : (k + 1) % 3;
    };
    auto value = [&](const Chord& c, int from) {
        auto pot = corner_potentials(X, psi, c.tri);
        int to = from == c.p ? c.q : c.p;
        return pot[from_corner(c.tri, to)] - pot[from_corner(c.tri, from)];
    };
    std::vector<std::vector<int>> adj(track.points.size());
    for (int c = 0; c < static_cast<int>(track.chords.size()); ++c) {
        adj[track.chords[c].p].push_back(c);
        adj[track.chords[c].q].push_back(c);
    }
    std::vector<long> pot(track.points.size(), 0);
    std::vector<char> seen(track.points.size(), 0);
    std::vector<char> tree(track.chords.size(), 0);
    long g = 0;
    for (int root = 0; root < track.weight(); ++root) {
        if (seen[root]) continue;
        seen[root] = 1;
        std::deque<int> queue{root};
        while (!queue.empty()) {
            int x = queue.front();
            queue.pop_front();
            for (int c : adj[x]) {
                const Chord& ch = track.chords[c];
                int y = ch.p == x ? ch.q : ch.p;
                if (!seen[y]) {
                    seen[y] = 1;
                    tree[c] = 1;
                    pot[y] = pot[x] + value(ch, x);
                    queue.push_back(y);
                }
            }
        }
    }
    for (int c = 0; c < static_cast<int>(track.chords.size()); ++c) {
        if (tree[c]) continue;
        const Chord& ch = track.chords[c];
        g = gcd_abs(g, pot[ch.p] + value(ch, ch.p) - pot[ch.q]);
    }
    return g;
}

std::optional<std::vector<long>> solve_subgroup_cocycle(const Cover& C, const Complex2& base, const Word& h) {
    if (!C.table) return std::nullopt;
    const Complex2& X = C.space;
    SpanningTree T = spanning_tree(base);
    std::vector<int> col(X.num_edges(), -1);
    int n = 0;
    for (int e = 0; e < X.num_edges(); ++e)
        if (!T.in_tree[C.edge_proj[e]]) col[e] = n++;
    if (n == 0) return std::nullopt;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(std::max(1, X.num_triangles()), n);
    for (int tri = 0; tri < X.num_triangles(); ++tri)
        for (const auto& s : X.triangles[tri].slots)
            if (col[s.edge] >= 0) A(tri, col[s.edge]) += s.sign;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    Eigen::MatrixXd K = lu.kernel();
    if (K.cols() != 1 || K.isZero()) return std::nullopt;
    // psi(h) along the lift of h starting at the base coset.
    double ph = 0;
    int c = 0;
    for (auto [e, sign] : h) {
        int edge_coset = sign > 0 ? c : C.table->step(c, e, -1);
        if (edge_coset < 0) return std::nullopt;
        auto it = C.edge_at.find({e, {edge_coset}});
        if (it == C.edge_at.end()) return std::nullopt;
        if (col[it->second] >= 0) ph += sign * K(col[it->second], 0);
        c = sign > 0 ? C.table->step(c, e, 1) : edge_coset;
        if (c < 0) return std::nullopt;
    }
    if (std::abs(ph) < 1e-9) return std::nullopt;
    std::vector<long> psi(X.num_edges(), 0);
    for (int e = 0; e < X.num_edges(); ++e) {
        if (col[e] < 0) continue;
        double v = K(col[e], 0) / ph;
        double r = std::round(v);
        if (std::abs(v - r) > 1e-9) return std::nullopt;
        psi[e] = static_cast<long>(r);
    }
    return psi;
}

std::optional<long> carried_index_subgroup(const Cover& C, const Complex2& base, const Pattern& track,
                                           const Word& h) {
    auto psi = solve_subgroup_cocycle(C, base, h);
    if (!psi) return std::nullopt;
    return carried_index(C.space, track, *psi);
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

Pattern parse_pattern(const Complex2& Y, std::string_view text) {
    struct RawPoint {
        std::string id;
        int edge, index, line;
        std::optional<double> coord;
    };
    std::vector<RawPoint> raw;
    struct RawChord {
        int tri;
        std::string p, q;
        int line;
    };
    std::vector<RawChord> rchords;
    std::vector<std::pair<int, int>> orients;                   // chord index, sign
    std::vector<std::pair<std::string, int>> point_orients;    // point id, sign
    std::vector<int> circles(Y.num_triangles(), 0);
    bool singular = false;
    std::istringstream in{std::string(text)};
    std::string line;
    int no = 0;
    auto to_int = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            int v = std::stoi(s, &used);
            if (used != s.size()) throw PatternError(no, "bad integer '" + s + "'");
            return v;
        } catch (const std::logic_error&) {
            throw PatternError(no, "bad integer '" + s + "'");
        }
    };
    while (std::getline(in, line)) {
        ++no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        auto tok = split_ws(line);
        if (tok.empty()) continue;
        const std::string& kw = tok[0];
        if (kw == "point") {
            if (tok.size() != 4 && tok.size() != 5) throw PatternError(no, "point <id> <edge> <index> [coord]");
            auto e = Y.edge_index.find(tok[2]);
            if (e == Y.edge_index.end()) throw PatternError(no, "unknown edge '" + tok[2] + "'");
            RawPoint rp{tok[1], e->second, to_int(tok[3]), no, std::nullopt};
            if (tok.size() == 5) {
                try {
                    rp.coord = std::stod(tok[4]);
                } catch (const std::logic_error&) {
                    throw PatternError(no, "bad coordinate '" + tok[4] + "'");
                }
            }
            raw.push_back(rp);
        } else if (kw == "chord") {
            if (tok.size() != 4) throw PatternError(no, "chord <triangle> <point> <point>");
            auto t = Y.tri_index.find(tok[1]);
            if (t == Y.tri_index.end()) throw PatternError(no, "unknown triangle '" + tok[1] + "'");
            rchords.push_back({t->second, tok[2], tok[3], no});
        } else if (kw == "circle") {
            if (tok.size() != 3) throw PatternError(no, "circle <triangle> <count>");
            auto t = Y.tri_index.find(tok[1]);
            if (t == Y.tri_index.end()) throw PatternError(no, "unknown triangle '" + tok[1] + "'");
            int n = to_int(tok[2]);
            if (n < 0) throw PatternError(no, "negative circle count");
            circles[t->second] += n;
        } else if (kw == "orient") {
            if (tok.size() == 4 && tok[1] == "point") {
                int s = to_int(tok[3]);
                if (s != 1 && s != -1) throw PatternError(no, "orientation must be +1 or -1");
                point_orients.push_back({tok[2], s});
            } else if (tok.size() == 3) {
                int s = to_int(tok[2]);
                if (s != 1 && s != -1) throw PatternError(no, "orientation must be +1 or -1");
                orients.push_back({to_int(tok[1]), s});
            } else {
                throw PatternError(no, "orient <chord index> <+-1> | orient point <id> <+-1>");
            }
        } else if (kw == "singular") {
            singular = true;
        } else {
            throw PatternError(no, "unknown keyword '" + kw + "'");
        }
    }
    Pattern t = Pattern::empty(Y);
    t.allow_crossings = singular;
    std::vector<std::vector<const RawPoint*>> per_edge(Y.num_edges());
    for (const auto& rp : raw) per_edge[rp.edge].push_back(&rp);
    std::map<std::string, int> id_to;
    for (int e = 0; e < Y.num_edges(); ++e) {
        auto& row = per_edge[e];
        std::sort(row.begin(), row.end(), [](auto* a, auto* b) { return a->index < b->index; });
        int n = static_cast<int>(row.size());
        for (int i = 0; i < n; ++i) {
            if (row[i]->index != i)
                throw PatternError(row[i]->line, "point indices on edge " + Y.edges[e].id + " must be 0.." +
                                                     std::to_string(n - 1));
            double coord = row[i]->coord ? *row[i]->coord : 0.25 * (i - 0.5 * (n - 1));
            if (id_to.count(row[i]->id)) throw PatternError(row[i]->line, "duplicate point '" + row[i]->id + "'");
            id_to[row[i]->id] = t.add_point(e, i, coord, row[i]->id);
        }
    }
    for (const auto& rc : rchords) {
        auto a = id_to.find(rc.p), b = id_to.find(rc.q);
        if (a == id_to.end() || b == id_to.end()) throw PatternError(rc.line, "unknown point in chord");
        if (Y.slot_of(rc.tri, t.points[a->second].edge) < 0 || Y.slot_of(rc.tri, t.points[b->second].edge) < 0)
            throw PatternError(rc.line, "chord end not on triangle " + Y.triangles[rc.tri].id);
        t.add_chord(rc.tri, a->second, b->second);
    }
    for (auto [c, s] : orients) {
        if (c < 0 || c >= static_cast<int>(t.chords.size())) throw PatternError(0, "orient: no chord " + std::to_string(c));
        t.chords[c].side = s;
    }
    for (auto& [id, s] : point_orients) {
        auto a = id_to.find(id);
        if (a == id_to.end()) throw PatternError(0, "orient: unknown point '" + id + "'");
        t.free_nu[a->second] = s;
    }
    t.circles = circles;
    validate(Y, t);
    return t;
}

std::string write_pattern(const Complex2& Y, const Pattern& t) {
    std::ostringstream out;
    if (t.allow_crossings) out << "singular\n";
    std::vector<std::string> name(t.points.size());
    int k = 0;
    for (int e = 0; e < Y.num_edges(); ++e)
        for (std::size_t i = 0; i < t.on_edge[e].size(); ++i) {
            int p = t.on_edge[e][i];
            name[p] = "p" + std::to_string(k++);
            out << "point " << name[p] << ' ' << Y.edges[e].id << ' ' << i << ' ' << format_real(t.points[p].coord)
                << '\n';
        }
    for (const auto& c : t.chords)
        out << "chord " << Y.triangles[c.tri].id << ' ' << name[c.p] << ' ' << name[c.q] << '\n';
    for (int tri = 0; tri < Y.num_triangles(); ++tri)
        if (t.circles[tri] > 0) out << "circle " << Y.triangles[tri].id << ' ' << t.circles[tri] << '\n';
    for (std::size_t c = 0; c < t.chords.size(); ++c)
        if (t.chords[c].side != 0) out << "orient " << c << ' ' << (t.chords[c].side > 0 ? "1" : "-1") << '\n';
    std::vector<char> has_chord(t.points.size(), 0);
    for (const auto& c : t.chords) has_chord[c.p] = has_chord[c.q] = 1;
    for (int e = 0; e < Y.num_edges(); ++e)
        for (int p : t.on_edge[e])
            if (!has_chord[p] && t.free_nu[p] != 0)
                out << "orient point " << name[p] << ' ' << (t.free_nu[p] > 0 ? "1" : "-1") << '\n';
    return out.str();
}

}  // namespace dtrack
