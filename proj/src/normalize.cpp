#include "dtrack/normalize.hpp"

#include <algorithm>
#include <stdexcept>

namespace dtrack {

long arc_count(const Pattern& t) { return static_cast<long>(t.chords.size()) + t.num_circles(); }

std::string move_kind_name(Move::Kind k) {
    return k == Move::Kind::DeleteCircle ? "delete_circle" : "resolve_same_edge_arc";
}

namespace {

int chord_at(const Pattern& t, int tri, int p) {
    for (int c = 0; c < static_cast<int>(t.chords.size()); ++c) {
        const Chord& ch = t.chords[c];
        if (ch.tri == tri && (ch.p == p || ch.q == p)) return c;
    }
    return -1;
}

int other_end(const Chord& c, int p) { return c.p == p ? c.q : c.p; }

int nu_at(const Complex2& Y, const Pattern& t, const Chord& c, int p) {
    return p == c.p ? chord_nu_p(Y, t, c) : chord_nu_q(Y, t, c);
}

// Innermost returning chord: ends adjacent on their edge; smallest (triangle, index).
int innermost_returning(const Pattern& t) {
    auto rank = t.ranks();
    int best = -1;
    for (int c = 0; c < static_cast<int>(t.chords.size()); ++c) {
        const Chord& ch = t.chords[c];
        if (t.points[ch.p].edge != t.points[ch.q].edge || std::abs(rank[ch.p] - rank[ch.q]) != 1) continue;
        if (best < 0 || ch.tri < t.chords[best].tri) best = c;
    }
    return best;
}

void resolve_returning(const Complex2& Y, Pattern& P, int c) {
    const Chord lam = P.chords[c];
    int e = P.points[lam.p].edge;
    int x = lam.p, y = lam.q;
    std::vector<Chord> joined;
    for (const auto& inc : Y.star[e]) {
        if (inc.tri == lam.tri) continue;
        int cx = chord_at(P, inc.tri, x), cy = chord_at(P, inc.tri, y);
        if (cx < 0 || cy < 0) throw std::invalid_argument("pattern point without a chord in " + Y.triangles[inc.tri].id);
        if (cx == cy) {
            ++P.circles[inc.tri];
            continue;
        }
        const Chord &X = P.chords[cx], &Yc = P.chords[cy];
        Chord n{inc.tri, other_end(X, x), other_end(Yc, y), 0};
        if (X.side != 0) n.side = side_from_nu_p(Y, P, n, nu_at(Y, P, X, n.p));
        joined.push_back(n);
    }
    for (const auto& n : joined) P.add_chord(n.tri, n.p, n.q, n.side);
    P.remove_points({x, y});
}

}  // namespace

NormalizeResult normalize(const Complex2& Y, const Pattern& t, bool keep_states) {
    NormalizeResult R;
    R.pattern = t;
    Pattern& P = R.pattern;
    R.equivalence_asserted = point_normals(Y, P).has_value();
    auto measure = [&] { return static_cast<long>(P.weight()) + arc_count(P); };
    R.log.measure.push_back(measure());
    if (keep_states) R.states.push_back(P);
    while (true) {
        Move m;
        auto circ = std::find_if(P.circles.begin(), P.circles.end(), [](int n) { return n > 0; });
        if (circ != P.circles.end()) {
            m.tri = static_cast<int>(circ - P.circles.begin());
            --*circ;
        } else {
            int c = innermost_returning(P);
            if (c < 0) break;
            m.kind = Move::Kind::ResolveReturningChord;
            m.tri = P.chords[c].tri;
            m.chord = c;
            m.edge = P.points[P.chords[c].p].edge;
            resolve_returning(Y, P, c);
        }
        R.log.moves.push_back(m);
        R.log.measure.push_back(measure());
        if (keep_states) R.states.push_back(P);
    }
    return R;
}

Pattern random_finger_pattern(const Complex2& Y, const Pattern& base, int fingers, int circles, int max_weight,
                              std::mt19937_64& rng) {
    Pattern P = base;
    std::vector<int> eligible;
    for (int e = 0; e < Y.num_edges(); ++e)
        if (Y.valence(e) >= 2) eligible.push_back(e);
    auto pick = [&](int n) { return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng)); };
    for (int f = 0; f < fingers && !eligible.empty() && P.weight() + 2 <= max_weight; ++f) {
        auto nu = point_normals(Y, P);
        bool oriented = nu.has_value() && std::all_of(P.chords.begin(), P.chords.end(), [](const Chord& c) {
                            return c.side != 0;
                        });
        int e = eligible[pick(static_cast<int>(eligible.size()))];
        int sigma = Y.star[e][pick(static_cast<int>(Y.star[e].size()))].tri;
        const auto& row = P.on_edge[e];
        int n = static_cast<int>(row.size());
        int g = pick(n + 1);
        double lo, hi;
        if (n == 0) {
            lo = -0.5;
            hi = 0.5;
        } else {
            lo = g > 0 ? P.points[row[g - 1]].coord : P.points[row[0]].coord - 1.0;
            hi = g < n ? P.points[row[g]].coord : P.points[row[n - 1]].coord + 1.0;
        }
        // Visible chords per other triangle, measured before the new points exist.
        std::vector<std::pair<int, std::vector<int>>> visible;
        {
            auto rank = P.ranks();
            for (const auto& inc : Y.star[e]) {
                if (inc.tri == sigma) continue;
                auto B = boundary_order(Y, P, inc.tri);
                auto pos = [&](int p) { return B.point_pos(Y.slot_of(inc.tri, P.points[p].edge), rank[p]); };
                int gp = B.gap_pos(inc.slot, g);
                std::vector<int> here, vis;
                for (int c = 0; c < static_cast<int>(P.chords.size()); ++c)
                    if (P.chords[c].tri == inc.tri) here.push_back(c);
                for (int c : here) {
                    int pp = pos(P.chords[c].p);
                    bool hidden = false;
                    for (int c2 : here) {
                        if (c2 == c) continue;
                        int a = pos(P.chords[c2].p), b = pos(P.chords[c2].q);
                        if (in_arc(gp, a, b, B.total) != in_arc(pp, a, b, B.total)) hidden = true;
                    }
                    if (!hidden) vis.push_back(c);
                }
                visible.push_back({inc.tri, vis});
            }
        }
        int x = P.add_point(e, g, lo + (hi - lo) / 3.0);
        int y = P.add_point(e, g + 1, lo + 2.0 * (hi - lo) / 3.0);
        auto rank = P.ranks();
        int nux = 0;
        std::vector<int> drop;
        std::vector<Chord> added;
        for (const auto& [tri, vis] : visible) {
            auto B = boundary_order(Y, P, tri);
            auto pos = [&](int p) { return B.point_pos(Y.slot_of(tri, P.points[p].edge), rank[p]); };
            int choice = vis.empty() || pick(4) == 0 ? -1 : vis[pick(static_cast<int>(vis.size()))];
            if (choice >= 0) {
                const Chord& ch = P.chords[choice];
                int a = ch.p, b = ch.q;
                if (interleave(pos(a), pos(x), pos(y), pos(b), B.total)) std::swap(a, b);
                // a joins x, b joins y
                int want = 0;
                if (oriented) {
                    int nua = nu_at(Y, P, ch, a);
                    want = -nua * point_sigma(Y, P, tri, a) * point_sigma(Y, P, tri, x);
                    if (nux != 0 && want != nux) choice = -1;
                }
                if (choice >= 0) {
                    if (oriented) nux = want;
                    drop.push_back(choice);
                    Chord ax{tri, a, x, 0}, yb{tri, y, b, 0};
                    if (oriented) {
                        ax.side = side_from_nu_p(Y, P, ax, nu_at(Y, P, ch, a));
                        yb.side = side_from_nu_p(Y, P, yb, -want);
                    }
                    added.push_back(ax);
                    added.push_back(yb);
                    continue;
                }
            }
            added.push_back({tri, x, y, 0});  // side fixed below
        }
        added.push_back({sigma, x, y, 0});
        if (oriented && nux == 0) nux = pick(2) ? 1 : -1;
        for (auto& c : added)
            if (oriented && c.p == x && c.q == y) c.side = side_from_nu_p(Y, P, c, nux);
        P.remove_chords(drop);
        for (const auto& c : added) P.add_chord(c.tri, c.p, c.q, c.side);
    }
    for (int k = 0; k < circles; ++k) ++P.circles[pick(Y.num_triangles())];
    return P;
}

}  // namespace dtrack
