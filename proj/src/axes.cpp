#include "dtrack/axes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

#include "dtrack/intersect.hpp"

namespace dtrack {

void AxisData::swap_ends() {
    std::reverse(ends.begin(), ends.end());
    std::reverse(end_regions.begin(), end_regions.end());
}

namespace {

void fill_ends(const Complex2& Y, AxisData& A) {
    const Pattern& t = A.pattern;
    A.ends.clear();
    for (int p = 0; p < t.weight(); ++p)
        if (Y.frontier_edge[t.points[p].edge]) A.ends.push_back(p);
    std::sort(A.ends.begin(), A.ends.end(), [&](int x, int y) {
        return std::make_pair(t.points[x].edge, t.points[x].coord) < std::make_pair(t.points[y].edge, t.points[y].coord);
    });
    auto region = frontier_regions(Y);
    A.end_regions.clear();
    for (int p : A.ends) A.end_regions.push_back(region[Y.edges[t.points[p].edge].from]);
    A.partial = !A.ends.empty();
}

}  // namespace

AxisData make_axis(const Complex2& Y, Pattern t, std::string label) {
    if (!point_normals(Y, t)) orient(Y, t);
    AxisData A;
    A.pattern = std::move(t);
    A.label = std::move(label);
    fill_ends(Y, A);
    return A;
}

std::vector<AxisData> lift_to_cover(const Cover& C, const Complex2& base, const Pattern& t) {
    std::vector<AxisData> out;
    auto parts = component_split(C.space, lift_pattern(C, base, t));
    for (std::size_t i = 0; i < parts.size(); ++i)
        out.push_back(make_axis(C.space, std::move(parts[i]), "component " + std::to_string(i)));
    return out;
}

AxisData translate_axis(const Cover& C, const AxisData& A, const std::vector<long>& shift) {
    const Complex2& Y = C.space;
    const Pattern& t = A.pattern;
    Pattern u = Pattern::empty(Y);
    u.allow_crossings = t.allow_crossings;
    std::vector<int> map(t.points.size(), -1);
    for (int e = 0; e < Y.num_edges(); ++e) {
        if (t.on_edge[e].empty()) continue;
        auto f = C.shift_edge(e, shift);
        if (!f) throw std::out_of_range("translate leaves the truncation at edge " + Y.edges[e].id);
        for (int p : t.on_edge[e]) {
            map[p] = u.add_point(*f, static_cast<int>(u.on_edge[*f].size()), t.points[p].coord, t.points[p].id);
            u.free_nu[map[p]] = t.free_nu[p];
        }
    }
    for (const auto& c : t.chords) {
        auto g = C.shift_tri(c.tri, shift);
        if (!g) throw std::out_of_range("translate leaves the truncation at triangle " + Y.triangles[c.tri].id);
        u.add_chord(*g, map[c.p], map[c.q], c.side);
    }
    for (int tri = 0; tri < Y.num_triangles(); ++tri)
        if (t.circles[tri]) {
            auto g = C.shift_tri(tri, shift);
            if (!g) throw std::out_of_range("translate leaves the truncation");
            u.circles[*g] += t.circles[tri];
        }
    AxisData B;
    B.pattern = std::move(u);
    B.label = A.label;
    fill_ends(Y, B);
    // keep the induced order when the images of the ends are still the ends
    std::vector<int> img;
    for (int p : A.ends) img.push_back(map[p]);
    std::vector<int> sorted_img = img, sorted_ends = B.ends;
    std::sort(sorted_img.begin(), sorted_img.end());
    std::sort(sorted_ends.begin(), sorted_ends.end());
    if (sorted_img == sorted_ends) {
        B.ends = img;
        auto region = frontier_regions(Y);
        B.end_regions.clear();
        for (int p : B.ends) B.end_regions.push_back(region[Y.edges[B.pattern.points[p].edge].from]);
    }
    return B;
}

Sides::Sides(const Complex2& Y, const Pattern& t) : Y_(&Y), t_(t), R_(complement_components(Y, t)) {
    auto nu = point_normals(Y, t);
    if (!nu) throw std::invalid_argument("sides need an oriented two-sided pattern");
    side_.assign(R_.components.size(), 0);
    auto put = [&](int k, int s) {
        if (side_[k] == -s) throw std::invalid_argument("pattern does not separate: a complement component lies on both sides");
        side_[k] = s;
    };
    for (int p = 0; p < t.weight(); ++p) {
        int s = (*nu)[p] > 0 ? 1 : -1;
        put(R_.of_point_side[1][p], s);
        put(R_.of_point_side[0][p], -s);
    }
    gap_comp_.resize(Y.num_edges());
    for (int e = 0; e < Y.num_edges(); ++e) gap_comp_[e].assign(t.on_edge[e].size() + 1, -1);
    vertex_comp_.assign(Y.num_vertices(), -1);
    for (int k = 0; k < static_cast<int>(R_.components.size()); ++k) {
        for (auto [e, g] : R_.components[k].gaps) gap_comp_[e][g] = k;
        for (int v : R_.components[k].vertices) vertex_comp_[v] = k;
    }
}

int Sides::of_vertex(int v) const { return side_[vertex_comp_[v]]; }

int Sides::at(int e, double coord) const {
    int g = 0;
    for (int p : t_.on_edge[e]) {
        double c = t_.points[p].coord;
        if (c == coord) return 0;
        if (c < coord) ++g;
    }
    return side_[gap_comp_[e][g]];
}

std::vector<FrontierProbe> frontier_probes(const Complex2& Y, const std::vector<const Pattern*>& patterns) {
    std::vector<FrontierProbe> out;
    for (int v = 0; v < Y.num_vertices(); ++v)
        if (Y.frontier_vertex[v]) out.push_back({v, -1, 0.0});
    for (int e = 0; e < Y.num_edges(); ++e) {
        if (!Y.frontier_edge[e]) continue;
        std::vector<double> xs;
        for (const Pattern* t : patterns)
            for (int p : t->on_edge[e]) xs.push_back(t->points[p].coord);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        if (xs.empty()) {
            out.push_back({-1, e, 0.0});
            continue;
        }
        out.push_back({-1, e, xs.front() - 1.0});
        for (std::size_t i = 1; i < xs.size(); ++i) out.push_back({-1, e, 0.5 * (xs[i - 1] + xs[i])});
        out.push_back({-1, e, xs.back() + 1.0});
    }
    return out;
}

int side_of_probe(const Sides& S, const FrontierProbe& f) { return f.vertex >= 0 ? S.of_vertex(f.vertex) : S.at(f.edge, f.coord); }

SideMap side_of_frontier(const Complex2& Y, const AxisData& A, int base_vertex) {
    Sides S(Y, A.pattern);
    int count = 0;
    auto label = frontier_regions(Y, &count);
    SideMap M;
    std::vector<std::set<int>> seen(count);
    for (const auto& f : frontier_probes(Y, {&A.pattern})) {
        int r = f.vertex >= 0 ? label[f.vertex] : label[Y.edges[f.edge].from];
        seen[r].insert(side_of_probe(S, f));
    }
    int flip = 1;
    if (base_vertex >= 0) {
        int s = S.of_vertex(base_vertex);
        if (s == 0) throw std::invalid_argument("base vertex is not beside the axis");
        flip = -s;
    }
    for (const auto& s : seen) M.region_side.push_back(s.size() == 1 ? *s.begin() * flip : 0);
    return M;
}

std::string cross_kind_name(CrossKind k) {
    switch (k) {
        case CrossKind::DisjointEnds: return "disjoint_ends";
        case CrossKind::Crosses: return "crosses";
        default: return "unresolved";
    }
}

std::string cross_type_name(CrossType t) {
    switch (t) {
        case CrossType::OrientationPreserving: return "o.p.";
        case CrossType::OrientationReversing: return "o.r.";
        case CrossType::Mixed: return "mixed";
        default: return "none";
    }
}

namespace {

int end_side(const Sides& S, const AxisData& B, int i) {
    const auto& p = B.pattern.points[B.ends[i]];
    return S.at(p.edge, p.coord);
}

void require_axis(const AxisData& A) {
    if (!A.axis_like())
        throw std::invalid_argument("axis " + A.label + " has " + std::to_string(A.ends.size()) + " ends, not 2");
}

CrossVerdict verdict(const Sides& SA, const Sides& SB, const AxisData& A, const AxisData& B) {
    CrossVerdict V;
    V.b_ends_under_a = {end_side(SA, B, 0), end_side(SA, B, 1)};
    V.a_ends_under_b = {end_side(SB, A, 0), end_side(SB, A, 1)};
    auto resolved = [](std::array<int, 2> s) { return s[0] != 0 && s[1] != 0; };
    bool ok = resolved(V.b_ends_under_a) && resolved(V.a_ends_under_b);
    V.b_crosses_a = resolved(V.b_ends_under_a) && V.b_ends_under_a[0] != V.b_ends_under_a[1];
    V.a_crosses_b = resolved(V.a_ends_under_b) && V.a_ends_under_b[0] != V.a_ends_under_b[1];
    if (!ok)
        V.kind = CrossKind::Unresolved;
    else
        V.kind = V.b_crosses_a || V.a_crosses_b ? CrossKind::Crosses : CrossKind::DisjointEnds;
    if (V.b_crosses_a && V.a_crosses_b) {
        bool b_is_p = V.b_ends_under_a[0] > 0, a_is_p = V.a_ends_under_b[0] > 0;
        V.type = b_is_p != a_is_p ? CrossType::OrientationPreserving : CrossType::OrientationReversing;
    } else if (V.b_crosses_a || V.a_crosses_b) {
        V.type = CrossType::Mixed;
    }
    return V;
}

std::array<std::array<int, 2>, 4> quadrants(const CrossVerdict& V) {
    int aP = V.b_ends_under_a[0], aN = V.b_ends_under_a[1];  // sides under A of P_B, N_B
    int bP = V.a_ends_under_b[0], bN = V.a_ends_under_b[1];  // sides under B of P_A, N_A
    return {{{aP, bP}, {aP, bN}, {aN, bN}, {aN, bP}}};
}

}  // namespace

CrossVerdict crosses_with_type(const Complex2& Y, const AxisData& A, const AxisData& B) {
    require_axis(A);
    require_axis(B);
    return verdict(Sides(Y, A.pattern), Sides(Y, B.pattern), A, B);
}

FourRegions four_regions(const Complex2& Y, const AxisData& A, const AxisData& B) {
    require_axis(A);
    require_axis(B);
    Sides SA(Y, A.pattern), SB(Y, B.pattern);
    auto V = verdict(SA, SB, A, B);
    if (!V.a_crosses_b || !V.b_crosses_a) throw std::invalid_argument("four regions need a mutually crossing pair");
    FourRegions F;
    F.quadrant = quadrants(V);
    for (const auto& f : frontier_probes(Y, {&A.pattern, &B.pattern})) {
        std::array<int, 2> q{side_of_probe(SA, f), side_of_probe(SB, f)};
        auto it = std::find(F.quadrant.begin(), F.quadrant.end(), q);
        if (q[0] == 0 || q[1] == 0 || it == F.quadrant.end())
            ++F.unplaced;
        else
            F.interval[it - F.quadrant.begin()].push_back(f);
    }
    return F;
}

SharpSum sharp_sum(const Complex2& Y, const HypStructure& H, const AxisData& A, const AxisData& B, int side_a,
                   int side_b) {
    require_axis(A);
    require_axis(B);
    Sides SA(Y, A.pattern), SB(Y, B.pattern);
    auto V = verdict(SA, SB, A, B);
    if (!V.a_crosses_b || !V.b_crosses_a) throw std::invalid_argument("A#B needs a crossing pair");
    int anchor = -1;
    for (int v = 0; v < Y.num_vertices() && anchor < 0; ++v)
        if (Y.frontier_vertex[v] && SA.of_vertex(v) == side_a && SB.of_vertex(v) == side_b) anchor = v;
    if (anchor < 0) throw std::invalid_argument("selected quadrant has no frontier vertex");
    Pattern a = A.pattern, b = B.pattern;
    if (side_a < 0) reverse_orientation(a);
    if (side_b < 0) reverse_orientation(b);
    auto cut = cut_and_paste(Y, H, a, b, CutPolicy::Oriented);
    const Pattern& P = cut.pattern;
    auto R = complement_components(Y, P);
    int U = -1;
    for (int k = 0; k < static_cast<int>(R.components.size()) && U < 0; ++k)
        for (int v : R.components[k].vertices)
            if (v == anchor) U = k;
    auto C = components(Y, P);
    std::vector<char> comp_keep(C.count, 0), keep(P.points.size(), 0);
    for (int p = 0; p < P.weight(); ++p)
        if (R.of_point_side[0][p] == U || R.of_point_side[1][p] == U) comp_keep[C.of_point[p]] = 1;
    for (int p = 0; p < P.weight(); ++p) keep[p] = comp_keep[C.of_point[p]];
    SharpSum S;
    S.pattern = subpattern(Y, P, keep);
    S.crossings = cut.crossings;
    S.before = cut.before;
    S.after = pattern_complexity(Y, H, S.pattern);
    return S;
}

bool same_track(const Pattern& a, const Pattern& b, double tol) {
    if (a.weight() != b.weight() || a.chords.size() != b.chords.size() || a.on_edge.size() != b.on_edge.size())
        return false;
    for (std::size_t e = 0; e < a.on_edge.size(); ++e) {
        if (a.on_edge[e].size() != b.on_edge[e].size()) return false;
        for (std::size_t i = 0; i < a.on_edge[e].size(); ++i)
            if (std::abs(a.points[a.on_edge[e][i]].coord - b.points[b.on_edge[e][i]].coord) > tol) return false;
    }
    auto key = [](const Pattern& t) {
        auto rank = t.ranks();
        std::set<std::tuple<int, std::pair<int, int>, std::pair<int, int>>> out;
        for (const auto& c : t.chords) {
            std::pair<int, int> x{t.points[c.p].edge, rank[c.p]}, y{t.points[c.q].edge, rank[c.q]};
            out.insert({c.tri, std::min(x, y), std::max(x, y)});
        }
        return out;
    };
    return key(a) == key(b);
}

bool disjoint_tracks(const Complex2& Y, const Pattern& a, const Pattern& b, double tol) {
    for (int e = 0; e < Y.num_edges(); ++e)
        for (int p : a.on_edge[e])
            for (int q : b.on_edge[e])
                if (std::abs(a.points[p].coord - b.points[q].coord) <= tol) return false;
    Pattern u = disjoint_union(Y, a, b);
    return is_embedded(Y, u);
}

namespace {

// Same track; +1 when every normal agrees, -1 when every normal is reversed, 0 otherwise.
int coincidence_sign(const Complex2& Y, const Pattern& a, const Pattern& b) {
    auto na = point_normals(Y, a), nb = point_normals(Y, b);
    if (!na || !nb) return 0;
    bool agree = true, reverse = true;
    for (std::size_t e = 0; e < a.on_edge.size(); ++e)
        for (std::size_t i = 0; i < a.on_edge[e].size(); ++i) {
            int x = (*na)[a.on_edge[e][i]], y = (*nb)[b.on_edge[e][i]];
            agree = agree && x == y;
            reverse = reverse && x == -y;
        }
    return agree ? 1 : reverse ? -1 : 0;
}

}  // namespace

ConditionReport check_splitting_conditions(const Complex2& Y, const AxisData& A, const std::vector<Translate>& family) {
    if (family.empty()) throw std::invalid_argument("translate family is empty");
    ConditionReport Rp;
    Rp.weight = A.pattern.weight();
    Rp.a = Rp.weight > 0;
    if (!Rp.a) Rp.failures.push_back("a: empty track");
    std::optional<Sides> SA;
    try {
        SA.emplace(Y, A.pattern);
    } catch (const std::invalid_argument& ex) {
        Rp.failures.push_back(std::string("b: ") + ex.what());
    }
    if (SA) {
        bool left = false, right = false;
        const auto& comps = SA->report().components;
        for (int k = 0; k < static_cast<int>(comps.size()); ++k) {
            if (!comps[k].infinite) continue;
            ++Rp.infinite_sides;
            (SA->of_component(k) > 0 ? right : left) = true;
        }
        Rp.b = left && right && Rp.infinite_sides == 2;
        if (!Rp.b) Rp.failures.push_back("b: " + std::to_string(Rp.infinite_sides) + " infinite complement components");
    }
    Rp.c = Rp.d = Rp.e = SA.has_value();
    if (!SA) return Rp;
    for (const auto& g : family) {
        PairReport P;
        P.label = g.label;
        const Pattern& gp = g.axis.pattern;
        if (same_track(A.pattern, gp)) {
            int s = coincidence_sign(Y, A.pattern, gp);
            P.overlap = s > 0 ? Overlap::Coincide : s < 0 ? Overlap::Reversed : Overlap::Unresolved;
        } else {
            P.overlap = disjoint_tracks(Y, A.pattern, gp) ? Overlap::Disjoint : Overlap::Crossing;
        }
        P.swaps_sides = P.overlap == Overlap::Reversed;
        Sides SG(Y, gp);
        auto tally = [&](int sa, int sg, bool frontier) {
            if (sa == 0 || sg == 0) return;
            int idx = (sa > 0 ? 0 : 2) + (sg > 0 ? 0 : 1);
            ++P.cells[idx];
            if (frontier) ++P.frontier_touch[idx];
        };
        for (int v = 0; v < Y.num_vertices(); ++v) tally(SA->of_vertex(v), SG.of_vertex(v), Y.frontier_vertex[v]);
        for (int e = 0; e < Y.num_edges(); ++e) {
            std::vector<double> xs;
            for (int p : A.pattern.on_edge[e]) xs.push_back(A.pattern.points[p].coord);
            for (int p : gp.on_edge[e]) xs.push_back(gp.points[p].coord);
            std::sort(xs.begin(), xs.end());
            xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
            std::vector<double> probes;
            if (xs.empty()) probes.push_back(0.0);
            else {
                probes.push_back(xs.front() - 1.0);
                for (std::size_t i = 1; i < xs.size(); ++i) probes.push_back(0.5 * (xs[i - 1] + xs[i]));
                probes.push_back(xs.back() + 1.0);
            }
            for (double x : probes) tally(SA->at(e, x), SG.at(e, x), Y.frontier_edge[e]);
        }
        for (int k = 0; k < 4; ++k) {
            P.some_finite = P.some_finite || P.frontier_touch[k] == 0;
            P.some_empty = P.some_empty || P.cells[k] == 0;
        }
        if (!P.some_finite) {
            Rp.c = false;
            Rp.failures.push_back("c: " + g.label);
        }
        if (!P.some_empty) {
            Rp.d = false;
            Rp.failures.push_back("d: " + g.label);
        }
        if (P.swaps_sides) {
            Rp.e = false;
            Rp.failures.push_back("e: " + g.label);
        }
        Rp.pairs.push_back(P);
    }
    if (!Rp.e) Rp.remedy = "a translate exchanges the sides: use one boundary component of a product neighbourhood of t";
    return Rp;
}

TripleReport canonical_triple(const Complex2& Y, const AxisData& A, const std::vector<Translate>& family) {
    require_axis(A);
    Sides SA(Y, A.pattern);
    std::vector<const Pattern*> all{&A.pattern};
    for (const auto& g : family) all.push_back(&g.axis.pattern);
    auto probes = frontier_probes(Y, all);
    struct Cand {
        std::size_t index;
        std::vector<int> set;  // probe indices in [P_A, P_gA]
        std::array<int, 2> q;
        Sides S;
    };
    std::vector<Cand> cands;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& B = family[i].axis;
        if (!B.axis_like()) continue;
        Sides SB(Y, B.pattern);
        auto V = verdict(SA, SB, A, B);
        if (!V.a_crosses_b || !V.b_crosses_a) continue;
        auto q = quadrants(V)[0];
        std::vector<int> set;
        for (int k = 0; k < static_cast<int>(probes.size()); ++k)
            if (side_of_probe(SA, probes[k]) == q[0] && side_of_probe(SB, probes[k]) == q[1]) set.push_back(k);
        cands.push_back({i, std::move(set), q, std::move(SB)});
    }
    TripleReport T;
    if (cands.empty()) return T;
    auto strictly_inside = [](const std::vector<int>& small, const std::vector<int>& big) {
        return small.size() < big.size() && std::includes(big.begin(), big.end(), small.begin(), small.end());
    };
    const Cand* best = nullptr;
    for (const auto& c : cands) {
        bool minimal = true;
        for (const auto& d : cands) minimal = minimal && !strictly_inside(d.set, c.set);
        if (!minimal) continue;
        if (!best || c.set.size() < best->set.size() ||
            (c.set.size() == best->set.size() && family[c.index].label < family[best->index].label))
            best = &c;
    }
    const auto& g = family[best->index];
    T.found = true;
    T.label = g.label;
    T.nearest_size = static_cast<int>(best->set.size());
    for (const auto& c : cands) {
        if (&c == best) continue;
        const auto& C = family[c.index].axis;
        for (int i = 0; i < 2; ++i)
            if (end_side(SA, C, i) == best->q[0] && end_side(best->S, C, i) == best->q[1]) {
                T.intruders.push_back(family[c.index].label);
                break;
            }
    }
    T.square_supplied = g.square.has_value();
    T.good = T.square_supplied && disjoint_tracks(Y, A.pattern, g.square->pattern);
    return T;
}

}  // namespace dtrack
