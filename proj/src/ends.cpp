#include "dtrack/ends.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

#include "dtrack/util.hpp"

namespace dtrack {

int ComplementReport::infinite_count() const {
    return static_cast<int>(std::count_if(components.begin(), components.end(),
                                          [](const ComplementComponent& c) { return c.infinite; }));
}

namespace {

struct CellIndex {
    int nv = 0;
    std::vector<int> gap_base;     // per edge
    std::vector<int> region_base;  // per triangle
    std::vector<std::vector<int>> region_of_gap;  // per triangle, by boundary position
    std::vector<int> region_count;
    int disk_base = 0;
    int total = 0;
};

CellIndex index_cells(const Complex2& Y, const Pattern& t) {
    CellIndex I;
    I.nv = Y.num_vertices();
    int next = I.nv;
    for (int e = 0; e < Y.num_edges(); ++e) {
        I.gap_base.push_back(next);
        next += static_cast<int>(t.on_edge[e].size()) + 1;
    }
    auto rank = t.ranks();
    std::vector<std::vector<int>> by_tri(Y.num_triangles());
    for (int c = 0; c < static_cast<int>(t.chords.size()); ++c) by_tri[t.chords[c].tri].push_back(c);
    for (int tri = 0; tri < Y.num_triangles(); ++tri) {
        auto B = boundary_order(Y, t, tri);
        std::vector<std::pair<int, int>> ends;
        for (int c : by_tri[tri]) {
            const Chord& ch = t.chords[c];
            ends.push_back({B.point_pos(Y.slot_of(tri, t.points[ch.p].edge), rank[ch.p]),
                            B.point_pos(Y.slot_of(tri, t.points[ch.q].edge), rank[ch.q])});
        }
        std::map<std::vector<bool>, int> seen;
        std::vector<int> lab(B.total, -1);
        for (int pos = 0; pos < B.total; ++pos) {
            int slot, idx;
            bool is_point;
            B.locate(pos, slot, idx, is_point);
            if (is_point) continue;
            std::vector<bool> sig;
            for (auto [a, b] : ends) sig.push_back(in_arc(pos, a, b, B.total));
            lab[pos] = seen.emplace(sig, static_cast<int>(seen.size())).first->second;
        }
        I.region_base.push_back(next);
        I.region_count.push_back(static_cast<int>(seen.size()));
        I.region_of_gap.push_back(std::move(lab));
        next += static_cast<int>(seen.size());
    }
    I.disk_base = next;
    I.total = next + t.num_circles();
    return I;
}

int gap_cell(const CellIndex& I, int e, int g) { return I.gap_base[e] + g; }

}  // namespace

ComplementReport complement_components(const Complex2& Y, const Pattern& t) {
    auto I = index_cells(Y, t);
    UnionFind uf(I.total);
    std::vector<char> frontier(I.total, 0);
    std::vector<int> region_label(I.total, -1);
    auto flabel = frontier_regions(Y);
    for (int v = 0; v < Y.num_vertices(); ++v) {
        frontier[v] = Y.frontier_vertex[v];
        region_label[v] = flabel[v];
    }
    for (int e = 0; e < Y.num_edges(); ++e) {
        int n = static_cast<int>(t.on_edge[e].size());
        uf.unite(gap_cell(I, e, 0), Y.edges[e].from);
        uf.unite(gap_cell(I, e, n), Y.edges[e].to);
        if (Y.frontier_edge[e])
            for (int g = 0; g <= n; ++g) {
                frontier[gap_cell(I, e, g)] = 1;
                region_label[gap_cell(I, e, g)] = flabel[Y.edges[e].from];
            }
    }
    for (int tri = 0; tri < Y.num_triangles(); ++tri) {
        auto B = boundary_order(Y, t, tri);
        for (int k = 0; k < 3; ++k) {
            int e = Y.triangles[tri].slots[k].edge;
            for (int g = 0; g <= static_cast<int>(t.on_edge[e].size()); ++g)
                uf.unite(gap_cell(I, e, g), I.region_base[tri] + I.region_of_gap[tri][B.gap_pos(k, g)]);
        }
    }
    int n = 0;
    auto lab = uf.labels(&n);
    ComplementReport R;
    R.components.resize(n);
    for (int cell = 0; cell < I.total; ++cell) {
        auto& K = R.components[lab[cell]];
        if (frontier[cell]) K.infinite = true;
        if (region_label[cell] >= 0) K.frontier_regions.push_back(region_label[cell]);
    }
    for (auto& K : R.components) {
        std::sort(K.frontier_regions.begin(), K.frontier_regions.end());
        K.frontier_regions.erase(std::unique(K.frontier_regions.begin(), K.frontier_regions.end()),
                                 K.frontier_regions.end());
    }
    for (int v = 0; v < Y.num_vertices(); ++v) R.components[lab[v]].vertices.push_back(v);
    for (int e = 0; e < Y.num_edges(); ++e)
        for (int g = 0; g <= static_cast<int>(t.on_edge[e].size()); ++g)
            R.components[lab[gap_cell(I, e, g)]].gaps.push_back({e, g});
    for (int tri = 0; tri < Y.num_triangles(); ++tri)
        for (int r = 0; r < I.region_count[tri]; ++r)
            R.components[lab[I.region_base[tri] + r]].regions.push_back({tri, r});
    for (int d = I.disk_base; d < I.total; ++d) ++R.components[lab[d]].disks;

    auto rank = t.ranks();
    auto nu = point_normals(Y, t);
    R.of_point_side[0].resize(t.points.size());
    R.of_point_side[1].resize(t.points.size());
    for (int p = 0; p < t.weight(); ++p) {
        int e = t.points[p].edge;
        int lo = lab[gap_cell(I, e, rank[p])], hi = lab[gap_cell(I, e, rank[p] + 1)];
        R.of_point_side[0][p] = lo;
        R.of_point_side[1][p] = hi;
        R.components[lo].boundary_points.push_back(p);
        if (hi != lo) R.components[hi].boundary_points.push_back(p);
        if (lo == hi) {
            ++R.components[lo].both_sides;
        } else if (nu) {
            int into = (*nu)[p] > 0 ? hi : lo;
            int away = (*nu)[p] > 0 ? lo : hi;
            ++R.components[into].inward;
            ++R.components[away].outward;
        }
    }
    for (int c = 0; c < static_cast<int>(t.chords.size()); ++c) {
        int p = t.chords[c].p;
        int lo = R.of_point_side[0][p], hi = R.of_point_side[1][p];
        R.components[lo].boundary_chords.push_back(c);
        if (hi != lo) R.components[hi].boundary_chords.push_back(c);
    }
    for (auto& K : R.components) std::sort(K.boundary_points.begin(), K.boundary_points.end());
    return R;
}

bool splits(const Complex2& Y, const Pattern& t) { return complement_components(Y, t).infinite_count() >= 2; }

Essentiality is_essential(const Complex2& Y, const Pattern& t, const Basis& B) {
    if (!is_two_sided(Y, t)) throw std::invalid_argument("essentiality is not defined for one-sided patterns");
    auto nums = basis_numbers(Y, B, t);
    Essentiality E;
    for (std::size_t i = 0; i < B.loops.size(); ++i)
        if (nums[i] != 0) {
            E.nonzero_loop = static_cast<int>(i);
            return E;
        }
    for (std::size_t j = 0; j < B.lines.size(); ++j) {
        long v = nums[B.loops.size() + j];
        if (v != 0) {
            E.essential = true;
            E.witness_line = static_cast<int>(j);
            E.witness_number = v;
            return E;
        }
    }
    return E;
}

Pattern extract_elementary(const Complex2& Y, const Pattern& t) {
    auto R = complement_components(Y, t);
    if (R.infinite_count() < 2) throw std::invalid_argument("pattern does not split");
    int U = -1;
    {
        // smallest frontier cell: frontier vertices come first in cell order, then frontier edge gaps
        for (int v = 0; v < Y.num_vertices() && U < 0; ++v)
            if (Y.frontier_vertex[v])
                for (int k = 0; k < static_cast<int>(R.components.size()) && U < 0; ++k)
                    for (int w : R.components[k].vertices)
                        if (w == v) U = k;
        for (int k = 0; k < static_cast<int>(R.components.size()) && U < 0; ++k)
            if (R.components[k].infinite) U = k;
    }
    auto C = components(Y, t);
    int npc = C.count - static_cast<int>(C.circle_of.size());
    // complement components on the sides of each pattern component
    std::vector<std::set<int>> sides(npc);
    for (int p = 0; p < t.weight(); ++p) {
        sides[C.of_point[p]].insert(R.of_point_side[0][p]);
        sides[C.of_point[p]].insert(R.of_point_side[1][p]);
    }
    int nk = static_cast<int>(R.components.size());
    std::vector<std::vector<int>> adj(nk);
    for (const auto& s : sides)
        for (int a : s)
            for (int b : s)
                if (a != b) adj[a].push_back(b);
    // Everything reachable from the other infinite components without entering U.
    std::vector<char> far(nk, 0);
    std::deque<int> q;
    for (int k = 0; k < nk; ++k)
        if (k != U && R.components[k].infinite) {
            far[k] = 1;
            q.push_back(k);
        }
    while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        for (int y : adj[x])
            if (y != U && !far[y]) {
                far[y] = 1;
                q.push_back(y);
            }
    }
    std::vector<char> keep(t.points.size(), 0);
    std::vector<int> nu(t.points.size(), 0);
    for (int k = 0; k < npc; ++k) {
        bool near = false, away = false;
        for (int s : sides[k]) (far[s] ? away : near) = true;
        if (!near || !away) continue;
        int start = -1, want = 0;
        for (int p = 0; p < t.weight() && start < 0; ++p) {
            if (C.of_point[p] != k) continue;
            bool lo_far = far[R.of_point_side[0][p]], hi_far = far[R.of_point_side[1][p]];
            if (lo_far != hi_far) {
                start = p;
                want = hi_far ? -1 : 1;
            }
        }
        if (start < 0) continue;
        auto S = sidedness(Y, t, k, start);
        if (!S.two_sided) throw std::invalid_argument("one-sided component on the frontier of a side");
        for (int p = 0; p < t.weight(); ++p)
            if (C.of_point[p] == k) {
                keep[p] = 1;
                nu[p] = S.nu[p] * want;
            }
    }
    Pattern oriented = t;
    apply_normals(Y, oriented, nu);
    return subpattern(Y, oriented, keep);
}

EndCount end_count_estimate(const Complex2& inner, const Complex2& outer) {
    bool interior = false;
    for (int v = 0; v < inner.num_vertices(); ++v) interior = interior || !inner.frontier_vertex[v];
    if (!interior) throw std::invalid_argument("inner truncation is all frontier");
    EndCount E;
    frontier_regions(inner, &E.inner_regions);
    frontier_regions(outer, &E.outer_regions);
    std::vector<char> collar(outer.num_vertices(), 1), inner_frontier(outer.num_vertices(), 0);
    for (int v = 0; v < inner.num_vertices(); ++v) {
        auto it = outer.vertex_index.find(inner.vertices[v]);
        if (it == outer.vertex_index.end())
            throw std::invalid_argument("truncations do not nest: vertex " + inner.vertices[v]);
        if (inner.frontier_vertex[v])
            inner_frontier[it->second] = 1;
        else
            collar[it->second] = 0;
    }
    UnionFind uf(outer.num_vertices());
    for (const auto& e : outer.edges)
        if (collar[e.from] && collar[e.to]) uf.unite(e.from, e.to);
    std::set<int> reach_out, classes;
    for (int v = 0; v < outer.num_vertices(); ++v)
        if (outer.frontier_vertex[v]) reach_out.insert(uf.find(v));
    for (int v = 0; v < outer.num_vertices(); ++v)
        if (inner_frontier[v] && reach_out.count(uf.find(v))) classes.insert(uf.find(v));
    E.lower_bound = static_cast<int>(classes.size());
    E.stable = E.lower_bound == E.outer_regions;
    return E;
}

}  // namespace dtrack
