// Builders shared by the unit tests and the acceptance binary.
#pragma once

#include <set>
#include <string>
#include <vector>

#include "dtrack/axes.hpp"
#include "dtrack/complex.hpp"
#include "dtrack/cover.hpp"
#include "dtrack/fixtures.hpp"
#include "dtrack/pattern.hpp"

namespace testkit {

// One point (coordinate 0) on each listed edge, one chord in every triangle holding two of them.
inline dtrack::Pattern edge_set_pattern(const dtrack::Complex2& Y, const std::vector<int>& edges) {
    dtrack::Pattern t = dtrack::Pattern::empty(Y);
    std::vector<int> at(Y.num_edges(), -1);
    std::set<int> es(edges.begin(), edges.end());
    for (int e : es) at[e] = t.add_point(e, 0, 0.0);
    for (int tri = 0; tri < Y.num_triangles(); ++tri) {
        std::vector<int> pts;
        for (const auto& s : Y.triangles[tri].slots)
            if (at[s.edge] >= 0) pts.push_back(at[s.edge]);
        if (pts.size() == 2) t.add_chord(tri, pts[0], pts[1]);
    }
    return t;
}

inline std::vector<int> edges_by_prefix(const dtrack::Complex2& Y, const std::vector<std::string>& ids) {
    std::vector<int> out;
    for (const auto& id : ids) out.push_back(Y.edge_index.at(id));
    return out;
}

// Edges of a cover whose id (before '@') is in the list.
inline std::vector<int> cover_edges_over(const dtrack::Complex2& X, const std::vector<std::string>& base_ids) {
    std::vector<int> out;
    for (int e = 0; e < X.num_edges(); ++e) {
        auto id = X.edges[e].id.substr(0, X.edges[e].id.find('@'));
        for (const auto& b : base_ids)
            if (id == b) out.push_back(e);
    }
    return out;
}

using namespace dtrack;

// Genus two surface covered along the cocycles dual to a and b.
inline Cover genus2_plane(int radius) {
    return build_cyclic_cover(fixtures::genus2(),
                              CoverSpec::from_cocycles({fixtures::genus2_dual('a'), fixtures::genus2_dual('b')}),
                              Truncated{radius});
}

// Level line: the coboundary of the sheets with coordinate j at most lvl, coordinates shifted by dx.
inline AxisData level_line(const Cover& C, int j, int lvl, double dx = 0.0) {
    std::vector<char> in(C.space.num_vertices());
    for (int v = 0; v < C.space.num_vertices(); ++v) in[v] = C.vertex_sheet[v][j] <= lvl;
    auto t = coboundary_pattern(C.space, in);
    for (auto& p : t.points) p.coord += dx;
    return make_axis(C.space, t, "level " + std::to_string(j) + ":" + std::to_string(lvl));
}

// Multiband cover unwrapping the core.
inline Cover unwrapped_multiband(int m, int k, int radius) {
    auto M = fixtures::multiband(3, m, k);
    std::vector<long> w(M.num_edges(), 0);
    std::set<std::string> ids{"k" + std::to_string(m - 1)};
    for (int b = 0; b < 3; ++b)
        for (int j = 0; j < k; ++j) {
            std::string tag = std::to_string(b) + "_" + std::to_string(m - 1) + "_";
            ids.insert("h" + tag + std::to_string(j + 1));
            ids.insert("d" + tag + std::to_string(j));
        }
    for (int e = 0; e < M.num_edges(); ++e) w[e] = ids.count(M.edges[e].id);
    return build_cyclic_cover(M, CoverSpec::from_cocycle(gauge_fix(M, w)), Truncated{radius});
}

inline int band_of(const std::string& vid) { return vid[0] == 'b' ? vid[1] - '0' : -1; }
inline int ring_of(const std::string& vid) {
    if (vid[0] != 'b') return 0;
    return std::stoi(vid.substr(vid.find('_') + 1, vid.find('@') - vid.find('_') - 1));
}

// Coboundary of the part of band b beyond ring j.
inline Pattern band_circle(const Complex2& X, int b, int j) {
    std::vector<char> in(X.num_vertices());
    for (int v = 0; v < X.num_vertices(); ++v) in[v] = band_of(X.vertices[v]) == b && ring_of(X.vertices[v]) > j;
    return coboundary_pattern(X, in);
}

}  // namespace testkit
