#include "dtrack/search.hpp"

#include <algorithm>
#include <stdexcept>

#include "dtrack/ends.hpp"
#include "dtrack/intersect.hpp"

namespace dtrack {

std::string search_mode_name(SearchMode m) { return m == SearchMode::Essential ? "essential" : "one_sided"; }

std::optional<NormalCoordinates> normal_coordinates(const Complex2& Y, const std::vector<int>& edge_count) {
    NormalCoordinates N;
    N.edge_count = edge_count;
    for (const auto& T : Y.triangles) {
        std::array<int, 3> n{};
        for (int k = 0; k < 3; ++k) n[k] = edge_count[T.slots[k].edge];
        if ((n[0] + n[1] + n[2]) % 2) return std::nullopt;
        std::array<int, 3> c{};
        for (int k = 0; k < 3; ++k) {
            c[k] = (n[k] + n[(k + 1) % 3] - n[(k + 2) % 3]) / 2;
            if (c[k] < 0) return std::nullopt;
        }
        N.corner.push_back(c);
    }
    return N;
}

namespace {

struct Enumerator {
    const Complex2& Y;
    std::vector<std::vector<int>> closes;  // triangles whose largest edge is e
    std::vector<char> allowed;
    std::vector<int> count;

    Enumerator(const Complex2& Y_, bool allow_frontier)
        : Y(Y_), closes(Y_.num_edges()), allowed(Y_.num_edges(), 1), count(Y_.num_edges(), 0) {
        for (int t = 0; t < Y.num_triangles(); ++t) {
            int m = 0;
            for (const auto& s : Y.triangles[t].slots) m = std::max(m, s.edge);
            closes[m].push_back(t);
        }
        if (!allow_frontier)
            for (int e = 0; e < Y.num_edges(); ++e) allowed[e] = !Y.frontier_edge[e];
    }

    bool triangle_ok(int t) const {
        std::array<int, 3> n{};
        for (int k = 0; k < 3; ++k) n[k] = count[Y.triangles[t].slots[k].edge];
        if ((n[0] + n[1] + n[2]) % 2) return false;
        for (int k = 0; k < 3; ++k)
            if (n[k] > n[(k + 1) % 3] + n[(k + 2) % 3]) return false;
        return true;
    }

    // exact: total must equal budget at the end; otherwise at most budget
    bool run(int e, int left, bool exact, const std::function<bool(const NormalCoordinates&)>& visit) {
        if (e == Y.num_edges()) {
            if (exact && left != 0) return true;
            return visit(*normal_coordinates(Y, count));
        }
        int top = allowed[e] ? left : 0;
        for (int n = 0; n <= top; ++n) {
            count[e] = n;
            bool ok = true;
            for (int t : closes[e]) ok = ok && triangle_ok(t);
            if (ok && !run(e + 1, left - n, exact, visit)) {
                count[e] = 0;
                return false;
            }
        }
        count[e] = 0;
        return true;
    }
};

}  // namespace

void enumerate_normal(const Complex2& Y, int W, const std::function<bool(const NormalCoordinates&)>& visit,
                      bool allow_frontier) {
    if (W < 0) throw std::invalid_argument("weight bound must be non-negative");
    Enumerator(Y, allow_frontier).run(0, W, false, visit);
}

std::vector<Pattern> enumerate_normal(const Complex2& Y, int W, bool allow_frontier) {
    std::vector<Pattern> out;
    enumerate_normal(
        Y, W,
        [&](const NormalCoordinates& N) {
            out.push_back(pattern_from_coordinates(Y, N));
            return true;
        },
        allow_frontier);
    return out;
}

Pattern pattern_from_coordinates(const Complex2& Y, const NormalCoordinates& N) {
    Pattern t = Pattern::empty(Y);
    std::vector<std::vector<int>> at(Y.num_edges());
    for (int e = 0; e < Y.num_edges(); ++e) {
        int n = N.edge_count[e];
        for (int i = 0; i < n; ++i) at[e].push_back(t.add_point(e, i, 0.25 * (i - 0.5 * (n - 1))));
    }
    for (int tri = 0; tri < Y.num_triangles(); ++tri) {
        const auto& T = Y.triangles[tri];
        auto point = [&](int k, int j) {  // j-th point of slot k in traversal order
            int e = T.slots[k].edge;
            int n = N.edge_count[e];
            return at[e][T.slots[k].sign > 0 ? j : n - 1 - j];
        };
        for (int k = 0; k < 3; ++k) {
            int nk = N.edge_count[T.slots[k].edge];
            for (int i = 0; i < N.corner[tri][k]; ++i) t.add_chord(tri, point(k, nk - 1 - i), point((k + 1) % 3, i));
        }
    }
    orient(Y, t);
    return t;
}

SearchResult shortest_pattern(const Complex2& Y, const HypStructure& H, const SearchOptions& opts) {
    SearchResult R;
    std::optional<Basis> basis;
    if (opts.mode == SearchMode::Essential) basis = equivalence_basis(Y);
    for (int w = 1; w <= opts.weight_bound && !R.pattern; ++w) {
        Enumerator en(Y, false);
        en.run(0, w, true, [&](const NormalCoordinates& N) {
            Pattern t = pattern_from_coordinates(Y, N);
            if (opts.mode == SearchMode::Essential) {
                if (!is_two_sided(Y, t) || !splits(Y, t)) return true;
                t = extract_elementary(Y, t);
                if (t.weight() != w || !is_essential(Y, t, *basis).essential) return true;
            } else if (is_two_sided(Y, t)) {
                return true;
            }
            ++R.candidates;
            auto M = minimize_length(Y, H, t, opts.minimize);
            bool better = !R.pattern || M.complexity.length < R.complexity.length - opts.tie_tol ||
                          (opts.reverse_ties && M.complexity.length <= R.complexity.length + opts.tie_tol);
            if (better) {
                R.pattern = M.pattern;
                R.complexity = M.complexity;
                R.edge_count = N.edge_count;
                R.converged = M.converged;
                R.grad_norm = M.grad_norm;
            }
            return true;
        });
    }
    if (R.pattern) {
        R.normal = is_normal(Y, *R.pattern).normal;
        R.connected = components(Y, *R.pattern).count == 1;
        R.two_sided = is_two_sided(Y, *R.pattern);
    }
    return R;
}

}  // namespace dtrack
