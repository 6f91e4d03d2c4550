#include "dtrack/hypgeom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dtrack {

namespace {

// X - 1 where cosh d = X, and its partials, for points on different slots.
struct CoshTerm {
    double xm1, da, db;
};

CoshTerm cosh_term(int kp, double a, int kq, double b) {
    double sh = std::sinh(0.5 * (a + b));
    double base = 2.0 * sh * sh;  // cosh(a+b) - 1
    double s = std::sinh(a + b);
    if (kq == (kp + 1) % 3) {
        double e = 0.5 * std::exp(b - a);
        return {base + e, s - e, s + e};
    }
    double e = 0.5 * std::exp(a - b);
    return {base + e, s + e, s - e};
}

double acosh1p(double xm1) { return std::log1p(xm1 + std::sqrt(xm1 * (xm1 + 2.0))); }

const std::array<std::array<double, 2>, 3>& klein_vertices() {
    static const std::array<std::array<double, 2>, 3> V = [] {
        std::array<std::array<double, 2>, 3> v{};
        for (int k = 0; k < 3; ++k) {
            double ang = M_PI / 2 + 2 * M_PI * k / 3;
            v[k] = {std::cos(ang), std::sin(ang)};
        }
        return v;
    }();
    return V;
}

}  // namespace

HypStructure assign_structure(const Complex2& Y, const std::vector<std::optional<double>>& shears) {
    const auto& sh = shears.empty() ? Y.shear : shears;
    HypStructure H;
    H.offset.assign(Y.num_triangles(), {0.0, 0.0, 0.0});
    H.shear.assign(Y.num_edges(), 0.0);
    for (int e = 0; e < Y.num_edges(); ++e) {
        if (e >= static_cast<int>(sh.size()) || !sh[e]) continue;
        if (Y.valence(e) < 2)
            throw ComplexError(ComplexError::Kind::Shear, 0, "shear on edge " + Y.edges[e].id + " with no gluing");
        H.shear[e] = *sh[e];
        const auto& star = Y.star[e];
        for (std::size_t i = 1; i < star.size(); ++i) H.offset[star[i].tri][star[i].slot] = *sh[e];
    }
    return H;
}

HypStructure lift_structure(const Cover& C, const HypStructure& base) {
    HypStructure H;
    for (int t = 0; t < C.space.num_triangles(); ++t) H.offset.push_back(base.offset[C.tri_proj[t]]);
    for (int e = 0; e < C.space.num_edges(); ++e) H.shear.push_back(base.shear[C.edge_proj[e]]);
    return H;
}

double tangency_side_length() { return std::acosh(1.5); }

double chord_length_params(int kp, double a, int kq, double b) {
    if (kp == kq) return std::abs(a - b);
    return acosh1p(cosh_term(kp, a, kq, b).xm1);
}

std::pair<double, double> chord_length_grad(int kp, double a, int kq, double b) {
    if (kp == kq) {
        double s = a > b ? 1.0 : (a < b ? -1.0 : 0.0);
        return {s, -s};
    }
    auto c = cosh_term(kp, a, kq, b);
    double den = std::sqrt(c.xm1 * (c.xm1 + 2.0));
    return {c.da / den, c.db / den};
}

double slot_param(const Complex2& Y, const HypStructure& H, int tri, int slot, double coord) {
    return Y.triangles[tri].slots[slot].sign * (coord - H.offset[tri][slot]);
}

double chord_length(const Complex2& Y, const HypStructure& H, const Pattern& t, const Chord& c) {
    int kp = Y.slot_of(c.tri, t.points[c.p].edge), kq = Y.slot_of(c.tri, t.points[c.q].edge);
    return chord_length_params(kp, slot_param(Y, H, c.tri, kp, t.points[c.p].coord), kq,
                               slot_param(Y, H, c.tri, kq, t.points[c.q].coord));
}

double pattern_length(const Complex2& Y, const HypStructure& H, const Pattern& t) {
    double L = 0;
    for (const auto& c : t.chords) L += chord_length(Y, H, t, c);
    return L;
}

Complexity pattern_complexity(const Complex2& Y, const HypStructure& H, const Pattern& t) {
    if (t.num_circles() > 0) throw std::invalid_argument("delete trivial circles before measuring complexity");
    return {t.weight(), pattern_length(Y, H, t)};
}

namespace {

// Contribution of chord c to dL/ds at point p.
double chord_derivative(const Complex2& Y, const HypStructure& H, const Pattern& t, const Chord& c, int p) {
    int kp = Y.slot_of(c.tri, t.points[c.p].edge), kq = Y.slot_of(c.tri, t.points[c.q].edge);
    double a = slot_param(Y, H, c.tri, kp, t.points[c.p].coord);
    double b = slot_param(Y, H, c.tri, kq, t.points[c.q].coord);
    auto [ga, gb] = chord_length_grad(kp, a, kq, b);
    if (p == c.p) return Y.triangles[c.tri].slots[kp].sign * ga;
    return Y.triangles[c.tri].slots[kq].sign * gb;
}

}  // namespace

std::vector<double> length_gradient(const Complex2& Y, const HypStructure& H, const Pattern& t) {
    std::vector<double> g(t.points.size(), 0.0);
    for (const auto& c : t.chords) {
        g[c.p] += chord_derivative(Y, H, t, c, c.p);
        g[c.q] += chord_derivative(Y, H, t, c, c.q);
    }
    return g;
}

MinimizeResult minimize_length(const Complex2& Y, const HypStructure& H, const Pattern& t,
                               const MinimizeOptions& opts) {
    MinimizeResult R;
    R.pattern = t;
    Pattern& P = R.pattern;
    std::vector<std::vector<int>> incident(P.points.size());
    for (int c = 0; c < static_cast<int>(P.chords.size()); ++c) {
        incident[P.chords[c].p].push_back(c);
        incident[P.chords[c].q].push_back(c);
    }
    for (auto& pt : P.points) pt.coord = std::clamp(pt.coord, -opts.s_max, opts.s_max);
    auto deriv = [&](int p, double s) {
        double keep = P.points[p].coord;
        P.points[p].coord = s;
        double d = 0;
        for (int c : incident[p]) d += chord_derivative(Y, H, P, P.chords[c], p);
        P.points[p].coord = keep;
        return d;
    };
    auto bracket = [&](int e, int i) {
        const auto& row = P.on_edge[e];
        double lo = i > 0 ? P.points[row[i - 1]].coord : -opts.s_max;
        double hi = i + 1 < static_cast<int>(row.size()) ? P.points[row[i + 1]].coord : opts.s_max;
        return std::pair{lo, hi};
    };
    R.history.push_back(pattern_length(Y, H, P));
    bool stalled = false;
    for (int it = 0; it < opts.max_iter && !stalled; ++it) {
        double max_move = 0;
        for (int e = 0; e < Y.num_edges(); ++e) {
            const auto& row = P.on_edge[e];
            for (int i = 0; i < static_cast<int>(row.size()); ++i) {
                int p = row[i];
                if (incident[p].empty()) continue;
                auto [lo, hi] = bracket(e, i);
                double s;
                if (deriv(p, lo) >= 0) {
                    s = lo;
                } else if (deriv(p, hi) <= 0) {
                    s = hi;
                } else {
                    double a = lo, b = hi;
                    for (int k = 0; k < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++k) {
                        double m = 0.5 * (a + b);
                        (deriv(p, m) > 0 ? b : a) = m;
                    }
                    s = 0.5 * (a + b);
                }
                max_move = std::max(max_move, std::abs(s - P.points[p].coord));
                P.points[p].coord = s;
            }
        }
        R.iterations = it + 1;
        R.history.push_back(pattern_length(Y, H, P));
        if (max_move < opts.tol) stalled = true;
    }
    double g2 = 0;
    for (int e = 0; e < Y.num_edges(); ++e) {
        const auto& row = P.on_edge[e];
        for (int i = 0; i < static_cast<int>(row.size()); ++i) {
            int p = row[i];
            if (incident[p].empty()) continue;
            auto [lo, hi] = bracket(e, i);
            double s = P.points[p].coord;
            double g = deriv(p, s);
            if (s <= lo && g > 0) g = 0;
            if (s >= hi && g < 0) g = 0;
            g2 += g * g;
            if (std::abs(s) >= opts.s_max - 1e-9) R.escaped = true;
            if (i > 0 && std::abs(s - P.points[row[i - 1]].coord) < 1e-9) R.coincident.push_back({row[i - 1], p});
        }
    }
    R.grad_norm = std::sqrt(g2);
    R.converged = stalled && !R.escaped;
    R.complexity = {P.weight(), R.history.back()};
    return R;
}

std::array<double, 2> klein_point(int slot, double a) {
    const auto& V = klein_vertices();
    double th = std::tanh(a);
    const auto& A = V[slot];
    const auto& B = V[(slot + 1) % 3];
    return {A[0] * (1 - th) / 2 + B[0] * (1 + th) / 2, A[1] * (1 - th) / 2 + B[1] * (1 + th) / 2};
}

double klein_defect(double a) {
    double c = std::cosh(a);
    return 3.0 / (4.0 * c * c);
}

double klein_distance_from(int slot, double a, const std::array<double, 2>& x) {
    auto P = klein_point(slot, a);
    double num = klein_defect(a) + P[0] * (P[0] - x[0]) + P[1] * (P[1] - x[1]);
    double dx = 1.0 - x[0] * x[0] - x[1] * x[1];
    double ch = num / std::sqrt(klein_defect(a) * dx);
    return std::acosh(std::max(1.0, ch));
}

std::optional<std::array<double, 2>> klein_crossing(int kp, double a, int kq, double b, int kr, double c, int ks,
                                                    double d) {
    auto P = klein_point(kp, a), Q = klein_point(kq, b), R = klein_point(kr, c), S = klein_point(ks, d);
    double ux = Q[0] - P[0], uy = Q[1] - P[1], vx = S[0] - R[0], vy = S[1] - R[1];
    double den = ux * vy - uy * vx;
    if (std::abs(den) < 1e-300) return std::nullopt;
    double wx = R[0] - P[0], wy = R[1] - P[1];
    double s = (wx * vy - wy * vx) / den;
    return std::array<double, 2>{P[0] + s * ux, P[1] + s * uy};
}

}  // namespace dtrack
