#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <random>

#include "dtrack/fixtures.hpp"
#include "dtrack/hypgeom.hpp"
#include "helpers.hpp"

using namespace dtrack;
using cplx = std::complex<double>;

namespace {

// Upper half-plane position of the point at parameter u on ideal edge k of the triangle (inf, 0, 1).
cplx uhp_point(int k, double u) {
    cplx z(0.0, std::exp(-u));
    for (int i = 0; i < k; ++i) z = 1.0 / (1.0 - z);
    return z;
}

double uhp_distance(cplx z, cplx w) { return std::acosh(1 + std::norm(z - w) / (2 * z.imag() * w.imag())); }

// Length of the geodesic from z to w by quadrature of |dz|/Im z along it.
double quadrature_length(cplx z, cplx w) {
    using boost::math::quadrature::gauss_kronrod;
    if (std::abs(z.real() - w.real()) < 1e-13) {
        double lo = std::min(z.imag(), w.imag()), hi = std::max(z.imag(), w.imag());
        return gauss_kronrod<double, 61>::integrate([](double y) { return 1.0 / y; }, lo, hi, 15, 1e-14);
    }
    double c = (std::norm(w) - std::norm(z)) / (2 * (w.real() - z.real()));
    double r = std::abs(z - c);
    double t1 = std::arg(z - c), t2 = std::arg(w - c);
    if (t1 > t2) std::swap(t1, t2);
    return gauss_kronrod<double, 61>::integrate([](double th) { return 1.0 / std::sin(th); }, t1, t2, 15, 1e-14);
}

}  // namespace

TEST(Hypgeom, TangencySideLengthMatchesExplicitPoints) {
    double oracle = uhp_distance(uhp_point(0, 0), uhp_point(1, 0));
    EXPECT_NEAR(tangency_side_length(), oracle, 1e-14);
    EXPECT_NEAR(quadrature_length(uhp_point(0, 0), uhp_point(1, 0)), oracle, 1e-10);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(chord_length_params(k, 0, (k + 1) % 3, 0), oracle, 1e-14);
}

TEST(Hypgeom, ChordLengthAgreesWithQuadrature) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(-3, 3);
    std::uniform_int_distribution<int> K(0, 2);
    for (int i = 0; i < 300; ++i) {
        int kp = K(rng), kq = K(rng);
        double a = U(rng), b = U(rng);
        double got = chord_length_params(kp, a, kq, b);
        double want = quadrature_length(uhp_point(kp, a), uhp_point(kq, b));
        EXPECT_NEAR(got, want, 1e-9 * std::max(1.0, want)) << kp << ' ' << a << ' ' << kq << ' ' << b;
    }
}

TEST(Hypgeom, SameEdgeIsArclength) {
    EXPECT_EQ(chord_length_params(1, 0.4, 1, 0.4), 0.0);
    EXPECT_NEAR(chord_length_params(2, 0.8, 2, -0.8), 1.6, 1e-15);
}

TEST(Hypgeom, KleinDistanceMatchesChordLength) {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> U(-4, 4);
    for (int i = 0; i < 200; ++i) {
        int kp = i % 3, kq = (i / 3) % 3;
        double a = U(rng), b = U(rng);
        if (kp == kq) continue;
        EXPECT_NEAR(klein_distance_from(kp, a, klein_point(kq, b)), chord_length_params(kp, a, kq, b), 1e-9);
    }
}

TEST(Hypgeom, MetricProperties) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(-3, 3);
    for (int i = 0; i < 500; ++i) {
        int k1 = i % 3, k2 = (i + 1 + i / 3) % 3, k3 = (i / 9) % 3;
        double a = U(rng), b = U(rng), c = U(rng);
        double ab = chord_length_params(k1, a, k2, b), ba = chord_length_params(k2, b, k1, a);
        EXPECT_NEAR(ab, ba, 1e-12);
        EXPECT_GE(ab, 0.0);
        double bc = chord_length_params(k2, b, k3, c), ac = chord_length_params(k1, a, k3, c);
        EXPECT_LE(ac, ab + bc + 1e-9);
    }
}

TEST(Hypgeom, GradientMatchesCentralDifferences) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> U(-3, 3);
    const double h = 1e-6;
    for (int i = 0; i < 300; ++i) {
        int kp = i % 3, kq = (kp + 1 + (i / 3) % 2) % 3;
        double a = U(rng), b = U(rng);
        auto [ga, gb] = chord_length_grad(kp, a, kq, b);
        double fa = (chord_length_params(kp, a + h, kq, b) - chord_length_params(kp, a - h, kq, b)) / (2 * h);
        double fb = (chord_length_params(kp, a, kq, b + h) - chord_length_params(kp, a, kq, b - h)) / (2 * h);
        EXPECT_NEAR(ga, fa, 1e-6 * std::max(1.0, std::abs(fa)));
        EXPECT_NEAR(gb, fb, 1e-6 * std::max(1.0, std::abs(fb)));
    }
}

TEST(Hypgeom, LengthIsConvexAlongSegments) {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> U(-4, 4);
    for (int i = 0; i < 1000; ++i) {
        int kp = i % 3, kq = (i / 3) % 3;
        double a1 = U(rng), b1 = U(rng), a2 = U(rng), b2 = U(rng);
        double mid = chord_length_params(kp, (a1 + a2) / 2, kq, (b1 + b2) / 2);
        double avg = (chord_length_params(kp, a1, kq, b1) + chord_length_params(kp, a2, kq, b2)) / 2;
        EXPECT_LE(mid, avg + 1e-9);
    }
}

TEST(Hypgeom, DefaultStructureOnTorus) {
    auto Y = fixtures::torus();
    auto H = assign_structure(Y);
    EXPECT_EQ(H.offset.size(), 2u);
    for (double s : H.shear) EXPECT_EQ(s, 0.0);
    std::vector<std::optional<double>> sh(3);
    sh[2] = 0.7;
    auto H2 = assign_structure(Y, sh);
    int nonzero = 0;
    for (const auto& o : H2.offset)
        for (double x : o) nonzero += x != 0.0;
    EXPECT_EQ(nonzero, 1);
}

TEST(Hypgeom, ShearOnFreeEdgeRejected) {
    auto Y = fixtures::wedge();
    std::vector<std::optional<double>> sh(2);
    sh[0] = 0.1;
    EXPECT_THROW(assign_structure(Y, sh), ComplexError);
}

TEST(Hypgeom, StructureLiftsToFiniteCover) {
    auto Y = fixtures::torus();
    std::vector<std::optional<double>> sh(3);
    sh[2] = 0.7;
    auto H = assign_structure(Y, sh);
    auto C = build_cyclic_cover(Y, CoverSpec::from_cocycle(fixtures::torus_phi()), Finite{3});
    auto HC = lift_structure(C, H);
    for (int e = 0; e < C.space.num_edges(); ++e) EXPECT_EQ(HC.shear[e], H.shear[C.edge_proj[e]]);
}

TEST(Hypgeom, ComplexityOfSimplePatterns) {
    auto W = fixtures::wedge();
    auto H = assign_structure(W);
    Pattern t = Pattern::empty(W);
    auto c0 = pattern_complexity(W, H, t);
    EXPECT_EQ(c0.weight, 0);
    EXPECT_EQ(c0.length, 0.0);
    t.add_point(0, 0, 0.3);
    auto c1 = pattern_complexity(W, H, t);
    EXPECT_EQ(c1.weight, 1);
    EXPECT_EQ(c1.length, 0.0);
}

TEST(Hypgeom, AnnulusCoreAtTangencyPoints) {
    auto Y = fixtures::annulus(4);
    std::vector<char> inE(Y.num_vertices(), 0);
    for (int v = 0; v < Y.num_vertices(); ++v) inE[v] = Y.vertices[v].back() == '0';
    auto t = coboundary_pattern(Y, inE);
    auto H = assign_structure(Y);
    auto c = pattern_complexity(Y, H, t);
    EXPECT_EQ(c.weight, 4);
    double each = 0;
    for (const auto& ch : t.chords) {
        each = chord_length(Y, H, t, ch);
        EXPECT_NEAR(each, tangency_side_length(), 1e-14);
    }
    EXPECT_NEAR(c.length, 4 * tangency_side_length(), 1e-12);
}

TEST(Hypgeom, AnnulusCoreIsCriticalAtTangency) {
    for (int n : {4, 6, 8}) {
        auto Y = fixtures::annulus(n);
        std::vector<char> inE(Y.num_vertices(), 0);
        for (int v = 0; v < Y.num_vertices(); ++v) inE[v] = Y.vertices[v].back() == '0';
        auto t = coboundary_pattern(Y, inE);
        auto H = assign_structure(Y);
        for (double g : length_gradient(Y, H, t)) EXPECT_NEAR(g, 0.0, 1e-12);
        auto R = minimize_length(Y, H, t);
        EXPECT_TRUE(R.converged);
        for (const auto& p : R.pattern.points) EXPECT_NEAR(p.coord, 0.0, 1e-9);
    }
}

TEST(Hypgeom, TorusTrackMinimizesMonotonically) {
    auto Y = fixtures::torus();
    auto t = testkit::edge_set_pattern(Y, {0, 2});
    t.points[0].coord = 1.3;
    t.points[1].coord = -0.4;
    auto H = assign_structure(Y);
    auto R = minimize_length(Y, H, t);
    EXPECT_TRUE(R.converged);
    EXPECT_LT(R.grad_norm, 1e-8);
    for (std::size_t i = 1; i < R.history.size(); ++i) EXPECT_LE(R.history[i], R.history[i - 1] + 1e-12);
    // Finite-difference oracle: no coordinate move lowers the length.
    double L = R.complexity.length;
    for (int p = 0; p < R.pattern.weight(); ++p)
        for (double h : {1e-4, -1e-4}) {
            Pattern q = R.pattern;
            q.points[p].coord += h;
            EXPECT_GE(pattern_length(Y, H, q), L - 1e-12);
        }
}

TEST(Hypgeom, LoneCornerChordEscapesToTheCusp) {
    // One chord joining two free ends has no minimizer: it shrinks into the shared ideal vertex.
    Complex2 Z;
    int u = Z.add_vertex("u"), v = Z.add_vertex("v"), w = Z.add_vertex("w");
    int a = Z.add_edge("a", u, v), b = Z.add_edge("b", v, w), c = Z.add_edge("c", w, u);
    Z.add_triangle("T", {a, 1}, {b, 1}, {c, 1});
    Z.finalize();
    Pattern t = Pattern::empty(Z);
    int p = t.add_point(a, 0, 0.0), q = t.add_point(b, 0, 0.0);
    t.add_chord(0, p, q);
    auto R = minimize_length(Z, assign_structure(Z), t);
    EXPECT_FALSE(R.converged);
    EXPECT_LT(R.complexity.length, 0.1 * R.history.front());
    for (std::size_t i = 1; i < R.history.size(); ++i) EXPECT_LE(R.history[i], R.history[i - 1] + 1e-12);
}

TEST(Hypgeom, ComplexityOrderIsLexicographic) {
    Complexity a{2, 5.0}, b{3, 0.1}, c{2, 4.0};
    EXPECT_TRUE(a < b);
    EXPECT_TRUE(c < a);
    EXPECT_FALSE(b < a);
    auto s = a + b;
    EXPECT_EQ(s.weight, 5);
    EXPECT_DOUBLE_EQ(s.length, 5.1);
}
