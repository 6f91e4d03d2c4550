#include <gtest/gtest.h>

#include <random>

#include "dtrack/fixtures.hpp"
#include "dtrack/pattern.hpp"
#include "helpers.hpp"

using namespace dtrack;

namespace {

std::vector<char> row_zero(const Complex2& Y) {
    std::vector<char> inE(Y.num_vertices(), 0);
    for (int v = 0; v < Y.num_vertices(); ++v) inE[v] = Y.vertices[v].back() == '0';
    return inE;
}

Pattern shifted(Pattern t, double by) {
    for (auto& p : t.points) p.coord += by;
    return t;
}

Pattern mobius_core(const Complex2& M, int m) {
    std::vector<std::string> ids;
    for (int i = 0; i < m; ++i) {
        ids.push_back("r" + std::to_string(i) + "_1");
        ids.push_back("d" + std::to_string(i) + "_1");
    }
    return testkit::edge_set_pattern(M, testkit::edges_by_prefix(M, ids));
}

}  // namespace

TEST(Pattern, EmptySplitsIntoNothing) {
    auto Y = fixtures::torus();
    EXPECT_TRUE(component_split(Y, Pattern::empty(Y)).empty());
}

TEST(Pattern, CoboundaryOnAnnulusIsOneTrack) {
    auto Y = fixtures::annulus(4);
    auto t = coboundary_pattern(Y, row_zero(Y));
    EXPECT_EQ(t.weight(), 4);
    EXPECT_EQ(component_split(Y, t).size(), 1u);
    auto two = disjoint_union(Y, t, shifted(t, 0.5));
    validate(Y, two);
    EXPECT_EQ(component_split(Y, two).size(), 2u);
}

TEST(Pattern, VertexLinkIsCoboundaryOfOneVertex) {
    auto Y = fixtures::annulus(4);
    std::vector<char> inE(Y.num_vertices(), 0);
    int v = Y.vertex_index.at("p0_1");
    inE[v] = 1;
    auto t = coboundary_pattern(Y, inE);
    int degree = 0;
    for (const auto& E : Y.edges) degree += (E.from == v) + (E.to == v);
    EXPECT_EQ(t.weight(), degree);
    EXPECT_EQ(component_split(Y, t).size(), 1u);
    EXPECT_TRUE(is_normal(Y, t).normal);
}

TEST(Pattern, CoboundaryRejectsImproperBipartition) {
    auto Y = fixtures::torus();
    EXPECT_THROW(coboundary_pattern(Y, {1}), std::invalid_argument);
    EXPECT_THROW(coboundary_pattern(Y, {0}), std::invalid_argument);
}

TEST(Pattern, EveryCoboundaryIsNormalAndTwoSided) {
    std::vector<Complex2> spaces{fixtures::annulus(4), fixtures::mobius(3), fixtures::strip_wedge()};
    auto C = build_cyclic_cover(fixtures::torus(), CoverSpec::from_cocycle(fixtures::torus_phi()), Finite{4});
    spaces.push_back(C.space);
    std::mt19937 rng(1);
    for (const auto& Y : spaces) {
        int n = Y.num_vertices();
        int trials = n <= 12 ? (1 << n) : 3000;
        for (int k = 0; k < trials; ++k) {
            std::vector<char> inE(n);
            for (int v = 0; v < n; ++v) inE[v] = n <= 12 ? (k >> v) & 1 : rng() & 1;
            bool a = false, b = false;
            for (char x : inE) (x ? a : b) = true;
            if (!a || !b) continue;
            auto t = coboundary_pattern(Y, inE);
            ASSERT_NO_THROW(validate(Y, t));
            EXPECT_TRUE(is_normal(Y, t).normal);
            EXPECT_TRUE(is_two_sided(Y, t));
            ASSERT_TRUE(point_normals(Y, t).has_value());
        }
    }
}

TEST(Pattern, NormalityViolations) {
    auto Y = fixtures::annulus(4);
    Pattern t = Pattern::empty(Y);
    t.circles[0] = 1;
    auto r = is_normal(Y, t);
    EXPECT_FALSE(r.normal);
    EXPECT_EQ(r.circle_triangles, std::vector<int>{0});
    // A returning chord on an interior rung, closed off by a parallel arc on the other side.
    Pattern u = Pattern::empty(Y);
    int e = Y.edge_index.at("r0_0");
    int x = u.add_point(e, 0, -0.1), y = u.add_point(e, 1, 0.1);
    auto star = Y.star[e];
    ASSERT_EQ(star.size(), 2u);
    u.add_chord(star[0].tri, x, y);
    u.add_chord(star[1].tri, x, y);
    validate(Y, u);
    auto r2 = is_normal(Y, u);
    EXPECT_FALSE(r2.normal);
    EXPECT_EQ(r2.returning_chords.size(), 2u);
}

TEST(Pattern, MobiusCoreIsOneSided) {
    const int m = 3;
    auto M = fixtures::mobius(m);
    auto t = mobius_core(M, m);
    validate(M, t);
    EXPECT_EQ(t.weight(), 2 * m);
    auto s = sidedness(M, t, 0);
    EXPECT_FALSE(s.two_sided);
    ASSERT_FALSE(s.witness_cycle.empty());
    // Following the witness cycle flips the normal: the product of the chord transfer signs is +1
    // exactly when the normal comes back reversed (each chord maps nu(p) to -nu(p) sigma_p sigma_q).
    int prod = 1;
    for (int c : s.witness_cycle) {
        const auto& ch = t.chords[c];
        prod *= -point_sigma(M, t, ch.tri, ch.p) * point_sigma(M, t, ch.tri, ch.q);
    }
    EXPECT_EQ(prod, -1);
    Pattern o = t;
    EXPECT_FALSE(orient(M, o));
}

TEST(Pattern, MobiusCorePreimageInDoubleCoverIsTwoSided) {
    const int m = 3;
    auto M = fixtures::mobius(m);
    auto w = gauge_fix(M, fixtures::mobius_orientation_cocycle(M, m));
    auto C = build_cyclic_cover(M, CoverSpec::from_cocycle(w), Finite{2});
    auto lift = lift_pattern(C, M, mobius_core(M, m));
    validate(C.space, lift);
    EXPECT_EQ(lift.weight(), 4 * m);
    EXPECT_EQ(component_split(C.space, lift).size(), 1u);
    EXPECT_TRUE(is_two_sided(C.space, lift));
}

TEST(Pattern, SidednessVerdictIndependentOfStart) {
    auto M = fixtures::mobius(4);
    auto t = mobius_core(M, 4);
    auto Y = fixtures::annulus(6);
    auto u = coboundary_pattern(Y, row_zero(Y));
    std::mt19937 rng(42);
    for (int k = 0; k < 10; ++k) {
        EXPECT_FALSE(sidedness(M, t, 0, static_cast<int>(rng() % t.weight())).two_sided);
        EXPECT_TRUE(sidedness(Y, u, 0, static_cast<int>(rng() % u.weight())).two_sided);
    }
}

TEST(Pattern, ChordCountMatchesValence) {
    auto Y = fixtures::annulus(8);
    auto t = coboundary_pattern(Y, row_zero(Y));
    std::vector<int> count(t.points.size(), 0);
    for (const auto& c : t.chords) ++count[c.p], ++count[c.q];
    for (int p = 0; p < t.weight(); ++p) EXPECT_EQ(count[p], Y.valence(t.points[p].edge));
}

TEST(Pattern, SplitIsAPartition) {
    auto Y = fixtures::annulus(6);
    auto t = coboundary_pattern(Y, row_zero(Y));
    auto u = disjoint_union(Y, t, shifted(t, 1.0));
    u.circles[2] = 2;
    auto parts = component_split(Y, u);
    ASSERT_EQ(parts.size(), 4u);
    std::size_t chords = 0, points = 0;
    int circles = 0;
    for (const auto& p : parts) chords += p.chords.size(), points += p.points.size(), circles += p.num_circles();
    EXPECT_EQ(chords, u.chords.size());
    EXPECT_EQ(points, u.points.size());
    EXPECT_EQ(circles, 2);
}

TEST(Pattern, FileRoundTrip) {
    auto Y = fixtures::annulus(4);
    auto t = coboundary_pattern(Y, row_zero(Y));
    t.circles[1] = 1;
    auto text = write_pattern(Y, t);
    auto u = parse_pattern(Y, text);
    EXPECT_EQ(write_pattern(Y, u), text);
    EXPECT_THROW(parse_pattern(Y, "point x nowhere 0\n"), PatternError);
    try {
        parse_pattern(Y, "point x r0_0 0\n\nbogus\n");
        FAIL();
    } catch (const PatternError& e) {
        EXPECT_EQ(e.line(), 3);
    }
}

TEST(Pattern, CarriedIndexOnAnnulusCover) {
    auto Y = fixtures::torus();
    auto C = build_cyclic_cover(Y, CoverSpec::from_cocycle(fixtures::torus_phi()), Truncated{2});
    auto psi = pullback(C, fixtures::torus_psi());
    auto base_track = testkit::edge_set_pattern(Y, {0, 2});
    auto lift = lift_pattern(C, Y, base_track);
    // Keep the component through the sheet-0 lift of a.
    auto comps = components(C.space, lift);
    int a0 = C.edge_at.at({0, {0}});
    int comp = comps.of_point[lift.on_edge[a0][0]];
    std::vector<char> keep(lift.points.size());
    for (int p = 0; p < lift.weight(); ++p) keep[p] = comps.of_point[p] == comp;
    auto core = subpattern(C.space, lift, keep);
    validate(C.space, core);
    EXPECT_EQ(carried_index(C.space, core, psi), 1);
    // Two parallel copies, taken per component, each carry H.
    auto both = disjoint_union(C.space, core, shifted(core, 0.5));
    for (const auto& part : component_split(C.space, both)) EXPECT_EQ(carried_index(C.space, part, psi), 1);
}

TEST(Pattern, CarriedIndexOfNullHomotopicCircleIsZero) {
    auto Y = fixtures::annulus(6);
    const int m = 3;
    // psi counts crossings of the radial cut at the last column.
    std::vector<long> psi(Y.num_edges(), 0);
    for (int j = 0; j < 3; ++j) {
        psi[Y.edge_index.at("h" + std::to_string(m - 1) + "_" + std::to_string(j))] = 1;
        if (j < 2) psi[Y.edge_index.at("d" + std::to_string(m - 1) + "_" + std::to_string(j))] = 1;
    }
    ASSERT_TRUE(is_cocycle(Y, psi));
    std::vector<char> inE(Y.num_vertices(), 0);
    inE[Y.vertex_index.at("p1_1")] = 1;
    EXPECT_EQ(carried_index(Y, coboundary_pattern(Y, inE), psi), 0);
    std::vector<char> ring(Y.num_vertices(), 0);
    for (int v = 0; v < Y.num_vertices(); ++v) ring[v] = Y.vertices[v].back() == '1';
    for (const auto& part : component_split(Y, coboundary_pattern(Y, ring)))
        EXPECT_EQ(carried_index(Y, part, psi), 1);
}

TEST(Pattern, CarriedIndexRejectsFrontierTracks) {
    auto Y = fixtures::torus();
    auto C = build_cyclic_cover(Y, CoverSpec::from_cocycle(fixtures::torus_phi()), Truncated{1});
    auto psi = pullback(C, fixtures::torus_psi());
    auto t = lift_pattern(C, Y, testkit::edge_set_pattern(Y, {1, 2}));
    EXPECT_THROW(carried_index(C.space, t, psi), std::invalid_argument);
}

TEST(Pattern, CarriedIndexTwoForDoubledSlope) {
    // In the degree-2 cover along psi, the preimage of a psi-dual loop is one track carrying index 2.
    auto Y = fixtures::torus();
    auto C = build_cyclic_cover(Y, CoverSpec::from_cocycle(fixtures::torus_phi()), Finite{2});
    auto lift = lift_pattern(C, Y, testkit::edge_set_pattern(Y, {1, 2}));
    auto parts = component_split(C.space, lift);
    ASSERT_EQ(parts.size(), 1u);
    auto phi = pullback(C, fixtures::torus_phi());
    EXPECT_EQ(carried_index(C.space, parts[0], phi), 2);
}
