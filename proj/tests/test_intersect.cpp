#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "dtrack/cover.hpp"
#include "dtrack/fixtures.hpp"
#include "dtrack/intersect.hpp"
#include "helpers.hpp"

using namespace dtrack;

namespace {

Pattern oriented(const Complex2& Y, Pattern t) {
    EXPECT_TRUE(orient(Y, t));
    return t;
}

Pattern shifted(Pattern t, double by) {
    for (auto& p : t.points) p.coord += by;
    return t;
}

Pattern torus_track(const Complex2& Y, const std::vector<std::string>& ids, double shift) {
    return oriented(Y, shifted(testkit::edge_set_pattern(Y, testkit::edges_by_prefix(Y, ids)), shift));
}

std::vector<long> sum(std::vector<long> a, const std::vector<long>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

}  // namespace

TEST(Intersect, TorusBasisSizes) {
    auto Y = fixtures::torus();
    auto B = equivalence_basis(Y);
    // two triangles, three edges: 2 dual cycles; one vertex: 3 edge loops
    EXPECT_EQ(B.loops.size(), 5u);
    EXPECT_TRUE(B.lines.empty());
    auto t = torus_track(Y, {"a", "c"}, 0.0);
    for (const auto& c : B.loops) EXPECT_NO_THROW(check_path(Y, t, c));
}

TEST(Intersect, SkeletonLoopsReadTheCocycle) {
    auto Y = fixtures::torus();
    auto t = torus_track(Y, {"a", "c"}, 0.0);
    long na = intersection_number(Y, skeleton_path(Y, {Y.edge_index.at("a")}, 0, true), t);
    long nb = intersection_number(Y, skeleton_path(Y, {Y.edge_index.at("b")}, 0, true), t);
    long nc = intersection_number(Y, skeleton_path(Y, {Y.edge_index.at("c")}, 0, true), t);
    EXPECT_EQ(std::abs(na), 1);
    EXPECT_EQ(nb, 0);
    EXPECT_EQ(nc, -na);  // proportional to (1, 0, -1)
}

TEST(Intersect, OppositeOrientationNegates) {
    auto Y = fixtures::torus();
    auto t = torus_track(Y, {"a", "c"}, 0.0);
    auto B = equivalence_basis(Y);
    auto n = basis_numbers(Y, B, t);
    reverse_orientation(t);
    auto m = basis_numbers(Y, B, t);
    for (std::size_t i = 0; i < n.size(); ++i) EXPECT_EQ(m[i], -n[i]);
}

TEST(Intersect, NumbersAddOverDisjointUnion) {
    auto Y = fixtures::torus();
    auto t = torus_track(Y, {"a", "c"}, 0.0);
    auto u = shifted(t, 0.5);
    auto both = disjoint_union(Y, t, u);
    auto B = equivalence_basis(Y);
    EXPECT_EQ(basis_numbers(Y, B, both), sum(basis_numbers(Y, B, t), basis_numbers(Y, B, u)));
    EXPECT_TRUE(equivalent(Y, t, u, B));
}

TEST(Intersect, CoboundaryLoopsVanishInCover) {
    auto base = fixtures::torus();
    auto C = build_cyclic_cover(base, CoverSpec::from_cocycle(fixtures::torus_phi()), Finite{4});
    const auto& X = C.space;
    auto B = equivalence_basis(X);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<char> inE(X.num_vertices());
        for (auto& x : inE) x = rng() % 2;
        int k = std::accumulate(inE.begin(), inE.end(), 0);
        if (k == 0 || k == X.num_vertices()) continue;
        auto t = coboundary_pattern(X, inE);
        for (long x : basis_numbers(X, B, t)) EXPECT_EQ(x, 0);
    }
}

TEST(Intersect, FrontierLinesOnStrip) {
    auto Y = fixtures::annulus(6);
    auto B = equivalence_basis(Y);
    ASSERT_EQ(B.lines.size(), 1u);
    std::vector<char> inE(Y.num_vertices(), 0);
    for (int v = 0; v < Y.num_vertices(); ++v) inE[v] = Y.vertices[v].back() == '0';
    auto t = coboundary_pattern(Y, inE);
    auto n = basis_numbers(Y, B, t);
    EXPECT_EQ(std::abs(n.back()), 1);  // the core separates the two boundary rows
}

TEST(Intersect, PathChecks) {
    auto Y = fixtures::torus();
    auto t = torus_track(Y, {"a", "c"}, 0.0);
    CurvePath bad;
    bad.steps.push_back({Step::Kind::Along, Y.edge_index.at("a"), {Y.edge_index.at("a"), 0}, {Y.edge_index.at("a"), 1}});
    EXPECT_THROW(check_path(Y, t, bad), std::invalid_argument);
    bad.loop = false;
    EXPECT_THROW(check_path(Y, t, bad), std::invalid_argument);
    CurvePath off;
    off.steps.push_back({Step::Kind::Along, 0, {0, 7}, {0, 0}});
    EXPECT_THROW(check_path(Y, t, off), std::invalid_argument);
}

TEST(Intersect, CurveFileRoundTrip) {
    auto Y = fixtures::genus2();
    auto B = equivalence_basis(Y);
    for (const auto& c : B.loops) {
        auto text = write_curve(Y, c);
        EXPECT_EQ(write_curve(Y, parse_curve(Y, text)), text);
    }
    EXPECT_THROW(parse_curve(Y, "loop\nstep F9 a,0 b,0\n"), PatternError);
    EXPECT_THROW(parse_curve(Y, "ring\n"), PatternError);
}

TEST(Intersect, TorusSlopesCrossOnce) {
    auto Y = fixtures::torus();
    auto H = assign_structure(Y);
    for (double shift : {-0.5, 0.5}) {
        auto t1 = torus_track(Y, {"a", "c"}, 0.0);
        auto t2 = torus_track(Y, {"b", "c"}, shift);
        auto T = intersection_points(Y, H, t1, t2);
        ASSERT_TRUE(T.transverse);
        EXPECT_EQ(T.crossings.size(), 1u) << "shift " << shift;
        // the b-loop meets t2 and t1 once, so the crossing count matches
        CurvePath around = skeleton_path(Y, {Y.edge_index.at("a")}, 0, true);
        EXPECT_EQ(std::abs(intersection_number(Y, around, t1)), 1);
    }
}

TEST(Intersect, SharedPointIsNotTransverse) {
    auto Y = fixtures::torus();
    auto H = assign_structure(Y);
    auto t1 = torus_track(Y, {"a", "c"}, 0.0);
    auto t2 = torus_track(Y, {"b", "c"}, 0.0);
    EXPECT_FALSE(intersection_points(Y, H, t1, t2).transverse);
    EXPECT_THROW(cut_and_paste(Y, H, t1, t2, CutPolicy::Oriented), std::invalid_argument);
}

TEST(Intersect, OrientedSumOfSlopes) {
    auto Y = fixtures::torus();
    auto H = assign_structure(Y);
    auto B = equivalence_basis(Y);
    auto t1 = torus_track(Y, {"a", "c"}, 0.0);
    auto t2 = torus_track(Y, {"b", "c"}, 0.5);
    auto R = cut_and_paste(Y, H, t1, t2, CutPolicy::Oriented);
    EXPECT_EQ(R.crossings, 1);
    EXPECT_EQ(R.dropped_circles, 0);
    validate(Y, R.pattern);
    EXPECT_EQ(R.after.weight, t1.weight() + t2.weight());
    EXPECT_LT(R.after.length, R.before.length - 1e-9);
    EXPECT_EQ(components(Y, R.pattern).count, 1);
    EXPECT_TRUE(is_two_sided(Y, R.pattern));
    EXPECT_EQ(basis_numbers(Y, B, R.pattern), sum(basis_numbers(Y, B, t1), basis_numbers(Y, B, t2)));
    EXPECT_TRUE(self_crossings(Y, H, R.pattern).crossings.empty());
}

TEST(Intersect, ExplicitChoicesGiveBothSmoothings) {
    auto Y = fixtures::torus();
    auto H = assign_structure(Y);
    auto t1 = torus_track(Y, {"a", "c"}, 0.0);
    auto t2 = torus_track(Y, {"b", "c"}, 0.5);
    auto R0 = cut_and_paste(Y, H, t1, t2, CutPolicy::Explicit, {0});
    auto R1 = cut_and_paste(Y, H, t1, t2, CutPolicy::Explicit, {1});
    for (const auto* R : {&R0, &R1}) {
        EXPECT_EQ(R->pattern.weight(), 4);
        EXPECT_EQ(R->pattern.chords.size(), 4u);
        EXPECT_TRUE(self_crossings(Y, H, R->pattern).crossings.empty());
    }
    EXPECT_THROW(cut_and_paste(Y, H, t1, t2, CutPolicy::Explicit, {}), std::invalid_argument);
}

TEST(Intersect, RandomCoverPairsKeepNumbers) {
    auto base = fixtures::torus();
    std::mt19937 rng(11);
    for (int d : {2, 3}) {
        auto C = build_cyclic_cover(base, CoverSpec::from_cocycle(fixtures::torus_phi()), Finite{d});
        const auto& X = C.space;
        auto H = lift_structure(C, assign_structure(base));
        auto B = equivalence_basis(X);
        auto sheet = [&](const std::vector<std::string>& ids, double shift) {
            auto t = lift_pattern(C, base, testkit::edge_set_pattern(base, testkit::edges_by_prefix(base, ids)));
            return oriented(X, shifted(t, shift));
        };
        for (int trial = 0; trial < 10; ++trial) {
            double s1 = std::uniform_real_distribution<double>(-1, 1)(rng);
            double s2 = s1 + std::uniform_real_distribution<double>(0.05, 1)(rng);
            auto t1 = sheet({"a", "c"}, s1);
            auto t2 = sheet({"b", "c"}, s2);
            auto R = cut_and_paste(X, H, t1, t2, CutPolicy::Oriented);
            EXPECT_GT(R.crossings, 0);
            EXPECT_EQ(R.after.weight, R.before.weight);
            EXPECT_LT(R.after.length, R.before.length - 1e-9);
            EXPECT_EQ(basis_numbers(X, B, R.pattern), sum(basis_numbers(X, B, t1), basis_numbers(X, B, t2)));
        }
    }
}

TEST(Intersect, OneSidedResolutionOnMobius) {
    auto M = fixtures::mobius(3);
    auto H = assign_structure(M);
    std::vector<std::string> ids;
    for (int i = 0; i < 3; ++i) {
        ids.push_back("r" + std::to_string(i) + "_1");
        ids.push_back("d" + std::to_string(i) + "_1");
    }
    auto core = testkit::edge_set_pattern(M, testkit::edges_by_prefix(M, ids));
    ASSERT_FALSE(is_two_sided(M, core));
    auto R = resolve_one_sided(M, H, core);
    EXPECT_EQ(R.crossings, 0);
    EXPECT_EQ(R.pattern.weight(), core.weight());
    for (const auto& c : R.pattern.chords) EXPECT_EQ(c.side, 0);
}

TEST(Intersect, PartialPiecesSumToLength) {
    auto Y = fixtures::torus();
    auto H = assign_structure(Y);
    auto t1 = torus_track(Y, {"a", "c"}, 0.0);
    auto t2 = torus_track(Y, {"b", "c"}, 0.5);
    auto [p1, p2] = split_partial_patterns(Y, H, t1, t2);
    double L1 = 0, L2 = 0;
    for (const auto& p : p1) L1 += p.length;
    for (const auto& p : p2) L2 += p.length;
    EXPECT_NEAR(L1, pattern_length(Y, H, t1), 1e-9);
    EXPECT_NEAR(L2, pattern_length(Y, H, t2), 1e-9);
    // one cut point on a closed curve leaves it connected
    EXPECT_EQ(p1.size(), 1u);
    EXPECT_EQ(p2.size(), 1u);
    EXPECT_EQ(p1[0].ends, 2);
}

TEST(Intersect, RefinementAndBacktrackingDoNotCount) {
    auto base = fixtures::torus();
    auto C = build_cyclic_cover(base, CoverSpec::from_cocycle(fixtures::torus_phi()), Finite{3});
    const auto& X = C.space;
    auto t = lift_pattern(C, base, testkit::edge_set_pattern(base, testkit::edges_by_prefix(base, {"b", "c"})));
    ASSERT_TRUE(orient(X, t));
    auto B = equivalence_basis(X);
    for (const auto& loop : B.loops) {
        if (loop.steps.front().kind != Step::Kind::Tri) continue;
        long n = intersection_number(X, loop, t);
        // a detour into the neighbouring triangle that leaves through the same gap
        CurvePath refined = loop;
        Gap g = refined.steps.front().out;
        int other = -1;
        for (const auto& inc : X.star[g.edge])
            if (inc.tri != refined.steps.front().cell) other = inc.tri;
        if (other < 0) continue;
        refined.steps.insert(refined.steps.begin() + 1, Step{Step::Kind::Tri, other, g, g});
        EXPECT_EQ(intersection_number(X, refined, t), n);
        // there and back again
        CurvePath back;
        const Step& s = loop.steps.front();
        back.steps = {s, Step{Step::Kind::Tri, s.cell, s.out, s.in}};
        EXPECT_EQ(intersection_number(X, back, t), 0);
        EXPECT_EQ(intersection_number(X, loop, Pattern::empty(X)), 0);
    }
}

TEST(Intersect, ResolvingSelfCrossingsKeepsClassAndShortens) {
    auto base = fixtures::torus();
    auto C = build_cyclic_cover(base, CoverSpec::from_cocycle(fixtures::torus_phi()), Finite{2});
    const auto& X = C.space;
    auto H = lift_structure(C, assign_structure(base));
    auto B = equivalence_basis(X);
    auto sheet = [&](const std::vector<std::string>& ids, double shift) {
        auto t = lift_pattern(C, base, testkit::edge_set_pattern(base, testkit::edges_by_prefix(base, ids)));
        for (auto& p : t.points) p.coord += shift;
        EXPECT_TRUE(orient(X, t));
        return t;
    };
    auto singular = disjoint_union(X, sheet({"a", "c"}, 0.0), sheet({"b", "c"}, 0.3));
    singular.allow_crossings = true;
    ASSERT_FALSE(self_crossings(X, H, singular).crossings.empty());
    auto R = resolve_crossings(X, H, singular, CutPolicy::Oriented);
    validate(X, R.pattern);
    EXPECT_TRUE(self_crossings(X, H, R.pattern).crossings.empty());
    EXPECT_EQ(basis_numbers(X, B, R.pattern), basis_numbers(X, B, singular));
    EXPECT_LT(R.after, R.before);
}

TEST(Intersect, OneSidedSurgeryShortens) {
    auto M = fixtures::mobius(3);
    auto H = assign_structure(M);
    std::vector<std::string> ids;
    for (int i = 0; i < 3; ++i) {
        ids.push_back("r" + std::to_string(i) + "_1");
        ids.push_back("d" + std::to_string(i) + "_1");
    }
    auto core = testkit::edge_set_pattern(M, testkit::edges_by_prefix(M, ids));
    Pattern moved = core;
    for (auto& p : moved.points) p.coord += 0.4;
    // a second copy pushed through the first: crossings wherever the shift changes sides
    for (std::size_t i = 0; i < moved.points.size(); i += 2) moved.points[i].coord -= 0.8;
    auto singular = disjoint_union(M, core, moved);
    singular.allow_crossings = true;
    int n = static_cast<int>(self_crossings(M, H, singular).crossings.size());
    ASSERT_GT(n, 0);
    auto R = resolve_one_sided(M, H, singular);
    EXPECT_EQ(R.crossings, n);
    validate(M, R.pattern);
    EXPECT_TRUE(self_crossings(M, H, R.pattern).crossings.empty());
    EXPECT_LT(R.after.length, R.before.length);
}
