#include <gtest/gtest.h>

#include <random>

#include "dtrack/cover.hpp"
#include "dtrack/fixtures.hpp"
#include "dtrack/intersect.hpp"
#include "dtrack/normalize.hpp"
#include "helpers.hpp"

using namespace dtrack;

namespace {

Pattern random_coboundary(const Complex2& Y, std::mt19937_64& rng) {
    std::vector<char> inE(Y.num_vertices(), 0);
    for (auto& x : inE) x = rng() % 2;
    inE[0] = 1;
    if (std::all_of(inE.begin(), inE.end(), [](char c) { return c; })) return Pattern::empty(Y);
    auto t = coboundary_pattern(Y, inE);
    return t;
}

void expect_strict_descent(const MoveLog& log) {
    ASSERT_EQ(log.measure.size(), log.moves.size() + 1);
    for (std::size_t i = 1; i < log.measure.size(); ++i) EXPECT_LT(log.measure[i], log.measure[i - 1]);
}

}  // namespace

TEST(Normalize, NormalInputIsFixed) {
    auto Y = fixtures::annulus(6);
    std::vector<char> inE(Y.num_vertices(), 0);
    for (int v = 0; v < Y.num_vertices(); ++v) inE[v] = Y.vertices[v].back() == '0';
    auto t = coboundary_pattern(Y, inE);
    auto R = normalize(Y, t);
    EXPECT_TRUE(R.log.moves.empty());
    EXPECT_EQ(write_pattern(Y, R.pattern), write_pattern(Y, t));
}

TEST(Normalize, OneCircleVanishes) {
    auto Y = fixtures::torus();
    auto t = Pattern::empty(Y);
    t.circles[1] = 1;
    auto R = normalize(Y, t);
    ASSERT_EQ(R.log.moves.size(), 1u);
    EXPECT_EQ(R.log.moves[0].kind, Move::Kind::DeleteCircle);
    EXPECT_EQ(R.log.measure, (std::vector<long>{1, 0}));
    EXPECT_EQ(R.pattern.weight(), 0);
    EXPECT_EQ(R.pattern.num_circles(), 0);
}

TEST(Normalize, ReturningChordOnValenceTwoEdge) {
    auto Y = fixtures::annulus(6);
    auto B = equivalence_basis(Y);
    // an interior edge shared by two triangles
    int e = -1;
    for (int i = 0; i < Y.num_edges() && e < 0; ++i)
        if (Y.valence(i) == 2) e = i;
    ASSERT_GE(e, 0);
    std::mt19937_64 rng(3);
    auto t = random_finger_pattern(Y, Pattern::empty(Y), 0, 0, 30, rng);
    // a finger across e from the empty pattern: two returning chords
    int x = t.add_point(e, 0, -0.1), y = t.add_point(e, 1, 0.1);
    t.add_chord(Y.star[e][0].tri, x, y, 1);
    t.add_chord(Y.star[e][1].tri, x, y, 0);
    t.chords[1].side = side_from_nu_p(Y, t, t.chords[1], chord_nu_p(Y, t, t.chords[0]));
    ASSERT_TRUE(is_two_sided(Y, t));
    auto before = basis_numbers(Y, B, t);
    auto R = normalize(Y, t);
    EXPECT_EQ(R.pattern.weight(), 0);
    ASSERT_GE(R.log.moves.size(), 1u);
    EXPECT_EQ(R.log.moves[0].kind, Move::Kind::ResolveReturningChord);
    EXPECT_EQ(R.log.moves[0].edge, e);
    EXPECT_EQ(basis_numbers(Y, B, R.pattern), before);
    expect_strict_descent(R.log);
}

TEST(Normalize, FingerPatternsAreEquivalentAndNormalize) {
    std::vector<Complex2> spaces{fixtures::torus(), fixtures::annulus(6), fixtures::mobius(3), fixtures::genus2(),
                                 fixtures::strip_wedge(), fixtures::multiband(3, 3, 2)};
    std::mt19937_64 rng(2024);
    int nonnormal = 0, nonzero = 0;
    for (const auto& Y : spaces) {
        auto B = equivalence_basis(Y);
        for (int trial = 0; trial < 25; ++trial) {
            Pattern base = random_coboundary(Y, rng);
            if (base.weight() > 20) base = Pattern::empty(Y);
            if (Y.num_triangles() == 2 && trial % 2)  // torus: an essential slope track
                base = testkit::edge_set_pattern(Y, testkit::edges_by_prefix(Y, {"a", "c"}));
            ASSERT_TRUE(orient(Y, base));
            auto t = random_finger_pattern(Y, base, 1 + trial % 5, trial % 3, 30, rng);
            validate(Y, t);
            ASSERT_TRUE(point_normals(Y, t).has_value());
            EXPECT_EQ(basis_numbers(Y, B, t), basis_numbers(Y, B, base));
            nonnormal += !is_normal(Y, t).normal;
            auto nums = basis_numbers(Y, B, t);
            nonzero += std::any_of(nums.begin(), nums.end(), [](long v) { return v != 0; });
            auto R = normalize(Y, t);
            EXPECT_TRUE(R.equivalence_asserted);
            validate(Y, R.pattern);
            EXPECT_TRUE(is_normal(Y, R.pattern).normal);
            expect_strict_descent(R.log);
            EXPECT_LE(static_cast<long>(R.log.moves.size()), R.log.measure.front());
            EXPECT_LE(R.pattern.weight(), t.weight());
            EXPECT_EQ(basis_numbers(Y, B, R.pattern), basis_numbers(Y, B, t));
        }
    }
    EXPECT_GT(nonnormal, 100);
    EXPECT_GT(nonzero, 20);
}

TEST(Normalize, OneSidedIsFlagged) {
    auto M = fixtures::mobius(3);
    std::vector<std::string> ids;
    for (int i = 0; i < 3; ++i) {
        ids.push_back("r" + std::to_string(i) + "_1");
        ids.push_back("d" + std::to_string(i) + "_1");
    }
    auto core = testkit::edge_set_pattern(M, testkit::edges_by_prefix(M, ids));
    core.circles[0] = 2;
    auto R = normalize(M, core);
    EXPECT_FALSE(R.equivalence_asserted);
    EXPECT_EQ(R.pattern.num_circles(), 0);
    EXPECT_EQ(R.pattern.weight(), core.weight());
}

TEST(Normalize, NonNormalSmoothingRecoversEquivalentNormalTrack) {
    auto Y = fixtures::torus();
    auto H = assign_structure(Y);
    auto B = equivalence_basis(Y);
    auto track = [&](const std::vector<std::string>& ids, double shift) {
        auto t = testkit::edge_set_pattern(Y, testkit::edges_by_prefix(Y, ids));
        for (auto& p : t.points) p.coord += shift;
        EXPECT_TRUE(orient(Y, t));
        return t;
    };
    auto t1 = track({"a", "c"}, 0.0), t2 = track({"b", "c"}, 0.5);
    auto N = cut_and_paste(Y, H, t1, t2, CutPolicy::Normal);
    EXPECT_TRUE(is_normal(Y, N.pattern).normal);
    EXPECT_EQ(N.pattern.weight(), 4);
    EXPECT_LT(N.after.length, N.before.length);
    auto O = cut_and_paste(Y, H, t1, t2, CutPolicy::Explicit, {0});
    auto P = cut_and_paste(Y, H, t1, t2, CutPolicy::Explicit, {1});
    auto bad = (is_normal(Y, O.pattern).normal ? P : O).pattern;
    ASSERT_FALSE(is_normal(Y, bad).normal);
    // the other smoothing breaks the input orientations; it is two-sided on its own
    EXPECT_FALSE(point_normals(Y, bad).has_value());
    ASSERT_TRUE(orient(Y, bad));
    auto R = normalize(Y, bad);
    EXPECT_TRUE(is_normal(Y, R.pattern).normal);
    EXPECT_LT(R.pattern.weight(), bad.weight());
    EXPECT_EQ(basis_numbers(Y, B, R.pattern), basis_numbers(Y, B, bad));
}
