#include <gtest/gtest.h>

#include <random>

#include "dtrack/cover.hpp"
#include "dtrack/ends.hpp"
#include "dtrack/fixtures.hpp"
#include "helpers.hpp"

using namespace dtrack;

namespace {

Cover torus_band(int radius) {
    return build_cyclic_cover(fixtures::torus(), CoverSpec::from_cocycle(fixtures::torus_phi()), Truncated{radius});
}

// The component of the lifted {a,c} slope through a@0: a closed core track of the band.
Pattern band_core(const Cover& C) {
    auto base = fixtures::torus();
    auto lifted = lift_pattern(C, base, testkit::edge_set_pattern(base, testkit::edges_by_prefix(base, {"a", "c"})));
    int a0 = C.space.edge_index.at("a@0");
    for (auto& t : component_split(C.space, lifted))
        if (!t.on_edge[a0].empty()) {
            EXPECT_TRUE(orient(C.space, t));
            return t;
        }
    return Pattern::empty(C.space);
}

// Copy of an oriented pattern pushed a distance d along its normals.
Pattern pushoff(const Complex2& Y, Pattern t, double d) {
    auto nu = point_normals(Y, t);
    EXPECT_TRUE(nu.has_value());
    for (int p = 0; p < t.weight(); ++p) t.points[p].coord += d * (*nu)[p];
    return t;
}

// Five vertex rows; the track cuts the edges between rows 1 and 2.
Complex2 wide_strip() { return fixtures::strip(3, 5, false); }

Pattern wide_core(const Complex2& Y) {
    std::vector<char> inE(Y.num_vertices(), 0);
    for (int v = 0; v < Y.num_vertices(); ++v) inE[v] = Y.vertices[v].back() <= '1';
    auto t = coboundary_pattern(Y, inE);
    EXPECT_TRUE(orient(Y, t));
    return t;
}

int row3_vertex(const Complex2& Y) {
    for (int v = 0; v < Y.num_vertices(); ++v)
        if (Y.vertices[v].back() == '3') return v;
    return -1;
}

Pattern link_of(const Complex2& Y, int v) {
    std::vector<char> inE(Y.num_vertices(), 0);
    inE[v] = 1;
    return coboundary_pattern(Y, inE);
}

Pattern oriented_link(const Complex2& Y, int v) {
    auto t = link_of(Y, v);
    EXPECT_TRUE(orient(Y, t));
    return t;
}

}  // namespace

TEST(Ends, EmptyPatternIsOneComponent) {
    auto C = torus_band(2);
    auto R = complement_components(C.space, Pattern::empty(C.space));
    ASSERT_EQ(R.components.size(), 1u);
    EXPECT_TRUE(R.components[0].infinite);
    EXPECT_EQ(R.components[0].vertices.size(), static_cast<std::size_t>(C.space.num_vertices()));
    EXPECT_FALSE(splits(C.space, Pattern::empty(C.space)));
}

TEST(Ends, CoreTrackSplitsBand) {
    auto C = torus_band(2);
    const auto& X = C.space;
    auto t = band_core(C);
    ASSERT_GT(t.weight(), 0);
    auto R = complement_components(X, t);
    EXPECT_EQ(R.infinite_count(), 2);
    EXPECT_TRUE(splits(X, t));
    auto B = equivalence_basis(X);
    auto E = is_essential(X, t, B);
    EXPECT_TRUE(E.essential);
    EXPECT_EQ(std::abs(E.witness_number), 1);
    // the two sides see the orientation from opposite ends
    int in = 0, out = 0;
    for (const auto& K : R.components) {
        in += K.inward;
        out += K.outward;
    }
    EXPECT_EQ(in, t.weight());
    EXPECT_EQ(out, t.weight());
}

TEST(Ends, VertexLinkBoundsTheStar) {
    auto X = wide_strip();
    int v = row3_vertex(X);
    ASSERT_GE(v, 0);
    auto link = link_of(X, v);
    auto R = complement_components(X, link);
    ASSERT_EQ(R.components.size(), 2u);
    EXPECT_EQ(R.infinite_count(), 1);
    EXPECT_FALSE(splits(X, link));
    EXPECT_FALSE(is_essential(X, link, equivalence_basis(X)).essential);
    // two nested links
    auto big = link_of(X, v);  // a second copy further out along every edge
    for (auto& p : big.points) p.coord += X.edges[p.edge].from == v ? 0.3 : -0.3;
    auto nested = disjoint_union(X, link, big);
    validate(X, nested);
    EXPECT_FALSE(splits(X, nested));
}

TEST(Ends, OppositeCopiesAreNotEssential) {
    auto C = torus_band(2);
    const auto& X = C.space;
    auto t = band_core(C);
    auto u = pushoff(X, t, 0.5);
    reverse_orientation(u);
    auto both = disjoint_union(X, t, u);
    EXPECT_TRUE(splits(X, both));
    EXPECT_FALSE(is_essential(X, both, equivalence_basis(X)).essential);
}

TEST(Ends, CompactFixtureHasNoEssentialPattern) {
    auto Y = fixtures::torus();
    auto t = testkit::edge_set_pattern(Y, testkit::edges_by_prefix(Y, {"a", "c"}));
    ASSERT_TRUE(orient(Y, t));
    EXPECT_FALSE(is_essential(Y, t, equivalence_basis(Y)).essential);
    EXPECT_FALSE(splits(Y, t));
}

TEST(Ends, OneSidedThrows) {
    auto M = fixtures::mobius(3);
    std::vector<std::string> ids;
    for (int i = 0; i < 3; ++i) {
        ids.push_back("r" + std::to_string(i) + "_1");
        ids.push_back("d" + std::to_string(i) + "_1");
    }
    auto core = testkit::edge_set_pattern(M, testkit::edges_by_prefix(M, ids));
    EXPECT_THROW(is_essential(M, core, equivalence_basis(M)), std::invalid_argument);
}

TEST(Ends, ElementaryDropsTheLinkAndKeepsTheTrack) {
    auto X = wide_strip();
    auto t = wide_core(X);
    auto B = equivalence_basis(X);
    auto same = extract_elementary(X, t);
    EXPECT_EQ(same.weight(), t.weight());
    EXPECT_TRUE(is_essential(X, same, B).essential);
    auto with_link = disjoint_union(X, t, oriented_link(X, row3_vertex(X)));
    validate(X, with_link);
    EXPECT_TRUE(splits(X, with_link));
    auto E = extract_elementary(X, with_link);
    EXPECT_EQ(E.weight(), t.weight());
    EXPECT_TRUE(is_essential(X, E, B).essential);
    EXPECT_EQ(complement_components(X, E).infinite_count(), 2);
}

TEST(Ends, ElementaryPicksTheCopyFacingTheChosenEnd) {
    auto C = torus_band(3);
    const auto& X = C.space;
    auto t = band_core(C);
    auto u = pushoff(X, t, 0.5), w = pushoff(X, t, 1.0);
    reverse_orientation(u);
    auto three = disjoint_union(X, disjoint_union(X, t, u), w);
    validate(X, three);
    auto E = extract_elementary(X, three);
    EXPECT_EQ(E.weight(), t.weight());
    auto B = equivalence_basis(X);
    EXPECT_TRUE(is_essential(X, E, B).essential);
    // every boundary orientation of the result points into one side
    auto R = complement_components(X, E);
    int into_one = 0;
    for (const auto& K : R.components)
        if (K.infinite && K.inward == E.weight() && K.outward == 0) ++into_one;
    EXPECT_EQ(into_one, 1);
}

TEST(Ends, EndCounts) {
    auto e1 = end_count_estimate(torus_band(2).space, torus_band(3).space);
    EXPECT_EQ(e1.lower_bound, 2);
    EXPECT_TRUE(e1.stable);
    auto spec = CoverSpec::from_cocycles({fixtures::torus_phi(), fixtures::torus_psi()});
    auto Z2 = [&](int r) { return build_cyclic_cover(fixtures::torus(), spec, Truncated{r}).space; };
    auto e2 = end_count_estimate(Z2(2), Z2(3));
    EXPECT_EQ(e2.lower_bound, 1);
    EXPECT_TRUE(e2.stable);
    auto e3 = end_count_estimate(fixtures::multiband(3, 4, 2), fixtures::multiband(3, 4, 3));
    EXPECT_GE(e3.lower_bound, 3);
    EXPECT_TRUE(e3.stable);
    EXPECT_THROW(end_count_estimate(fixtures::strip(3, 2, false), fixtures::annulus(6)), std::invalid_argument);
}

TEST(Ends, EssentialImpliesSplits) {
    std::mt19937_64 rng(5);
    std::vector<Complex2> spaces{wide_strip(), torus_band(2).space, fixtures::annulus(6), fixtures::multiband(3, 3, 2)};
    int essential = 0;
    for (const auto& X : spaces) {
        auto B = equivalence_basis(X);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<char> inE(X.num_vertices(), 0);
            for (auto& x : inE) x = rng() % 2;
            inE[0] = 1;
            inE[1] = 0;
            auto t = coboundary_pattern(X, inE);
            ASSERT_TRUE(orient(X, t));
            // flip some components at random
            auto C = components(X, t);
            std::vector<int> flip(C.count);
            for (auto& f : flip) f = rng() % 2 ? -1 : 1;
            auto nu = *point_normals(X, t);
            for (int p = 0; p < t.weight(); ++p) nu[p] *= flip[C.of_point[p]];
            apply_normals(X, t, nu);
            if (is_essential(X, t, B).essential) {
                ++essential;
                EXPECT_TRUE(splits(X, t));
                auto E = extract_elementary(X, t);
                EXPECT_TRUE(is_essential(X, E, B).essential);
                auto R = complement_components(X, E);
                int sides_in = 0;
                for (const auto& K : R.components) sides_in += K.inward == E.weight() && K.outward == 0;
                EXPECT_EQ(sides_in, 1);
            }
        }
    }
    EXPECT_GT(essential, 10);
}
