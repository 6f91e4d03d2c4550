#include <gtest/gtest.h>

#include <regex>

#include "dtrack/fixtures.hpp"
#include "dtrack/intersect.hpp"
#include "dtrack/render.hpp"
#include "helpers.hpp"

using namespace dtrack;

namespace {

Pattern slope(const Complex2& Y, const std::vector<std::string>& ids, double shift) {
    auto t = testkit::edge_set_pattern(Y, testkit::edges_by_prefix(Y, ids));
    for (auto& p : t.points) p.coord += shift;
    orient(Y, t);
    return t;
}

int count(const std::string& s, const std::string& needle) {
    int n = 0;
    for (auto at = s.find(needle); at != std::string::npos; at = s.find(needle, at + 1)) ++n;
    return n;
}

}  // namespace

TEST(Render, BareLayout) {
    auto Y = fixtures::torus();
    auto R = render_svg(Y, assign_structure(Y), {});
    EXPECT_EQ(R.pieces, 1);
    EXPECT_EQ(R.chords, 0);
    EXPECT_EQ(R.crossings, 0);
    EXPECT_EQ(count(R.svg, "<polygon"), Y.num_triangles());
    // the shared tree edge is labelled once: 6 slots less 1
    EXPECT_EQ(count(R.svg, "<text"), 5);
}

TEST(Render, SlopesShowOneCrossing) {
    auto Y = fixtures::torus();
    auto H = assign_structure(Y);
    auto t1 = slope(Y, {"a", "c"}, 0.0), t2 = slope(Y, {"b", "c"}, 0.5);
    auto R = render_svg(Y, H, {t1, t2});
    auto T = intersection_points(Y, H, t1, t2);
    EXPECT_EQ(R.crossings, static_cast<int>(T.crossings.size()));
    EXPECT_EQ(R.crossings, 1);
    EXPECT_EQ(R.chords, static_cast<int>(t1.chords.size() + t2.chords.size()));
    EXPECT_EQ(count(R.svg, "r=\"6\""), 1);
}

TEST(Render, CoordinatesStayInsideTheCanvas) {
    auto Y = fixtures::annulus(6);
    auto core = Pattern::empty(Y);
    auto R = render_svg(Y, assign_structure(Y), {core});
    std::smatch m;
    ASSERT_TRUE(std::regex_search(R.svg, m, std::regex("width=\"([0-9.]+)\" height=\"([0-9.]+)\"")));
    double w = std::stod(m[1]), h = std::stod(m[2]);
    std::regex pt("points=\"([^\"]+)\"");
    for (auto it = std::sregex_iterator(R.svg.begin(), R.svg.end(), pt); it != std::sregex_iterator(); ++it) {
        std::istringstream in((*it)[1].str());
        double x, y;
        char comma;
        while (in >> x >> comma >> y) {
            EXPECT_GE(x, 0.0);
            EXPECT_LE(x, w);
            EXPECT_GE(y, 0.0);
            EXPECT_LE(y, h);
        }
    }
}

TEST(Render, Deterministic) {
    auto Y = fixtures::genus2();
    auto H = assign_structure(Y);
    auto t = testkit::edge_set_pattern(Y, {0, 1});
    EXPECT_EQ(render_svg(Y, H, {t}).svg, render_svg(Y, H, {t}).svg);
}
