#include "dtrack/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <sstream>

#include "dtrack/intersect.hpp"

namespace dtrack {

namespace {

using P2 = std::array<double, 2>;

P2 lerp(const P2& a, const P2& b, double t) { return {a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t}; }

P2 reflect(const P2& x, const P2& a, const P2& b) {
    double dx = b[0] - a[0], dy = b[1] - a[1];
    double t = ((x[0] - a[0]) * dx + (x[1] - a[1]) * dy) / (dx * dx + dy * dy);
    P2 foot{a[0] + t * dx, a[1] + t * dy};
    return {2 * foot[0] - x[0], 2 * foot[1] - x[1]};
}

// Chart corners: the ends of the slots as the parameter runs to -infinity.
std::array<P2, 3> chart_corners() { return {klein_point(0, -50.0), klein_point(1, -50.0), klein_point(2, -50.0)}; }

// Affine image of a chart point in a laid-out triangle.
P2 to_layout(const std::array<P2, 3>& V, const std::array<P2, 3>& W, const P2& x) {
    double d = (V[1][0] - V[0][0]) * (V[2][1] - V[0][1]) - (V[2][0] - V[0][0]) * (V[1][1] - V[0][1]);
    double l1 = ((x[0] - V[0][0]) * (V[2][1] - V[0][1]) - (V[2][0] - V[0][0]) * (x[1] - V[0][1])) / d;
    double l2 = ((V[1][0] - V[0][0]) * (x[1] - V[0][1]) - (x[0] - V[0][0]) * (V[1][1] - V[0][1])) / d;
    double l0 = 1 - l1 - l2;
    return {l0 * W[0][0] + l1 * W[1][0] + l2 * W[2][0], l0 * W[0][1] + l1 * W[1][1] + l2 * W[2][1]};
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    std::string s = buf;
    return s == "-0.00" ? "0.00" : s;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

}  // namespace

RenderResult render_svg(const Complex2& Y, const HypStructure& H, const std::vector<Pattern>& patterns,
                        const RenderOptions& opts) {
    RenderResult R;
    const int nt = Y.num_triangles();
    std::vector<std::array<P2, 3>> W(nt);
    std::vector<char> placed(nt, 0);
    std::vector<std::array<char, 3>> tree_side(nt, {0, 0, 0});
    double next_x = 0.0;
    const double h = std::sqrt(3.0) / 2;
    for (int root = 0; root < nt; ++root) {
        if (placed[root]) continue;
        ++R.pieces;
        W[root] = {P2{next_x, 0.0}, P2{next_x + 1.0, 0.0}, P2{next_x + 0.5, h}};
        placed[root] = 1;
        std::deque<int> q{root};
        double max_x = next_x + 1.0;
        while (!q.empty()) {
            int t = q.front();
            q.pop_front();
            const auto& T = Y.triangles[t];
            for (int k = 0; k < 3; ++k) {
                const Slot& s = T.slots[k];
                P2 from = s.sign > 0 ? W[t][k] : W[t][(k + 1) % 3];
                P2 to = s.sign > 0 ? W[t][(k + 1) % 3] : W[t][k];
                P2 apex = reflect(W[t][(k + 2) % 3], from, to);
                for (const auto& inc : Y.star[s.edge]) {
                    if (placed[inc.tri]) continue;
                    const Slot& s2 = Y.triangles[inc.tri].slots[inc.slot];
                    auto& V = W[inc.tri];
                    V[inc.slot] = s2.sign > 0 ? from : to;
                    V[(inc.slot + 1) % 3] = s2.sign > 0 ? to : from;
                    V[(inc.slot + 2) % 3] = apex;
                    placed[inc.tri] = 1;
                    tree_side[t][k] = 1;
                    tree_side[inc.tri][inc.slot] = 2;  // shares the parent's label
                    for (const auto& p : V) max_x = std::max(max_x, p[0]);
                    q.push_back(inc.tri);
                    break;  // the other incidences get their own unfolding step
                }
            }
        }
        next_x = max_x + 0.5;
    }
    double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x, hi_x = -lo_x, hi_y = -lo_x;
    for (const auto& tri : W)
        for (const auto& p : tri) {
            lo_x = std::min(lo_x, p[0]);
            hi_x = std::max(hi_x, p[0]);
            lo_y = std::min(lo_y, p[1]);
            hi_y = std::max(hi_y, p[1]);
        }
    if (nt == 0) lo_x = lo_y = hi_x = hi_y = 0.0;
    const double margin = 0.3, S = opts.scale;
    auto X = [&](const P2& p) { return num((p[0] - lo_x + margin) * S); };
    auto Yc = [&](const P2& p) { return num((hi_y - p[1] + margin) * S); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num((hi_x - lo_x + 2 * margin) * S) << "\" height=\""
       << num((hi_y - lo_y + 2 * margin) * S) << "\">\n";
    os << "<g fill=\"none\" stroke=\"#999\" stroke-width=\"1\">\n";
    for (int t = 0; t < nt; ++t) {
        os << "<polygon points=\"";
        for (int k = 0; k < 3; ++k) os << (k ? " " : "") << X(W[t][k]) << ',' << Yc(W[t][k]);
        os << "\"/>\n";
    }
    os << "</g>\n";
    if (opts.edge_labels) {
        os << "<g font-family=\"monospace\" font-size=\"" << num(S / 10) << "\" fill=\"#555\" text-anchor=\"middle\">\n";
        for (int t = 0; t < nt; ++t) {
            P2 c{(W[t][0][0] + W[t][1][0] + W[t][2][0]) / 3, (W[t][0][1] + W[t][1][1] + W[t][2][1]) / 3};
            for (int k = 0; k < 3; ++k) {
                if (tree_side[t][k] == 2) continue;
                P2 m = lerp(W[t][k], W[t][(k + 1) % 3], 0.5);
                os << "<text x=\"" << X(lerp(m, c, 0.18)) << "\" y=\"" << Yc(lerp(m, c, 0.18)) << "\">"
                   << Y.edges[Y.triangles[t].slots[k].edge].id << "</text>\n";
            }
        }
        os << "</g>\n";
    }
    const auto V = chart_corners();
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        const Pattern& pt = patterns[i];
        const char* color = kPalette[i % 6];
        os << "<g stroke=\"" << color << "\" fill=\"" << color << "\" stroke-width=\"2\">\n";
        for (const auto& c : pt.chords) {
            const auto& Wt = W[c.tri];
            int kp = Y.slot_of(c.tri, pt.points[c.p].edge), kq = Y.slot_of(c.tri, pt.points[c.q].edge);
            double ap = slot_param(Y, H, c.tri, kp, pt.points[c.p].coord);
            double aq = slot_param(Y, H, c.tri, kq, pt.points[c.q].coord);
            P2 a = to_layout(V, Wt, klein_point(kp, ap)), b = to_layout(V, Wt, klein_point(kq, aq));
            os << "<line x1=\"" << X(a) << "\" y1=\"" << Yc(a) << "\" x2=\"" << X(b) << "\" y2=\"" << Yc(b) << "\"/>\n";
            os << "<circle cx=\"" << X(a) << "\" cy=\"" << Yc(a) << "\" r=\"2.5\"/>\n";
            os << "<circle cx=\"" << X(b) << "\" cy=\"" << Yc(b) << "\" r=\"2.5\"/>\n";
            ++R.chords;
            if (c.side == 0) continue;
            // a point of the forward boundary arc from p to q
            P2 ref = kp != kq || aq < ap ? Wt[(kp + 1) % 3] : lerp(lerp(a, b, 0.5), Wt[(kp + 2) % 3], -0.01);
            P2 m = lerp(a, b, 0.5);
            double dx = b[0] - a[0], dy = b[1] - a[1], len = std::hypot(dx, dy);
            if (len == 0) continue;
            P2 n{-dy / len, dx / len};
            double toward = (ref[0] - m[0]) * n[0] + (ref[1] - m[1]) * n[1];
            double sgn = (toward >= 0 ? 1.0 : -1.0) * c.side;
            P2 tip{m[0] + 0.08 * sgn * n[0], m[1] + 0.08 * sgn * n[1]};
            os << "<line x1=\"" << X(m) << "\" y1=\"" << Yc(m) << "\" x2=\"" << X(tip) << "\" y2=\"" << Yc(tip)
               << "\" stroke-width=\"1.5\"/>\n";
        }
        for (int t = 0; t < nt; ++t)
            for (int j = 0; j < pt.circles[t]; ++j) {
                P2 c{(W[t][0][0] + W[t][1][0] + W[t][2][0]) / 3, (W[t][0][1] + W[t][1][1] + W[t][2][1]) / 3};
                os << "<circle cx=\"" << X(c) << "\" cy=\"" << Yc(c) << "\" r=\"" << num(S * (0.05 + 0.03 * j))
                   << "\" fill=\"none\"/>\n";
            }
        os << "</g>\n";
    }
    std::vector<Crossing> marks;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        if (patterns[i].allow_crossings)
            for (const auto& x : self_crossings(Y, H, patterns[i]).crossings) marks.push_back(x);
        for (std::size_t j = i + 1; j < patterns.size(); ++j)
            for (const auto& x : intersection_points(Y, H, patterns[i], patterns[j]).crossings) marks.push_back(x);
    }
    if (!marks.empty()) {
        os << "<g stroke=\"#e00\" fill=\"none\" stroke-width=\"1.5\">\n";
        for (const auto& x : marks) {
            P2 p = to_layout(V, W[x.tri], x.at);
            os << "<circle cx=\"" << X(p) << "\" cy=\"" << Yc(p) << "\" r=\"6\"/>\n";
        }
        os << "</g>\n";
    }
    R.crossings = static_cast<int>(marks.size());
    os << "</svg>\n";
    R.svg = os.str();
    return R;
}

}  // namespace dtrack
