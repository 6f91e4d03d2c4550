#include "dtrack/fixtures.hpp"

#include <string>

namespace dtrack::fixtures {

namespace {

std::string s(int x) { return std::to_string(x); }

}  // namespace

Complex2 torus() {
    Complex2 Y;
    int v = Y.add_vertex("v");
    int a = Y.add_edge("a", v, v), b = Y.add_edge("b", v, v), c = Y.add_edge("c", v, v);
    Y.add_triangle("T1", {a, 1}, {b, 1}, {c, 1});
    Y.add_triangle("T2", {a, -1}, {b, -1}, {c, -1});
    Y.finalize();
    return Y;
}

std::vector<long> torus_phi() { return {1, 0, -1}; }
std::vector<long> torus_psi() { return {0, 1, -1}; }

Complex2 wedge() {
    Complex2 Y;
    int v = Y.add_vertex("v");
    Y.add_edge("a", v, v);
    Y.add_edge("b", v, v);
    Y.finalize();
    return Y;
}

Complex2 strip(int m, int rows, bool twist) {
    Complex2 Y;
    auto vid = [&](int i, int j) { return "p" + s(i) + "_" + s(j); };
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < m; ++i) Y.add_vertex(vid(i, j), j == 0 || j == rows - 1);
    auto V = [&](int i, int j) {
        if (i == m) {
            i = 0;
            if (twist) j = rows - 1 - j;
        }
        return Y.vertex_index.count(vid(i, j)) ? Y.vertex_index[vid(i, j)] : -1;
    };
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < m; ++i) Y.vertex_index[vid(i, j)] = j * m + i;
    // rungs r_i_j: (i,j)->(i,j+1); horizontals h_i_j: (i,j)->(i+1,j); diagonals d_i_j: (i,j)->(i+1,j+1)
    for (int j = 0; j + 1 < rows; ++j)
        for (int i = 0; i < m; ++i) Y.add_edge("r" + s(i) + "_" + s(j), V(i, j), V(i, j + 1));
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < m; ++i)
            Y.add_edge("h" + s(i) + "_" + s(j), V(i, j), V(i + 1, j), j == 0 || j == rows - 1);
    for (int j = 0; j + 1 < rows; ++j)
        for (int i = 0; i < m; ++i) Y.add_edge("d" + s(i) + "_" + s(j), V(i, j), V(i + 1, j + 1));
    auto E = [&](const std::string& id) {
        for (int e = 0; e < Y.num_edges(); ++e)
            if (Y.edges[e].id == id) return e;
        return -1;
    };
    auto rung = [&](int i, int j) -> Slot {
        if (i == m) {
            if (twist) return {E("r0_" + s(rows - 2 - j)), -1};
            return {E("r0_" + s(j)), 1};
        }
        return {E("r" + s(i) + "_" + s(j)), 1};
    };
    for (int j = 0; j + 1 < rows; ++j)
        for (int i = 0; i < m; ++i) {
            int h0 = E("h" + s(i) + "_" + s(j)), h1 = E("h" + s(i) + "_" + s(j + 1));
            int d = E("d" + s(i) + "_" + s(j));
            Y.add_triangle("L" + s(i) + "_" + s(j), {h0, 1}, rung(i + 1, j), {d, -1});
            Y.add_triangle("U" + s(i) + "_" + s(j), {d, 1}, {h1, -1}, {rung(i, j).edge, -1});
        }
    Y.base = V(0, rows / 2);
    Y.finalize();
    return Y;
}

Complex2 annulus(int n) { return strip(n / 2, 3, false); }

Complex2 mobius(int m) { return strip(m, 4, true); }

std::vector<long> mobius_orientation_cocycle(const Complex2& M, int m) {
    std::vector<long> w(M.edges.size(), 0);
    for (int j = 0; j < 4; ++j) {
        auto h = M.edge_index.find("h" + s(m - 1) + "_" + s(j));
        if (h != M.edge_index.end()) w[h->second] = 1;
        auto d = M.edge_index.find("d" + s(m - 1) + "_" + s(j));
        if (d != M.edge_index.end()) w[d->second] = 1;
    }
    return w;
}

Complex2 genus2() {
    Complex2 Y;
    int v = Y.add_vertex("v");
    int a = Y.add_edge("a", v, v), b = Y.add_edge("b", v, v), c = Y.add_edge("c", v, v), d = Y.add_edge("d", v, v);
    int x[6];
    for (int j = 1; j <= 5; ++j) x[j] = Y.add_edge("x" + s(j), v, v);
    // Octagon sides s1..s8 = a b -a -b c d -c -d; diagonal x_j runs from P0 to P_{j+1}.
    Y.add_triangle("F1", {a, 1}, {b, 1}, {x[1], -1});
    Y.add_triangle("F2", {x[1], 1}, {a, -1}, {x[2], -1});
    Y.add_triangle("F3", {x[2], 1}, {b, -1}, {x[3], -1});
    Y.add_triangle("F4", {x[3], 1}, {c, 1}, {x[4], -1});
    Y.add_triangle("F5", {x[4], 1}, {d, 1}, {x[5], -1});
    Y.add_triangle("F6", {x[5], 1}, {c, -1}, {d, -1});
    Y.finalize();
    return Y;
}

std::vector<long> genus2_dual(char loop) {
    // Edge order: a b c d x1 x2 x3 x4 x5. Diagonal values follow from the triangle relations.
    switch (loop) {
        case 'a': return {1, 0, 0, 0, 1, 0, 0, 0, 0};
        case 'b': return {0, 1, 0, 0, 1, 1, 0, 0, 0};
        case 'c': return {0, 0, 1, 0, 0, 0, 0, 1, 1};
        case 'd': return {0, 0, 0, 1, 0, 0, 0, 0, 1};
        default: return std::vector<long>(9, 0);
    }
}

Complex2 multiband(int bands, int m, int k) {
    Complex2 Y;
    auto core = [&](int i) { return "c" + s(i % m); };
    auto bv = [&](int b, int i, int j) { return j == 0 ? core(i) : "b" + s(b) + "v" + s(i % m) + "_" + s(j); };
    for (int i = 0; i < m; ++i) Y.add_vertex(core(i));
    for (int b = 0; b < bands; ++b)
        for (int j = 1; j <= k; ++j)
            for (int i = 0; i < m; ++i) Y.add_vertex(bv(b, i, j), j == k);
    for (int v = 0; v < Y.num_vertices(); ++v) Y.vertex_index[Y.vertices[v]] = v;
    auto V = [&](int b, int i, int j) { return Y.vertex_index.at(bv(b, i, j)); };
    for (int i = 0; i < m; ++i) Y.add_edge("k" + s(i), V(0, i, 0), V(0, i + 1, 0), k == 0);
    for (int b = 0; b < bands; ++b)
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < m; ++i) {
                std::string tag = s(b) + "_" + s(i) + "_" + s(j);
                Y.add_edge("r" + tag, V(b, i, j), V(b, i, j + 1));
                Y.add_edge("h" + s(b) + "_" + s(i) + "_" + s(j + 1), V(b, i, j + 1), V(b, i + 1, j + 1), j + 1 == k);
                Y.add_edge("d" + tag, V(b, i, j), V(b, i + 1, j + 1));
            }
    for (int e = 0; e < Y.num_edges(); ++e) Y.edge_index[Y.edges[e].id] = e;
    auto E = [&](const std::string& id) { return Y.edge_index.at(id); };
    for (int b = 0; b < bands; ++b)
        for (int j = 0; j < k; ++j)
            for (int i = 0; i < m; ++i) {
                std::string tag = s(b) + "_" + s(i) + "_" + s(j);
                int h0 = j == 0 ? E("k" + s(i)) : E("h" + s(b) + "_" + s(i) + "_" + s(j));
                int h1 = E("h" + s(b) + "_" + s(i) + "_" + s(j + 1));
                int r0 = E("r" + tag), r1 = E("r" + s(b) + "_" + s((i + 1) % m) + "_" + s(j));
                int d = E("d" + tag);
                Y.add_triangle("L" + tag, {h0, 1}, {r1, 1}, {d, -1});
                Y.add_triangle("U" + tag, {d, 1}, {h1, -1}, {r0, -1});
            }
    Y.base = 0;
    Y.finalize();
    return Y;
}

Complex2 stallings() {
    Complex2 Y;
    int v = Y.add_vertex("v");
    int a = Y.add_edge("a", v, v), b = Y.add_edge("b", v, v), c = Y.add_edge("c", v, v);
    Y.add_edge("d", v, v);
    Y.add_triangle("T", {a, 1}, {b, 1}, {c, 1});
    Y.finalize();
    return Y;
}

Complex2 strip_wedge() {
    Complex2 Y;
    const int cols = 5;
    int w = Y.add_vertex("w");
    for (int part = 0; part < 2; ++part) {
        std::string p = part == 0 ? "A" : "B";
        auto name = [&](int i, int j) { return p + s(i) + "_" + s(j); };
        std::vector<std::vector<int>> V(cols, std::vector<int>(2));
        for (int i = 0; i < cols; ++i)
            for (int j = 0; j < 2; ++j) {
                if (i == 2 && j == 0) {
                    V[i][j] = w;
                    continue;
                }
                V[i][j] = Y.add_vertex(name(i, j), i == 0 || i == cols - 1);
            }
        std::vector<int> r(cols);
        for (int i = 0; i < cols; ++i) r[i] = Y.add_edge(p + "r" + s(i), V[i][0], V[i][1], i == 0 || i == cols - 1);
        for (int i = 0; i + 1 < cols; ++i) {
            int h0 = Y.add_edge(p + "h" + s(i) + "_0", V[i][0], V[i + 1][0]);
            int h1 = Y.add_edge(p + "h" + s(i) + "_1", V[i][1], V[i + 1][1]);
            int d = Y.add_edge(p + "d" + s(i), V[i][0], V[i + 1][1]);
            Y.add_triangle(p + "L" + s(i), {h0, 1}, {r[i + 1], 1}, {d, -1});
            Y.add_triangle(p + "U" + s(i), {d, 1}, {h1, -1}, {r[i], -1});
        }
    }
    Y.base = w;
    Y.finalize();
    return Y;
}

}  // namespace dtrack::fixtures
