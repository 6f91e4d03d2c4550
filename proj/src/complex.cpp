#include "dtrack/complex.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "dtrack/util.hpp"

namespace dtrack {

ComplexError::ComplexError(Kind kind, int line, const std::string& msg)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg),
      kind_(kind),
      line_(line) {}

bool Complex2::has_frontier() const {
    return std::any_of(frontier_vertex.begin(), frontier_vertex.end(), [](char c) { return c != 0; });
}

int Complex2::slot_of(int t, int e) const {
    for (int k = 0; k < 3; ++k)
        if (triangles[t].slots[k].edge == e) return k;
    return -1;
}

int Complex2::add_vertex(const std::string& id, bool frontier) {
    vertices.push_back(id);
    frontier_vertex.push_back(frontier ? 1 : 0);
    return num_vertices() - 1;
}

int Complex2::add_edge(const std::string& id, int from, int to, bool frontier) {
    edges.push_back({id, from, to});
    frontier_edge.push_back(frontier ? 1 : 0);
    shear.emplace_back();
    return num_edges() - 1;
}

int Complex2::add_triangle(const std::string& id, Slot s0, Slot s1, Slot s2) {
    triangles.push_back({id, {s0, s1, s2}});
    return num_triangles() - 1;
}

void Complex2::finalize() {
    using K = ComplexError::Kind;
    frontier_vertex.resize(vertices.size(), 0);
    frontier_edge.resize(edges.size(), 0);
    shear.resize(edges.size());
    if (!cocycle.empty() && cocycle.size() != edges.size()) cocycle.resize(edges.size(), 0);

    vertex_index.clear();
    edge_index.clear();
    tri_index.clear();
    for (int i = 0; i < num_vertices(); ++i)
        if (!vertex_index.emplace(vertices[i], i).second)
            throw ComplexError(K::Duplicate, 0, "duplicate vertex id '" + vertices[i] + "'");
    for (int i = 0; i < num_edges(); ++i)
        if (!edge_index.emplace(edges[i].id, i).second)
            throw ComplexError(K::Duplicate, 0, "duplicate edge id '" + edges[i].id + "'");
    for (int i = 0; i < num_triangles(); ++i)
        if (!tri_index.emplace(triangles[i].id, i).second)
            throw ComplexError(K::Duplicate, 0, "duplicate triangle id '" + triangles[i].id + "'");

    if (vertices.empty()) throw ComplexError(K::NonSimplicial, 0, "complex has no vertices");
    if (base < 0 || base >= num_vertices()) throw ComplexError(K::Dangling, 0, "base vertex out of range");

    for (const auto& e : edges)
        if (e.from < 0 || e.from >= num_vertices() || e.to < 0 || e.to >= num_vertices())
            throw ComplexError(K::Dangling, 0, "edge '" + e.id + "' has a dangling endpoint");

    star.assign(edges.size(), {});
    for (int t = 0; t < num_triangles(); ++t) {
        const auto& tri = triangles[t];
        for (int k = 0; k < 3; ++k) {
            const Slot& s = tri.slots[k];
            if (s.edge < 0 || s.edge >= num_edges())
                throw ComplexError(K::Dangling, 0, "triangle '" + tri.id + "' references a missing edge");
            if (s.sign != 1 && s.sign != -1)
                throw ComplexError(K::NonSimplicial, 0, "triangle '" + tri.id + "' has a bad slot sign");
        }
        for (int k = 0; k < 3; ++k) {
            if (tri.slots[k].edge == tri.slots[(k + 1) % 3].edge)
                throw ComplexError(K::NonSimplicial, 0, "triangle '" + tri.id + "' repeats an edge");
            if (slot_end(tri.slots[k]) != slot_start(tri.slots[(k + 1) % 3]))
                throw ComplexError(K::NonSimplicial, 0, "boundary of triangle '" + tri.id + "' does not close");
        }
        for (int k = 0; k < 3; ++k) star[tri.slots[k].edge].push_back({t, k});
    }
    for (int e = 0; e < num_edges(); ++e)
        if (frontier_edge[e] && !(frontier_vertex[edges[e].from] && frontier_vertex[edges[e].to]))
            throw ComplexError(K::Frontier, 0, "frontier edge '" + edges[e].id + "' has an unmarked endpoint");
}

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

Slot parse_slot(const Complex2& Y, std::string_view tok, int line) {
    Slot s;
    if (!tok.empty() && (tok[0] == '+' || tok[0] == '-')) {
        s.sign = tok[0] == '-' ? -1 : 1;
        tok.remove_prefix(1);
    }
    auto it = Y.edge_index.find(std::string(tok));
    if (it == Y.edge_index.end())
        throw ComplexError(ComplexError::Kind::Dangling, line, "unknown edge '" + std::string(tok) + "'");
    s.edge = it->second;
    return s;
}

Complex2 parse_complex(std::string_view text) {
    using K = ComplexError::Kind;
    struct Line {
        int no;
        std::vector<std::string_view> tok;
    };
    std::vector<Line> lines;
    int no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++no;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        auto tok = tokenize(raw);
        if (!tok.empty()) lines.push_back({no, std::move(tok)});
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }

    Complex2 Y;
    auto need = [](const Line& l, size_t n) {
        if (l.tok.size() != n)
            throw ComplexError(K::Syntax, l.no,
                               "'" + std::string(l.tok[0]) + "' expects " + std::to_string(n - 1) + " arguments");
    };
    auto vertex_of = [&Y](std::string_view id, int line) {
        auto it = Y.vertex_index.find(std::string(id));
        if (it == Y.vertex_index.end())
            throw ComplexError(K::Dangling, line, "unknown vertex '" + std::string(id) + "'");
        return it->second;
    };
    auto edge_of = [&Y](std::string_view id, int line) {
        auto it = Y.edge_index.find(std::string(id));
        if (it == Y.edge_index.end())
            throw ComplexError(K::Dangling, line, "unknown edge '" + std::string(id) + "'");
        return it->second;
    };

    // Pass 1: declarations of vertices.
    for (const auto& l : lines) {
        if (l.tok[0] != "vertex") continue;
        need(l, 2);
        std::string id(l.tok[1]);
        if (Y.vertex_index.count(id)) throw ComplexError(K::Duplicate, l.no, "duplicate vertex '" + id + "'");
        Y.vertex_index[id] = Y.add_vertex(id);
    }
    // Pass 2: edges.
    for (const auto& l : lines) {
        if (l.tok[0] != "edge") continue;
        need(l, 4);
        std::string id(l.tok[1]);
        if (Y.edge_index.count(id)) throw ComplexError(K::Duplicate, l.no, "duplicate edge '" + id + "'");
        Y.edge_index[id] = Y.add_edge(id, vertex_of(l.tok[2], l.no), vertex_of(l.tok[3], l.no));
    }
    // Pass 3: everything else.
    bool base_set = false;
    for (const auto& l : lines) {
        const auto& kw = l.tok[0];
        if (kw == "vertex" || kw == "edge") continue;
        if (kw == "triangle") {
            need(l, 5);
            std::string id(l.tok[1]);
            if (Y.tri_index.count(id)) throw ComplexError(K::Duplicate, l.no, "duplicate triangle '" + id + "'");
            Slot s[3];
            for (int k = 0; k < 3; ++k) s[k] = parse_slot(Y, l.tok[2 + k], l.no);
            int t = Y.add_triangle(id, s[0], s[1], s[2]);
            Y.tri_index[id] = t;
            for (int k = 0; k < 3; ++k) {
                if (s[k].edge == s[(k + 1) % 3].edge)
                    throw ComplexError(K::NonSimplicial, l.no, "triangle '" + id + "' repeats an edge");
                if (Y.slot_end(s[k]) != Y.slot_start(s[(k + 1) % 3]))
                    throw ComplexError(K::NonSimplicial, l.no, "boundary of triangle '" + id + "' does not close");
            }
        } else if (kw == "frontier") {
            need(l, 3);
            if (l.tok[1] == "vertex")
                Y.frontier_vertex[vertex_of(l.tok[2], l.no)] = 1;
            else if (l.tok[1] == "edge")
                Y.frontier_edge[edge_of(l.tok[2], l.no)] = 1;
            else
                throw ComplexError(K::Syntax, l.no, "frontier expects 'vertex' or 'edge'");
        } else if (kw == "cocycle") {
            need(l, 3);
            int e = edge_of(l.tok[1], l.no);
            long v = 0;
            auto [p, ec] = std::from_chars(l.tok[2].data(), l.tok[2].data() + l.tok[2].size(), v);
            if (ec != std::errc() || p != l.tok[2].data() + l.tok[2].size())
                throw ComplexError(K::Syntax, l.no, "cocycle value must be an integer");
            if (Y.cocycle.empty()) Y.cocycle.assign(Y.edges.size(), 0);
            Y.cocycle[e] = v;
        } else if (kw == "shear") {
            need(l, 3);
            int e = edge_of(l.tok[1], l.no);
            try {
                size_t used = 0;
                double v = std::stod(std::string(l.tok[2]), &used);
                if (used != l.tok[2].size()) throw std::invalid_argument("trailing");
                Y.shear[e] = v;
            } catch (const std::exception&) {
                throw ComplexError(K::Syntax, l.no, "shear value must be a real number");
            }
        } else if (kw == "base") {
            need(l, 2);
            Y.base = vertex_of(l.tok[1], l.no);
            base_set = true;
        } else {
            throw ComplexError(K::Syntax, l.no, "unknown keyword '" + std::string(kw) + "'");
        }
    }
    if (!base_set) Y.base = 0;
    Y.finalize();
    return Y;
}

std::string write_complex(const Complex2& Y) {
    std::ostringstream os;
    for (const auto& v : Y.vertices) os << "vertex " << v << '\n';
    for (const auto& e : Y.edges) os << "edge " << e.id << ' ' << Y.vertices[e.from] << ' ' << Y.vertices[e.to] << '\n';
    for (const auto& t : Y.triangles) {
        os << "triangle " << t.id;
        for (const auto& s : t.slots) os << ' ' << (s.sign < 0 ? "-" : "+") << Y.edges[s.edge].id;
        os << '\n';
    }
    for (int v = 0; v < Y.num_vertices(); ++v)
        if (Y.frontier_vertex[v]) os << "frontier vertex " << Y.vertices[v] << '\n';
    for (int e = 0; e < Y.num_edges(); ++e)
        if (Y.frontier_edge[e]) os << "frontier edge " << Y.edges[e].id << '\n';
    if (!Y.cocycle.empty())
        for (int e = 0; e < Y.num_edges(); ++e)
            if (Y.cocycle[e] != 0) os << "cocycle " << Y.edges[e].id << ' ' << Y.cocycle[e] << '\n';
    for (int e = 0; e < Y.num_edges(); ++e)
        if (Y.shear[e]) os << "shear " << Y.edges[e].id << ' ' << format_real(*Y.shear[e]) << '\n';
    os << "base " << Y.vertices[Y.base] << '\n';
    return os.str();
}

VertexLink vertex_link(const Complex2& Y, int v) {
    VertexLink L;
    std::unordered_map<int, int> end_index;  // edge*2+at_to -> node
    for (int e = 0; e < Y.num_edges(); ++e) {
        if (Y.edges[e].from == v) {
            end_index[e * 2] = static_cast<int>(L.ends.size());
            L.ends.push_back({e, 0});
        }
        if (Y.edges[e].to == v) {
            end_index[e * 2 + 1] = static_cast<int>(L.ends.size());
            L.ends.push_back({e, 1});
        }
    }
    for (int t = 0; t < Y.num_triangles(); ++t) {
        const auto& tri = Y.triangles[t];
        for (int k = 0; k < 3; ++k) {
            const Slot& in = tri.slots[(k + 2) % 3];
            const Slot& out = tri.slots[k];
            if (Y.slot_start(out) != v) continue;
            int a = end_index.at(in.edge * 2 + (in.sign > 0 ? 1 : 0));
            int b = end_index.at(out.edge * 2 + (out.sign > 0 ? 0 : 1));
            L.corners.push_back({t, k, a, b});
        }
    }
    UnionFind uf(static_cast<int>(L.ends.size()));
    for (const auto& c : L.corners) uf.unite(c.a, c.b);
    L.component = uf.labels(&L.num_components);
    return L;
}

std::vector<std::vector<int>> vertex_edges(const Complex2& Y) {
    std::vector<std::vector<int>> inc(Y.vertices.size());
    for (int e = 0; e < Y.num_edges(); ++e) {
        inc[Y.edges[e].from].push_back(e);
        inc[Y.edges[e].to].push_back(e);
    }
    return inc;
}

SpanningTree spanning_tree(const Complex2& Y) {
    SpanningTree T;
    T.in_tree.assign(Y.edges.size(), 0);
    T.parent_edge.assign(Y.vertices.size(), -1);
    T.depth.assign(Y.vertices.size(), -1);
    auto inc = vertex_edges(Y);
    std::vector<int> roots{Y.base};
    for (int v = 0; v < Y.num_vertices(); ++v) roots.push_back(v);
    for (int r : roots) {
        if (T.depth[r] >= 0) continue;
        T.depth[r] = 0;
        std::queue<int> q;
        q.push(r);
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            T.order.push_back(u);
            for (int e : inc[u]) {
                int w = Y.edges[e].from == u ? Y.edges[e].to : Y.edges[e].from;
                if (T.depth[w] >= 0) continue;
                T.depth[w] = T.depth[u] + 1;
                T.parent_edge[w] = e;
                T.in_tree[e] = 1;
                q.push(w);
            }
        }
    }
    return T;
}

SplittingVerdict is_splitting_vertex(const Complex2& Y, int v) {
    if (v < 0 || v >= Y.num_vertices())
        throw ComplexError(ComplexError::Kind::Dangling, 0, "splitting test on a missing vertex");
    SplittingVerdict out;
    const int nv = Y.num_vertices(), ne = Y.num_edges(), nt = Y.num_triangles();
    // Cells of Y - {v}: vertices, then edges, then triangles.
    UnionFind uf(nv + ne + nt);
    for (int e = 0; e < ne; ++e) {
        if (Y.edges[e].from != v) uf.unite(nv + e, Y.edges[e].from);
        if (Y.edges[e].to != v) uf.unite(nv + e, Y.edges[e].to);
    }
    for (int t = 0; t < nt; ++t)
        for (const auto& s : Y.triangles[t].slots) uf.unite(nv + ne + t, nv + s.edge);
    std::vector<char> infinite(nv + ne + nt, 0);
    for (int u = 0; u < nv; ++u)
        if (u != v && Y.frontier_vertex[u]) infinite[uf.find(u)] = 1;
    for (int e = 0; e < ne; ++e)
        if (Y.frontier_edge[e]) infinite[uf.find(nv + e)] = 1;

    VertexLink L = vertex_link(Y, v);
    std::vector<std::set<int>> far(L.num_components);
    for (size_t i = 0; i < L.ends.size(); ++i) far[L.component[i]].insert(uf.find(nv + L.ends[i].edge));
    for (int c = 0; c < L.num_components; ++c) {
        bool overlap = false;
        for (int d = 0; d < L.num_components; ++d)
            if (d != c)
                for (int r : far[d])
                    if (far[c].count(r)) overlap = true;
        bool far_inf = std::any_of(far[c].begin(), far[c].end(), [&](int r) { return infinite[r] != 0; });
        bool near_inf = Y.frontier_vertex[v] != 0;
        std::set<int> roots;
        for (int u = 0; u < nv + ne + nt; ++u)
            if (u != v) roots.insert(uf.find(u));
        for (int r : roots)
            if (!far[c].count(r) && infinite[r]) near_inf = true;
        bool bounds_compact = overlap ? !(far_inf || near_inf) : (!far_inf || !near_inf);
        if (!bounds_compact) {
            out.splitting = true;
            for (size_t i = 0; i < L.ends.size(); ++i)
                if (L.component[i] == c) out.witness_ends.push_back(L.ends[i].edge * 2 + L.ends[i].at_to);
            return out;
        }
    }
    return out;
}

std::vector<int> frontier_regions(const Complex2& Y, int* count) {
    UnionFind uf(Y.num_vertices());
    for (int e = 0; e < Y.num_edges(); ++e)
        if (Y.frontier_edge[e]) uf.unite(Y.edges[e].from, Y.edges[e].to);
    std::vector<int> label(Y.vertices.size(), -1);
    std::unordered_map<int, int> ids;
    for (int v = 0; v < Y.num_vertices(); ++v) {
        if (!Y.frontier_vertex[v]) continue;
        auto [it, fresh] = ids.emplace(uf.find(v), static_cast<int>(ids.size()));
        label[v] = it->second;
    }
    if (count) *count = static_cast<int>(ids.size());
    return label;
}

}  // namespace dtrack
