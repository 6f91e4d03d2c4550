#include "dtrack/cover.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>
#include <sstream>

namespace dtrack {

namespace {

using Sheet = std::vector<long>;
using Act = std::function<std::optional<Sheet>(const Sheet&, int edge, int sign)>;

[[noreturn]] void cocycle_error(const std::string& msg) {
    throw ComplexError(ComplexError::Kind::Cocycle, 0, msg);
}

// Builds the covering complex over an explicit list of sheets and a sheet action of each edge.
Cover build_over_sheets(const Complex2& base, const std::vector<Sheet>& sheets, const Act& act,
                        const std::function<std::string(const Sheet&)>& label) {
    Cover C;
    Complex2& Y = C.space;
    std::set<Sheet> present(sheets.begin(), sheets.end());
    auto act_in = [&](const Sheet& s, int e, int sign) -> std::optional<Sheet> {
        auto r = act(s, e, sign);
        if (!r || !present.count(*r)) return std::nullopt;
        return r;
    };

    for (const auto& s : sheets)
        for (int v = 0; v < base.num_vertices(); ++v) {
            int id = Y.add_vertex(base.vertices[v] + "@" + label(s));
            C.vertex_at[{v, s}] = id;
            C.vertex_proj.push_back(v);
            C.vertex_sheet.push_back(s);
        }
    for (const auto& s : sheets)
        for (int e = 0; e < base.num_edges(); ++e) {
            auto t = act_in(s, e, +1);
            if (!t) continue;
            int id = Y.add_edge(base.edges[e].id + "@" + label(s), C.vertex_at.at({base.edges[e].from, s}),
                                C.vertex_at.at({base.edges[e].to, *t}));
            C.edge_at[{e, s}] = id;
            C.edge_proj.push_back(e);
            C.edge_sheet.push_back(s);
        }
    for (const auto& s : sheets)
        for (int t = 0; t < base.num_triangles(); ++t) {
            Sheet cur = s;
            Slot lifted[3];
            bool ok = true;
            for (int k = 0; k < 3 && ok; ++k) {
                const Slot& sl = base.triangles[t].slots[k];
                Sheet from_sheet = cur;
                if (sl.sign < 0) {
                    auto prev = act_in(cur, sl.edge, -1);
                    if (!prev) {
                        ok = false;
                        break;
                    }
                    from_sheet = *prev;
                }
                auto it = C.edge_at.find({sl.edge, from_sheet});
                if (it == C.edge_at.end()) {
                    ok = false;
                    break;
                }
                lifted[k] = {it->second, sl.sign};
                if (sl.sign > 0) {
                    auto nxt = act_in(cur, sl.edge, +1);
                    if (!nxt) {
                        ok = false;
                        break;
                    }
                    cur = *nxt;
                } else {
                    cur = from_sheet;
                }
            }
            if (!ok || cur != s) continue;
            int id = Y.add_triangle(base.triangles[t].id + "@" + label(s), lifted[0], lifted[1], lifted[2]);
            C.tri_at[{t, s}] = id;
            C.tri_proj.push_back(t);
            C.tri_sheet.push_back(s);
        }

    // Walk back from corner k of triangle t (at sheet s) to its corner 0.
    auto back_to_corner0 = [&](int t, int k, Sheet s) -> std::optional<Sheet> {
        for (int j = k - 1; j >= 0; --j) {
            const Slot& sl = base.triangles[t].slots[j];
            auto r = act(s, sl.edge, -sl.sign);
            if (!r) return std::nullopt;
            s = *r;
        }
        return s;
    };
    auto tri_present = [&](int t, const std::optional<Sheet>& s) {
        return s && C.tri_at.count({t, *s});
    };

    // A cell is frontier when its star in the full cover is not entirely present.
    for (int id = 0; id < Y.num_vertices(); ++id) {
        int v = C.vertex_proj[id];
        const Sheet& s = C.vertex_sheet[id];
        bool fr = base.frontier_vertex[v] != 0;
        for (int e = 0; e < base.num_edges() && !fr; ++e) {
            if (base.edges[e].from == v && !C.edge_at.count({e, s})) fr = true;
            if (base.edges[e].to == v) {
                auto p = act(s, e, -1);
                if (!p || !C.edge_at.count({e, *p})) fr = true;
            }
        }
        for (int t = 0; t < base.num_triangles() && !fr; ++t)
            for (int k = 0; k < 3; ++k)
                if (base.slot_start(base.triangles[t].slots[k]) == v && !tri_present(t, back_to_corner0(t, k, s)))
                    fr = true;
        Y.frontier_vertex[id] = fr ? 1 : 0;
    }
    for (int id = 0; id < Y.num_edges(); ++id) {
        int e = C.edge_proj[id];
        const Sheet& s = C.edge_sheet[id];
        bool fr = base.frontier_edge[e] != 0;
        for (const auto& inc : base.star[e]) {
            const Slot& sl = base.triangles[inc.tri].slots[inc.slot];
            int from_corner = sl.sign > 0 ? inc.slot : (inc.slot + 1) % 3;
            if (!tri_present(inc.tri, back_to_corner0(inc.tri, from_corner, s))) fr = true;
        }
        Y.frontier_edge[id] = fr ? 1 : 0;
        if (fr) {
            Y.frontier_vertex[Y.edges[id].from] = 1;
            Y.frontier_vertex[Y.edges[id].to] = 1;
        }
    }
    Y.shear.assign(Y.edges.size(), std::nullopt);
    for (int id = 0; id < Y.num_edges(); ++id) Y.shear[id] = base.shear[C.edge_proj[id]];
    return C;
}

std::string level_label(const Sheet& s) { return format_sheet(s); }

std::vector<int> relator_columns(const CosetTable& T, const Word& w) {
    std::vector<int> cols;
    for (auto [e, sign] : w) {
        int g = T.edge_gen[e];
        if (g < 0) continue;
        int col = 2 * g + (sign < 0 ? 1 : 0);
        if (!cols.empty() && cols.back() == (col ^ 1))
            cols.pop_back();
        else
            cols.push_back(col);
    }
    while (cols.size() >= 2 && cols.front() == (cols.back() ^ 1)) {
        cols.erase(cols.begin());
        cols.pop_back();
    }
    return cols;
}

struct Hlt {
    std::vector<std::vector<int>> tab;
    std::vector<int> rep;
    int width;
    int bound;
    bool hit = false;

    int find(int c) {
        while (rep[c] != c) {
            rep[c] = rep[rep[c]];
            c = rep[c];
        }
        return c;
    }
    bool live(int c) { return rep[c] == c; }

    int define(int c, int col) {
        if (static_cast<int>(tab.size()) >= bound) {
            hit = true;
            return -1;
        }
        int n = static_cast<int>(tab.size());
        tab.emplace_back(width, -1);
        rep.push_back(n);
        tab[c][col] = n;
        tab[n][col ^ 1] = c;
        return n;
    }

    void merge(int k, int l, std::vector<int>& q) {
        k = find(k);
        l = find(l);
        if (k == l) return;
        if (l < k) std::swap(k, l);
        rep[l] = k;
        q.push_back(l);
    }

    void coincidence(int a, int b) {
        std::vector<int> q;
        merge(a, b, q);
        for (size_t i = 0; i < q.size(); ++i) {
            int g = q[i];
            for (int col = 0; col < width; ++col) {
                int d = tab[g][col];
                if (d < 0) continue;
                if (tab[d][col ^ 1] == g) tab[d][col ^ 1] = -1;
                int mu = find(g), nu = find(d);
                if (tab[mu][col] >= 0)
                    merge(nu, tab[mu][col], q);
                else if (tab[nu][col ^ 1] >= 0)
                    merge(mu, tab[nu][col ^ 1], q);
                else {
                    tab[mu][col] = nu;
                    tab[nu][col ^ 1] = mu;
                }
            }
        }
    }

    // Returns true when the relator closes at c (possibly after deductions or coincidences).
    bool scan_and_fill(int c, const std::vector<int>& w) {
        if (w.empty()) return true;
        int f = c, b = c;
        int i = 0, j = static_cast<int>(w.size()) - 1;
        while (true) {
            while (i <= j && tab[f][w[i]] >= 0) f = tab[f][w[i++]];
            if (i > j) {
                if (f != b) coincidence(f, b);
                return true;
            }
            while (j >= i && tab[b][w[j] ^ 1] >= 0) b = tab[b][w[j--] ^ 1];
            if (j < i) {
                coincidence(f, b);
                return true;
            }
            if (i == j) {
                tab[f][w[i]] = b;
                tab[b][w[i] ^ 1] = f;
                return true;
            }
            if (define(f, w[i]) < 0) return false;
        }
    }
};

}  // namespace

CoverSpec CoverSpec::from_cocycle(const std::vector<long>& phi) {
    CoverSpec s;
    for (long x : phi) s.cocycle.push_back({x});
    return s;
}

CoverSpec CoverSpec::from_cocycles(const std::vector<std::vector<long>>& phis) {
    CoverSpec s;
    if (phis.empty()) return s;
    s.cocycle.assign(phis.front().size(), {});
    for (const auto& phi : phis)
        for (size_t e = 0; e < phi.size(); ++e) s.cocycle[e].push_back(phi[e]);
    return s;
}

CoverSpec CoverSpec::from_subgroup(std::vector<Word> words, int coset_bound) {
    CoverSpec s;
    s.subgroup_words = std::move(words);
    s.coset_bound = coset_bound;
    return s;
}

std::string format_sheet(const std::vector<long>& sheet) {
    if (sheet.size() == 1) return std::to_string(sheet[0]);
    std::string out = "(";
    for (size_t i = 0; i < sheet.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(sheet[i]);
    }
    return out + ")";
}

bool is_cocycle(const Complex2& Y, const std::vector<long>& phi) {
    if (static_cast<int>(phi.size()) != Y.num_edges()) return false;
    for (const auto& t : Y.triangles) {
        long sum = 0;
        for (const auto& s : t.slots) sum += s.sign * phi[s.edge];
        if (sum != 0) return false;
    }
    return true;
}

std::array<long, 3> corner_potentials(const Complex2& Y, const std::vector<long>& phi, int tri) {
    std::array<long, 3> pot{0, 0, 0};
    const auto& t = Y.triangles[tri];
    pot[1] = t.slots[0].sign * phi[t.slots[0].edge];
    pot[2] = pot[1] + t.slots[1].sign * phi[t.slots[1].edge];
    return pot;
}

std::vector<long> gauge_fix(const Complex2& Y, const std::vector<long>& phi) {
    SpanningTree T = spanning_tree(Y);
    std::vector<long> pot(Y.vertices.size(), 0);
    for (int v : T.order) {
        int e = T.parent_edge[v];
        if (e < 0) continue;
        const Edge& E = Y.edges[e];
        // phi'(e) = phi(e) + pot(from) - pot(to) must vanish on tree edges.
        if (E.to == v)
            pot[v] = pot[E.from] + phi[e];
        else
            pot[v] = pot[E.to] - phi[e];
    }
    std::vector<long> out(phi.size());
    for (int e = 0; e < Y.num_edges(); ++e) out[e] = phi[e] + pot[Y.edges[e].from] - pot[Y.edges[e].to];
    return out;
}

std::vector<long> pullback(const Cover& C, const std::vector<long>& phi) {
    std::vector<long> out(C.space.edges.size());
    for (size_t e = 0; e < out.size(); ++e) out[e] = phi[C.edge_proj[e]];
    return out;
}

Cover build_cyclic_cover(const Complex2& base, const CoverSpec& spec, const CoverMode& mode) {
    if (spec.subgroup_mode()) cocycle_error("cyclic cover needs a cocycle");
    if (static_cast<int>(spec.cocycle.size()) != base.num_edges()) cocycle_error("cocycle length differs from edge count");
    const int r = spec.rank();
    if (r < 1) cocycle_error("cocycle rank must be positive");
    for (const auto& row : spec.cocycle)
        if (static_cast<int>(row.size()) != r) cocycle_error("cocycle rows have inconsistent rank");
    SpanningTree T = spanning_tree(base);
    for (int j = 0; j < r; ++j) {
        std::vector<long> col(base.num_edges());
        for (int e = 0; e < base.num_edges(); ++e) col[e] = spec.cocycle[e][j];
        if (!is_cocycle(base, col)) cocycle_error("cocycle does not vanish around some triangle");
        for (int e = 0; e < base.num_edges(); ++e)
            if (T.in_tree[e] && col[e] != 0)
                cocycle_error("cocycle is non-zero on spanning-tree edge '" + base.edges[e].id + "'");
    }

    std::vector<Sheet> sheets;
    Act act;
    int n = 0, radius = -1;
    if (const auto* fin = std::get_if<Finite>(&mode)) {
        if (r != 1) cocycle_error("finite covers take a rank-1 cocycle");
        if (fin->n < 1) cocycle_error("cover degree must be positive");
        n = fin->n;
        for (long i = 0; i < n; ++i) sheets.push_back({i});
        act = [&spec, n](const Sheet& s, int e, int sign) -> std::optional<Sheet> {
            long x = (s[0] + sign * spec.cocycle[e][0]) % n;
            if (x < 0) x += n;
            return Sheet{x};
        };
    } else {
        radius = std::get<Truncated>(mode).radius;
        if (radius < 0) cocycle_error("truncation radius must be non-negative");
        Sheet cur(r, -radius);
        while (true) {
            sheets.push_back(cur);
            int i = r - 1;
            while (i >= 0 && cur[i] == radius) cur[i--] = -radius;
            if (i < 0) break;
            ++cur[i];
        }
        act = [&spec, r](const Sheet& s, int e, int sign) -> std::optional<Sheet> {
            Sheet out = s;
            for (int j = 0; j < r; ++j) out[j] += sign * spec.cocycle[e][j];
            return out;
        };
    }
    Cover C = build_over_sheets(base, sheets, act, level_label);
    C.rank = r;
    C.degree = n;
    C.radius = radius;
    C.space.base = C.vertex_at.at({base.base, Sheet(r, 0)});
    C.space.finalize();
    if (n > 0) {
        Deck d;
        auto shift = [n](const Sheet& s) { return Sheet{(s[0] + 1) % n}; };
        for (int i = 0; i < C.space.num_vertices(); ++i)
            d.vertex.push_back(C.vertex_at.at({C.vertex_proj[i], shift(C.vertex_sheet[i])}));
        for (int i = 0; i < C.space.num_edges(); ++i)
            d.edge.push_back(C.edge_at.at({C.edge_proj[i], shift(C.edge_sheet[i])}));
        for (int i = 0; i < C.space.num_triangles(); ++i)
            d.tri.push_back(C.tri_at.at({C.tri_proj[i], shift(C.tri_sheet[i])}));
        C.tau = std::move(d);
    }
    return C;
}

std::optional<int> Cover::shift_vertex(int v, const std::vector<long>& by) const {
    Sheet s = vertex_sheet[v];
    for (size_t j = 0; j < s.size(); ++j) s[j] += by[j];
    if (degree > 0) s[0] = ((s[0] % degree) + degree) % degree;
    auto it = vertex_at.find({vertex_proj[v], s});
    if (it == vertex_at.end()) return std::nullopt;
    return it->second;
}

std::optional<int> Cover::shift_edge(int e, const std::vector<long>& by) const {
    Sheet s = edge_sheet[e];
    for (size_t j = 0; j < s.size(); ++j) s[j] += by[j];
    if (degree > 0) s[0] = ((s[0] % degree) + degree) % degree;
    auto it = edge_at.find({edge_proj[e], s});
    if (it == edge_at.end()) return std::nullopt;
    return it->second;
}

std::optional<int> Cover::shift_tri(int t, const std::vector<long>& by) const {
    Sheet s = tri_sheet[t];
    for (size_t j = 0; j < s.size(); ++j) s[j] += by[j];
    if (degree > 0) s[0] = ((s[0] % degree) + degree) % degree;
    auto it = tri_at.find({tri_proj[t], s});
    if (it == tri_at.end()) return std::nullopt;
    return it->second;
}

Word triangle_word(const Complex2& Y, const SpanningTree& T, int tri) {
    Word w;
    for (const auto& s : Y.triangles[tri].slots)
        if (!T.in_tree[s.edge]) w.push_back({s.edge, s.sign});
    return w;
}

int CosetTable::step(int c, int edge, int sign) const {
    if (c < 0) return -1;
    int g = edge_gen[edge];
    if (g < 0) return c;
    return rows[c][2 * g + (sign < 0 ? 1 : 0)];
}

int CosetTable::trace(int c, const Word& w) const {
    for (auto [e, sign] : w) {
        c = step(c, e, sign);
        if (c < 0) return -1;
    }
    return c;
}

Word CosetTable::representative(int c) const {
    Word w;
    while (c > 0 && parent[c] >= 0) {
        int col = parent_col[c];
        w.push_back({gen_edge[col / 2], (col & 1) ? -1 : 1});
        c = parent[c];
    }
    std::reverse(w.begin(), w.end());
    return w;
}

CosetTable enumerate_cosets(const Complex2& Y, const std::vector<Word>& subgroup_words, int coset_bound) {
    CosetTable T;
    SpanningTree tree = spanning_tree(Y);
    T.edge_gen.assign(Y.edges.size(), -1);
    for (int e = 0; e < Y.num_edges(); ++e)
        if (!tree.in_tree[e]) {
            T.edge_gen[e] = T.num_gens++;
            T.gen_edge.push_back(e);
        }
    for (const auto& w : subgroup_words) {
        if (w.empty()) throw ComplexError(ComplexError::Kind::Syntax, 0, "subgroup word is empty");
        for (size_t i = 0; i + 1 < w.size(); ++i)
            if (w[i].first == w[i + 1].first && w[i].second == -w[i + 1].second)
                throw ComplexError(ComplexError::Kind::Syntax, 0, "subgroup word is not freely reduced");
    }
    std::vector<std::vector<int>> relators;
    for (int t = 0; t < Y.num_triangles(); ++t) {
        auto cols = relator_columns(T, triangle_word(Y, tree, t));
        if (!cols.empty()) relators.push_back(std::move(cols));
    }

    Hlt h;
    h.width = 2 * T.num_gens;
    h.bound = std::max(1, coset_bound);
    h.tab.emplace_back(h.width, -1);
    h.rep.push_back(0);
    for (const auto& w : subgroup_words) h.scan_and_fill(0, relator_columns(T, w));
    std::vector<char> closed;
    for (int c = 0; c < static_cast<int>(h.tab.size()); ++c) {
        closed.resize(h.tab.size(), 0);
        if (!h.live(c)) continue;
        bool all = true;
        for (const auto& r : relators) {
            if (!h.scan_and_fill(c, r)) all = false;
            if (!h.live(c)) break;
        }
        if (!h.live(c)) continue;
        for (int col = 0; col < h.width; ++col)
            if (h.tab[c][col] < 0 && h.define(c, col) < 0) all = false;
        closed.resize(h.tab.size(), 0);
        closed[c] = all ? 1 : 0;
    }
    closed.resize(h.tab.size(), 0);
    // Coincidences discovered late can reopen earlier rows; a final pass confirms closure.
    for (int c = 0; c < static_cast<int>(h.tab.size()); ++c) {
        if (!h.live(c) || !closed[c]) continue;
        for (const auto& r : relators) {
            int f = c;
            for (int col : r) {
                f = f < 0 ? -1 : h.tab[f][col];
                if (f >= 0) f = h.find(f);
            }
            if (f != c) closed[c] = 0;
        }
    }

    std::vector<int> newid(h.tab.size(), -1);
    int live = 0;
    for (int c = 0; c < static_cast<int>(h.tab.size()); ++c)
        if (h.live(c)) newid[c] = live++;
    T.rows.assign(live, std::vector<int>(h.width, -1));
    T.scanned.assign(live, 0);
    for (int c = 0; c < static_cast<int>(h.tab.size()); ++c) {
        if (!h.live(c)) continue;
        for (int col = 0; col < h.width; ++col) {
            int d = h.tab[c][col];
            T.rows[newid[c]][col] = d < 0 ? -1 : newid[h.find(d)];
        }
        T.scanned[newid[c]] = closed[c];
    }
    T.hit_bound = h.hit;
    T.complete = std::all_of(T.rows.begin(), T.rows.end(),
                             [](const auto& row) { return std::none_of(row.begin(), row.end(), [](int x) { return x < 0; }); });

    T.parent.assign(live, -1);
    T.parent_col.assign(live, -1);
    T.dist.assign(live, -1);
    std::queue<int> q;
    T.dist[0] = 0;
    q.push(0);
    while (!q.empty()) {
        int c = q.front();
        q.pop();
        for (int col = 0; col < h.width; ++col) {
            int d = T.rows[c][col];
            if (d < 0 || T.dist[d] >= 0) continue;
            T.dist[d] = T.dist[c] + 1;
            T.parent[d] = c;
            T.parent_col[d] = col;
            q.push(d);
        }
    }
    return T;
}

Cover build_subgroup_cover(const Complex2& base, const CoverSpec& spec, int radius) {
    return build_subgroup_cover(base, enumerate_cosets(base, spec.subgroup_words, spec.coset_bound), radius);
}

Cover build_subgroup_cover(const Complex2& base, const CosetTable& table, int radius) {
    std::vector<Sheet> sheets;
    for (int c = 0; c < table.size(); ++c)
        if (table.dist[c] >= 0 && table.dist[c] <= radius) sheets.push_back({c});
    Act act = [&table](const Sheet& s, int e, int sign) -> std::optional<Sheet> {
        int d = table.step(static_cast<int>(s[0]), e, sign);
        if (d < 0) return std::nullopt;
        return Sheet{d};
    };
    Cover C = build_over_sheets(base, sheets, act, [](const Sheet& s) { return "c" + std::to_string(s[0]); });
    C.rank = 0;
    C.radius = radius;
    C.table = table;
    C.space.base = C.vertex_at.at({base.base, Sheet{0}});
    // Cosets whose rows were never closed under all relators are frontier as well.
    for (int v = 0; v < C.space.num_vertices(); ++v)
        if (!table.scanned[C.vertex_sheet[v][0]]) C.space.frontier_vertex[v] = 1;
    C.space.finalize();
    bool interior = false;
    for (int v = 0; v < C.space.num_vertices(); ++v)
        if (!C.space.frontier_vertex[v]) interior = true;
    if (!interior)
        C.warnings.push_back("coset bound exhausted before any complete interior cell; cover is all frontier");
    return C;
}

Word parse_word(const Complex2& Y, const std::string& text) {
    Word w;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        int sign = 1;
        if (!tok.empty() && tok[0] == '-') {
            sign = -1;
            tok = tok.substr(1);
        } else if (!tok.empty() && tok[0] == '+') {
            tok = tok.substr(1);
        }
        if (tok.size() > 3 && tok.compare(tok.size() - 3, 3, "^-1") == 0) {
            sign = -sign;
            tok = tok.substr(0, tok.size() - 3);
        }
        auto it = Y.edge_index.find(tok);
        if (it == Y.edge_index.end())
            throw ComplexError(ComplexError::Kind::Dangling, 0, "unknown edge '" + tok + "' in word");
        w.push_back({it->second, sign});
    }
    return w;
}

}  // namespace dtrack
