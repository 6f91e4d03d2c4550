// dtrack: command-line front end. JSON report on stdout, diagnostics on stderr.
// Exit codes: 0 verdict computed, 2 inconclusive (budget or radius), 1 input error.
#include <openssl/evp.h>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "dtrack/axes.hpp"
#include "dtrack/complex.hpp"
#include "dtrack/cover.hpp"
#include "dtrack/ends.hpp"
#include "dtrack/hypgeom.hpp"
#include "dtrack/intersect.hpp"
#include "dtrack/normalize.hpp"
#include "dtrack/pattern.hpp"
#include "dtrack/render.hpp"
#include "dtrack/search.hpp"

using json = nlohmann::ordered_json;
using namespace dtrack;
namespace fs = std::filesystem;

namespace {

constexpr const char* kSchema = "dtrack.report/1";

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Inconclusive {};

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

struct Session {
    json inputs = json::array();

    std::string read(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw InputError("cannot read " + path);
        std::stringstream ss;
        ss << in.rdbuf();
        std::string text = ss.str();
        inputs.push_back({{"path", path}, {"sha256", sha256_hex(text)}});
        return text;
    }

    Complex2 complex(const std::string& path) {
        std::string text = read(path);
        try {
            return parse_complex(text);
        } catch (const ComplexError& e) {
            throw InputError(path + ": " + e.what());
        }
    }

    Pattern pattern(const Complex2& Y, const std::string& path) {
        std::string text = read(path);
        try {
            return parse_pattern(Y, text);
        } catch (const PatternError& e) {
            throw InputError(path + ": " + e.what());
        }
    }

    // Lines: label, pattern path, optional pattern path of the square. Paths are relative to the file.
    std::vector<Translate> family(const Complex2& Y, const std::string& path) {
        std::istringstream in(read(path));
        fs::path dir = fs::path(path).parent_path();
        std::vector<Translate> out;
        std::string line;
        int no = 0;
        while (std::getline(in, line)) {
            ++no;
            if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
            std::istringstream ls(line);
            std::string label, p, sq;
            if (!(ls >> label)) continue;
            if (!(ls >> p)) throw InputError(path + ": line " + std::to_string(no) + ": missing pattern path");
            Translate g;
            g.label = label;
            g.axis = make_axis(Y, pattern(Y, (dir / p).string()), label);
            if (ls >> sq) g.square = make_axis(Y, pattern(Y, (dir / sq).string()), label + "^2");
            out.push_back(std::move(g));
        }
        return out;
    }
};

json complexity_json(const Complexity& c) { return {{"weight", c.weight}, {"length", c.length}}; }

json pattern_json(const Complex2& Y, const Pattern& t) {
    return {{"weight", t.weight()},
            {"chords", t.chords.size()},
            {"circles", t.num_circles()},
            {"components", components(Y, t).count},
            {"normal", is_normal(Y, t).normal},
            {"two_sided", is_two_sided(Y, t)},
            {"text", write_pattern(Y, t)}};
}

Cover make_cover(const Complex2& base, int radius, int degree) {
    if (base.cocycle.empty()) throw InputError("the complex has no cocycle lines");
    auto spec = CoverSpec::from_cocycle(gauge_fix(base, base.cocycle));
    if (degree > 0) return build_cyclic_cover(base, spec, Finite{degree});
    return build_cyclic_cover(base, spec, Truncated{radius});
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

struct Flags {
    std::string complex_path;
    std::vector<std::string> patterns;
    std::string family_path, outer_path, out;
    int radius = -1, degree = 0, weight_bound = 6, max_iter = 2000;
    double tol = 1e-10;
    std::string mode = "essential";
    unsigned long seed = 0;
    bool replay = false;
};

json flags_json(const Flags& f) {
    return {{"radius", f.radius}, {"degree", f.degree},     {"weight_bound", f.weight_bound},
            {"mode", f.mode},     {"tol", f.tol},           {"max_iter", f.max_iter},
            {"seed", f.seed},     {"out", f.out},           {"replay", f.replay}};
}

MinimizeOptions minimize_opts(const Flags& f) {
    MinimizeOptions o;
    o.tol = f.tol;
    o.max_iter = f.max_iter;
    return o;
}

json run_validate(Session& S, const Flags& f) {
    auto Y = S.complex(f.complex_path);
    int regions = 0;
    frontier_regions(Y, &regions);
    json r = {{"vertices", Y.num_vertices()},
              {"edges", Y.num_edges()},
              {"triangles", Y.num_triangles()},
              {"frontier_regions", regions},
              {"cocycle", !Y.cocycle.empty()}};
    json split = json::array();
    for (int v = 0; v < Y.num_vertices(); ++v)
        if (is_splitting_vertex(Y, v).splitting) split.push_back(Y.vertices[v]);
    r["splitting_vertices"] = split;
    json pats = json::array();
    for (const auto& p : f.patterns) {
        auto t = S.pattern(Y, p);
        validate(Y, t);
        pats.push_back(pattern_json(Y, t));
    }
    r["patterns"] = pats;
    return r;
}

json run_cover(Session& S, const Flags& f) {
    auto base = S.complex(f.complex_path);
    if (f.radius < 0 && f.degree <= 0) throw InputError("cover needs --radius or --degree");
    auto C = make_cover(base, f.radius, f.degree);
    int regions = 0;
    frontier_regions(C.space, &regions);
    if (!f.out.empty()) write_file(f.out, write_complex(C.space));
    return {{"vertices", C.space.num_vertices()},
            {"edges", C.space.num_edges()},
            {"triangles", C.space.num_triangles()},
            {"frontier_regions", regions},
            {"warnings", C.warnings}};
}

json run_normalize(Session& S, const Flags& f) {
    auto Y = S.complex(f.complex_path);
    if (f.patterns.size() != 1) throw InputError("normalize takes one pattern");
    auto t = S.pattern(Y, f.patterns[0]);
    validate(Y, t);
    auto N = normalize(Y, t);
    json moves = json::array();
    for (const auto& m : N.log.moves) {
        json j = {{"kind", move_kind_name(m.kind)}, {"triangle", Y.triangles[m.tri].id}};
        if (m.edge >= 0) j["edge"] = Y.edges[m.edge].id;
        moves.push_back(j);
    }
    if (!f.out.empty()) write_file(f.out, write_pattern(Y, N.pattern));
    return {{"moves", moves},
            {"measure", N.log.measure},
            {"equivalence_asserted", N.equivalence_asserted},
            {"pattern", pattern_json(Y, N.pattern)}};
}

json search_json(const Complex2& X, const SearchResult& R) {
    json j = {{"found", R.pattern.has_value()}, {"candidates", R.candidates}};
    if (!R.pattern) return j;
    j["complexity"] = complexity_json(R.complexity);
    j["normal"] = R.normal;
    j["connected"] = R.connected;
    j["two_sided"] = R.two_sided;
    j["converged"] = R.converged;
    j["grad_norm"] = R.grad_norm;
    j["pattern"] = pattern_json(X, *R.pattern);
    return j;
}

json run_shortest(Session& S, const Flags& f, int& code) {
    auto Y = S.complex(f.complex_path);
    SearchOptions o;
    if (f.mode == "essential") o.mode = SearchMode::Essential;
    else if (f.mode == "one_sided") o.mode = SearchMode::OneSided;
    else throw InputError("unknown mode " + f.mode);
    o.weight_bound = f.weight_bound;
    o.minimize = minimize_opts(f);
    auto base_H = assign_structure(Y);
    if (f.radius < 0 && f.degree <= 0) {
        auto R = shortest_pattern(Y, base_H, o);
        if (!R.pattern) code = 2;
        if (R.pattern && !f.out.empty()) write_file(f.out, write_pattern(Y, *R.pattern));
        return search_json(Y, R);
    }
    if (f.degree > 0) {
        auto C = make_cover(Y, -1, f.degree);
        auto R = shortest_pattern(C.space, lift_structure(C, base_H), o);
        if (!R.pattern) code = 2;
        return {{"degree", f.degree}, {"search", search_json(C.space, R)}};
    }
    json runs = json::array();
    std::vector<SearchResult> res;
    for (int k : {f.radius, f.radius + 1}) {
        auto C = make_cover(Y, k, 0);
        res.push_back(shortest_pattern(C.space, lift_structure(C, base_H), o));
        json j = search_json(C.space, res.back());
        j["radius"] = k;
        runs.push_back(j);
        if (k == f.radius && res.back().pattern && !f.out.empty())
            write_file(f.out, write_pattern(C.space, *res.back().pattern));
    }
    bool stable = res[0].pattern && res[1].pattern && res[0].complexity.weight == res[1].complexity.weight &&
                  std::abs(res[0].complexity.length - res[1].complexity.length) <=
                      1e-6 * std::max(1.0, res[0].complexity.length);
    if (!stable) code = 2;
    return {{"runs", runs}, {"stable", stable}};
}

json complement_json(const ComplementReport& R) {
    json comps = json::array();
    for (const auto& K : R.components)
        comps.push_back({{"vertices", K.vertices.size()},
                         {"infinite", K.infinite},
                         {"frontier_regions", K.frontier_regions},
                         {"inward", K.inward},
                         {"outward", K.outward}});
    return {{"components", comps}, {"infinite", R.infinite_count()}};
}

json run_ends(Session& S, const Flags& f, int& code) {
    auto Y = S.complex(f.complex_path);
    json r;
    auto estimate = [&](const Complex2& inner, const Complex2& outer) {
        auto E = end_count_estimate(inner, outer);
        if (!E.stable) code = 2;
        return json{{"lower_bound", E.lower_bound},
                    {"stable", E.stable},
                    {"inner_regions", E.inner_regions},
                    {"outer_regions", E.outer_regions}};
    };
    if (f.radius >= 0) {
        auto inner = make_cover(Y, f.radius, 0), outer = make_cover(Y, f.radius + 1, 0);
        r["end_count"] = estimate(inner.space, outer.space);
        r["end_count"]["radius"] = {f.radius, f.radius + 1};
    } else if (!f.outer_path.empty()) {
        auto outer = S.complex(f.outer_path);
        r["end_count"] = estimate(Y, outer);
    }
    for (const auto& p : f.patterns) {
        auto t = S.pattern(Y, p);
        validate(Y, t);
        json j = complement_json(complement_components(Y, t));
        j["splits"] = splits(Y, t);
        if (is_two_sided(Y, t)) {
            if (!point_normals(Y, t)) orient(Y, t);
            auto E = is_essential(Y, t, equivalence_basis(Y));
            j["essential"] = E.essential;
            j["witness_number"] = E.witness_number;
        }
        r["patterns"].push_back(j);
    }
    if (r.is_null()) throw InputError("ends needs --radius, --outer or a pattern");
    return r;
}

json verdict_json(const CrossVerdict& V) {
    return {{"kind", cross_kind_name(V.kind)},
            {"type", cross_type_name(V.type)},
            {"b_crosses_a", V.b_crosses_a},
            {"a_crosses_b", V.a_crosses_b},
            {"b_ends_under_a", V.b_ends_under_a},
            {"a_ends_under_b", V.a_ends_under_b}};
}

AxisData load_axis(Session& S, const Complex2& Y, const std::string& path) {
    auto A = make_axis(Y, S.pattern(Y, path), path);
    validate(Y, A.pattern);
    return A;
}

json run_cross(Session& S, const Flags& f, int& code) {
    auto Y = S.complex(f.complex_path);
    if (f.patterns.size() != 2) throw InputError("cross takes two patterns");
    auto A = load_axis(S, Y, f.patterns[0]), B = load_axis(S, Y, f.patterns[1]);
    if (!A.axis_like() || !B.axis_like()) throw InputError("both patterns need exactly two ends");
    auto V = crosses_with_type(Y, A, B);
    if (V.kind == CrossKind::Unresolved) code = 2;
    json r = {{"verdict", verdict_json(V)}};
    auto T = intersection_points(Y, assign_structure(Y), A.pattern, B.pattern);
    r["transverse"] = T.transverse;
    r["intersection_points"] = T.crossings.size();
    if (V.a_crosses_b && V.b_crosses_a) {
        auto F = four_regions(Y, A, B);
        json iv = json::array();
        for (int k = 0; k < 4; ++k)
            iv.push_back({{"name", "I" + std::to_string(k + 1)}, {"quadrant", F.quadrant[k]}, {"probes", F.interval[k].size()}});
        r["four_regions"] = iv;
    }
    return r;
}

json run_triple(Session& S, const Flags& f) {
    auto Y = S.complex(f.complex_path);
    if (f.patterns.size() != 1 || f.family_path.empty()) throw InputError("triple takes one pattern and --family");
    auto A = load_axis(S, Y, f.patterns[0]);
    auto fam = S.family(Y, f.family_path);
    auto T = canonical_triple(Y, A, fam);
    return {{"found", T.found},         {"label", T.label},
            {"nearest_size", T.nearest_size}, {"intruders", T.intruders},
            {"square_supplied", T.square_supplied}, {"good", T.good}};
}

std::string overlap_name(Overlap o) {
    switch (o) {
        case Overlap::Disjoint: return "disjoint";
        case Overlap::Coincide: return "coincide";
        case Overlap::Reversed: return "reversed";
        case Overlap::Crossing: return "crossing";
        default: return "unresolved";
    }
}

json run_check51(Session& S, const Flags& f) {
    auto Y = S.complex(f.complex_path);
    if (f.patterns.size() != 1 || f.family_path.empty()) throw InputError("check51 takes one pattern and --family");
    auto A = load_axis(S, Y, f.patterns[0]);
    auto fam = S.family(Y, f.family_path);
    auto R = check_splitting_conditions(Y, A, fam);
    json pairs = json::array();
    for (const auto& P : R.pairs)
        pairs.push_back({{"label", P.label},
                         {"overlap", overlap_name(P.overlap)},
                         {"frontier_touch", P.frontier_touch},
                         {"cells", P.cells},
                         {"some_finite", P.some_finite},
                         {"some_empty", P.some_empty},
                         {"swaps_sides", P.swaps_sides}});
    return {{"conditions", {{"a", R.a}, {"b", R.b}, {"c", R.c}, {"d", R.d}, {"e", R.e}}},
            {"weight", R.weight},
            {"infinite_sides", R.infinite_sides},
            {"pairs", pairs},
            {"failures", R.failures},
            {"remedy", R.remedy}};
}

json run_render(Session& S, const Flags& f) {
    auto Y = S.complex(f.complex_path);
    auto H = assign_structure(Y);
    std::vector<Pattern> pats;
    for (const auto& p : f.patterns) {
        pats.push_back(S.pattern(Y, p));
        validate(Y, pats.back());
    }
    if (f.replay) {
        if (pats.size() != 1) throw InputError("--replay takes one pattern");
        if (f.out.empty()) throw InputError("--replay needs --out");
        auto N = normalize(Y, pats[0], true);
        fs::path stem = fs::path(f.out).replace_extension();
        json files = json::array();
        for (std::size_t i = 0; i < N.states.size(); ++i) {
            std::string path = stem.string() + "-" + std::to_string(i) + ".svg";
            write_file(path, render_svg(Y, H, {N.states[i]}).svg);
            files.push_back(path);
        }
        return {{"steps", N.states.size()}, {"files", files}};
    }
    auto R = render_svg(Y, H, pats);
    if (!f.out.empty()) write_file(f.out, R.svg);
    return {{"pieces", R.pieces}, {"chords", R.chords}, {"crossings", R.crossings}, {"svg_bytes", R.svg.size()}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tracks, patterns and ends on 2-complexes"};
    app.require_subcommand(1);
    Flags f;
    app.add_option("--seed", f.seed, "Seed for randomized drivers");
    auto add_common = [&](CLI::App* c) { c->add_option("complex", f.complex_path, "Complex file")->required(); };

    auto* validate_cmd = app.add_subcommand("validate", "Check a complex and optional patterns");
    add_common(validate_cmd);
    validate_cmd->add_option("patterns", f.patterns);

    auto* cover_cmd = app.add_subcommand("cover", "Build the cyclic cover of the complex's cocycle");
    add_common(cover_cmd);
    cover_cmd->add_option("--radius", f.radius);
    cover_cmd->add_option("--degree", f.degree);
    cover_cmd->add_option("--out", f.out, "Write the cover complex");

    auto* normalize_cmd = app.add_subcommand("normalize", "Reduce a pattern to normal form");
    add_common(normalize_cmd);
    normalize_cmd->add_option("pattern", f.patterns)->required();
    normalize_cmd->add_option("--out", f.out, "Write the normal pattern");

    auto* shortest_cmd = app.add_subcommand("shortest", "Least-complexity essential or one-sided pattern");
    add_common(shortest_cmd);
    shortest_cmd->add_option("--mode", f.mode)->check(CLI::IsMember({"essential", "one_sided"}));
    shortest_cmd->add_option("--weight-bound", f.weight_bound);
    shortest_cmd->add_option("--radius", f.radius);
    shortest_cmd->add_option("--degree", f.degree);
    shortest_cmd->add_option("--tol", f.tol);
    shortest_cmd->add_option("--max-iter", f.max_iter);
    shortest_cmd->add_option("--out", f.out, "Write the pattern found");

    auto* ends_cmd = app.add_subcommand("ends", "End counts and complement components");
    add_common(ends_cmd);
    ends_cmd->add_option("patterns", f.patterns);
    ends_cmd->add_option("--radius", f.radius);
    ends_cmd->add_option("--outer", f.outer_path, "A larger truncation with the same vertex ids");

    auto* cross_cmd = app.add_subcommand("cross", "Crossing verdict of two axes");
    add_common(cross_cmd);
    cross_cmd->add_option("patterns", f.patterns)->expected(2)->required();

    auto* triple_cmd = app.add_subcommand("triple", "Nearest crossing translate and its square");
    add_common(triple_cmd);
    triple_cmd->add_option("pattern", f.patterns)->required();
    triple_cmd->add_option("--family", f.family_path)->required();

    auto* check_cmd = app.add_subcommand("check51", "Splitting conditions (a)-(e) over a translate family");
    add_common(check_cmd);
    check_cmd->add_option("pattern", f.patterns)->required();
    check_cmd->add_option("--family", f.family_path)->required();

    auto* render_cmd = app.add_subcommand("render", "SVG drawing of patterns");
    add_common(render_cmd);
    render_cmd->add_option("patterns", f.patterns);
    render_cmd->add_option("--out", f.out, "SVG file");
    render_cmd->add_flag("--replay", f.replay, "One SVG per normalization step");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    CLI::App* cmd = app.get_subcommands().front();
    Session S;
    int code = 0;
    json result;
    try {
        std::string name = cmd->get_name();
        if (name == "validate") result = run_validate(S, f);
        else if (name == "cover") result = run_cover(S, f);
        else if (name == "normalize") result = run_normalize(S, f);
        else if (name == "shortest") result = run_shortest(S, f, code);
        else if (name == "ends") result = run_ends(S, f, code);
        else if (name == "cross") result = run_cross(S, f, code);
        else if (name == "triple") result = run_triple(S, f);
        else if (name == "check51") result = run_check51(S, f);
        else result = run_render(S, f);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const ComplexError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const PatternError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    json report = {{"schema", kSchema},
                   {"command", cmd->get_name()},
                   {"inputs", S.inputs},
                   {"flags", flags_json(f)},
                   {"result", result},
                   {"exit", code}};
    std::cout << report.dump(2) << '\n';
    return code;
}
