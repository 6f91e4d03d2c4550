// Transversals, signed intersection numbers, crossings between patterns and cut-and-paste surgery.
#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "dtrack/complex.hpp"
#include "dtrack/hypgeom.hpp"
#include "dtrack/pattern.hpp"

namespace dtrack {

// A gap on an edge between consecutive pattern points; index -1 stands for the last gap.
struct Gap {
    int edge = -1;
    int index = 0;
};

struct Step {
    enum class Kind { Tri, Along, Vertex };
    Kind kind = Kind::Tri;
    int cell = -1;  // triangle for Tri, edge for Along, vertex for Vertex
    Gap in, out;
};

struct CurvePath {
    bool loop = true;
    std::vector<Step> steps;
    std::string label;
};

// Throws std::invalid_argument when the path is not well formed relative to the pattern.
void check_path(const Complex2& Y, const Pattern& t, const CurvePath& c);

// Signed count of pattern crossings; the pattern must be oriented.
long intersection_number(const Complex2& Y, const CurvePath& c, const Pattern& t);

// Dual-graph cycles, 1-skeleton cycles, and one line per pair of frontier regions.
struct Basis {
    std::vector<CurvePath> loops;
    std::vector<CurvePath> lines;
};
Basis equivalence_basis(const Complex2& Y);
std::vector<long> basis_numbers(const Complex2& Y, const Basis& B, const Pattern& t);
// Throws std::invalid_argument for one-sided or unoriented input.
bool equivalent(const Complex2& Y, const Pattern& t1, const Pattern& t2, const Basis& B);

// Path along the given chain of edges starting at start_vertex; loops close up with a vertex step.
CurvePath skeleton_path(const Complex2& Y, const std::vector<int>& edges, int start_vertex, bool loop);

CurvePath parse_curve(const Complex2& Y, std::string_view text);
std::string write_curve(const Complex2& Y, const CurvePath& c);

struct Crossing {
    int tri = -1;
    int a = -1;  // chord of the first pattern (or of the singular pattern)
    int b = -1;  // chord of the second pattern
    std::array<double, 2> at{};  // Klein position inside the triangle chart
};

struct Transversality {
    bool transverse = true;
    std::vector<Crossing> crossings;
    std::vector<std::string> issues;  // shared points, coincident chords
};

Transversality intersection_points(const Complex2& Y, const HypStructure& H, const Pattern& t1, const Pattern& t2);
// Crossings among the chords of one (singular) pattern.
Transversality self_crossings(const Complex2& Y, const HypStructure& H, const Pattern& t);

enum class CutPolicy { Oriented, Normal, Explicit };

struct CutResult {
    Pattern pattern;
    Complexity before;
    Complexity after;
    int crossings = 0;
    int dropped_circles = 0;
};

// Resolves every crossing of the union of t1 and t2. Explicit choices: 0 joins the p-ends of the two
// chords (and the q-ends), 1 joins p with q; one entry per crossing in intersection_points order.
// Throws std::invalid_argument when the inputs are not transverse.
CutResult cut_and_paste(const Complex2& Y, const HypStructure& H, const Pattern& t1, const Pattern& t2,
                        CutPolicy policy, const std::vector<int>& choices = {});
CutResult resolve_crossings(const Complex2& Y, const HypStructure& H, const Pattern& singular, CutPolicy policy,
                            const std::vector<int>& choices = {});

// One-sided variant: orient the chord graph off a spanning tree, give every other chord the orientation
// seen from its q-end, then resolve as in the oriented policy.
CutResult resolve_one_sided(const Complex2& Y, const HypStructure& H, const Pattern& singular);

struct PartialPiece {
    std::vector<int> chords;  // chords of the source pattern with a segment in this piece
    double length = 0.0;
    int ends = 0;  // crossing points bounding the piece
};

// Pieces of t1 cut along t2, and pieces of t2 cut along t1; lengths sum to L(t1) and L(t2).
std::pair<std::vector<PartialPiece>, std::vector<PartialPiece>> split_partial_patterns(const Complex2& Y,
                                                                                      const HypStructure& H,
                                                                                      const Pattern& t1,
                                                                                      const Pattern& t2);

}  // namespace dtrack
