// Patterns: points on edges, chords in triangles, trivial circles and transverse orientations.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dtrack/complex.hpp"
#include "dtrack/cover.hpp"

namespace dtrack {

struct EdgePoint {
    std::string id;
    int edge = -1;
    double coord = 0.0;  // signed arclength along the edge direction
};

// side = +1: the normal points into the forward boundary arc from p to q; 0 = unoriented.
struct Chord {
    int tri = -1;
    int p = -1;
    int q = -1;
    int side = 0;
};

class PatternError : public std::runtime_error {
public:
    PatternError(int line, const std::string& msg)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

struct Pattern {
    std::vector<EdgePoint> points;
    std::vector<std::vector<int>> on_edge;  // per edge, point indices in increasing order
    std::vector<Chord> chords;
    std::vector<int> circles;  // trivial circles per triangle
    std::vector<int> free_nu;  // per point, normal along the edge for points without chords
    bool allow_crossings = false;

    static Pattern empty(const Complex2& Y);

    int weight() const { return static_cast<int>(points.size()); }
    int num_circles() const;
    // Inserts a point at position `rank` of its edge; returns its index.
    int add_point(int edge, int rank, double coord, std::string id = {});
    int add_chord(int tri, int p, int q, int side = 0);
    std::vector<int> ranks() const;
    // Drops the given points and every chord touching them; indices are compacted.
    void remove_points(const std::vector<int>& drop);
    void remove_chords(const std::vector<int>& drop);
};

// Boundary of one triangle as a cyclic sequence: for each slot, gap 0, point, gap 1, ..., gap n.
struct BoundaryOrder {
    std::array<int, 3> count{};
    std::array<int, 3> base{};
    std::array<int, 3> sign{};
    int total = 0;
    // Positions use the edge's own rank / gap index, converted to traversal order.
    int point_pos(int slot, int edge_rank) const;
    int gap_pos(int slot, int edge_gap) const;
    // Slot and edge-relative index of a position; is_point tells which.
    void locate(int pos, int& slot, int& index, bool& is_point) const;
};

BoundaryOrder boundary_order(const Complex2& Y, const Pattern& t, int tri);
// Strictly inside the forward cyclic arc from a to b.
bool in_arc(int x, int a, int b, int total);
bool interleave(int a, int b, int c, int d, int total);

// Traversal sign of a point's edge inside a triangle.
int point_sigma(const Complex2& Y, const Pattern& t, int tri, int p);
// Along-edge normals at the chord ends implied by the side bit.
int chord_nu_p(const Complex2& Y, const Pattern& t, const Chord& c);
int chord_nu_q(const Complex2& Y, const Pattern& t, const Chord& c);
int side_from_nu_p(const Complex2& Y, const Pattern& t, const Chord& c, int nu_p);

// Throws PatternError when the 1-manifold condition, coordinate order or embeddedness fails.
void validate(const Complex2& Y, const Pattern& t);
bool is_embedded(const Complex2& Y, const Pattern& t);

struct NormalReport {
    bool normal = true;
    std::vector<int> circle_triangles;
    std::vector<int> returning_chords;
};
NormalReport is_normal(const Complex2& Y, const Pattern& t);

// Component labels: chords and points share one numbering, circles come last as singletons.
struct Components {
    int count = 0;
    std::vector<int> of_point;
    std::vector<int> of_chord;
    std::vector<std::pair<int, int>> circle_of;  // (triangle, component) per circle, in triangle order
};
Components components(const Complex2& Y, const Pattern& t);
std::vector<Pattern> component_split(const Complex2& Y, const Pattern& t);
// Sub-pattern on the points selected by keep (chords kept when both ends are kept).
Pattern subpattern(const Complex2& Y, const Pattern& t, const std::vector<char>& keep_point);
// Disjoint union; points of b on shared edges are placed after those of a unless coordinates interleave.
Pattern disjoint_union(const Complex2& Y, const Pattern& a, const Pattern& b);

struct Sidedness {
    bool two_sided = true;
    std::vector<int> nu;             // per point of the pattern (0 outside the component)
    std::vector<int> witness_cycle;  // chord indices along which the normal reverses
};
Sidedness sidedness(const Complex2& Y, const Pattern& t, int component, int start_point = -1);

// Per-point normals when every chord is oriented and coherent.
std::optional<std::vector<int>> point_normals(const Complex2& Y, const Pattern& t);
void apply_normals(const Complex2& Y, Pattern& t, const std::vector<int>& nu);
bool is_two_sided(const Complex2& Y, const Pattern& t);
// Orients every two-sided component (first point's normal +1); returns false if some component is one-sided.
bool orient(const Complex2& Y, Pattern& t);
void reverse_orientation(Pattern& t);

// One point per edge with endpoints in different parts; normals point from E to its complement.
Pattern coboundary_pattern(const Complex2& Y, const std::vector<char>& in_E);

// Preimage of a base pattern in a cover; coordinates and orientations are copied.
Pattern lift_pattern(const Cover& C, const Complex2& base, const Pattern& t);

// Index of the subgroup of H carried by a track (gcd of cycle values of psi); nullopt = unknown.
// psi is a cocycle on the cover space measuring H.
std::optional<long> carried_index(const Complex2& X, const Pattern& track, const std::vector<long>& psi);
// Subgroup mode: psi is solved for on the truncation; unknown unless the cocycle space is one-dimensional.
std::optional<long> carried_index_subgroup(const Cover& C, const Complex2& base, const Pattern& track,
                                           const Word& h);
std::optional<std::vector<long>> solve_subgroup_cocycle(const Cover& C, const Complex2& base, const Word& h);

Pattern parse_pattern(const Complex2& Y, std::string_view text);
std::string write_pattern(const Complex2& Y, const Pattern& t);

}  // namespace dtrack
