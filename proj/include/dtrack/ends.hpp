// Complement of a pattern, splitting and essentiality, elementary sub-patterns and end counts.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dtrack/complex.hpp"
#include "dtrack/intersect.hpp"
#include "dtrack/pattern.hpp"

namespace dtrack {

// Cells of the complement: vertices, gaps between consecutive points on an edge, pieces of triangles
// cut by chords, and the disks inside trivial circles.
struct ComplementComponent {
    std::vector<int> vertices;
    std::vector<std::pair<int, int>> gaps;     // (edge, gap index)
    std::vector<std::pair<int, int>> regions;  // (triangle, region index)
    int disks = 0;
    bool infinite = false;               // touches the frontier
    std::vector<int> frontier_regions;   // labels from frontier_regions(Y)
    std::vector<int> boundary_points;    // points with a gap of this component beside them
    std::vector<int> boundary_chords;
    int inward = 0, outward = 0, both_sides = 0;  // boundary points by normal direction
};

struct ComplementReport {
    std::vector<ComplementComponent> components;
    std::vector<int> of_point_side[2];  // component on the low (0) and high (1) gap of every point
    int infinite_count() const;
};

ComplementReport complement_components(const Complex2& Y, const Pattern& t);
bool splits(const Complex2& Y, const Pattern& t);

struct Essentiality {
    bool essential = false;
    int witness_line = -1;  // index into basis.lines
    long witness_number = 0;
    int nonzero_loop = -1;  // a loop with nonzero number, if any
};
// Throws std::invalid_argument for one-sided or unoriented input.
Essentiality is_essential(const Complex2& Y, const Pattern& t, const Basis& B);

// Frontier of the infinite component holding the smallest frontier cell, after absorbing the finite
// components hanging off it; every orientation points into that side. Throws if t does not split.
Pattern extract_elementary(const Complex2& Y, const Pattern& t);

struct EndCount {
    int lower_bound = 0;
    bool stable = false;
    int inner_regions = 0;  // frontier regions of the inner truncation
    int outer_regions = 0;  // frontier regions of the outer truncation
};
// Collar between two nested truncations (cells matched by vertex id): inner frontier classes joined
// inside the collar and reaching the outer frontier. Stable when the outer truncation has exactly that
// many frontier regions. Throws std::invalid_argument when the inner truncation is all frontier.
EndCount end_count_estimate(const Complex2& inner, const Complex2& outer);

}  // namespace dtrack
