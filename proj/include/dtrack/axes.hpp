// Axes in truncated covers: lifting, frontier sides, crossing, A#B and the splitting-condition checker.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dtrack/complex.hpp"
#include "dtrack/cover.hpp"
#include "dtrack/ends.hpp"
#include "dtrack/hypgeom.hpp"
#include "dtrack/pattern.hpp"

namespace dtrack {

// A track in a truncated cover. Its ends are its points on frontier edges; ends[0] is P, ends[1] is N.
struct AxisData {
    Pattern pattern;
    std::vector<int> ends;
    std::vector<int> end_regions;  // frontier region label of each end
    bool partial = false;          // cut by the truncation
    std::string label;

    bool axis_like() const { return ends.size() == 2; }
    void swap_ends();
};

// Orients the pattern when it is unoriented and two-sided. Ends are ordered by (edge, coordinate).
AxisData make_axis(const Complex2& Y, Pattern t, std::string label = {});

// Connected components of the preimage of a base pattern.
std::vector<AxisData> lift_to_cover(const Cover& C, const Complex2& base, const Pattern& t);

// Image under a deck shift with the end order carried along. Throws std::out_of_range when some
// cell leaves the truncation.
AxisData translate_axis(const Cover& C, const AxisData& A, const std::vector<long>& shift);

// Side of each complement cell of an oriented pattern: +1 where the normals point (R), -1 (L).
class Sides {
public:
    // Throws std::invalid_argument for unoriented input or a component that sees both sides.
    Sides(const Complex2& Y, const Pattern& t);
    int of_vertex(int v) const;
    // Side of the point at `coord` on edge e; 0 when it sits on a pattern point.
    int at(int e, double coord) const;
    int of_component(int k) const { return side_[k]; }
    const ComplementReport& report() const { return R_; }

private:
    const Complex2* Y_;
    Pattern t_;
    ComplementReport R_;
    std::vector<int> side_;
    std::vector<std::vector<int>> gap_comp_;  // per edge, per gap
    std::vector<int> vertex_comp_;
};

// A frontier vertex (edge = -1) or a point strictly inside a frontier edge.
struct FrontierProbe {
    int vertex = -1;
    int edge = -1;
    double coord = 0.0;
};

// Frontier vertices plus one probe in every gap that the given patterns leave on frontier edges.
std::vector<FrontierProbe> frontier_probes(const Complex2& Y, const std::vector<const Pattern*>& patterns);
int side_of_probe(const Sides& S, const FrontierProbe& f);

struct SideMap {
    std::vector<int> region_side;  // per frontier region: +1 R, -1 L, 0 split by an end
};

// With base_vertex >= 0 the labels are parities: the base side is L.
SideMap side_of_frontier(const Complex2& Y, const AxisData& A, int base_vertex = -1);

enum class CrossKind { DisjointEnds, Crosses, Unresolved };
enum class CrossType { None, OrientationPreserving, OrientationReversing, Mixed };

struct CrossVerdict {
    CrossKind kind = CrossKind::Unresolved;
    CrossType type = CrossType::None;
    bool b_crosses_a = false;
    bool a_crosses_b = false;
    std::array<int, 2> b_ends_under_a{};  // sides of P_B, N_B relative to A
    std::array<int, 2> a_ends_under_b{};
};

// Throws std::invalid_argument when either axis does not have exactly two ends.
CrossVerdict crosses_with_type(const Complex2& Y, const AxisData& A, const AxisData& B);

std::string cross_kind_name(CrossKind k);
std::string cross_type_name(CrossType t);

// Frontier probes of a crossing pair by quadrant. I1=[P_A,P_B], I2=[P_B,N_A], I3=[N_A,N_B], I4=[N_B,P_A];
// quadrant[k] is the pair (side under A, side under B) of I_k.
struct FourRegions {
    std::array<std::vector<FrontierProbe>, 4> interval;
    std::array<std::array<int, 2>, 4> quadrant{};
    int unplaced = 0;  // probes on neither side of some axis
};
FourRegions four_regions(const Complex2& Y, const AxisData& A, const AxisData& B);

// A#B bounding the quadrant (side_a, side_b): both axes are oriented into it, the crossings smoothed
// by the oriented rule, and the components facing the quadrant kept. Throws std::invalid_argument
// when the axes do not cross or the quadrant has no frontier vertex.
struct SharpSum {
    Pattern pattern;
    int crossings = 0;
    Complexity before;  // A and B together
    Complexity after;   // the kept components
};
SharpSum sharp_sum(const Complex2& Y, const HypStructure& H, const AxisData& A, const AxisData& B, int side_a,
                   int side_b);

struct Translate {
    std::string label;
    AxisData axis;
    std::optional<AxisData> square;  // the translate by g^2, when supplied
};

enum class Overlap { Disjoint, Coincide, Reversed, Crossing, Unresolved };

struct PairReport {
    std::string label;
    Overlap overlap = Overlap::Unresolved;
    // Probe counts of gE∩E, gE*∩E, gE∩E*, gE*∩E* (E = R side of A, gE = R side of gA).
    std::array<int, 4> frontier_touch{};
    std::array<int, 4> cells{};  // vertices and edge gaps in each set
    bool some_finite = false;
    bool some_empty = false;
    bool swaps_sides = false;
};

struct ConditionReport {
    bool a = false, b = false, c = false, d = false, e = false;
    int weight = 0;
    int infinite_sides = 0;
    std::vector<PairReport> pairs;
    std::vector<std::string> failures;  // "c: g" style notes
    std::string remedy;
};

// Throws std::invalid_argument for an empty family.
ConditionReport check_splitting_conditions(const Complex2& Y, const AxisData& A, const std::vector<Translate>& family);

struct TripleReport {
    bool found = false;
    std::string label;  // the chosen g
    int nearest_size = 0;  // probes in [P_A, P_gA]
    std::vector<std::string> intruders;  // crossing translates with an end strictly inside that interval
    bool good = false;  // g^2 A supplied and disjoint from A
    bool square_supplied = false;
};

// Among the crossing translates, the one whose interval [P_A, P_gA] is minimal under containment
// (ties: fewer probes, then label).
TripleReport canonical_triple(const Complex2& Y, const AxisData& A, const std::vector<Translate>& family);

// Same points and chords (coordinates compared within tol).
bool same_track(const Pattern& a, const Pattern& b, double tol = 1e-12);
// No shared edge point and no interleaving chords.
bool disjoint_tracks(const Complex2& Y, const Pattern& a, const Pattern& b, double tol = 1e-12);

}  // namespace dtrack
