// Ideal hyperbolic triangle charts, chord lengths and length minimization.
#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "dtrack/complex.hpp"
#include "dtrack/cover.hpp"
#include "dtrack/pattern.hpp"

namespace dtrack {

// Chart of a triangle: slot k is the ideal edge from P_k to P_{k+1} with P0 = inf, P1 = 0, P2 = 1.
// An edge coordinate s becomes the traversal parameter a = sign * (s - offset); a = 0 is the tangency
// point of the inscribed circle and a grows towards the slot's end vertex.
struct HypStructure {
    std::vector<std::array<double, 3>> offset;  // per triangle and slot
    std::vector<double> shear;                  // per edge, as given
};

// Shears default to the complex's own shear lines; the first incidence of an edge keeps offset 0 and
// every other incidence is offset by the shear. Throws ComplexError(Shear) for shears on free edges.
HypStructure assign_structure(const Complex2& Y, const std::vector<std::optional<double>>& shears = {});
// Every cover cell inherits the offsets of the cell below it.
HypStructure lift_structure(const Cover& C, const HypStructure& base);

double tangency_side_length();  // arcosh(3/2)

// Distance between the point at parameter a on slot kp and the point at parameter b on slot kq.
double chord_length_params(int kp, double a, int kq, double b);
// Partial derivatives of chord_length_params in a and b.
std::pair<double, double> chord_length_grad(int kp, double a, int kq, double b);

double slot_param(const Complex2& Y, const HypStructure& H, int tri, int slot, double coord);
double chord_length(const Complex2& Y, const HypStructure& H, const Pattern& t, const Chord& c);

struct Complexity {
    long weight = 0;
    double length = 0.0;

    friend bool operator<(const Complexity& x, const Complexity& y) {
        return x.weight != y.weight ? x.weight < y.weight : x.length < y.length;
    }
    friend bool operator==(const Complexity& x, const Complexity& y) {
        return x.weight == y.weight && x.length == y.length;
    }
    friend bool operator<=(const Complexity& x, const Complexity& y) { return x < y || x == y; }
    friend Complexity operator+(const Complexity& x, const Complexity& y) {
        return {x.weight + y.weight, x.length + y.length};
    }
};

// Throws std::invalid_argument if the pattern still has trivial circles.
Complexity pattern_complexity(const Complex2& Y, const HypStructure& H, const Pattern& t);
double pattern_length(const Complex2& Y, const HypStructure& H, const Pattern& t);
// dL/ds per point: the sum over incident chords of the cosine terms.
std::vector<double> length_gradient(const Complex2& Y, const HypStructure& H, const Pattern& t);

struct MinimizeOptions {
    double tol = 1e-10;
    int max_iter = 2000;
    double s_max = 40.0;  // coordinates are clamped to [-s_max, s_max]
};

struct MinimizeResult {
    Pattern pattern;
    Complexity complexity;
    bool converged = false;
    bool escaped = false;  // some point was pushed to the clamp: no minimizer in the interior
    int iterations = 0;
    double grad_norm = 0.0;                 // projected gradient, zero at an optimum
    std::vector<double> history;            // length after each sweep, starting with the input
    std::vector<std::pair<int, int>> coincident;  // adjacent points on an edge that met
};

// Cyclic coordinate descent; each point is moved to the exact minimizer of L along its edge,
// bracketed by its neighbours so the point order is preserved weakly.
MinimizeResult minimize_length(const Complex2& Y, const HypStructure& H, const Pattern& t,
                               const MinimizeOptions& opts = {});

// Klein-model position of the point at parameter a on slot k of the chart.
std::array<double, 2> klein_point(int slot, double a);
// 1 - |P|^2 for that point, computed without cancellation.
double klein_defect(double a);
// Distance from the boundary point (slot, a) to an interior Klein point x.
double klein_distance_from(int slot, double a, const std::array<double, 2>& x);
// Intersection of chords (kp,a)-(kq,b) and (kr,c)-(ks,d) as Klein segments; nullopt if parallel.
std::optional<std::array<double, 2>> klein_crossing(int kp, double a, int kq, double b, int kr, double c, int ks,
                                                    double d);

}  // namespace dtrack
