// Small complexes used by tests, examples and the CLI.
#pragma once

#include <vector>

#include "dtrack/complex.hpp"

namespace dtrack::fixtures {

// One vertex, loops a b c, triangles (a,b,c) and (-a,-b,-c).
Complex2 torus();
// Cocycles of the torus: phi kills b, psi kills a.
std::vector<long> torus_phi();
std::vector<long> torus_psi();

// One vertex with two free loops.
Complex2 wedge();

// Ring of m squares with `rows` vertex rows; the outer rows are frontier marked.
// With twist the last column is glued back upside down (a Mobius band).
Complex2 strip(int m, int rows, bool twist);

// Annulus with three vertex rings and n/2 squares per band; the core track has weight n.
Complex2 annulus(int n);

// Twisted strip with four vertex rows; its middle square row carries a one-sided core.
Complex2 mobius(int m);
// Orientation character of mobius(m): 1 on the edges crossing the twist.
std::vector<long> mobius_orientation_cocycle(const Complex2& M, int m);

// One-vertex octagon a b a^-1 b^-1 c d c^-1 d^-1 fan-triangulated from one corner.
Complex2 genus2();
// Cocycles dual to the loops: psi_a(a)=1, psi_b(b)=1, psi_c(c)=1, psi_d(d)=1 (others zero on a,b,c,d).
std::vector<long> genus2_dual(char loop);

// `bands` half-annuli sharing one core circle of m vertices, each with k rings beyond the core.
// Outer rings are frontier; labels are stable in k so truncations nest.
Complex2 multiband(int bands, int m, int k);

// One vertex, loops a b c d, one triangle (a,b,c): a presentation complex of a free group
// whose universal cover is tree-like; d stays a free edge.
Complex2 stallings();

// Two open strips with frontier ends, wedged at one boundary vertex (the returned id is "w").
Complex2 strip_wedge();

}  // namespace dtrack::fixtures
