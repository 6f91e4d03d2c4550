// SVG drawing of patterns on a planar unfolding of the complex.
#pragma once

#include <string>
#include <vector>

#include "dtrack/complex.hpp"
#include "dtrack/hypgeom.hpp"
#include "dtrack/pattern.hpp"

namespace dtrack {

struct RenderOptions {
    double scale = 120.0;  // pixels per unit side
    bool edge_labels = true;
};

struct RenderResult {
    std::string svg;
    int pieces = 0;  // connected pieces of the unfolding
    int chords = 0;
    int crossings = 0;
};

// Triangles are unfolded breadth first across the dual graph (edge index order); an edge crossed by no
// tree step is drawn, and labelled, once per incident triangle. Chords are straight Klein segments,
// orientations are ticks toward the side the normal points to, crossings are red rings.
RenderResult render_svg(const Complex2& Y, const HypStructure& H, const std::vector<Pattern>& patterns,
                        const RenderOptions& opts = {});

}  // namespace dtrack
