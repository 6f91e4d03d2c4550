// Normal patterns from edge counts, and bounded search for shortest essential or one-sided patterns.
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dtrack/complex.hpp"
#include "dtrack/hypgeom.hpp"
#include "dtrack/pattern.hpp"

namespace dtrack {

// Per triangle, arcs cutting off each corner: corner k joins slot k to slot k+1.
struct NormalCoordinates {
    std::vector<int> edge_count;
    std::vector<std::array<int, 3>> corner;
};

// Corner counts forced by the edge counts; nullopt when some triangle has odd perimeter or a
// count larger than the other two together.
std::optional<NormalCoordinates> normal_coordinates(const Complex2& Y, const std::vector<int>& edge_count);

// Calls visit for every solution with total weight <= W in lexicographic order of edge counts; stop
// early by returning false. Frontier edges stay empty unless allow_frontier. Throws for W < 0.
void enumerate_normal(const Complex2& Y, int W, const std::function<bool(const NormalCoordinates&)>& visit,
                      bool allow_frontier = true);
std::vector<Pattern> enumerate_normal(const Complex2& Y, int W, bool allow_frontier = true);

// Chords nested inside each corner; coordinates evenly spaced; oriented when two-sided.
Pattern pattern_from_coordinates(const Complex2& Y, const NormalCoordinates& N);

enum class SearchMode { Essential, OneSided };

struct SearchOptions {
    SearchMode mode = SearchMode::Essential;
    int weight_bound = 6;
    bool reverse_ties = false;  // prefer the last candidate among equal lengths
    double tie_tol = 1e-9;
    MinimizeOptions minimize;
};

struct SearchResult {
    std::optional<Pattern> pattern;  // nullopt: nothing within the budget
    Complexity complexity;
    std::vector<int> edge_count;
    long candidates = 0;  // combinatorial types minimized
    bool converged = false;
    double grad_norm = 0.0;
    bool normal = false;
    bool connected = false;
    bool two_sided = false;
};

SearchResult shortest_pattern(const Complex2& Y, const HypStructure& H, const SearchOptions& opts);

std::string search_mode_name(SearchMode m);

}  // namespace dtrack
