// Cyclic covers from cocycles and truncated covers of subgroups via coset enumeration.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dtrack/complex.hpp"

namespace dtrack {

// A letter of the edge-generator alphabet: edge index and exponent +1/-1.
using Letter = std::pair<int, int>;
using Word = std::vector<Letter>;

struct CoverSpec {
    // Cocycle mode: per edge, a vector of rank r integers. Empty selects subgroup mode.
    std::vector<std::vector<long>> cocycle;
    // Subgroup mode: generator words for H over the non-tree edges.
    std::vector<Word> subgroup_words;
    int coset_bound = 0;

    bool subgroup_mode() const { return cocycle.empty(); }
    int rank() const { return cocycle.empty() ? 0 : static_cast<int>(cocycle.front().size()); }

    static CoverSpec from_cocycle(const std::vector<long>& phi);
    static CoverSpec from_cocycles(const std::vector<std::vector<long>>& phis);  // one row per cocycle
    static CoverSpec from_subgroup(std::vector<Word> words, int coset_bound);
};

struct Finite {
    int n = 1;
};
struct Truncated {
    int radius = 0;
};
using CoverMode = std::variant<Finite, Truncated>;

// Partial coset table of H in the edge-generator presentation of pi_1.
struct CosetTable {
    int num_gens = 0;
    std::vector<int> gen_edge;           // generator -> edge
    std::vector<int> edge_gen;           // edge -> generator or -1 for tree edges
    std::vector<std::vector<int>> rows;  // coset x (2*num_gens): column 2g is g, 2g+1 is g^-1
    std::vector<char> scanned;           // every relator closed from this coset
    std::vector<int> parent, parent_col; // Schreier BFS tree
    std::vector<int> dist;
    bool complete = false;               // no undefined entries
    bool hit_bound = false;

    int size() const { return static_cast<int>(rows.size()); }
    // Image of coset c under a word, or -1 when the trace leaves the table.
    int trace(int c, const Word& w) const;
    int step(int c, int edge, int sign) const;  // tree edges act trivially
    Word representative(int c) const;
};

// Plain HLT enumeration: cosets processed in definition order, coincidences merged.
CosetTable enumerate_cosets(const Complex2& Y, const std::vector<Word>& subgroup_words, int coset_bound);

// Relator of a triangle: its boundary word with tree edges deleted.
Word triangle_word(const Complex2& Y, const SpanningTree& T, int tri);

struct Deck {
    std::vector<int> vertex, edge, tri;
};

struct Cover {
    Complex2 space;
    std::vector<int> vertex_proj, edge_proj, tri_proj;
    // Sheet index of every cell (cocycle mode: level vector, reduced mod n for finite covers;
    // subgroup mode: one entry, the coset).
    std::vector<std::vector<long>> vertex_sheet, edge_sheet, tri_sheet;
    std::map<std::pair<int, std::vector<long>>, int> vertex_at, edge_at, tri_at;
    std::optional<Deck> tau;  // finite cyclic covers only
    std::optional<CosetTable> table;
    int rank = 0;
    int degree = 0;   // finite covers
    int radius = -1;  // truncated covers
    std::vector<std::string> warnings;

    // Translate a cell by a sheet shift (cocycle covers); nullopt when it leaves the truncation.
    std::optional<int> shift_vertex(int v, const std::vector<long>& by) const;
    std::optional<int> shift_edge(int e, const std::vector<long>& by) const;
    std::optional<int> shift_tri(int t, const std::vector<long>& by) const;
};

// Throws ComplexError(Kind::Cocycle) when the cocycle is not zero on the spanning tree or not closed.
Cover build_cyclic_cover(const Complex2& base, const CoverSpec& spec, const CoverMode& mode);

// Subgroup mode: cells indexed by enumerated cosets within a Schreier-graph ball.
Cover build_subgroup_cover(const Complex2& base, const CoverSpec& spec, int radius);
Cover build_subgroup_cover(const Complex2& base, const CosetTable& table, int radius);

// Cocycle helpers.
bool is_cocycle(const Complex2& Y, const std::vector<long>& phi);
std::vector<long> gauge_fix(const Complex2& Y, const std::vector<long>& phi);
std::vector<long> pullback(const Cover& C, const std::vector<long>& phi);
// Per-triangle corner potentials: value of phi along the boundary from corner 0 to corner k.
std::array<long, 3> corner_potentials(const Complex2& Y, const std::vector<long>& phi, int tri);

Word parse_word(const Complex2& Y, const std::string& text);
std::string format_sheet(const std::vector<long>& sheet);

}  // namespace dtrack
