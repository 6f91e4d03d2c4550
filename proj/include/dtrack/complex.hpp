// Finite (or truncated) 2-dimensional Delta-complexes with frontier marks.
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dtrack {

// One side of a triangle: an edge traversed forwards (+1) or backwards (-1).
struct Slot {
    int edge = -1;
    int sign = 1;
};

struct Edge {
    std::string id;
    int from = -1;
    int to = -1;
};

struct Triangle {
    std::string id;
    std::array<Slot, 3> slots;
};

struct Incidence {
    int tri = -1;
    int slot = -1;
};

class ComplexError : public std::runtime_error {
public:
    enum class Kind { Syntax, Dangling, NonSimplicial, Frontier, Duplicate, Cocycle, Shear };
    ComplexError(Kind kind, int line, const std::string& msg);
    Kind kind() const { return kind_; }
    int line() const { return line_; }

private:
    Kind kind_;
    int line_;
};

struct Complex2 {
    std::vector<std::string> vertices;
    std::vector<Edge> edges;
    std::vector<Triangle> triangles;
    std::vector<char> frontier_vertex;
    std::vector<char> frontier_edge;
    int base = 0;
    // Optional data carried by the file format.
    std::vector<long> cocycle;                  // empty when absent
    std::vector<std::optional<double>> shear;   // per edge

    // Derived by finalize().
    std::vector<std::vector<Incidence>> star;   // per edge, ordered by triangle index
    std::unordered_map<std::string, int> vertex_index, edge_index, tri_index;

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }
    int num_triangles() const { return static_cast<int>(triangles.size()); }
    int valence(int e) const { return static_cast<int>(star[e].size()); }
    bool has_frontier() const;

    int slot_start(const Slot& s) const { return s.sign > 0 ? edges[s.edge].from : edges[s.edge].to; }
    int slot_end(const Slot& s) const { return s.sign > 0 ? edges[s.edge].to : edges[s.edge].from; }
    // Slot of edge e inside triangle t, or -1.
    int slot_of(int t, int e) const;

    int add_vertex(const std::string& id, bool frontier = false);
    int add_edge(const std::string& id, int from, int to, bool frontier = false);
    int add_triangle(const std::string& id, Slot s0, Slot s1, Slot s2);

    // Builds lookup tables and checks every structural invariant; throws ComplexError.
    void finalize();
};

Complex2 parse_complex(std::string_view text);
std::string write_complex(const Complex2& Y);

// Parses "+a", "-a" or "a" into a slot.
Slot parse_slot(const Complex2& Y, std::string_view tok, int line);

// Link of a vertex as a 1-complex: nodes are edge ends at v, arcs are triangle corners at v.
struct VertexLink {
    struct End { int edge; int at_to; };  // at_to = 1 when the end is the edge's to-vertex
    struct Corner { int tri; int corner; int a; int b; };  // a, b index into ends
    std::vector<End> ends;
    std::vector<Corner> corners;
    std::vector<int> component;  // per end
    int num_components = 0;
};

VertexLink vertex_link(const Complex2& Y, int v);

// Breadth-first spanning forest from the base vertex; edges scanned in index order.
struct SpanningTree {
    std::vector<char> in_tree;     // per edge
    std::vector<int> parent_edge;  // per vertex, -1 at roots
    std::vector<int> depth;
    std::vector<int> order;        // vertices in BFS order
};

SpanningTree spanning_tree(const Complex2& Y);

// Vertex-incident edge lists (a loop appears twice).
std::vector<std::vector<int>> vertex_edges(const Complex2& Y);

struct SplittingVerdict {
    bool splitting = false;
    std::vector<int> witness_ends;  // link ends (edge, at_to) flattened as edge*2+at_to
};

SplittingVerdict is_splitting_vertex(const Complex2& Y, int v);

// Connected components of the frontier subcomplex; -1 for non-frontier vertices.
std::vector<int> frontier_regions(const Complex2& Y, int* count = nullptr);

}  // namespace dtrack
