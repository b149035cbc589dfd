#pragma once

#include "tessella/pathalg.hpp"

#include <string>
#include <vector>

namespace tessella {

// Oriented map on half-edges 0..N-1.  `rotation` sends a half-edge to the
// next one counter-clockwise around its vertex; faces are the cycles of
// rotation∘involution.  Vertices are numbered by the order of `vertex_cycles`.
class CombinatorialMap {
public:
    CombinatorialMap() = default;
    CombinatorialMap(std::vector<int> involution, const std::vector<std::vector<int>>& vertex_cycles);

    int half_edge_count() const { return static_cast<int>(involution_.size()); }
    int edge_count() const { return half_edge_count() / 2; }
    int vertex_count() const { return static_cast<int>(vertex_cycles_.size()); }
    int face_count() const { return static_cast<int>(face_cycles_.size()); }

    int involution(int h) const { return involution_[h]; }
    int rotation(int h) const { return rotation_[h]; }
    int rotation_inverse(int h) const { return rotation_inv_[h]; }
    int face_next(int h) const { return rotation_[involution_[h]]; }
    int vertex_of(int h) const { return vertex_of_[h]; }
    int face_of(int h) const { return face_of_[h]; }

    const std::vector<int>& involution_perm() const { return involution_; }
    const std::vector<int>& rotation_perm() const { return rotation_; }
    const std::vector<std::vector<int>>& vertex_cycles() const { return vertex_cycles_; }
    // Faces are numbered by their smallest half-edge.
    const std::vector<std::vector<int>>& face_cycles() const { return face_cycles_; }

    // Edge ids follow the smaller half-edge of each pair.
    int edge_of(int h) const { return edge_of_[h]; }
    std::pair<int, int> edge_half_edges(int e) const { return edge_halves_[e]; }

    std::vector<std::string> structural_problems() const;
    bool connected() const;

private:
    std::vector<int> involution_;
    std::vector<int> rotation_;
    std::vector<int> rotation_inv_;
    std::vector<std::vector<int>> vertex_cycles_;
    std::vector<std::vector<int>> face_cycles_;
    std::vector<int> vertex_of_;
    std::vector<int> face_of_;
    std::vector<int> edge_of_;
    std::vector<std::pair<int, int>> edge_halves_;
    std::vector<std::string> problems_;
};

int genus(const CombinatorialMap& map);

enum class Color { Black, White };

struct BraneTiling {
    CombinatorialMap map;
    std::vector<Color> coloring;        // per vertex
    std::vector<std::string> edge_names; // per edge; empty string means unnamed

    Color color_of_half_edge(int h) const { return coloring[map.vertex_of(h)]; }
    std::string edge_name(int e) const;
};

struct ValidationReport {
    bool valid = false;
    std::vector<std::string> violations;
    int genus = -1;
    int vertices = 0;
    int edges = 0;
    int faces = 0;
};

ValidationReport validate_tiling(const BraneTiling& tiling);

struct DualQuiver {
    Quiver quiver;
    Potential potential;
    std::vector<int> arrow_of_edge; // tiling edge -> arrow id
    std::vector<int> edge_of_arrow; // arrow id -> tiling edge
};

// Faces become vertices "1", "2", ...; the arrow dual to an edge runs from
// the face at its black half-edge to the face at its white half-edge.
DualQuiver dual_quiver(const BraneTiling& tiling);

// The cycle c_v as a written word in the dual quiver.
Word minimal_cycle(const BraneTiling& tiling, const DualQuiver& dual, int vertex);

// True iff every vertex is the endpoint of exactly one edge in `edges`.
bool is_perfect_matching(const BraneTiling& tiling, const std::vector<int>& edges);
// True iff the dual arrows meet every potential term exactly once.
bool meets_each_term_once(const Quiver& q, const Potential& w, const std::vector<int>& arrows);

} // namespace tessella
