#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace eitrec {

/// Disc domain with equispaced boundary electrodes.
struct DomainSpec {
    double radius = 0.1;
    int electrode_count = 16;
    double electrode_half_width = 0.12;  // radians
    double electrode_offset = 0.0;       // angle of electrode 1's center

    /// Throws std::invalid_argument on non-positive sizes or overlapping arcs.
    void validate() const;

    /// Center angle of electrode `ell`, 1-based.
    double electrode_center(int ell) const;
};

inline constexpr int kGapTag = 0;

struct BoundaryEdge {
    int a = 0;          // vertex indices; (a, b) runs counterclockwise
    int b = 0;
    int tag = kGapTag;  // electrode index in 1..m, or kGapTag
};

/// Immutable triangulation of the disc. Boundary vertices sit exactly on the
/// electrode arc endpoints, so every boundary edge carries a single tag.
struct Mesh {
    DomainSpec domain;
    std::vector<Eigen::Vector2d> vertices;
    std::vector<std::array<int, 3>> triangles;  // counterclockwise
    std::vector<BoundaryEdge> boundary_edges;
    std::vector<double> element_areas;
    std::vector<Eigen::Vector2d> element_centroids;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int element_count() const { return static_cast<int>(triangles.size()); }

    double edge_length(const BoundaryEdge& e) const {
        return (vertices[e.b] - vertices[e.a]).norm();
    }
    double boundary_length() const;
    double electrode_length(int ell) const;
    /// Fraction of the boundary covered by electrode-tagged edges.
    double electrode_coverage() const;
    double total_area() const;

    void write(std::ostream& out) const;
    static Mesh read(std::istream& in);
    std::string serialize() const;
    std::uint64_t content_hash() const;
};

/// Builds a deterministic triangulation with roughly `target_elements`
/// elements (within +-20%, else throws). The construction is a polar ring
/// subdivision whose angular counts are multiples of the electrode count, so
/// the mesh has the same discrete rotational symmetry as the electrode layout.
Mesh build_disc_mesh(const DomainSpec& spec, int target_elements);

/// Edges tagged with electrode `ell` (1-based). Throws std::out_of_range.
std::vector<BoundaryEdge> electrode_edges(const Mesh& mesh, int ell);

/// Recomputes per-element area/centroid tables; throws on a non-positive
/// signed area.
void compute_element_geometry(Mesh& mesh);

}  // namespace eitrec
