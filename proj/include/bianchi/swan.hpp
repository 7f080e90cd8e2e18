#pragma once

#include <map>
#include <string>
#include <vector>

#include "bianchi/uhs.hpp"

namespace bianchi {

/// Planar point (u, v) standing for z = u + v*sqrt(m)*i.
struct Vec2 {
    Rat x, y;
    bool operator==(const Vec2&) const = default;
    std::strong_ordering operator<=>(const Vec2& o) const;
};

using Poly2 = std::vector<Vec2>;

/// Keep the part of a convex polygon with a*x + b*y + c >= 0.
Poly2 clip_halfplane(const Poly2& poly, const Rat& a, const Rat& b, const Rat& c);

Rat polygon_area_twice(const Poly2& poly);

/// Unit hemisphere data: surface |lambda z - mu|^2 + |lambda|^2 t^2 = 1.
struct Hemisphere {
    QuadInt lambda, mu;
    QuadRat center;   // mu / lambda
    Rat radius_sq;    // 1 / norm(lambda)

    Hemisphere(QuadInt l, QuadInt m);

    /// Squared height of the hemisphere surface over the planar point (may be < 0).
    Rat height_sq_at(const Vec2& p) const;
};

std::vector<Hemisphere> enumerate_hemispheres(const RingDescriptor& ring, long norm_bound);

/// Cell of the polyhedron complex. Vertices are ids into the vertex table;
/// the ideal vertex (infinity or a singular point) is flagged on the vertex.
struct PolyCell {
    int dim = 0;
    std::vector<long> vertices;      // sorted, includes cusp vertex ids
    std::vector<long> cycle;         // dim 2: boundary vertex cycle in order
    std::vector<std::pair<long, int>> boundary;  // (cell id of dim-1, incidence sign)
    long support_hemisphere = -1;    // dim 2 floor faces
    int wall_side = -1;              // dim 2 walls: index of the parallelogram side
};

struct PolyVertex {
    UhsPoint p;           // exact coordinates; ignored when at_infinity
    bool at_infinity = false;
    bool cusp = false;    // true for infinity and for singular points (t^2 = 0)
};

struct FacePairing {
    long face_a = -1, face_b = -1;
    GroupElement g;  // act(g, face_a) = face_b, verified vertexwise
};

/// The Bianchi fundamental polyhedron: prism over the translation
/// parallelogram, truncated below by the hemisphere floor.
struct FundamentalPolyhedron {
    RingDescriptor ring;
    long norm_bound = 0;             // final hemisphere norm bound
    std::vector<Hemisphere> hemispheres;  // hemispheres carrying floor faces
    std::vector<PolyVertex> vertices;
    std::vector<std::vector<long>> cells_by_dim;  // ids into cells
    std::vector<PolyCell> cells;
    std::vector<FacePairing> pairings;
    std::vector<BoundaryPoint> cusps;

    long infinity_vertex = -1;

    const PolyCell& cell(long id) const { return cells[id]; }
    std::vector<long> cell_ids(int dim) const { return cells_by_dim[dim]; }
};

/// Corners of the translation fundamental parallelogram, counterclockwise.
Poly2 translation_parallelogram(const RingDescriptor& ring);

/// Floor decomposition by Swan's hemisphere method. Increases the norm bound
/// until no unused hemisphere can rise above a floor vertex; throws
/// ResourceBudgetExceeded past norm_cap.
FundamentalPolyhedron floor_decomposition(const RingDescriptor& ring, long norm_cap = 2000);

/// Completes the polyhedron with its face pairings (walls by translations,
/// floor faces by hemisphere-swapping elements). Throws UnpairedFace.
void face_pairings(FundamentalPolyhedron& poly);

/// One cusp representative per ideal class; {infinity} for class number one.
std::vector<BoundaryPoint> cusp_set(const RingDescriptor& ring);

std::string polyhedron_to_json(const FundamentalPolyhedron& poly);
std::string polyhedron_to_obj(const FundamentalPolyhedron& poly);

}  // namespace bianchi
