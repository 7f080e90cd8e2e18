#pragma once

#include <string>
#include <vector>

#include "bianchi/stabilisers.hpp"
#include "bianchi/swan.hpp"

namespace bianchi {

/// One term of an orbit-level boundary: the ambient boundary cell is
/// g * (representative of cell `orbit`), entering with the given sign.
struct OrbitBoundaryTerm {
    long orbit;
    int sign;
    GroupElement g;
};

/// Orbit representative of a cell of the refined equivariant complex.
/// After refinement the stabiliser fixes the cell pointwise, so the setwise
/// and pointwise stabilisers printed here coincide.
struct OrbitCell {
    int dim = 0;
    std::vector<GroupElement> stab;
    FiniteGroupType type = FiniteGroupType::trivial;
    bool on_cusp = false;  // half-open cell: touches an excluded cusp vertex
    // member of the cocompact 2-dimensional retract: the translates of the
    // hemisphere floor form a spine of hyperbolic space, and its cell orbits
    // are the floor-face orbits together with their boundary closures
    bool in_spine = false;
    std::string label;
    std::vector<OrbitBoundaryTerm> boundary;
};

struct OrbitComplex {
    RingDescriptor ring;
    std::vector<OrbitCell> cells;
    std::vector<std::vector<long>> by_dim;  // indices into cells, per dimension
    long flipped_edge_orbits = 0;
    long rotated_face_orbits = 0;
    // The 3-cell is built from a fundamental domain of the translation
    // lattice, which for the two rings with extra units (m = 1 and m = 3)
    // covers a strict fundamental domain of the full cusp stabiliser this
    // many times.  Cells of dimension at most 2 are genuine orbit cells in
    // every case; the 3-cell datum (and hence three-dimensional homology of
    // the quotient) is only valid when this is 1.
    long top_cell_multiplicity = 1;
};

/// Build the refined orbit complex of the group action from a fundamental
/// polyhedron: determine cell orbits and stabilisers by exhaustive transporter
/// searches, subdivide edges flipped by an involution (barycentre + half-edge)
/// and 2-cells with nontrivial setwise stabiliser (cone from the centre over
/// the refined boundary cycle), and rewrite all boundaries through gluing
/// elements. Cusp vertices (ideal vertices and singular points) are excluded
/// from the complex; cells touching them are half-open.
OrbitComplex build_orbit_complex(const FundamentalPolyhedron& P);

/// Isomorphism type of the preimage in SL_2 of each projective stabiliser.
const char* linear_preimage_name(FiniteGroupType t);

/// Deterministic JSON dump (cache format), exact and round-trippable.
std::string orbit_complex_json(const OrbitComplex& oc);

/// Rebuild a complex from the dump; stabiliser types are re-derived from the
/// element lists and checked against the recorded names.
OrbitComplex orbit_complex_from_json(const std::string& text);

}  // namespace bianchi
