#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bianchi/orbit.hpp"
#include "bianchi/poly.hpp"

namespace bianchi {

/// The ell-torsion subgraph of the spine quotient: orbit cells of dimension
/// at most one whose stabiliser order is divisible by ell.
struct TorsionVertex {
    long cell = -1;  // index into the orbit complex
    FiniteGroupType type = FiniteGroupType::trivial;
};

struct TorsionEdge {
    long cell = -1;
    FiniteGroupType type = FiniteGroupType::trivial;  // always cyclic
    long v0 = -1, v1 = -1;  // indices into vertices; -1 marks a half-open end
};

struct TorsionGraph {
    long ell = 2;
    std::vector<TorsionVertex> vertices;
    std::vector<TorsionEdge> edges;
};

TorsionGraph torsion_subgraph(const OrbitComplex& oc, long ell);

/// Whether a vertex of the given stabiliser type may be merged away during
/// reduction: its ell-primary homology must equal that of the cyclic edge
/// stabiliser Z/ell in every positive degree.
bool torsion_reduction_admissible(FiniteGroupType t, long ell);

/// Expected number of orbits of ell-torsion edge ends at a vertex with the
/// given stabiliser type (the count forced by the stabiliser alone).
long expected_torsion_edge_count(FiniteGroupType t, long ell);

/// A connected component of the reduced graph, recognised up to
/// homeomorphism where possible.
struct ReducedComponent {
    bool circle = false;    // homeomorphic to a circle
    bool interval = false;  // homeomorphic to a closed interval
    std::vector<FiniteGroupType> vertex_types;  // remaining (unmerged) vertices
    std::string certificate;                    // canonical description
};

struct ReducedGraph {
    long ell = 2;
    std::vector<ReducedComponent> components;
};

ReducedGraph reduce_torsion_graph(const TorsionGraph& g);

/// Multiset of component homeomorphism types.
struct HomeoType {
    long circles = 0, intervals = 0;
    std::vector<std::string> other;  // sorted certificates of anything else

    bool operator==(const HomeoType&) const = default;
    std::string str() const;
};

HomeoType homeo_type(const ReducedGraph& g);

/// Poincare series over F_3 predicted by the reduced 3-torsion type:
/// the coefficient of t^q gives dim H_q(Gamma; F_3) for q >= 3, additively
/// over components (circle and interval contributions).
std::pair<IPoly, IPoly> torsion_poincare_series(const HomeoType& h);

/// Check every spine vertex orbit against the forced edge-end counts.
/// Appends one line per failure to report when given.
bool verify_rigidity_counts(const OrbitComplex& oc, long ell, std::string* report = nullptr);

/// Rotation axes of a finite stabiliser: boundary fixed-point pairs of its
/// nontrivial cyclic subgroups, with the conjugation action.
struct AxesReport {
    long cyclic_subgroups = 0;
    long axes = 0;                  // distinct fixed-point pairs
    std::vector<long> orbit_sizes;  // conjugation orbits on axes, sorted
};

AxesReport stabiliser_axes(const std::vector<GroupElement>& stab);

/// The correspondence between nontrivial cyclic subgroups and rotation axes:
/// well defined, injective, and with the orbit structure forced by the group
/// type (1 axis for Z/2 and Z/3; 3 fixed axes for Z/2 x Z/2; 3 + 1 for S3;
/// 3 + 4 for A4).
bool verify_axes_theorem(const std::vector<GroupElement>& stab, std::string* report = nullptr);

std::string torsion_graph_dot(const TorsionGraph& g);

}  // namespace bianchi
