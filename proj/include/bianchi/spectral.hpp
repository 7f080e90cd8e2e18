#pragma once

#include <array>
#include <map>
#include <vector>

#include "bianchi/groupres.hpp"
#include "bianchi/modres.hpp"
#include "bianchi/orbit.hpp"

namespace bianchi {

/// The equivariant spectral sequence of the action on the 2-dimensional
/// retract:  E^1_{p,q} = (+)_{sigma, dim = p}  H_q(stab sigma)  converging to
/// H_{p+q} of the group, with p = 0, 1, 2 running over the spine orbit cells
/// and d^1 induced on each boundary term by inclusion conjugated through the
/// gluing element.  After refinement the stabilisers fix their cells
/// pointwise, so all coefficient modules are untwisted.

/// One row (fixed q) of the first and second page with integral coefficients.
/// E^1_{p,q} is presented as Z^{gens[p]} modulo the columns of relations[p],
/// concatenated over the spine cells of dimension p in complex order.
struct IntegralRow {
    long q = 0;
    std::array<long, 3> gens{};
    std::array<IMat, 3> relations;
    IMat d10, d21;  // d^1 : (1,q) -> (0,q)  and  (2,q) -> (1,q)
    std::array<AbelianGroup, 3> e2;
};

struct IntegralPage {
    long m = 0;
    long qmax = 0;
    std::array<std::vector<long>, 3> cells;  // spine orbit cells per dimension
    std::vector<IntegralRow> rows;           // q = 0 .. qmax
};

/// Build the integral rows q = 0 .. qmax.  Requires a spine without cusp
/// cells (class number one); throws UnsupportedDegree past the feasible
/// range of the integral resolutions and BoundaryCheckFailed when
/// d^1 d^1 != 0.
IntegralPage integral_page(const OrbitComplex& oc, long qmax);

/// The same pages with coefficients in the prime field F_ell: only the
/// dimensions over F_ell are carried, which stays cheap in high degrees.
struct ModPage {
    long m = 0;
    long ell = 2;
    long qmax = 0;
    std::vector<std::array<long, 3>> e1_dims;  // [q][p]
    std::vector<std::array<long, 3>> e2_dims;  // [q][p]
};

ModPage mod_page(const OrbitComplex& oc, long ell, long qmax);

/// dim H_n(group; F_ell) for n = 0 .. qmax, summing the antidiagonals of the
/// second page.  The sequence is concentrated in three columns, and every
/// known computation degenerates there; the assumption is recorded in the
/// field below rather than proven here.
struct ModHomologyDims {
    long ell = 2;
    std::vector<long> dims;
    bool degeneration_assumed = true;
};

ModHomologyDims mod_homology_dims(const ModPage& page);

/// H_1 and H_2 assembled from the integral second page.  H_1 carries no
/// extension problem against a free bottom piece; for H_2 the three graded
/// pieces are reported and the ambiguity is flagged whenever two of them
/// share a torsion prime, in which case only consistency of a candidate can
/// be certified, not the candidate itself.
struct LowDegreeHomology {
    AbelianGroup h1;
    std::array<AbelianGroup, 3> h2_graded;  // E^2_{0,2}, E^2_{1,1}, E^2_{2,0}
    AbelianGroup h2_direct_sum;
    bool degeneration_assumed = true;
    bool h1_extension_ambiguous = false;
    bool h2_extension_ambiguous = false;
};

LowDegreeHomology assemble_low_degree(const IntegralPage& page);

/// Resolve the extension ambiguity in H_2: among the groups admitting a
/// filtration with the computed graded pieces, exactly one must match the
/// mod-ell dimension dim H_2(; F_ell) = rank + corank_ell(torsion) +
/// corank_ell(H_1) for every torsion prime ell of the pieces (pass the
/// dimensions from the mod-ell pages).  Throws AssemblyAmbiguous when zero
/// or several candidates survive.
AbelianGroup resolve_h2(const LowDegreeHomology& low,
                        const std::map<long, long>& h2_mod_dims);

/// Whether a candidate abelian group admits a filtration whose graded pieces
/// are the given ones: equal rank, equal torsion order, and for every prime
/// a mod-ell dimension bounded by the sum over the pieces.
bool extension_consistent(const std::vector<AbelianGroup>& graded,
                          const AbelianGroup& candidate);

}  // namespace bianchi
