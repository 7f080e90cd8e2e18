#pragma once

#include <utility>

#include "bianchi/snf.hpp"
#include "bianchi/torsion.hpp"

namespace bianchi {

/// Embedded copies of the published reference values that the workbench is
/// validated against: the Betti numbers and homology shapes of the four
/// principal rings beyond the Euclidean range, the two Poincare series, the
/// 3-torsion figure rows, and the equivariant K-homology table for the nine
/// principal ideal domain rings.  Each accessor is tied to an anchor string
/// used by the comparison reports.

/// beta_1 for m in {19, 43, 67, 163}; throws UnknownArtifact otherwise.
long reference_betti1(long m);

/// H_1 = Z^{beta_1} and H_2 = Z^{beta_1 - 1} + Z/4 + Z/2 + Z/3 for the same
/// four rings; throws UnknownArtifact otherwise.
AbelianGroup reference_h1(long m);
AbelianGroup reference_h2(long m);

/// The two Poincare series as numerator / denominator pairs: coefficient q
/// gives dim H_q(; F_ell) above the virtual cohomological dimension for the
/// rings of the homology table (ell = 2 and 3 respectively).
std::pair<IPoly, IPoly> reference_p2_series();
std::pair<IPoly, IPoly> reference_p3_series();

/// Reduced 3-torsion homeomorphism type from the published figure; false
/// when m is not among its thirty-six rows.
bool reference_homeo3(long m, HomeoType& out);

/// (K_0, K_1) for the nine principal ideal domain rings; false otherwise.
bool reference_k_homology(long m, AbelianGroup& k0, AbelianGroup& k1);

/// Anchor strings naming the reference tables in diff reports.
inline const char* anchor_homology() { return "reference: homology of the four non-Euclidean principal rings"; }
inline const char* anchor_series() { return "reference: Poincare series over F_2 and F_3"; }
inline const char* anchor_figure() { return "reference: 3-torsion subcomplex figure"; }
inline const char* anchor_k_table() { return "reference: equivariant K-homology table"; }

}  // namespace bianchi
