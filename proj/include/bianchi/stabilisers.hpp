#pragma once

#include <vector>

#include "bianchi/uhs.hpp"

namespace bianchi {

/// Exact rational square root: true and sets out when r is a perfect square.
bool rat_sqrt(const Rat& r, Rat& out);

/// All d in O_{-m} with |d - center|^2 <= r_sq (Euclidean metric on C).
std::vector<QuadInt> quadints_in_disk(const RingDescriptor& ring, const QuadRat& center,
                                      const Rat& r_sq);

/// Complete a row (c d) to a determinant-one matrix (a b; c d), solving
/// a d - b c = 1 over the ring. Returns false when no completion exists.
bool complete_unimodular(const QuadInt& c, const QuadInt& d, QuadInt& a, QuadInt& b);

/// All g in PSL_2(O_{-m}) with g p = q, for interior points (t > 0). The
/// search is complete: |c|^2 <= 1/(t_p t_q) and the remaining entries are
/// pinned by the two points. Throws UnboundedSearch on boundary points.
std::vector<GroupElement> transporters(const UhsPoint& p, const UhsPoint& q);

/// Stabiliser of an interior point; always one of the six finite groups below.
std::vector<GroupElement> point_stabiliser(const UhsPoint& p);

/// The finite subgroups that occur in PSL_2 of an imaginary quadratic ring.
enum class FiniteGroupType { trivial, c2, c3, v4, s3, a4 };

const char* finite_group_name(FiniteGroupType t);
long finite_group_order(FiniteGroupType t);

/// Identify the isomorphism type of a finite subgroup given by its elements.
/// Verifies closure and element orders; throws UnknownType on anything that
/// is not one of the six admissible groups.
FiniteGroupType classify_finite_group(const std::vector<GroupElement>& elems);

}  // namespace bianchi
