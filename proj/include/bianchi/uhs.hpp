#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "bianchi/rings.hpp"

namespace bianchi {

/// Point of the upper half-space model: (z, t^2) with z in Q(sqrt(-m)) and
/// the squared height rational. t_sq = 0 means a boundary point.
struct UhsPoint {
    QuadRat z;
    Rat t_sq;

    bool operator==(const UhsPoint& o) const { return z == o.z && t_sq == o.t_sq; }
    std::strong_ordering operator<=>(const UhsPoint& o) const;
};

/// Point of P^1(Q(sqrt(-m))): either infinity or a finite z.
struct BoundaryPoint {
    bool at_infinity = false;
    QuadRat z;

    static BoundaryPoint infinity() { return {true, {}}; }
    static BoundaryPoint finite(QuadRat w) { return {false, std::move(w)}; }

    bool operator==(const BoundaryPoint& o) const {
        if (at_infinity != o.at_infinity) return false;
        return at_infinity || z == o.z;
    }
    std::strong_ordering operator<=>(const BoundaryPoint& o) const;
};

/// Matrix (a b; c d) with ad - bc = 1 over O_{-m}. With projective = true the
/// element is identified with its negative (PSL_2 model) and kept in a
/// canonical sign form.
struct GroupElement {
    QuadInt a, b, c, d;
    bool projective = true;

    static GroupElement identity(const RingDescriptor& ring);
    static GroupElement translation(const QuadInt& mu);  // (1 mu; 0 1)

    GroupElement() = default;
    GroupElement(QuadInt a_, QuadInt b_, QuadInt c_, QuadInt d_, bool proj = true);

    const RingDescriptor& ring() const { return a.ring; }
    QuadInt det() const { return a * d - b * c; }
    bool is_identity() const;

    GroupElement operator*(const GroupElement& o) const;
    GroupElement inverse() const;

    /// Multiplicative order; 0 when it exceeds 12 (infinite for our purposes).
    int order() const;

    bool operator==(const GroupElement& o) const;
    std::strong_ordering operator<=>(const GroupElement& o) const;

    std::string str() const;

  private:
    void canonicalize_sign();
};

/// Poincare extension of the Moebius action to upper half-space, exactly.
/// Throws IdealPoint when p is a boundary point sent to infinity.
UhsPoint act(const GroupElement& g, const UhsPoint& p);

BoundaryPoint act_boundary(const GroupElement& g, const BoundaryPoint& p);

/// Floating-point shadow of act, for consistency tests and exports.
std::complex<double> to_complex(const QuadRat& z);
void act_double(const GroupElement& g, std::complex<double> z, double t,
                std::complex<double>& z_out, double& t_out);

/// All x in O_{-m} with norm(x) <= bound, sorted.
std::vector<QuadInt> quadints_with_norm_le(const RingDescriptor& ring, const Rat& bound);

}  // namespace bianchi
