#include "bianchi/uhs.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

namespace bianchi {

std::strong_ordering UhsPoint::operator<=>(const UhsPoint& o) const {
    int c = cmp(t_sq, o.t_sq);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return z <=> o.z;
}

std::strong_ordering BoundaryPoint::operator<=>(const BoundaryPoint& o) const {
    if (at_infinity != o.at_infinity) {
        return at_infinity ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    if (at_infinity) return std::strong_ordering::equal;
    return z <=> o.z;
}

GroupElement::GroupElement(QuadInt a_, QuadInt b_, QuadInt c_, QuadInt d_, bool proj)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)), projective(proj) {
    assert(det().is_one());
    if (projective) canonicalize_sign();
}

void GroupElement::canonicalize_sign() {
    // pick the lexicographically smaller of g and -g
    GroupElement neg;
    neg.a = -a;
    neg.b = -b;
    neg.c = -c;
    neg.d = -d;
    neg.projective = false;
    GroupElement self;
    self.a = a;
    self.b = b;
    self.c = c;
    self.d = d;
    self.projective = false;
    if (neg < self) {
        a = neg.a;
        b = neg.b;
        c = neg.c;
        d = neg.d;
    }
}

GroupElement GroupElement::identity(const RingDescriptor& ring) {
    QuadInt one{Int(1), Int(0), ring}, zero{Int(0), Int(0), ring};
    return GroupElement(one, zero, zero, one);
}

GroupElement GroupElement::translation(const QuadInt& mu) {
    const RingDescriptor& ring = mu.ring;
    QuadInt one{Int(1), Int(0), ring}, zero{Int(0), Int(0), ring};
    return GroupElement(one, mu, zero, one);
}

bool GroupElement::is_identity() const {
    if (b.is_zero() && c.is_zero() && a == d && a.b == 0 && (a.a == 1 || (projective && a.a == -1)))
        return true;
    return false;
}

GroupElement GroupElement::operator*(const GroupElement& o) const {
    return GroupElement(a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c,
                        c * o.b + d * o.d, projective && o.projective);
}

GroupElement GroupElement::inverse() const { return GroupElement(d, -b, -c, a, projective); }

int GroupElement::order() const {
    GroupElement g = *this;
    for (int k = 1; k <= 12; ++k) {
        if (g.is_identity()) return k;
        g = g * *this;
    }
    return 0;
}

bool GroupElement::operator==(const GroupElement& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
}

std::strong_ordering GroupElement::operator<=>(const GroupElement& o) const {
    if (auto r = a <=> o.a; r != 0) return r;
    if (auto r = b <=> o.b; r != 0) return r;
    if (auto r = c <=> o.c; r != 0) return r;
    return d <=> o.d;
}

std::string GroupElement::str() const {
    std::ostringstream os;
    os << "[" << a.str() << "," << b.str() << ";" << c.str() << "," << d.str() << "]";
    return os.str();
}

namespace {

QuadRat scale(const QuadRat& x, const Rat& s) {
    return QuadRat(QuadInt{x.num.a * s.get_num(), x.num.b * s.get_num(), x.num.ring},
                   x.den * s.get_den());
}

}  // namespace

UhsPoint act(const GroupElement& g, const UhsPoint& p) {
    QuadRat w = QuadRat(g.c) * p.z + g.d;  // cz + d
    Rat D = w.norm_q() + Rat(g.c.norm()) * p.t_sq;
    if (D == 0) {
        throw IdealPoint("boundary point is sent to infinity");
    }
    QuadRat az_b = QuadRat(g.a) * p.z + g.b;
    QuadRat zp = az_b * w.conj() + scale(QuadRat(g.a * g.c.conj()), p.t_sq);
    Rat invD = 1 / D;
    return UhsPoint{scale(zp, invD), p.t_sq * invD * invD};
}

BoundaryPoint act_boundary(const GroupElement& g, const BoundaryPoint& p) {
    if (p.at_infinity) {
        if (g.c.is_zero()) return BoundaryPoint::infinity();
        return BoundaryPoint::finite(QuadRat(g.a) / QuadRat(g.c));
    }
    QuadRat w = QuadRat(g.c) * p.z + g.d;
    if (w.is_zero()) return BoundaryPoint::infinity();
    return BoundaryPoint::finite((QuadRat(g.a) * p.z + g.b) / w);
}

std::complex<double> to_complex(const QuadRat& z) {
    double m = static_cast<double>(z.ring().m);
    return {z.u().get_d(), z.v().get_d() * std::sqrt(m)};
}

void act_double(const GroupElement& g, std::complex<double> z, double t,
                std::complex<double>& z_out, double& t_out) {
    auto cc = [](const QuadInt& x) {
        double m = static_cast<double>(x.ring.m);
        return std::complex<double>(x.u().get_d(), x.v().get_d() * std::sqrt(m));
    };
    std::complex<double> a = cc(g.a), b = cc(g.b), c = cc(g.c), d = cc(g.d);
    std::complex<double> w = c * z + d;
    double D = std::norm(w) + std::norm(c) * t * t;
    z_out = ((a * z + b) * std::conj(w) + a * std::conj(c) * t * t) / D;
    t_out = t / D;
}

std::vector<QuadInt> quadints_with_norm_le(const RingDescriptor& ring, const Rat& bound) {
    std::vector<QuadInt> out;
    if (bound < 0) return out;
    // |b| bounded: case A: m b^2 <= B;  case B: norm = (a + b/2)^2 + m (b/2)^2
    double B = bound.get_d() + 1e-9;
    long bmax = ring.half_integral ? static_cast<long>(std::floor(2 * std::sqrt(B / ring.m))) + 1
                                   : static_cast<long>(std::floor(std::sqrt(B / ring.m))) + 1;
    for (long b = -bmax; b <= bmax; ++b) {
        // solve for a range exactly by scanning a window
        double center = ring.half_integral ? -b / 2.0 : 0.0;
        long awidth = static_cast<long>(std::floor(std::sqrt(B))) + 2;
        for (long a = static_cast<long>(std::floor(center)) - awidth;
             a <= static_cast<long>(std::ceil(center)) + awidth; ++a) {
            QuadInt x{Int(a), Int(b), ring};
            if (Rat(x.norm()) <= bound) out.push_back(x);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace bianchi
