#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <vector>

#include "bianchi/errors.hpp"

namespace bianchi {

using Int = mpz_class;
using Rat = mpq_class;

/// mpq_class(p, q) keeps the fraction as given; this reduces it.
inline Rat make_rat(Int p, Int q) {
    Rat r(std::move(p), std::move(q));
    r.canonicalize();
    return r;
}

/// The ring of integers O_{-m} of Q(sqrt(-m)), m square-free positive.
/// omega = sqrt(-m) when m = 1,2 mod 4, omega = (1+sqrt(-m))/2 when m = 3 mod 4.
struct RingDescriptor {
    long m = 0;
    bool half_integral = false;
    long discriminant = 0;

    bool operator==(const RingDescriptor&) const = default;
};

RingDescriptor make_ring(long m);

bool is_square_free(long m);

/// Element a + b*omega of O_{-m}.
struct QuadInt {
    Int a, b;
    RingDescriptor ring;

    QuadInt() = default;
    QuadInt(Int a_, Int b_, RingDescriptor r) : a(std::move(a_)), b(std::move(b_)), ring(r) {}

    bool is_zero() const { return a == 0 && b == 0; }
    bool is_one() const { return a == 1 && b == 0; }

    QuadInt conj() const;
    Int norm() const;      // x * conj(x), nonnegative
    Int trace() const;     // x + conj(x)

    // real/imaginary coordinates: value = u() + v()*sqrt(m)*i
    Rat u() const;
    Rat v() const;

    QuadInt operator-() const { return {-a, -b, ring}; }
    QuadInt operator+(const QuadInt& o) const;
    QuadInt operator-(const QuadInt& o) const;
    QuadInt operator*(const QuadInt& o) const;

    bool operator==(const QuadInt& o) const { return a == o.a && b == o.b; }
    std::strong_ordering operator<=>(const QuadInt& o) const;

    std::string str() const;
};

/// Exact division x/y in O_{-m}; returns false when y does not divide x.
bool divide_exact(const QuadInt& x, const QuadInt& y, QuadInt& out);

/// Units of O_{-m}: 4 for m=1, 6 for m=3, {+-1} otherwise.
std::vector<QuadInt> unit_group(const RingDescriptor& ring);

/// Norm of the O-ideal generated by x and y (0 if both are 0).
/// The pair is unimodular exactly when this is 1.
Int ideal_norm(const QuadInt& x, const QuadInt& y);

/// Element of Q(sqrt(-m)) in reduced form num/den: den > 0,
/// gcd(den, content(num)) = 1. Canonical, so equality is structural.
struct QuadRat {
    QuadInt num;
    Int den;

    QuadRat() : den(1) {}
    QuadRat(QuadInt n, Int d);
    explicit QuadRat(QuadInt n) : num(std::move(n)), den(1) {}

    static QuadRat from_uv(const RingDescriptor& ring, const Rat& u, const Rat& v);

    const RingDescriptor& ring() const { return num.ring; }
    bool is_zero() const { return num.is_zero(); }

    QuadRat conj() const { return QuadRat(num.conj(), den); }
    Rat norm_q() const;  // |x|^2 as a rational
    Rat u() const;
    Rat v() const;

    QuadRat operator-() const { return QuadRat(-num, den); }
    QuadRat operator+(const QuadRat& o) const;
    QuadRat operator-(const QuadRat& o) const;
    QuadRat operator*(const QuadRat& o) const;
    QuadRat operator/(const QuadRat& o) const;  // o nonzero
    QuadRat inverse() const;

    bool operator==(const QuadRat& o) const { return num == o.num && den == o.den; }
    std::strong_ordering operator<=>(const QuadRat& o) const;

    std::string str() const;
};

QuadRat operator*(const QuadInt& x, const QuadRat& y);
QuadRat operator+(const QuadRat& x, const QuadInt& y);

/// Class number of O_{-m}, counted via reduced binary quadratic forms
/// of the field discriminant.
long class_number(const RingDescriptor& ring);

}  // namespace bianchi
