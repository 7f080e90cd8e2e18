#include "bianchi/rings.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <numeric>
#include <sstream>

namespace bianchi {

bool is_square_free(long m) {
    if (m < 1) return false;
    for (long p = 2; p * p <= m; ++p) {
        if (m % (p * p) == 0) return false;
    }
    return true;
}

RingDescriptor make_ring(long m) {
    if (!is_square_free(m)) {
        throw NotSquareFree("m = " + std::to_string(m) + " is not square-free positive");
    }
    RingDescriptor r;
    r.m = m;
    r.half_integral = (m % 4 == 3);
    r.discriminant = r.half_integral ? -m : -4 * m;
    return r;
}

QuadInt QuadInt::conj() const {
    if (ring.half_integral) return {a + b, -b, ring};  // conj(omega) = 1 - omega
    return {a, -b, ring};
}

Int QuadInt::norm() const {
    if (ring.half_integral) return a * a + a * b + b * b * ((1 + ring.m) / 4);
    return a * a + b * b * ring.m;
}

Int QuadInt::trace() const {
    if (ring.half_integral) return 2 * a + b;
    return 2 * a;
}

Rat QuadInt::u() const {
    if (ring.half_integral) return make_rat(2 * a + b, 2);
    return Rat(a);
}

Rat QuadInt::v() const {
    if (ring.half_integral) return make_rat(b, 2);
    return Rat(b);
}

QuadInt QuadInt::operator+(const QuadInt& o) const { return {a + o.a, b + o.b, ring}; }
QuadInt QuadInt::operator-(const QuadInt& o) const { return {a - o.a, b - o.b, ring}; }

QuadInt QuadInt::operator*(const QuadInt& o) const {
    if (ring.half_integral) {
        // omega^2 = omega - (1+m)/4
        Int k((1 + ring.m) / 4);
        return {a * o.a - b * o.b * k, a * o.b + b * o.a + b * o.b, ring};
    }
    return {a * o.a - b * o.b * ring.m, a * o.b + b * o.a, ring};
}

std::strong_ordering QuadInt::operator<=>(const QuadInt& o) const {
    int c = cmp(a, o.a);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    c = cmp(b, o.b);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string QuadInt::str() const {
    std::ostringstream os;
    os << a.get_str();
    if (b != 0) os << (b > 0 ? "+" : "") << b.get_str() << "w";
    return os.str();
}

bool divide_exact(const QuadInt& x, const QuadInt& y, QuadInt& out) {
    if (y.is_zero()) return false;
    Int n = y.norm();
    QuadInt p = x * y.conj();
    if (p.a % n != 0 || p.b % n != 0) return false;
    out = {p.a / n, p.b / n, x.ring};
    return true;
}

std::vector<QuadInt> unit_group(const RingDescriptor& ring) {
    std::vector<QuadInt> units;
    for (long a = -2; a <= 2; ++a) {
        for (long b = -2; b <= 2; ++b) {
            QuadInt x{Int(a), Int(b), ring};
            if (x.norm() == 1) units.push_back(x);
        }
    }
    std::sort(units.begin(), units.end());
    return units;
}

namespace {

// Hermite form of the lattice in Z^2 spanned by the given vectors; returns
// the index (determinant), or 0 if the span has rank < 2.
Int lattice_index(std::vector<std::array<Int, 2>> gens) {
    // basis rows: (e,f), (0,h)
    Int e = 0, f = 0, h = 0;
    for (auto& g : gens) {
        Int x = g[0], y = g[1];
        if (x != 0) {
            if (e == 0) {
                e = x;
                f = y;
            } else {
                Int gg, s, t;
                mpz_gcdext(gg.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), e.get_mpz_t(),
                           x.get_mpz_t());
                Int f2 = s * f + t * y;
                Int y2 = -(x / gg) * f + (e / gg) * y;  // combination with first entry 0
                e = gg;
                f = f2;
                if (y2 != 0) h = (h == 0) ? Int(abs(y2)) : Int(gcd(h, y2));
            }
        } else if (y != 0) {
            h = (h == 0) ? Int(abs(y)) : Int(gcd(h, y));
        }
    }
    if (e == 0 || h == 0) return 0;
    return abs(e) * h;
}

}  // namespace

Int ideal_norm(const QuadInt& x, const QuadInt& y) {
    const RingDescriptor& ring = x.ring;
    QuadInt omega{Int(0), Int(1), ring};
    std::vector<std::array<Int, 2>> gens;
    for (const QuadInt* z : {&x, &y}) {
        if (z->is_zero()) continue;
        QuadInt zw = (*z) * omega;
        gens.push_back({z->a, z->b});
        gens.push_back({zw.a, zw.b});
    }
    if (gens.empty()) return 0;
    return lattice_index(std::move(gens));
}

QuadRat::QuadRat(QuadInt n, Int d) : num(std::move(n)), den(std::move(d)) {
    assert(den != 0);
    if (den < 0) {
        den = -den;
        num = -num;
    }
    Int g = gcd(gcd(num.a, num.b), den);
    if (g > 1) {
        num.a /= g;
        num.b /= g;
        den /= g;
    }
}

QuadRat QuadRat::from_uv(const RingDescriptor& ring, const Rat& u, const Rat& v) {
    Rat aw, bw;  // coefficients w.r.t. (1, omega)
    if (ring.half_integral) {
        bw = 2 * v;
        aw = u - v;
    } else {
        bw = v;
        aw = u;
    }
    Int d = lcm(aw.get_den(), bw.get_den());
    Rat ra = aw * d, rb = bw * d;
    return QuadRat(QuadInt{Int(ra.get_num()), Int(rb.get_num()), ring}, d);
}

Rat QuadRat::norm_q() const { return Rat(num.norm()) / Rat(den * den); }
Rat QuadRat::u() const { return num.u() / Rat(den); }
Rat QuadRat::v() const { return num.v() / Rat(den); }

QuadRat QuadRat::operator+(const QuadRat& o) const {
    QuadInt n{num.a * o.den + o.num.a * den, num.b * o.den + o.num.b * den, num.ring};
    return QuadRat(std::move(n), den * o.den);
}

QuadRat QuadRat::operator-(const QuadRat& o) const { return *this + (-o); }

QuadRat QuadRat::operator*(const QuadRat& o) const {
    return QuadRat(num * o.num, den * o.den);
}

QuadRat QuadRat::inverse() const {
    assert(!is_zero());
    QuadInt c = num.conj();
    return QuadRat(QuadInt{c.a * den, c.b * den, num.ring}, num.norm());
}

QuadRat QuadRat::operator/(const QuadRat& o) const { return *this * o.inverse(); }

std::strong_ordering QuadRat::operator<=>(const QuadRat& o) const {
    // order by exact value of (u, v)
    int c = cmp(u(), o.u());
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    c = cmp(v(), o.v());
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string QuadRat::str() const {
    std::ostringstream os;
    os << "(" << num.str() << ")/" << den.get_str();
    return os.str();
}

QuadRat operator*(const QuadInt& x, const QuadRat& y) { return QuadRat(x * y.num, y.den); }
QuadRat operator+(const QuadRat& x, const QuadInt& y) { return x + QuadRat(y); }

long class_number(const RingDescriptor& ring) {
    long D = ring.discriminant;
    long count = 0;
    for (long a = 1; 3 * a * a <= -D; ++a) {
        for (long b = -a + 1; b <= a; ++b) {
            long t = b * b - D;
            if (t % (4 * a) != 0) continue;
            long c = t / (4 * a);
            if (c < a) continue;
            if (a == c && b < 0) continue;
            // gcd(a,b,c) = 1 for the field discriminant's form class group
            long g = std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c));
            if (g != 1) continue;
            ++count;
        }
    }
    return count;
}

}  // namespace bianchi
