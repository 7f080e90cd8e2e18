#pragma once

#include <vector>

#include "bianchi/errors.hpp"

namespace bianchi {

/// Integer polynomial, coefficient of t^i at c[i].
struct IPoly {
    std::vector<long> c;

    IPoly() = default;
    IPoly(std::initializer_list<long> v) : c(v) {}

    long coeff(size_t i) const { return i < c.size() ? c[i] : 0; }
    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const {
        for (long x : c)
            if (x != 0) return false;
        return true;
    }

    IPoly operator+(const IPoly& o) const {
        IPoly r;
        r.c.resize(std::max(c.size(), o.c.size()), 0);
        for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = coeff(i) + o.coeff(i);
        r.trim();
        return r;
    }
    IPoly operator*(const IPoly& o) const {
        IPoly r;
        if (is_zero() || o.is_zero()) return r;
        r.c.assign(c.size() + o.c.size() - 1, 0);
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
        r.trim();
        return r;
    }
    bool operator==(const IPoly& o) const {
        IPoly a = *this, b = o;
        a.trim();
        b.trim();
        return a.c == b.c;
    }
};

/// Taylor coefficients of num(t)/den(t) at t = 0, up to degree qmax.
/// Requires den(0) = +-1 so the expansion is integral.
inline std::vector<long> series_coefficients(const IPoly& num, const IPoly& den, int qmax) {
    if (den.coeff(0) != 1 && den.coeff(0) != -1)
        throw InvariantViolation("series expansion needs an invertible constant term");
    long d0 = den.coeff(0);
    std::vector<long> out(qmax + 1, 0);
    for (int q = 0; q <= qmax; ++q) {
        long s = num.coeff(q);
        for (int i = 1; i <= q; ++i) s -= den.coeff(i) * out[q - i];
        out[q] = s / d0;
    }
    return out;
}

/// num/den + num2/den2 brought over the product denominator (no gcd
/// cancellation; callers compare expansions, not normal forms).
inline void rational_add(IPoly& num, IPoly& den, const IPoly& num2, const IPoly& den2) {
    num = num * den2 + num2 * den;
    den = den * den2;
}

}  // namespace bianchi
