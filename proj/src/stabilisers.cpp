#include "bianchi/stabilisers.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "bianchi/errors.hpp"
#include "bianchi/snf.hpp"

namespace bianchi {

bool rat_sqrt(const Rat& r, Rat& out) {
    if (r < 0) return false;
    if (mpz_perfect_square_p(r.get_num_mpz_t()) == 0) return false;
    if (mpz_perfect_square_p(r.get_den_mpz_t()) == 0) return false;
    Int n, d;
    mpz_sqrt(n.get_mpz_t(), r.get_num_mpz_t());
    mpz_sqrt(d.get_mpz_t(), r.get_den_mpz_t());
    out = make_rat(n, d);
    return true;
}

namespace {

Int rat_floor_int(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Int isqrt_ceil_rat(const Rat& x) {
    // smallest integer k with k^2 >= x (x >= 0)
    Int c;
    mpz_cdiv_q(c.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    Int r;
    mpz_sqrt(r.get_mpz_t(), c.get_mpz_t());
    if (r * r < c) r += 1;
    return r;
}

}  // namespace

std::vector<QuadInt> quadints_in_disk(const RingDescriptor& ring, const QuadRat& center,
                                      const Rat& r_sq) {
    std::vector<QuadInt> out;
    if (r_sq < 0) return out;
    Rat cu = center.u(), cv = center.v();
    // d = x + y*omega has u = x + y*u_w, v = y*v_w
    Rat u_w = ring.half_integral ? Rat(1, 2) : Rat(0);
    Rat v_w = ring.half_integral ? Rat(1, 2) : Rat(1);
    // m (y v_w - cv)^2 <= r_sq
    Int ky = isqrt_ceil_rat(r_sq / (Rat(ring.m) * v_w * v_w)) + 1;
    Int y0 = rat_floor_int(cv / v_w);
    Int kx = isqrt_ceil_rat(r_sq) + 1;
    for (Int y = y0 - ky; y <= y0 + ky + 1; ++y) {
        Rat xc = cu - Rat(y) * u_w;
        Int x0 = rat_floor_int(xc);
        for (Int x = x0 - kx; x <= x0 + kx + 1; ++x) {
            QuadInt d{x, y, ring};
            QuadRat diff = QuadRat(d) - center;
            if (diff.norm_q() <= r_sq) out.push_back(d);
        }
    }
    return out;
}

bool complete_unimodular(const QuadInt& c, const QuadInt& d, QuadInt& a, QuadInt& b) {
    const RingDescriptor& ring = c.ring;
    QuadInt omega{Int(0), Int(1), ring};
    // a d - b c = 1 as a Z-linear system in the coordinates of a and b
    QuadInt cols[4] = {d, d * omega, -c, -(c * omega)};
    IMat sys(2, 4);
    for (int j = 0; j < 4; ++j) {
        sys.at(0, j) = cols[j].a;
        sys.at(1, j) = cols[j].b;
    }
    std::vector<Int> rhs{Int(1), Int(0)}, sol;
    if (!solve_integer(sys, rhs, sol)) return false;
    a = QuadInt{sol[0], sol[1], ring};
    b = QuadInt{sol[2], sol[3], ring};
    return true;
}

std::vector<GroupElement> transporters(const UhsPoint& p, const UhsPoint& q) {
    if (p.t_sq <= 0 || q.t_sq <= 0)
        throw UnboundedSearch("transporter search needs interior points");
    const RingDescriptor& ring = p.z.ring();
    std::set<GroupElement> out;
    // t' = t_p / D, so D = t_p / t_q must be rational
    Rat dd;
    if (!rat_sqrt(p.t_sq / q.t_sq, dd)) return {};
    // D = |c z_p + d|^2 + |c|^2 t_p^2 bounds both bottom entries
    for (const QuadInt& c : quadints_with_norm_le(ring, dd / p.t_sq)) {
        Rat rhs = dd - Rat(c.norm()) * p.t_sq;
        if (rhs < 0) continue;
        QuadRat cz = c * p.z;
        for (const QuadInt& d : quadints_in_disk(ring, -cz, rhs)) {
            if ((cz + d).norm_q() != rhs) continue;
            QuadInt a, b;
            if (!complete_unimodular(c, d, a, b)) continue;
            GroupElement g0(a, b, c, d);
            UhsPoint im = act(g0, p);
            // the completion is unique up to left translation; pin it to q
            QuadRat tau = q.z - im.z;
            if (tau.den != 1) continue;
            GroupElement g = GroupElement::translation(tau.num) * g0;
            out.insert(g);
        }
    }
    return {out.begin(), out.end()};
}

std::vector<GroupElement> point_stabiliser(const UhsPoint& p) { return transporters(p, p); }

const char* finite_group_name(FiniteGroupType t) {
    switch (t) {
        case FiniteGroupType::trivial: return "{1}";
        case FiniteGroupType::c2: return "Z/2";
        case FiniteGroupType::c3: return "Z/3";
        case FiniteGroupType::v4: return "(Z/2)^2";
        case FiniteGroupType::s3: return "S3";
        case FiniteGroupType::a4: return "A4";
    }
    return "?";
}

long finite_group_order(FiniteGroupType t) {
    switch (t) {
        case FiniteGroupType::trivial: return 1;
        case FiniteGroupType::c2: return 2;
        case FiniteGroupType::c3: return 3;
        case FiniteGroupType::v4: return 4;
        case FiniteGroupType::s3: return 6;
        case FiniteGroupType::a4: return 12;
    }
    return 0;
}

FiniteGroupType classify_finite_group(const std::vector<GroupElement>& elems) {
    std::set<GroupElement> s(elems.begin(), elems.end());
    if (s.size() != elems.size()) throw UnknownType("duplicate elements in subgroup");
    std::map<int, long> by_order;
    bool abelian = true;
    for (const GroupElement& g : elems) {
        int o = g.order();
        if (o != 1 && o != 2 && o != 3)
            throw UnknownType("element order " + std::to_string(o) + " cannot occur");
        ++by_order[o];
        for (const GroupElement& h : elems) {
            if (!s.count(g * h)) throw UnknownType("set is not closed under products");
            if (!(g * h == h * g)) abelian = false;
        }
    }
    switch (elems.size()) {
        case 1: return FiniteGroupType::trivial;
        case 2: return FiniteGroupType::c2;
        case 3: return FiniteGroupType::c3;
        case 4:
            if (by_order[2] == 3) return FiniteGroupType::v4;
            break;
        case 6:
            if (!abelian && by_order[2] == 3 && by_order[3] == 2) return FiniteGroupType::s3;
            break;
        case 12:
            if (!abelian && by_order[2] == 3 && by_order[3] == 8) return FiniteGroupType::a4;
            break;
        default: break;
    }
    throw UnknownType("subgroup of order " + std::to_string(elems.size()) +
                      " is not an admissible stabiliser");
}

}  // namespace bianchi
