#include "bianchi/uhs.hpp"

#include <random>

#include "doctest.h"

using namespace bianchi;

namespace {

UhsPoint random_point(const RingDescriptor& r, std::mt19937& rng) {
    std::uniform_int_distribution<long> num(-8, 8);
    std::uniform_int_distribution<long> den(1, 6);
    QuadRat z = QuadRat::from_uv(r, make_rat(num(rng), den(rng)), make_rat(num(rng), den(rng)));
    Rat t_sq = make_rat(std::abs(num(rng)) + 1, den(rng));
    return {z, t_sq};
}

GroupElement random_element(const RingDescriptor& r, std::mt19937& rng) {
    // random product of translations and the inversion S
    QuadInt one{Int(1), Int(0), r}, zero{Int(0), Int(0), r};
    GroupElement s(zero, QuadInt{Int(-1), Int(0), r}, one, zero);
    GroupElement g = GroupElement::identity(r);
    std::uniform_int_distribution<long> coeff(-3, 3);
    std::uniform_int_distribution<int> steps(2, 5);
    int n = steps(rng);
    for (int i = 0; i < n; ++i) {
        g = g * GroupElement::translation(QuadInt{Int(coeff(rng)), Int(coeff(rng)), r});
        g = g * s;
    }
    return g;
}

}  // namespace

TEST_CASE("identity and translations act as expected") {
    RingDescriptor r = make_ring(2);
    std::mt19937 rng(7);
    UhsPoint p = random_point(r, rng);
    CHECK(act(GroupElement::identity(r), p) == p);

    GroupElement t = GroupElement::translation(QuadInt{Int(1), Int(0), r});
    UhsPoint q = act(t, p);
    CHECK(q.t_sq == p.t_sq);
    CHECK(q.z == p.z + QuadInt{Int(1), Int(0), r});
}

TEST_CASE("inversion S maps (0, t^2) to (0, 1/t^2)") {
    // oracle: with c=1, d=0, z=0: D = t^2, z' = 0, t'^2 = t^2/D^2 = 1/t^2
    RingDescriptor r = make_ring(7);
    QuadInt one{Int(1), Int(0), r}, zero{Int(0), Int(0), r};
    GroupElement s(zero, QuadInt{Int(-1), Int(0), r}, one, zero);
    UhsPoint p{QuadRat(), Rat(9, 4)};
    UhsPoint q = act(s, p);
    CHECK(q.z.is_zero());
    CHECK(q.t_sq == Rat(4, 9));
}

TEST_CASE("act is a group homomorphism, exactly") {
    std::mt19937 rng(42);
    for (long m : {1L, 2L, 3L, 19L}) {
        RingDescriptor r = make_ring(m);
        for (int it = 0; it < 250; ++it) {
            GroupElement g = random_element(r, rng), h = random_element(r, rng);
            UhsPoint p = random_point(r, rng);
            CHECK(act(g * h, p) == act(g, act(h, p)));
        }
    }
}

TEST_CASE("act is PSL-well-defined") {
    std::mt19937 rng(43);
    RingDescriptor r = make_ring(11);
    QuadInt mone{Int(-1), Int(0), r}, zero{Int(0), Int(0), r};
    for (int it = 0; it < 100; ++it) {
        GroupElement g = random_element(r, rng);
        GroupElement neg(mone * g.a, mone * g.b, mone * g.c, mone * g.d, false);
        UhsPoint p = random_point(r, rng);
        CHECK(act(g, p) == act(neg, p));
    }
}

TEST_CASE("float shadow agrees with exact action") {
    std::mt19937 rng(99);
    for (long m : {1L, 3L, 19L}) {
        RingDescriptor r = make_ring(m);
        for (int it = 0; it < 100; ++it) {
            GroupElement g = random_element(r, rng);
            UhsPoint p = random_point(r, rng);
            UhsPoint q = act(g, p);
            std::complex<double> zf;
            double tf;
            act_double(g, to_complex(p.z), std::sqrt(p.t_sq.get_d()), zf, tf);
            CHECK(std::abs(zf - to_complex(q.z)) < 1e-9);
            CHECK(std::abs(tf * tf - q.t_sq.get_d()) < 1e-9);
        }
    }
}

TEST_CASE("boundary point sent to infinity raises IdealPoint") {
    RingDescriptor r = make_ring(1);
    QuadInt one{Int(1), Int(0), r}, zero{Int(0), Int(0), r};
    GroupElement s(zero, QuadInt{Int(-1), Int(0), r}, one, zero);
    UhsPoint cusp{QuadRat(), Rat(0)};  // z = 0, t = 0 is sent to infinity by S
    CHECK_THROWS_AS(act(s, cusp), IdealPoint);
}

TEST_CASE("orders of elliptic elements") {
    RingDescriptor r = make_ring(1);
    QuadInt one{Int(1), Int(0), r}, zero{Int(0), Int(0), r};
    GroupElement s(zero, QuadInt{Int(-1), Int(0), r}, one, zero);
    CHECK(s.order() == 2);  // in PSL
    GroupElement st = s * GroupElement::translation(one);
    CHECK(st.order() == 3);
    CHECK(GroupElement::translation(one).order() == 0);
}

TEST_CASE("boundary action matches Moebius formula") {
    RingDescriptor r = make_ring(2);
    QuadInt one{Int(1), Int(0), r}, zero{Int(0), Int(0), r};
    GroupElement s(zero, QuadInt{Int(-1), Int(0), r}, one, zero);
    CHECK(act_boundary(s, BoundaryPoint::infinity()) ==
          BoundaryPoint::finite(QuadRat()));  // S(inf) = 0
    CHECK(act_boundary(s, BoundaryPoint::finite(QuadRat())) == BoundaryPoint::infinity());
}

TEST_CASE("quadints_with_norm_le enumerates exactly") {
    RingDescriptor r = make_ring(3);
    auto xs = quadints_with_norm_le(r, Rat(1));
    CHECK(xs.size() == 7);  // 0 and the six units
    for (auto& x : xs) CHECK(x.norm() <= 1);
}
