#include "bianchi/stabilisers.hpp"

#include <random>
#include <set>

#include "bianchi/errors.hpp"
#include "doctest.h"

using namespace bianchi;

namespace {

UhsPoint pt(const RingDescriptor& r, const Rat& u, const Rat& v, const Rat& t_sq) {
    return {QuadRat::from_uv(r, u, v), t_sq};
}

}  // namespace

TEST_CASE("rational square roots") {
    Rat s;
    CHECK(rat_sqrt(Rat(9, 4), s));
    CHECK(s == Rat(3, 2));
    CHECK(rat_sqrt(Rat(0), s));
    CHECK(s == 0);
    CHECK(!rat_sqrt(Rat(2), s));
    CHECK(!rat_sqrt(Rat(1, 3), s));
    CHECK(!rat_sqrt(Rat(-4), s));
}

TEST_CASE("lattice points in a disk") {
    for (long m : {1L, 2L, 3L, 7L}) {
        RingDescriptor r = make_ring(m);
        // disk about the origin must agree with the norm enumeration
        auto a = quadints_in_disk(r, QuadRat(), Rat(5));
        auto b = quadints_with_norm_le(r, Rat(5));
        std::set<QuadInt> sa(a.begin(), a.end()), sb(b.begin(), b.end());
        CHECK(sa == sb);
        // shifted disk: membership by exact norm
        QuadRat c = QuadRat::from_uv(r, Rat(3, 7), Rat(-1, 2));
        for (const QuadInt& d : quadints_in_disk(r, c, Rat(2)))
            CHECK((QuadRat(d) - c).norm_q() <= 2);
    }
}

TEST_CASE("unimodular completion") {
    RingDescriptor r = make_ring(5);
    QuadInt c{Int(2), Int(1), r}, d{Int(1), Int(1), r}, a, b;
    if (complete_unimodular(c, d, a, b)) CHECK(a * d - b * c == QuadInt{Int(1), Int(0), r});
    // a non-coprime pair has no completion
    QuadInt c2{Int(2), Int(0), r}, d2{Int(4), Int(0), r};
    CHECK(!complete_unimodular(c2, d2, a, b));
}

TEST_CASE("generic points have trivial stabiliser") {
    for (long m : {1L, 2L, 3L, 19L}) {
        RingDescriptor r = make_ring(m);
        auto s = point_stabiliser(pt(r, Rat(1, 5), Rat(1, 7), Rat(13, 11)));
        REQUIRE(s.size() == 1);
        CHECK(s[0].is_identity());
        CHECK(classify_finite_group(s) == FiniteGroupType::trivial);
    }
}

TEST_CASE("stabiliser of the point above the origin at height one") {
    // fixing (0, 1) forces d = conj(a), c = -conj(b), |a|^2 + |b|^2 = 1,
    // so the group is built from units: order 4 over Z[i], order 6 for m = 3
    RingDescriptor r1 = make_ring(1);
    auto s1 = point_stabiliser(pt(r1, Rat(0), Rat(0), Rat(1)));
    CHECK(s1.size() == 4);
    CHECK(classify_finite_group(s1) == FiniteGroupType::v4);

    RingDescriptor r3 = make_ring(3);
    auto s3 = point_stabiliser(pt(r3, Rat(0), Rat(0), Rat(1)));
    CHECK(s3.size() == 6);
    CHECK(classify_finite_group(s3) == FiniteGroupType::s3);

    // for m >= 5 the only units are +-1: the stabiliser is generated by the
    // inversion, of order 2
    RingDescriptor r5 = make_ring(5);
    auto s5 = point_stabiliser(pt(r5, Rat(0), Rat(0), Rat(1)));
    CHECK(s5.size() == 2);
    CHECK(classify_finite_group(s5) == FiniteGroupType::c2);
}

TEST_CASE("apex of an order-three axis") {
    // (0 -1; 1 1) has order 3; its boundary fixed points are the roots of
    // z^2 + z + 1, so the axis is the semicircle over them with apex
    // (-1/2, t^2 = 3/4)
    RingDescriptor r = make_ring(1);
    UhsPoint apex = pt(r, Rat(-1, 2), Rat(0), Rat(3, 4));
    auto s = point_stabiliser(apex);
    bool has_order3 = false;
    for (const GroupElement& g : s) has_order3 |= (g.order() == 3);
    CHECK(has_order3);
    auto type = classify_finite_group(s);
    CHECK((type == FiniteGroupType::c3 || type == FiniteGroupType::s3 ||
           type == FiniteGroupType::a4));
}

TEST_CASE("transporter sets are stabiliser cosets") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<long> coeff(-2, 2);
    for (long m : {2L, 3L, 11L}) {
        RingDescriptor r = make_ring(m);
        QuadInt one{Int(1), Int(0), r}, zero{Int(0), Int(0), r};
        GroupElement s(zero, QuadInt{Int(-1), Int(0), r}, one, zero);
        for (int it = 0; it < 8; ++it) {
            UhsPoint p = pt(r, make_rat(coeff(rng), 3), make_rat(coeff(rng), 5),
                            make_rat(1 + it % 3, 2));
            GroupElement g = GroupElement::translation(QuadInt{coeff(rng), coeff(rng), r}) * s *
                             GroupElement::translation(QuadInt{coeff(rng), coeff(rng), r});
            UhsPoint q = act(g, p);
            auto ts = transporters(p, q);
            auto st = point_stabiliser(p);
            CHECK(ts.size() == st.size());
            std::set<GroupElement> expect;
            for (const GroupElement& h : st) expect.insert(g * h);
            std::set<GroupElement> got(ts.begin(), ts.end());
            CHECK(got == expect);
            for (const GroupElement& h : ts) CHECK(act(h, p) == q);
        }
    }
}

TEST_CASE("points in different orbits have no transporter") {
    RingDescriptor r = make_ring(2);
    // heights whose ratio is not a rational square cannot be related
    CHECK(transporters(pt(r, Rat(0), Rat(0), Rat(2)), pt(r, Rat(0), Rat(0), Rat(1))).empty());
    // same height, generic planar offset
    CHECK(transporters(pt(r, Rat(0), Rat(0), Rat(5)), pt(r, Rat(1, 3), Rat(0), Rat(5))).empty());
}

TEST_CASE("boundary points are rejected") {
    RingDescriptor r = make_ring(1);
    CHECK_THROWS_AS(point_stabiliser(pt(r, Rat(0), Rat(0), Rat(0))), UnboundedSearch);
}

TEST_CASE("stabilisers are conjugation-equivariant") {
    RingDescriptor r = make_ring(3);
    QuadInt one{Int(1), Int(0), r}, zero{Int(0), Int(0), r};
    GroupElement s(zero, QuadInt{Int(-1), Int(0), r}, one, zero);
    GroupElement g = GroupElement::translation(QuadInt{Int(1), Int(1), r}) * s;
    UhsPoint p = pt(r, Rat(0), Rat(0), Rat(1));
    auto sp = point_stabiliser(p);
    auto sq = point_stabiliser(act(g, p));
    std::set<GroupElement> expect, got(sq.begin(), sq.end());
    for (const GroupElement& h : sp) expect.insert(g * h * g.inverse());
    CHECK(got == expect);
}

TEST_CASE("classification rejects junk") {
    RingDescriptor r = make_ring(1);
    GroupElement t = GroupElement::translation(QuadInt{Int(1), Int(0), r});
    CHECK_THROWS_AS(classify_finite_group({t}), UnknownType);  // infinite order
    GroupElement id = GroupElement::identity(r);
    QuadInt one{Int(1), Int(0), r}, zero{Int(0), Int(0), r};
    GroupElement s(zero, QuadInt{Int(-1), Int(0), r}, one, zero);
    CHECK_THROWS_AS(classify_finite_group({id, s, s}), UnknownType);  // duplicates
    CHECK_THROWS_AS(classify_finite_group({s}), UnknownType);  // not closed (no identity)
}
