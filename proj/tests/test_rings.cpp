#include "bianchi/rings.hpp"

#include <random>

#include "doctest.h"

using namespace bianchi;

TEST_CASE("make_ring picks the omega convention from m mod 4") {
    RingDescriptor r1 = make_ring(1);
    CHECK(!r1.half_integral);
    CHECK(r1.discriminant == -4);

    RingDescriptor r3 = make_ring(3);
    CHECK(r3.half_integral);
    CHECK(r3.discriminant == -3);

    RingDescriptor r2 = make_ring(2);
    CHECK(!r2.half_integral);
    CHECK(r2.discriminant == -8);

    CHECK_THROWS_AS(make_ring(12), NotSquareFree);
    CHECK_THROWS_AS(make_ring(0), NotSquareFree);
}

TEST_CASE("norms of small elements") {
    RingDescriptor r1 = make_ring(1);
    CHECK(QuadInt{Int(0), Int(1), r1}.norm() == 1);  // omega = i

    RingDescriptor r2 = make_ring(2);
    CHECK(QuadInt{Int(1), Int(1), r2}.norm() == 3);  // 1 + sqrt(-2)

    RingDescriptor r3 = make_ring(3);
    // oracle: with w + conj(w) = 1 and w*conj(w) = 1,
    // (a+bw)(a+b-bw) = a^2 + ab + b^2
    CHECK(QuadInt{Int(0), Int(1), r3}.norm() == 1);
}

TEST_CASE("norm is multiplicative on random elements") {
    std::mt19937 rng(1234);
    std::uniform_int_distribution<long> dist(-40, 40);
    for (long m : {1L, 2L, 3L, 7L, 19L}) {
        RingDescriptor r = make_ring(m);
        for (int it = 0; it < 200; ++it) {
            QuadInt x{Int(dist(rng)), Int(dist(rng)), r};
            QuadInt y{Int(dist(rng)), Int(dist(rng)), r};
            CHECK((x * y).norm() == x.norm() * y.norm());
        }
    }
}

TEST_CASE("unit groups by brute force") {
    CHECK(unit_group(make_ring(1)).size() == 4);
    CHECK(unit_group(make_ring(3)).size() == 6);
    CHECK(unit_group(make_ring(19)).size() == 2);
    CHECK(unit_group(make_ring(2)).size() == 2);
}

TEST_CASE("conjugation and trace") {
    RingDescriptor r3 = make_ring(3);
    QuadInt w{Int(0), Int(1), r3};
    QuadInt wc = w.conj();
    CHECK((w + wc) == QuadInt{Int(1), Int(0), r3});
    CHECK((w * wc) == QuadInt{Int(1), Int(0), r3});
}

TEST_CASE("QuadRat canonical reduction") {
    RingDescriptor r1 = make_ring(1);
    QuadRat x(QuadInt{Int(2), Int(4), r1}, Int(6));
    CHECK(x.num.a == 1);
    CHECK(x.num.b == 2);
    CHECK(x.den == 3);

    QuadRat y(QuadInt{Int(-1), Int(0), r1}, Int(-2));
    CHECK(y.num.a == 1);
    CHECK(y.den == 2);

    QuadRat z = QuadRat::from_uv(r1, Rat(1, 3), Rat(1, 2));
    CHECK(z.u() == Rat(1, 3));
    CHECK(z.v() == Rat(1, 2));
}

TEST_CASE("field arithmetic round trips") {
    for (long m : {1L, 2L, 3L, 7L, 15L}) {
        RingDescriptor r = make_ring(m);
        QuadRat x = QuadRat::from_uv(r, Rat(3, 7), Rat(-2, 5));
        QuadRat y = QuadRat::from_uv(r, Rat(-1, 4), Rat(9, 2));
        CHECK((x * y) / y == x);
        CHECK(x + y - y == x);
        CHECK((x * y).norm_q() == x.norm_q() * y.norm_q());
    }
}

TEST_CASE("ideal norm detects unimodular pairs") {
    RingDescriptor r5 = make_ring(5);
    QuadInt two{Int(2), Int(0), r5};
    QuadInt onepw{Int(1), Int(1), r5};
    // (2, 1+sqrt(-5)) is the classical non-principal ideal of norm 2
    CHECK(ideal_norm(two, onepw) == 2);
    QuadInt one{Int(1), Int(0), r5};
    CHECK(ideal_norm(two, one) == 1);
    CHECK(ideal_norm(two, two) == 4);
}

TEST_CASE("class numbers via reduced forms") {
    CHECK(class_number(make_ring(1)) == 1);
    CHECK(class_number(make_ring(19)) == 1);
    CHECK(class_number(make_ring(163)) == 1);
    CHECK(class_number(make_ring(5)) == 2);
    CHECK(class_number(make_ring(15)) == 2);
    CHECK(class_number(make_ring(39)) == 4);
    CHECK(class_number(make_ring(14)) == 4);
}
