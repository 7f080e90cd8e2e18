#include "bianchi/spectral.hpp"

#include <map>

#include "doctest.h"

using namespace bianchi;

namespace {

OrbitComplex complex_for(long m) {
    static std::map<long, OrbitComplex> cache;
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    FundamentalPolyhedron P = floor_decomposition(make_ring(m));
    face_pairings(P);
    return cache.emplace(m, build_orbit_complex(P)).first->second;
}

AbelianGroup grp(long rank, std::vector<long> tors) {
    AbelianGroup g;
    g.rank = rank;
    for (long t : tors) g.torsion.push_back(Int(t));
    return g;
}

}  // namespace

TEST_CASE("first homology is free of the known rank over the four rings "
          "without 2- or 3-torsion in degree one") {
    const std::map<long, long> beta1 = {{19, 1}, {43, 2}, {67, 3}, {163, 7}};
    for (const auto& [m, b] : beta1) {
        CAPTURE(m);
        LowDegreeHomology low = assemble_low_degree(integral_page(complex_for(m), 2));
        CHECK(low.h1 == grp(b, {}));
        CHECK(!low.h1_extension_ambiguous);
    }
}

TEST_CASE("first homology carries the classical torsion over the small "
          "discriminants") {
    const std::map<long, AbelianGroup> known = {
        {1, grp(0, {2, 2})}, {2, grp(1, {6})}, {3, grp(0, {3})},
        {7, grp(1, {2})},    {11, grp(1, {3})}};
    for (const auto& [m, h1] : known) {
        CAPTURE(m);
        LowDegreeHomology low = assemble_low_degree(integral_page(complex_for(m), 2));
        CHECK(low.h1 == h1);
    }
}

TEST_CASE("second homology: graded pieces consistent with the filtered "
          "answer, extension problem flagged") {
    const std::map<long, long> beta1 = {{19, 1}, {43, 2}, {67, 3}, {163, 7}};
    for (const auto& [m, b] : beta1) {
        CAPTURE(m);
        LowDegreeHomology low = assemble_low_degree(integral_page(complex_for(m), 2));
        // filtered value: free part of rank beta1 - 1 plus Z/4 + Z/2 + Z/3
        AbelianGroup target = grp(b - 1, {2, 12});  // invariant factors 2 | 12
        std::vector<AbelianGroup> pieces(low.h2_graded.begin(), low.h2_graded.end());
        CHECK(extension_consistent(pieces, target));
        // the direct sum has the same order but is genuinely ambiguous: the
        // 2-primary part splits across two graded pieces
        CHECK(low.h2_extension_ambiguous);
        CHECK(low.h2_direct_sum.rank == b - 1);
        // a wrong 2-primary arrangement is rejected: (Z/2)^3 + Z/3 needs
        // three cyclic 2-summands but the candidate with Z/8 needs one
        CHECK(!extension_consistent(pieces, grp(b - 1, {24})));
    }
}

TEST_CASE("mod-2 dimensions in degrees three to ten follow the first "
          "Poincare series") {
    // coefficients of -t^3(t^3 - 2t^2 + 2t - 3) / ((t-1)^2 (t^2 + t + 1))
    const std::vector<long> coeff = {0, 0, 0, 3, 1, 3, 5, 3, 5, 7, 5};
    for (long m : {19L, 43L, 67L, 163L}) {
        CAPTURE(m);
        ModHomologyDims d = mod_homology_dims(mod_page(complex_for(m), 2, 10));
        for (long q = 3; q <= 10; ++q) {
            CAPTURE(q);
            CHECK(d.dims[q] == coeff[q]);
        }
        CHECK(d.degeneration_assumed);
    }
}

TEST_CASE("mod-3 dimensions in degrees three to ten follow the second "
          "Poincare series") {
    // coefficients of -t^3(t^2 - t + 2) / ((t-1)(t^2 + 1))
    const std::vector<long> coeff = {0, 0, 0, 2, 1, 0, 1, 2, 1, 0, 1};
    for (long m : {19L, 43L, 67L, 163L}) {
        CAPTURE(m);
        ModHomologyDims d = mod_homology_dims(mod_page(complex_for(m), 3, 10));
        for (long q = 3; q <= 10; ++q) {
            CAPTURE(q);
            CHECK(d.dims[q] == coeff[q]);
        }
    }
}

TEST_CASE("circle-type rings have constant mod-3 dimension two above the "
          "virtual cohomological dimension") {
    for (long m : {2L, 11L}) {
        CAPTURE(m);
        ModHomologyDims d = mod_homology_dims(mod_page(complex_for(m), 3, 10));
        for (long q = 3; q <= 10; ++q) CHECK(d.dims[q] == 2);
    }
}

TEST_CASE("no 5-torsion above the virtual cohomological dimension") {
    for (long m : {1L, 2L, 3L, 7L, 11L, 19L, 43L}) {
        CAPTURE(m);
        ModHomologyDims d = mod_homology_dims(mod_page(complex_for(m), 5, 10));
        for (long q = 3; q <= 10; ++q) CHECK(d.dims[q] == 0);
    }
}

TEST_CASE("universal coefficients tie the mod-ell dimensions to the "
          "integral groups in low degree") {
    for (long m : {2L, 7L, 11L, 19L, 43L}) {
        CAPTURE(m);
        LowDegreeHomology low = assemble_low_degree(integral_page(complex_for(m), 2));
        std::map<long, long> h2_dims;
        for (long ell : {2L, 3L, 5L})
            h2_dims[ell] = mod_homology_dims(mod_page(complex_for(m), ell, 2)).dims[2];
        AbelianGroup h2 = resolve_h2(low, h2_dims);
        for (long ell : {2L, 3L, 5L}) {
            CAPTURE(ell);
            ModHomologyDims d = mod_homology_dims(mod_page(complex_for(m), ell, 2));
            CHECK(d.dims[0] == 1);
            CHECK(d.dims[1] == low.h1.dim_mod(ell) + 0);  // H_0 = Z is free
            CHECK(d.dims[2] == h2.dim_mod(ell) + low.h1.torsion_corank(ell));
        }
    }
}

TEST_CASE("the mod-2 dimension singles out the cyclic extension in H_2") {
    // the graded pieces leave Z/4 + Z/2 versus (Z/2)^3 open; the mod-2 page
    // has dimension 2 in degree two, which only the first candidate matches
    const std::map<long, long> beta1 = {{19, 1}, {43, 2}, {67, 3}, {163, 7}};
    for (const auto& [m, b] : beta1) {
        CAPTURE(m);
        LowDegreeHomology low = assemble_low_degree(integral_page(complex_for(m), 2));
        std::map<long, long> h2_dims;
        for (long ell : {2L, 3L})
            h2_dims[ell] = mod_homology_dims(mod_page(complex_for(m), ell, 2)).dims[2];
        AbelianGroup h2 = resolve_h2(low, h2_dims);
        CHECK(h2 == grp(b - 1, {2, 12}));  // Z^{b-1} + Z/4 + Z/2 + Z/3
    }
}

TEST_CASE("rows above the supports vanish: E^2_{2,q} is zero for positive q "
          "because 2-cells have trivial stabilisers") {
    IntegralPage page = integral_page(complex_for(11), 2);
    for (long q = 1; q <= 2; ++q) {
        CHECK(page.rows[q].gens[2] == 0);
        CHECK(page.rows[q].e2[2].is_trivial());
    }
}

TEST_CASE("mod pages of rings with the same reduced torsion type agree away "
          "from the bottom row") {
    auto tail = [](const ModPage& p) {
        std::vector<std::array<long, 3>> t(p.e2_dims.begin() + 1, p.e2_dims.end());
        return t;
    };
    for (long ell : {2L, 3L}) {
        CAPTURE(ell);
        CHECK(tail(mod_page(complex_for(19), ell, 8)) ==
              tail(mod_page(complex_for(43), ell, 8)));
    }
    CHECK(tail(mod_page(complex_for(2), 3, 8)) == tail(mod_page(complex_for(11), 3, 8)));
}

TEST_CASE("extension certification is sound on hand cases") {
    // 0 -> Z/2 -> Z/4 -> Z/2 -> 0 is a genuine filtration
    CHECK(extension_consistent({grp(0, {2}), grp(0, {2})}, grp(0, {4})));
    CHECK(extension_consistent({grp(0, {2}), grp(0, {2})}, grp(0, {2, 2})));
    // order and rank mismatches are rejected
    CHECK(!extension_consistent({grp(0, {2}), grp(0, {2})}, grp(0, {8})));
    CHECK(!extension_consistent({grp(1, {}), grp(0, {2})}, grp(0, {2})));
    // Z/8 cannot be filtered with three Z/2 pieces in a single cyclic stack?
    // it can (2Z/8Z etc.), while (Z/2)^3 cannot collapse to fewer than three
    CHECK(extension_consistent({grp(0, {2}), grp(0, {2}), grp(0, {2})}, grp(0, {8})));
    CHECK(!extension_consistent({grp(0, {2, 2, 2})}, grp(0, {8})));
}

TEST_CASE("class number two rings are rejected with a clear error") {
    CHECK_THROWS_AS(integral_page(complex_for(5), 1), UnsupportedRing);
    CHECK_THROWS_AS(mod_page(complex_for(5), 2, 1), UnsupportedRing);
}
