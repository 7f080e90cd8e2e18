#include "bianchi/bredon.hpp"

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

// a cell orbit with the requested stabiliser type, as a concrete group
ConcreteGroup group_of_type(FiniteGroupType t) {
    const std::map<FiniteGroupType, long> host = {
        {FiniteGroupType::trivial, 1}, {FiniteGroupType::c2, 5},
        {FiniteGroupType::c3, 1},      {FiniteGroupType::v4, 1},
        {FiniteGroupType::s3, 3},      {FiniteGroupType::a4, 2}};
    OrbitComplex oc = complex_for(host.at(t));
    for (int d = 0; d <= 1; ++d)
        for (long c : oc.by_dim[d])
            if (oc.cells[c].type == t) return make_concrete_group(oc.cells[c].stab);
    // the C3 and V4 types sit inside larger stabilisers of the host complex
    for (long c : oc.by_dim[0]) {
        ConcreteGroup full = make_concrete_group(oc.cells[c].stab);
        if (t == FiniteGroupType::c3 && full.type == FiniteGroupType::s3) {
            std::vector<GroupElement> sub;
            for (int i = 0; i < full.order(); ++i) {
                int x = i;
                long o = 1;
                while (x != 0) x = full.mult[x][i], ++o;
                if (o != 2) sub.push_back(full.elems[i]);
            }
            return make_concrete_group(sub);
        }
        if (t == FiniteGroupType::v4 && full.type == FiniteGroupType::a4) {
            std::vector<GroupElement> sub;
            for (int i = 0; i < full.order(); ++i) {
                int x = i;
                long o = 1;
                while (x != 0) x = full.mult[x][i], ++o;
                if (o <= 2) sub.push_back(full.elems[i]);
            }
            return make_concrete_group(sub);
        }
    }
    throw UnknownType("no cell with the requested stabiliser type");
}

AbelianGroup grp(long rank, std::vector<long> tors) {
    AbelianGroup g;
    g.rank = rank;
    for (long t : tors) g.torsion.push_back(Int(t));
    return g;
}

std::vector<int> identity_hom(const ConcreteGroup& G) {
    std::vector<int> phi(G.order());
    for (size_t i = 0; i < phi.size(); ++i) phi[i] = static_cast<int>(i);
    return phi;
}

}  // namespace

TEST_CASE("character tables carry the expected irreducible counts and "
          "verified orthogonality") {
    const std::map<FiniteGroupType, long> count = {
        {FiniteGroupType::trivial, 1}, {FiniteGroupType::c2, 2},
        {FiniteGroupType::c3, 3},      {FiniteGroupType::v4, 4},
        {FiniteGroupType::s3, 3},      {FiniteGroupType::a4, 4}};
    for (const auto& [t, n] : count) {
        CharacterTable tab = character_table(group_of_type(t));
        CHECK(tab.irreducibles() == n);  // orthogonality checked on build
    }
}

TEST_CASE("cube roots of unity appear exactly on the order-3 classes") {
    CharacterTable tab = character_table(group_of_type(FiniteGroupType::a4));
    long with_omega = 0;
    for (const auto& row : tab.chi)
        for (const Cyc& v : row)
            if (v.b != 0) ++with_omega;
    CHECK(with_omega == 16);  // two linear rows, eight order-3 elements each
    // the 3-dimensional character is rational
    CHECK(tab.chi[3][0] == Cyc{3, 0});
    for (const Cyc& v : tab.chi[3]) CHECK(v.b == 0);
}

TEST_CASE("induction along the identity is the identity matrix") {
    for (FiniteGroupType t : {FiniteGroupType::c2, FiniteGroupType::c3,
                              FiniteGroupType::v4, FiniteGroupType::s3,
                              FiniteGroupType::a4}) {
        ConcreteGroup G = group_of_type(t);
        CharacterTable tab = character_table(G);
        CHECK(induction_matrix(tab, tab, identity_hom(G)) ==
              IMat::identity(tab.irreducibles()));
    }
}

TEST_CASE("induction from the trivial group gives the regular representation") {
    ConcreteGroup E = group_of_type(FiniteGroupType::trivial);
    CharacterTable te = character_table(E);
    for (FiniteGroupType t : {FiniteGroupType::c2, FiniteGroupType::s3,
                              FiniteGroupType::a4}) {
        ConcreteGroup G = group_of_type(t);
        CharacterTable tg = character_table(G);
        std::vector<int> phi = {0};
        IMat col = induction_matrix(te, tg, phi);
        for (long i = 0; i < col.rows; ++i)
            CHECK(col.at(i, 0) == tg.chi[i][0].a);  // multiplicity = degree
    }
}

TEST_CASE("induction is transitive through a chain of subgroups") {
    // C2 inside V4 inside A4, taken inside one concrete A4 stabiliser
    ConcreteGroup A = group_of_type(FiniteGroupType::a4);
    std::vector<GroupElement> v4_elems, c2_elems;
    for (int i = 0; i < A.order(); ++i) {
        int x = i;
        long o = 1;
        while (x != 0) x = A.mult[x][i], ++o;
        if (o <= 2) v4_elems.push_back(A.elems[i]);
    }
    ConcreteGroup V = make_concrete_group(v4_elems);
    c2_elems = {V.elems[0], V.elems[1]};
    ConcreteGroup C = make_concrete_group(c2_elems);

    CharacterTable ta = character_table(A), tv = character_table(V),
                   tc = character_table(C);
    auto embed = [](const ConcreteGroup& H, const ConcreteGroup& G) {
        std::vector<int> phi(H.order());
        for (int i = 0; i < H.order(); ++i) phi[i] = G.index_of(H.elems[i]);
        return phi;
    };
    IMat via_v4 = induction_matrix(tv, ta, embed(V, A)) *
                  induction_matrix(tc, tv, embed(C, V));
    CHECK(via_v4 == induction_matrix(tc, ta, embed(C, A)));
}

TEST_CASE("module ranks count irreducibles over the spine orbits") {
    for (long m : {2L, 11L}) {
        CAPTURE(m);
        OrbitComplex oc = complex_for(m);
        BredonComplex B = build_bredon_complex(oc);
        for (int p = 0; p <= 2; ++p) {
            long total = 0;
            for (long c : B.cells[p])
                total += character_table(make_concrete_group(oc.cells[c].stab))
                             .irreducibles();
            CHECK(B.dims[p] == total);
        }
        CHECK((B.d1 * B.d2).is_zero());
    }
}

TEST_CASE("equivariant K-homology matches the reference values over every "
          "principal ideal domain ring") {
    struct Row {
        long m;
        AbelianGroup k0, k1;
    };
    const std::vector<Row> table = {
        {1, grp(6, {}), grp(1, {})},     {2, grp(5, {2}), grp(3, {})},
        {3, grp(5, {2}), grp(0, {})},    {7, grp(3, {}), grp(3, {})},
        {11, grp(4, {2}), grp(3, {})},   {19, grp(3, {2}), grp(2, {})},
        {43, grp(4, {2}), grp(3, {})},   {67, grp(5, {2}), grp(4, {})},
        {163, grp(9, {2}), grp(8, {})}};
    for (const Row& row : table) {
        CAPTURE(row.m);
        KHomologyResult K = k_homology_assembly(build_bredon_complex(complex_for(row.m)));
        CHECK(K.k0 == row.k0);
        CHECK(K.k1 == row.k1);
        CHECK(!K.split_assumed);  // degree-2 Bredon homology came out free
    }
}

TEST_CASE("degree-0 Bredon homology rank equals the free rank of K_0") {
    for (long m : {1L, 7L, 19L}) {
        CAPTURE(m);
        BredonComplex B = build_bredon_complex(complex_for(m));
        AbelianGroup h0 = bredon_homology(B, 0);
        AbelianGroup h2 = bredon_homology(B, 2);
        KHomologyResult K = k_homology_assembly(B);
        CHECK(h0.rank + h2.rank == K.k0.rank);
        CHECK(bredon_homology(B, 3).is_trivial());
    }
}

TEST_CASE("class number two rings are rejected with a clear error") {
    CHECK_THROWS_AS(build_bredon_complex(complex_for(5)), UnsupportedRing);
}
