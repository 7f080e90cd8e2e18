#include "bianchi/orbit.hpp"

#include <map>
#include <set>

#include "bianchi/snf.hpp"
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

// boundary matrix of the quotient cellular chain complex, dim d -> d-1
IMat quotient_boundary(const OrbitComplex& oc, int d) {
    std::map<long, long> row;
    for (long i : oc.by_dim[d - 1]) row[i] = static_cast<long>(row.size());
    IMat mat(static_cast<long>(oc.by_dim[d - 1].size()),
             static_cast<long>(oc.by_dim[d].size()));
    for (size_t j = 0; j < oc.by_dim[d].size(); ++j)
        for (const auto& t : oc.cells[oc.by_dim[d][j]].boundary)
            mat.at(row.at(t.orbit), static_cast<long>(j)) += t.sign;
    return mat;
}

}  // namespace

TEST_CASE("orbit complexes build and satisfy the structural checks") {
    // construction itself asserts boundary-of-boundary = 0 and that gluing
    // elements conjugate stabilisers into boundary stabilisers
    for (long m : {1L, 2L, 3L, 5L, 7L, 11L}) {
        CAPTURE(m);
        OrbitComplex oc = complex_for(m);
        CHECK(oc.by_dim[0].size() > 0);
        CHECK(oc.by_dim[1].size() > 0);
        CHECK(oc.by_dim[2].size() > 0);
        CHECK(oc.by_dim[3].size() == 1);
        for (const OrbitCell& c : oc.cells) {
            long n = static_cast<long>(c.stab.size());
            CHECK((n == 1 || n == 2 || n == 3 || n == 4 || n == 6 || n == 12));
            CHECK(n == finite_group_order(c.type));
            if (c.dim == 1) CHECK(c.boundary.size() <= 2);
            if (c.dim >= 2) CHECK(c.boundary.size() >= 3);
            if (c.dim >= 2) CHECK(c.stab.size() == 1);
        }
    }
}

TEST_CASE("quotient chain complex computes homology relative to the cusps") {
    // dropping the cusp cells leaves the chain complex of the compactified
    // quotient relative to its cusp points
    for (long m : {1L, 2L, 3L, 7L, 11L}) {
        CAPTURE(m);
        OrbitComplex oc = complex_for(m);
        IMat d1 = quotient_boundary(oc, 1);
        IMat d2 = quotient_boundary(oc, 2);
        IMat d3 = quotient_boundary(oc, 3);
        CHECK((d1 * d2).is_zero());
        CHECK((d2 * d3).is_zero());
        // connected space with a nonempty cusp set: relative H_0 vanishes
        AbelianGroup h0 = cokernel_group(d1.rows, d1);
        CHECK(h0.rank == 0);
        CHECK(h0.torsion.empty());
        // the quotient is orientable, so every face orbit is traversed twice
        // with opposite orientations and the top cell is a relative cycle
        CHECK(d3.is_zero());
    }
}

TEST_CASE("the floor spine is a closed 2-dimensional subcomplex") {
    for (long m : {1L, 2L, 3L, 5L, 7L, 11L}) {
        CAPTURE(m);
        OrbitComplex oc = complex_for(m);
        long spine_faces = 0;
        for (const OrbitCell& c : oc.cells) {
            if (!c.in_spine) continue;
            CHECK(c.dim <= 2);
            if (c.dim == 2) ++spine_faces;
            // closed under taking boundaries
            for (const auto& t : c.boundary) CHECK(oc.cells[t.orbit].in_spine);
            // cocompact: no ideal vertices on the spine (the singular points of
            // a nontrivial class group are the only exception)
            if (m != 5) CHECK(!c.on_cusp);
        }
        CHECK(spine_faces > 0);
        // connected quotient: H_0 of the spine part of the chain complex is Z
        std::map<long, long> row;
        long nv = 0, ne = 0;
        for (long i : oc.by_dim[0])
            if (oc.cells[i].in_spine) row[i] = nv++;
        for (long i : oc.by_dim[1])
            if (oc.cells[i].in_spine) ++ne;
        IMat d1(nv, ne);
        long col = 0;
        for (long i : oc.by_dim[1]) {
            if (!oc.cells[i].in_spine) continue;
            for (const auto& t : oc.cells[i].boundary) d1.at(row.at(t.orbit), col) += t.sign;
            ++col;
        }
        AbelianGroup h0 = cokernel_group(nv, d1);
        // with singular points (class number two) the spine complex is
        // relative to those cusps and the H_0 class is killed
        CHECK(h0.rank == (m == 5 ? 0 : 1));
        CHECK(h0.torsion.empty());
    }
}

TEST_CASE("nontrivial stabilisers occur in every Bianchi orbit space") {
    for (long m : {1L, 2L, 3L, 7L, 11L}) {
        CAPTURE(m);
        OrbitComplex oc = complex_for(m);
        bool vertex_torsion = false, edge_torsion = false;
        for (long i : oc.by_dim[0])
            if (oc.cells[i].stab.size() > 1) vertex_torsion = true;
        for (long i : oc.by_dim[1])
            if (oc.cells[i].stab.size() > 1) edge_torsion = true;
        CHECK(vertex_torsion);
        CHECK(edge_torsion);
    }
}

TEST_CASE("edge stabilisers are cyclic and fix the edge pointwise") {
    for (long m : {1L, 2L, 3L, 5L}) {
        OrbitComplex oc = complex_for(m);
        for (long i : oc.by_dim[1]) {
            const OrbitCell& e = oc.cells[i];
            CHECK((e.type == FiniteGroupType::trivial || e.type == FiniteGroupType::c2 ||
                   e.type == FiniteGroupType::c3));
            // pointwise: every stabiliser element restricts to the identity on
            // the boundary cells (sign structure untouched)
            for (const auto& t : e.boundary) {
                std::set<GroupElement> st(oc.cells[t.orbit].stab.begin(),
                                          oc.cells[t.orbit].stab.end());
                for (const GroupElement& h : e.stab)
                    CHECK(st.count(t.g.inverse() * h * t.g) == 1);
            }
        }
    }
}

TEST_CASE("singular points appear as half-open cells for class number two") {
    OrbitComplex oc5 = complex_for(5);
    bool has_cusp_edge = false;
    for (long i : oc5.by_dim[1])
        if (oc5.cells[i].on_cusp) has_cusp_edge = true;
    CHECK(has_cusp_edge);

    OrbitComplex oc1 = complex_for(1);
    long cusp_edges = 0;
    for (long i : oc1.by_dim[1])
        if (oc1.cells[i].on_cusp) ++cusp_edges;
    CHECK(cusp_edges >= 1);  // the vertical edges toward infinity
}

TEST_CASE("linear-model preimages of the six types") {
    CHECK(std::string(linear_preimage_name(FiniteGroupType::trivial)) == "Z/2");
    CHECK(std::string(linear_preimage_name(FiniteGroupType::c2)) == "Z/4");
    CHECK(std::string(linear_preimage_name(FiniteGroupType::c3)) == "Z/6");
    CHECK(std::string(linear_preimage_name(FiniteGroupType::v4)) == "Q8");
    CHECK(std::string(linear_preimage_name(FiniteGroupType::s3)) == "Dic3");
    CHECK(std::string(linear_preimage_name(FiniteGroupType::a4)) == "2T");
}

TEST_CASE("SL2 lifts have the expected element orders") {
    // the preimage of a projective stabiliser contains -1 and doubles the
    // order; its isomorphism type is pinned by the element orders
    OrbitComplex oc = complex_for(3);
    for (long i : oc.by_dim[0]) {
        const OrbitCell& v = oc.cells[i];
        std::multiset<int> orders;
        for (const GroupElement& g : v.stab) {
            GroupElement lift(g.a, g.b, g.c, g.d, false);
            GroupElement neg(-g.a, -g.b, -g.c, -g.d, false);
            orders.insert(lift.order());
            orders.insert(neg.order());
        }
        // exactly one identity and exactly one element of order 2 (that is -1):
        // the lift has a unique involution, as in Z/4, Q8, Dic3, 2T
        CHECK(std::count(orders.begin(), orders.end(), 1) == 1);
        CHECK(std::count(orders.begin(), orders.end(), 2) == 1);
    }
}

TEST_CASE("orbit complex JSON is deterministic") {
    FundamentalPolyhedron P = floor_decomposition(make_ring(2));
    face_pairings(P);
    std::string a = orbit_complex_json(build_orbit_complex(P));
    std::string b = orbit_complex_json(build_orbit_complex(P));
    CHECK(a == b);
    CHECK(a.find("\"stabiliser\"") != std::string::npos);
}
