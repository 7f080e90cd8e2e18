#include "bianchi/snf.hpp"

#include <random>

#include "doctest.h"

using namespace bianchi;

namespace {

IMat from_rows(std::vector<std::vector<long>> rows) {
    IMat m(static_cast<long>(rows.size()), rows.empty() ? 0 : static_cast<long>(rows[0].size()));
    for (long i = 0; i < m.rows; ++i)
        for (long j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
    return m;
}

Int det_expansion(const IMat& m, std::vector<long> rows, std::vector<long> cols) {
    if (rows.empty()) return 1;
    Int acc = 0;
    int sign = 1;
    for (size_t k = 0; k < rows.size(); ++k) {
        std::vector<long> sub_rows(rows.begin() + 1, rows.end());
        std::vector<long> sub_cols;
        for (size_t j = 0; j < cols.size(); ++j)
            if (j != k) sub_cols.push_back(cols[j]);
        acc += sign * m.at(rows[0], cols[k]) * det_expansion(m, sub_rows, sub_cols);
        sign = -sign;
    }
    return acc;
}

Int det(const IMat& m) {
    std::vector<long> idx;
    for (long i = 0; i < m.rows; ++i) idx.push_back(i);
    return det_expansion(m, idx, idx);
}

}  // namespace

TEST_CASE("SNF of simple matrices") {
    CHECK(elementary_divisors(IMat::identity(4)) == std::vector<Int>{1, 1, 1, 1});
    // diag(2,3) -> diag(1,6), checked by hand row/column reduction
    IMat m = from_rows({{2, 0}, {0, 3}});
    CHECK(elementary_divisors(m) == std::vector<Int>{1, 6});
    IMat z(3, 5);
    CHECK(elementary_divisors(z).empty());
}

TEST_CASE("SNF properties on random matrices") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<long> dim(1, 30), entry(-9, 9);
    for (int it = 0; it < 1000; ++it) {
        long r = dim(rng), c = dim(rng);
        IMat m(r, c);
        for (auto& x : m.e) x = entry(rng);
        SnfResult s = smith_normal_form(m);
        // d = u m v
        CHECK(s.d == s.u * m * s.v);
        // diagonal with divisibility chain
        Int prev = 0;
        for (long i = 0; i < r; ++i)
            for (long j = 0; j < c; ++j) {
                if (i != j) CHECK(s.d.at(i, j) == 0);
            }
        for (long t = 0; t < std::min(r, c); ++t) {
            const Int& dt = s.d.at(t, t);
            CHECK(dt >= 0);
            if (prev != 0) {
                if (dt != 0)
                    CHECK(dt % prev == 0);
            }
            prev = dt;
        }
        if (it % 25 == 0 && r <= 7 && c <= 7) {
            // unimodularity, by cofactor-expansion determinant
            Int du = det(s.u), dv = det(s.v);
            CHECK((du == 1 || du == -1));
            CHECK((dv == 1 || dv == -1));
            if (r == c) {
                Int dm = det(m);
                Int dd = det(s.d);
                CHECK(abs(dm) == dd);
            }
        }
    }
}

TEST_CASE("kernel and solve") {
    IMat m = from_rows({{1, 2, 3}, {2, 4, 6}});
    IMat k = kernel_basis(m);
    CHECK(k.cols == 2);
    CHECK((m * k).is_zero());

    std::vector<Int> b{Int(3), Int(6)};
    std::vector<Int> x;
    CHECK(solve_integer(m, b, x));
    Int r0 = m.at(0, 0) * x[0] + m.at(0, 1) * x[1] + m.at(0, 2) * x[2];
    CHECK(r0 == 3);
    std::vector<Int> bad{Int(1), Int(1)};
    CHECK(!solve_integer(m, bad, x));
}

TEST_CASE("chain homology of graph complexes") {
    // circle: 3 vertices, 3 edges in a cycle
    IMat d1 = from_rows({{-1, 0, 1}, {1, -1, 0}, {0, 1, -1}});
    AbelianGroup h1c = fp_homology(d1, IMat(), IMat(3, 0), IMat());
    CHECK(h1c.rank == 1);
    CHECK(h1c.torsion.empty());
    AbelianGroup h0c = subquotient_group(IMat(0, 3), d1);
    CHECK(h0c.rank == 1);
    CHECK(h0c.torsion.empty());

    // interval: 2 vertices, 1 edge
    IMat e1 = from_rows({{-1}, {1}});
    AbelianGroup h1i = fp_homology(e1, IMat(), IMat(1, 0), IMat());
    CHECK(h1i.is_trivial());
    AbelianGroup h0i = subquotient_group(IMat(0, 2), e1);
    CHECK(h0i.rank == 1);

    // 2-sphere as two hemispheres glued over the circle equator:
    // each face boundary is the equator cycle, with opposite signs
    IMat sphere_d2 = from_rows({{1, -1}, {1, -1}, {1, -1}});
    CHECK((d1 * sphere_d2).is_zero());
    AbelianGroup h2s = fp_homology(sphere_d2, IMat(), IMat(2, 0), IMat());
    CHECK(h2s.rank == 1);  // H_2(S^2) = Z
    CHECK(h2s.torsion.empty());
    AbelianGroup h1s = fp_homology(d1, IMat(), sphere_d2, IMat());
    CHECK(h1s.is_trivial());
}

TEST_CASE("cokernel and fp groups") {
    AbelianGroup g = cokernel_group(2, from_rows({{2, 0}, {0, 3}}));
    CHECK(g.rank == 0);
    CHECK(g.torsion == std::vector<Int>{6});
    CHECK(g.str() == "Z/6");
    CHECK(g.dim_mod(2) == 1);
    CHECK(g.dim_mod(5) == 0);

    AbelianGroup z2;
    z2.torsion = {2};
    AbelianGroup s = g.direct_sum(z2);
    CHECK(s.torsion == std::vector<Int>{2, 6});
    CHECK(s.primary_part(3).torsion == std::vector<Int>{3});
}

TEST_CASE("fp homology with torsion ambient groups") {
    // Z/4 --x2--> Z/4 --x2--> Z/4: the kernel {0,2} equals the image, so the
    // middle homology vanishes
    IMat two = from_rows({{2}});
    IMat four = from_rows({{4}});
    AbelianGroup h = fp_homology(two, four, two, four);
    CHECK(h.is_trivial());

    // 0 --> Z/4 --mod 2--> Z/2: kernel {0,2} with no incoming image is Z/2
    IMat one = from_rows({{1}});
    AbelianGroup h2 = fp_homology(one, two, IMat(1, 0), four);
    CHECK(h2.rank == 0);
    CHECK(h2.torsion == std::vector<Int>{2});
}
