#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "bianchi/errors.hpp"

namespace bianchi {

using Int = mpz_class;

/// Dense integer matrix, row-major.
struct IMat {
    long rows = 0, cols = 0;
    std::vector<Int> e;

    IMat() = default;
    IMat(long r, long c) : rows(r), cols(c), e(static_cast<size_t>(r) * c, Int(0)) {}

    static IMat identity(long n);

    Int& at(long i, long j) { return e[static_cast<size_t>(i) * cols + j]; }
    const Int& at(long i, long j) const { return e[static_cast<size_t>(i) * cols + j]; }

    IMat operator*(const IMat& o) const;
    IMat transpose() const;
    bool is_zero() const;
    bool operator==(const IMat& o) const { return rows == o.rows && cols == o.cols && e == o.e; }

    std::string str() const;
};

/// D = U * M * V with U, V unimodular and D diagonal with d1 | d2 | ...
struct SnfResult {
    IMat u, d, v;
};

SnfResult smith_normal_form(const IMat& m);

/// Diagonal of the Smith form (nonzero entries, with divisibility chain).
std::vector<Int> elementary_divisors(const IMat& m);

long rank(const IMat& m);

/// Basis of the integer kernel of m, as matrix columns.
IMat kernel_basis(const IMat& m);

/// Solve m x = b over the integers. Returns false when no integral solution.
bool solve_integer(const IMat& m, const std::vector<Int>& b, std::vector<Int>& x);

/// Factored form of a linear system, for many solves against one matrix.
struct SolvedSystem {
    SnfResult s;
    long rows = 0, cols = 0, rnk = 0;

    SolvedSystem() = default;
    explicit SolvedSystem(const IMat& m);
    bool solve(const std::vector<Int>& b, std::vector<Int>& x) const;
};

/// Basis (as columns) of the lattice spanned by the columns of gens.
IMat column_lattice_basis(const IMat& gens);

/// Finitely generated abelian group in normal form.
struct AbelianGroup {
    long rank = 0;
    std::vector<Int> torsion;  // invariant factors d1 | d2 | ..., each >= 2

    bool is_trivial() const { return rank == 0 && torsion.empty(); }
    bool operator==(const AbelianGroup&) const = default;

    AbelianGroup primary_part(long ell) const;  // rank dropped, ell-power factors only
    long dim_mod(long ell) const;               // dim of G (x) F_ell
    long torsion_corank(long ell) const;        // number of factors divisible by ell

    AbelianGroup direct_sum(const AbelianGroup& o) const;

    std::string str() const;  // e.g. "Z^2 + Z/4 + Z/2"
};

/// Z^n modulo the columns of rels.
AbelianGroup cokernel_group(long n, const IMat& rels);

/// ker(d_out) / im(d_in) for consecutive boundary maps of a free complex.
/// Throws BoundaryCheckFailed when d_out * d_in != 0.
AbelianGroup subquotient_group(const IMat& d_out, const IMat& d_in);

/// Homology at B of  A --g--> B --f--> C  in the category of finitely
/// presented abelian groups: B = Z^{f.cols} mod columns of rel_b, C = Z^{f.rows}
/// mod columns of rel_c. rel_* may be empty (free groups).
AbelianGroup fp_homology(const IMat& f, const IMat& rel_c, const IMat& g, const IMat& rel_b);

}  // namespace bianchi
