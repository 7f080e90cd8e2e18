#pragma once

#include <cstdint>
#include <vector>

#include "bianchi/groupres.hpp"

namespace bianchi {

/// Dense matrix over the prime field F_p, entries reduced to [0, p).
struct FMat {
    long rows = 0, cols = 0;
    long p = 2;
    std::vector<int64_t> e;

    FMat() = default;
    FMat(long r, long c, long prime)
        : rows(r), cols(c), p(prime), e(static_cast<size_t>(r) * c, 0) {}

    static FMat identity(long n, long prime);

    int64_t& at(long i, long j) { return e[static_cast<size_t>(i) * cols + j]; }
    const int64_t& at(long i, long j) const { return e[static_cast<size_t>(i) * cols + j]; }

    FMat operator*(const FMat& o) const;
    bool is_zero() const;
};

long f_rank(FMat m);

/// Basis of the kernel, as matrix columns.
FMat f_kernel_basis(const FMat& m);

/// Row-reduced form of a matrix kept for repeated solves m x = b.
struct FSolver {
    FMat re;                  // row echelon form of m
    FMat t;                   // re = t * m
    std::vector<long> pivot;  // pivot column of each nonzero row of re
    long p = 2;

    FSolver() = default;
    explicit FSolver(const FMat& m);
    bool solve(const std::vector<int64_t>& b, std::vector<int64_t>& x) const;
};

/// Incrementally maintained subspace of F_p^n (row echelon rows).
struct FSpan {
    long n = 0;
    long p = 2;
    std::vector<std::vector<int64_t>> rows;  // echelon rows, pivot normalised to 1
    std::vector<long> pivot;

    FSpan() = default;
    FSpan(long dim_ambient, long prime) : n(dim_ambient), p(prime) {}
    long dim() const { return static_cast<long>(rows.size()); }
    /// Reduce v against the span; returns true (and absorbs the remainder)
    /// when v enlarged the span, false when v was already contained.
    bool add(std::vector<int64_t> v);
    bool contains(std::vector<int64_t> v) const;
};

/// Free resolution of the trivial module over the group algebra F_p[G],
/// with the same coordinate layout as the integral Resolution.
struct ModResolution {
    ConcreteGroup G;
    long p = 2;
    std::vector<long> ranks;
    std::vector<std::vector<std::vector<int64_t>>> gen_image;

    int top_degree() const { return static_cast<int>(ranks.size()) - 1; }
    FMat full_boundary(int n) const;
    FMat coinvariant_boundary(int n) const;
};

ModResolution build_mod_resolution(const ConcreteGroup& G, long p, int max_degree);

/// dim_{F_p} H_q(G; F_p) from the resolution (requires q < top_degree()).
long mod_homology_dim(const ModResolution& R, int q);

/// H_q(G; F_p) on a fixed basis: cycles holds a kernel basis of the degree-q
/// coinvariant boundary; quotient coordinates are the cycle coordinates not
/// eliminated by the boundary subspace.
struct ModHomologyBasis {
    FMat cycles;
    FSpan boundaries;             // in cycle coordinates
    std::vector<long> free_coor;  // cycle coordinates surviving in the quotient
    long p = 2;

    long dim() const { return static_cast<long>(free_coor.size()); }
    /// Quotient coordinates of a vector given in cycle coordinates.
    std::vector<int64_t> reduce(std::vector<int64_t> v) const;
};

ModHomologyBasis mod_homology_basis(const ModResolution& R, int q);

/// Matrix of H_q(phi; F_p) on the quotient bases of the two presentations.
FMat induced_mod_homology_matrix(const ModResolution& RH, const ModResolution& RG,
                                 const std::vector<int>& phi, int q);

}  // namespace bianchi
