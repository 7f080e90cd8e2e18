#include "bianchi/snf.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace bianchi {

IMat IMat::identity(long n) {
    IMat m(n, n);
    for (long i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IMat IMat::operator*(const IMat& o) const {
    assert(cols == o.rows);
    IMat r(rows, o.cols);
    for (long i = 0; i < rows; ++i)
        for (long k = 0; k < cols; ++k) {
            const Int& x = at(i, k);
            if (x == 0) continue;
            for (long j = 0; j < o.cols; ++j) r.at(i, j) += x * o.at(k, j);
        }
    return r;
}

IMat IMat::transpose() const {
    IMat r(cols, rows);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) r.at(j, i) = at(i, j);
    return r;
}

bool IMat::is_zero() const {
    for (const Int& x : e)
        if (x != 0) return false;
    return true;
}

std::string IMat::str() const {
    std::ostringstream os;
    for (long i = 0; i < rows; ++i) {
        os << (i == 0 ? "[" : " ");
        for (long j = 0; j < cols; ++j) os << at(i, j).get_str() << (j + 1 < cols ? " " : "");
        os << (i + 1 < rows ? ";\n" : "]");
    }
    return os.str();
}

namespace {

void row_op(IMat& m, long dst, long src, const Int& q) {  // row dst -= q * row src
    for (long j = 0; j < m.cols; ++j) m.at(dst, j) -= q * m.at(src, j);
}
void col_op(IMat& m, long dst, long src, const Int& q) {
    for (long i = 0; i < m.rows; ++i) m.at(i, dst) -= q * m.at(i, src);
}
void row_swap(IMat& m, long i, long j) {
    for (long k = 0; k < m.cols; ++k) std::swap(m.at(i, k), m.at(j, k));
}
void col_swap(IMat& m, long i, long j) {
    for (long k = 0; k < m.rows; ++k) std::swap(m.at(k, i), m.at(k, j));
}
void row_neg(IMat& m, long i) {
    for (long k = 0; k < m.cols; ++k) m.at(i, k) = -m.at(i, k);
}

}  // namespace

SnfResult smith_normal_form(const IMat& input) {
    IMat d = input;
    IMat u = IMat::identity(d.rows);
    IMat v = IMat::identity(d.cols);
    long n = std::min(d.rows, d.cols);

    // quotient rounded to nearest, so remainders stay in [-|p|/2, |p|/2]
    auto near_q = [](const Int& a, const Int& p) {
        Int q, r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
        if (2 * r > abs(p)) q += (p > 0 ? 1 : -1);
        return q;
    };

    // nonzero counts of the active block, kept incrementally per pivot step
    std::vector<long> rcount(d.rows, 0), ccount(d.cols, 0);
    auto recount = [&](long t) {
        std::fill(rcount.begin(), rcount.end(), 0);
        std::fill(ccount.begin(), ccount.end(), 0);
        for (long i = t; i < d.rows; ++i)
            for (long j = t; j < d.cols; ++j)
                if (d.at(i, j) != 0) {
                    ++rcount[i];
                    ++ccount[j];
                }
    };

    for (long t = 0; t < n; ++t) {
        for (;;) {
            // pivot choice: prefer unit entries (no coefficient growth, no
            // divisibility sweeps) with least fill-in; otherwise fall back to
            // the smallest-magnitude entry
            recount(t);
            long pi = -1, pj = -1;
            long best_fill = -1;
            for (long i = t; i < d.rows; ++i)
                for (long j = t; j < d.cols; ++j) {
                    const Int& x = d.at(i, j);
                    if (x == 0) continue;
                    if (mpz_cmpabs_ui(x.get_mpz_t(), 1) == 0) {
                        long fill = (rcount[i] - 1) * (ccount[j] - 1);
                        if (best_fill < 0 || fill < best_fill) {
                            best_fill = fill;
                            pi = i;
                            pj = j;
                        }
                    } else if (best_fill < 0) {
                        if (pi < 0 ||
                            mpz_cmpabs(x.get_mpz_t(), d.at(pi, pj).get_mpz_t()) < 0) {
                            pi = i;
                            pj = j;
                        }
                    }
                }
            if (pi < 0) break;
            if (pi != t) {
                row_swap(d, pi, t);
                row_swap(u, pi, t);
            }
            if (pj != t) {
                col_swap(d, pj, t);
                col_swap(v, pj, t);
            }

            bool unit = mpz_cmpabs_ui(d.at(t, t).get_mpz_t(), 1) == 0;
            bool done = true;
            for (long i = t + 1; i < d.rows; ++i) {
                if (d.at(i, t) == 0) continue;
                Int q = near_q(d.at(i, t), d.at(t, t));
                row_op(d, i, t, q);
                row_op(u, i, t, q);
                if (d.at(i, t) != 0) done = false;
            }
            for (long j = t + 1; j < d.cols; ++j) {
                if (d.at(t, j) == 0) continue;
                Int q = near_q(d.at(t, j), d.at(t, t));
                col_op(d, j, t, q);
                col_op(v, j, t, q);
                if (d.at(t, j) != 0) done = false;
            }
            if (!done) continue;
            if (unit) break;  // a unit divides everything
            // enforce divisibility of the trailing block by the pivot
            for (long i = t + 1; i < d.rows && done; ++i)
                for (long j = t + 1; j < d.cols && done; ++j) {
                    if (d.at(i, j) % d.at(t, t) != 0) {
                        row_op(d, t, i, Int(-1));  // add row i to row t
                        row_op(u, t, i, Int(-1));
                        done = false;
                    }
                }
            if (done) break;
        }
        if (t < std::min(d.rows, d.cols) && d.at(t, t) < 0) {
            row_neg(d, t);
            row_neg(u, t);
        }
    }
    // unit pivots skip the divisibility sweep, so restore the global chain
    std::vector<Int> diag;
    for (long t = 0; t < n && d.at(t, t) != 0; ++t) diag.push_back(d.at(t, t));
    bool chain_ok = true;
    for (size_t i = 1; i < diag.size(); ++i)
        if (diag[i] % diag[i - 1] != 0) chain_ok = false;
    if (!chain_ok) {
        // pairwise fix-up: couple diag positions a < b with row a += row b,
        // then run the Euclidean 2x2 elimination on the block; the result is
        // diag(gcd, +-lcm). Repeat passes until the whole chain divides.
        long r = static_cast<long>(diag.size());
        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (long a = 0; a + 1 < r; ++a) {
                long b = a + 1;
                if (d.at(b, b) % d.at(a, a) == 0) continue;
                dirty = true;
                row_op(d, a, b, Int(-1));
                row_op(u, a, b, Int(-1));
                for (;;) {
                    // Euclid on the 2x2 block at (a,b)
                    if (d.at(a, b) != 0) {
                        Int q = near_q(d.at(a, b), d.at(a, a));
                        col_op(d, b, a, q);
                        col_op(v, b, a, q);
                    }
                    if (d.at(b, a) != 0) {
                        Int q = near_q(d.at(b, a), d.at(a, a));
                        row_op(d, b, a, q);
                        row_op(u, b, a, q);
                    }
                    if (d.at(a, b) == 0 && d.at(b, a) == 0) break;
                    // move the smallest nonzero into the corner
                    long mi = a, mj = a;
                    for (long i : {a, b})
                        for (long j : {a, b}) {
                            if (d.at(i, j) == 0) continue;
                            if (d.at(mi, mj) == 0 ||
                                mpz_cmpabs(d.at(i, j).get_mpz_t(), d.at(mi, mj).get_mpz_t()) < 0) {
                                mi = i;
                                mj = j;
                            }
                        }
                    if (mi != a) {
                        row_swap(d, a, b);
                        row_swap(u, a, b);
                    }
                    if (mj != a) {
                        col_swap(d, a, b);
                        col_swap(v, a, b);
                    }
                }
                if (d.at(a, a) < 0) {
                    row_neg(d, a);
                    row_neg(u, a);
                }
                if (d.at(b, b) < 0) {
                    row_neg(d, b);
                    row_neg(u, b);
                }
            }
        }
    }
    return {std::move(u), std::move(d), std::move(v)};
}

std::vector<Int> elementary_divisors(const IMat& m) {
    SnfResult s = smith_normal_form(m);
    std::vector<Int> out;
    long n = std::min(m.rows, m.cols);
    for (long t = 0; t < n; ++t)
        if (s.d.at(t, t) != 0) out.push_back(s.d.at(t, t));
    return out;
}

long rank(const IMat& m) { return static_cast<long>(elementary_divisors(m).size()); }

IMat kernel_basis(const IMat& m) {
    if (m.rows == 0) return IMat::identity(m.cols);
    SnfResult s = smith_normal_form(m);
    long r = 0;
    long n = std::min(m.rows, m.cols);
    while (r < n && s.d.at(r, r) != 0) ++r;
    IMat k(m.cols, m.cols - r);
    for (long j = r; j < m.cols; ++j)
        for (long i = 0; i < m.cols; ++i) k.at(i, j - r) = s.v.at(i, j);
    return k;
}

SolvedSystem::SolvedSystem(const IMat& m)
    : s(smith_normal_form(m)), rows(m.rows), cols(m.cols) {
    long n = std::min(rows, cols);
    while (rnk < n && s.d.at(rnk, rnk) != 0) ++rnk;
}

bool SolvedSystem::solve(const std::vector<Int>& b, std::vector<Int>& x) const {
    assert(static_cast<long>(b.size()) == rows);
    std::vector<Int> ub(rows, Int(0));
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < rows; ++j)
            if (s.u.at(i, j) != 0 && b[j] != 0) ub[i] += s.u.at(i, j) * b[j];
    std::vector<Int> y(cols, Int(0));
    long n = std::min(rows, cols);
    for (long i = 0; i < rows; ++i) {
        Int di = (i < n) ? s.d.at(i, i) : Int(0);
        if (di == 0) {
            if (ub[i] != 0) return false;
        } else {
            if (ub[i] % di != 0) return false;
            y[i] = ub[i] / di;
        }
    }
    x.assign(cols, Int(0));
    for (long i = 0; i < cols; ++i)
        for (long j = 0; j < cols; ++j)
            if (s.v.at(i, j) != 0 && y[j] != 0) x[i] += s.v.at(i, j) * y[j];
    return true;
}

bool solve_integer(const IMat& m, const std::vector<Int>& b, std::vector<Int>& x) {
    return SolvedSystem(m).solve(b, x);
}

IMat column_lattice_basis(const IMat& gens) {
    IMat w = gens;
    long pivot_col = 0;
    for (long i = 0; i < w.rows && pivot_col < w.cols; ++i) {
        // gcd-combine columns so that at most one has a nonzero in row i
        long p = -1;
        for (long j = pivot_col; j < w.cols; ++j) {
            if (w.at(i, j) == 0) continue;
            if (p < 0) {
                p = j;
                continue;
            }
            Int g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), w.at(i, p).get_mpz_t(),
                       w.at(i, j).get_mpz_t());
            Int cp = w.at(i, p) / g, cj = w.at(i, j) / g;
            for (long r = 0; r < w.rows; ++r) {
                Int np = s * w.at(r, p) + t * w.at(r, j);
                Int nj = -cj * w.at(r, p) + cp * w.at(r, j);
                w.at(r, p) = np;
                w.at(r, j) = nj;
            }
        }
        if (p >= 0) {
            col_swap(w, pivot_col, p);
            ++pivot_col;
        }
    }
    IMat basis(w.rows, pivot_col);
    for (long i = 0; i < w.rows; ++i)
        for (long j = 0; j < pivot_col; ++j) basis.at(i, j) = w.at(i, j);
    return basis;
}

namespace {

std::map<Int, int> factorize(Int n) {
    std::map<Int, int> f;
    for (Int p = 2; p * p <= n; ++p) {
        while (n % p == 0) {
            f[p]++;
            n /= p;
        }
    }
    if (n > 1) f[n]++;
    return f;
}

std::vector<Int> rechain(const std::vector<Int>& factors) {
    // renormalize a list of cyclic orders into an invariant-factor chain
    std::map<Int, std::vector<int>> primary;  // prime -> exponents, descending
    for (const Int& d : factors)
        for (auto& [p, e] : factorize(d)) primary[p].push_back(e);
    size_t depth = 0;
    for (auto& [p, es] : primary) {
        std::sort(es.rbegin(), es.rend());
        depth = std::max(depth, es.size());
    }
    std::vector<Int> chain(depth, Int(1));
    for (auto& [p, es] : primary)
        for (size_t i = 0; i < es.size(); ++i) {
            Int pw;
            mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), es[i]);
            chain[i] *= pw;
        }
    // chain[0] is largest; invariant factors ascend
    std::sort(chain.begin(), chain.end());
    return chain;
}

}  // namespace

AbelianGroup AbelianGroup::primary_part(long ell) const {
    AbelianGroup g;
    for (const Int& d : torsion) {
        Int pw = 1;
        Int dd = d;
        while (dd % ell == 0) {
            pw *= ell;
            dd /= ell;
        }
        if (pw > 1) g.torsion.push_back(pw);
    }
    std::sort(g.torsion.begin(), g.torsion.end());
    return g;
}

long AbelianGroup::dim_mod(long ell) const { return rank + torsion_corank(ell); }

long AbelianGroup::torsion_corank(long ell) const {
    long n = 0;
    for (const Int& d : torsion)
        if (d % ell == 0) ++n;
    return n;
}

AbelianGroup AbelianGroup::direct_sum(const AbelianGroup& o) const {
    AbelianGroup g;
    g.rank = rank + o.rank;
    std::vector<Int> all = torsion;
    all.insert(all.end(), o.torsion.begin(), o.torsion.end());
    g.torsion = rechain(all);
    return g;
}

std::string AbelianGroup::str() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (rank > 0) {
        os << "Z";
        if (rank > 1) os << "^" << rank;
        first = false;
    }
    for (auto it = torsion.rbegin(); it != torsion.rend(); ++it) {
        if (!first) os << " + ";
        os << "Z/" << it->get_str();
        first = false;
    }
    return os.str();
}

AbelianGroup cokernel_group(long n, const IMat& rels) {
    AbelianGroup g;
    if (rels.cols == 0 || rels.rows == 0) {
        g.rank = n;
        return g;
    }
    assert(rels.rows == n);
    std::vector<Int> divs = elementary_divisors(rels);
    g.rank = n - static_cast<long>(divs.size());
    for (Int& d : divs)
        if (d > 1) g.torsion.push_back(d);
    return g;
}

AbelianGroup subquotient_group(const IMat& d_out, const IMat& d_in) {
    if (d_out.rows > 0 && d_in.cols > 0 && d_out.cols > 0) {
        IMat prod = d_out * d_in;
        if (!prod.is_zero()) throw BoundaryCheckFailed("boundary composition is nonzero");
    }
    return fp_homology(d_out, IMat(), d_in, IMat());
}

AbelianGroup fp_homology(const IMat& f, const IMat& rel_c, const IMat& g, const IMat& rel_b) {
    long nb = f.cols > 0 || f.rows > 0 ? f.cols : (g.rows > 0 ? g.rows : rel_b.rows);
    if (g.rows > 0) assert(g.rows == nb || nb == 0);
    if (nb == 0 && g.rows > 0) nb = g.rows;

    // kernel of the induced map Z^nb -> C = Z^{f.rows}/rel_c
    IMat kb;
    if (f.rows == 0) {
        kb = IMat::identity(nb);
    } else {
        long rc = rel_c.cols;
        IMat stacked(f.rows, nb + rc);
        for (long i = 0; i < f.rows; ++i) {
            for (long j = 0; j < nb; ++j) stacked.at(i, j) = f.at(i, j);
            for (long j = 0; j < rc; ++j) stacked.at(i, nb + j) = rel_c.at(i, j);
        }
        IMat kfull = kernel_basis(stacked);
        IMat proj(nb, kfull.cols);
        for (long i = 0; i < nb; ++i)
            for (long j = 0; j < kfull.cols; ++j) proj.at(i, j) = kfull.at(i, j);
        kb = column_lattice_basis(proj);
    }

    long s = kb.cols;
    long nrel = (g.cols) + (rel_b.cols);
    IMat rels(s, nrel);
    long col = 0;
    SolvedSystem kb_solver(kb);
    auto push_relation = [&](const IMat& src, long j) {
        std::vector<Int> b(nb, Int(0));
        for (long i = 0; i < nb; ++i) b[i] = src.at(i, j);
        std::vector<Int> y;
        bool ok = kb_solver.solve(b, y);
        if (!ok) throw BoundaryCheckFailed("relation does not lie in the kernel lattice");
        for (long i = 0; i < s; ++i) rels.at(i, col) = y[i];
        ++col;
    };
    for (long j = 0; j < g.cols; ++j) push_relation(g, j);
    for (long j = 0; j < rel_b.cols; ++j) push_relation(rel_b, j);

    return cokernel_group(s, rels);
}

}  // namespace bianchi
