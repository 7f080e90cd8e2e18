#include "bianchi/modres.hpp"

#include <algorithm>

#include "bianchi/errors.hpp"

namespace bianchi {

namespace {

int64_t inv_mod(int64_t a, long p) {
    // p is a small prime, a != 0 mod p
    int64_t r = 1, b = a % p;
    for (long e = p - 2; e > 0; e >>= 1) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
    }
    return r;
}

}  // namespace

FMat FMat::identity(long n, long prime) {
    FMat m(n, n, prime);
    for (long i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

FMat FMat::operator*(const FMat& o) const {
    FMat r(rows, o.cols, p);
    for (long i = 0; i < rows; ++i)
        for (long k = 0; k < cols; ++k) {
            int64_t x = at(i, k);
            if (x == 0) continue;
            for (long j = 0; j < o.cols; ++j)
                r.at(i, j) = (r.at(i, j) + x * o.at(k, j)) % p;
        }
    return r;
}

bool FMat::is_zero() const {
    for (int64_t x : e)
        if (x != 0) return false;
    return true;
}

long f_rank(FMat m) {
    long r = 0;
    for (long j = 0; j < m.cols && r < m.rows; ++j) {
        long piv = -1;
        for (long i = r; i < m.rows; ++i)
            if (m.at(i, j) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        for (long k = 0; k < m.cols; ++k) std::swap(m.at(piv, k), m.at(r, k));
        int64_t inv = inv_mod(m.at(r, j), m.p);
        for (long i = r + 1; i < m.rows; ++i) {
            int64_t f = m.at(i, j) * inv % m.p;
            if (f == 0) continue;
            for (long k = j; k < m.cols; ++k)
                m.at(i, k) = ((m.at(i, k) - f * m.at(r, k)) % m.p + m.p) % m.p;
        }
        ++r;
    }
    return r;
}

FSolver::FSolver(const FMat& m) : re(m), t(FMat::identity(m.rows, m.p)), p(m.p) {
    long r = 0;
    for (long j = 0; j < re.cols && r < re.rows; ++j) {
        long piv = -1;
        for (long i = r; i < re.rows; ++i)
            if (re.at(i, j) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        for (long k = 0; k < re.cols; ++k) std::swap(re.at(piv, k), re.at(r, k));
        for (long k = 0; k < t.cols; ++k) std::swap(t.at(piv, k), t.at(r, k));
        int64_t inv = inv_mod(re.at(r, j), p);
        for (long k = 0; k < re.cols; ++k) re.at(r, k) = re.at(r, k) * inv % p;
        for (long k = 0; k < t.cols; ++k) t.at(r, k) = t.at(r, k) * inv % p;
        for (long i = 0; i < re.rows; ++i) {
            if (i == r) continue;
            int64_t f = re.at(i, j);
            if (f == 0) continue;
            for (long k = 0; k < re.cols; ++k)
                re.at(i, k) = ((re.at(i, k) - f * re.at(r, k)) % p + p) % p;
            for (long k = 0; k < t.cols; ++k)
                t.at(i, k) = ((t.at(i, k) - f * t.at(r, k)) % p + p) % p;
        }
        pivot.push_back(j);
        ++r;
    }
}

bool FSolver::solve(const std::vector<int64_t>& b, std::vector<int64_t>& x) const {
    long nr = static_cast<long>(pivot.size());
    std::vector<int64_t> tb(re.rows, 0);
    for (long i = 0; i < re.rows; ++i) {
        int64_t s = 0;
        for (long k = 0; k < t.cols; ++k)
            if (b[k] != 0) s += t.at(i, k) * b[k];
        tb[i] = ((s % p) + p) % p;
    }
    for (long i = nr; i < re.rows; ++i)
        if (tb[i] != 0) return false;
    x.assign(re.cols, 0);
    for (long i = 0; i < nr; ++i) x[pivot[i]] = tb[i];
    return true;
}

FMat f_kernel_basis(const FMat& m) {
    FSolver s(m);
    long nr = static_cast<long>(s.pivot.size());
    std::vector<bool> is_piv(m.cols, false);
    for (long j : s.pivot) is_piv[j] = true;
    FMat k(m.cols, m.cols - nr, m.p);
    long c = 0;
    for (long j = 0; j < m.cols; ++j) {
        if (is_piv[j]) continue;
        k.at(j, c) = 1;
        for (long i = 0; i < nr; ++i)
            k.at(s.pivot[i], c) = (m.p - s.re.at(i, j)) % m.p;
        ++c;
    }
    return k;
}

bool FSpan::add(std::vector<int64_t> v) {
    for (size_t r = 0; r < rows.size(); ++r) {
        int64_t f = v[pivot[r]];
        if (f == 0) continue;
        for (long k = 0; k < n; ++k) v[k] = ((v[k] - f * rows[r][k]) % p + p) % p;
    }
    long pj = -1;
    for (long k = 0; k < n; ++k)
        if (v[k] != 0) {
            pj = k;
            break;
        }
    if (pj < 0) return false;
    int64_t inv = inv_mod(v[pj], p);
    for (long k = 0; k < n; ++k) v[k] = v[k] * inv % p;
    // keep rows ordered by pivot so reductions terminate
    size_t pos = 0;
    while (pos < rows.size() && pivot[pos] < pj) ++pos;
    rows.insert(rows.begin() + pos, std::move(v));
    pivot.insert(pivot.begin() + pos, pj);
    return true;
}

bool FSpan::contains(std::vector<int64_t> v) const {
    for (size_t r = 0; r < rows.size(); ++r) {
        int64_t f = v[pivot[r]];
        if (f == 0) continue;
        for (long k = 0; k < n; ++k) v[k] = ((v[k] - f * rows[r][k]) % p + p) % p;
    }
    for (long k = 0; k < n; ++k)
        if (v[k] != 0) return false;
    return true;
}

FMat ModResolution::full_boundary(int n) const {
    long g = G.order();
    FMat d(g * ranks[n - 1], g * ranks[n], p);
    for (long i = 0; i < ranks[n]; ++i) {
        const std::vector<int64_t>& im = gen_image[n][i];
        for (long a = 0; a < g; ++a) {
            long col = i * g + a;
            for (long j = 0; j < ranks[n - 1]; ++j)
                for (long h = 0; h < g; ++h) {
                    int64_t c = im[j * g + h];
                    if (c != 0) {
                        int64_t& dst = d.at(j * g + G.mult[a][h], col);
                        dst = (dst + c) % p;
                    }
                }
        }
    }
    return d;
}

FMat ModResolution::coinvariant_boundary(int n) const {
    long g = G.order();
    FMat d(ranks[n - 1], ranks[n], p);
    for (long i = 0; i < ranks[n]; ++i)
        for (long j = 0; j < ranks[n - 1]; ++j) {
            int64_t s = 0;
            for (long h = 0; h < g; ++h) s += gen_image[n][i][j * g + h];
            d.at(j, i) = s % p;
        }
    return d;
}

ModResolution build_mod_resolution(const ConcreteGroup& G, long p, int max_degree) {
    ModResolution R;
    R.G = G;
    R.p = p;
    R.ranks = {1};
    R.gen_image.resize(1);
    long g = G.order();

    FMat d(1, g, p);  // augmentation
    for (long a = 0; a < g; ++a) d.at(0, a) = 1;

    for (int n = 1; n <= max_degree; ++n) {
        FMat K = f_kernel_basis(d);
        long rank_prev = K.rows / g;
        std::vector<std::vector<int64_t>> cand(K.cols);
        for (long c = 0; c < K.cols; ++c) {
            cand[c].resize(K.rows);
            for (long r = 0; r < K.rows; ++r) cand[c][r] = K.at(r, c);
        }
        // extend sp by the module orbit of v, returning the dimension gained
        auto orbit_add = [&](FSpan& sp, const std::vector<int64_t>& v) {
            long gained = 0;
            for (long a = 0; a < g; ++a) {
                std::vector<int64_t> w(K.rows, 0);
                for (long j = 0; j < rank_prev; ++j)
                    for (long h = 0; h < g; ++h)
                        if (v[j * g + h] != 0) {
                            int64_t& dst = w[j * g + G.mult[a][h]];
                            dst = (dst + v[j * g + h]) % p;
                        }
                if (sp.add(std::move(w))) ++gained;
            }
            return gained;
        };
        // best-first choice: the candidate whose orbit spans the most new
        // dimensions first; keeps the resolution close to minimal, where a
        // first-come scan lets the ranks snowball from degree to degree
        std::vector<std::vector<int64_t>> gens;
        FSpan span(K.rows, p);
        for (;;) {
            long best = -1, best_gain = 0;
            for (size_t c = 0; c < cand.size(); ++c) {
                if (cand[c].empty()) continue;
                if (span.contains(cand[c])) {
                    cand[c].clear();
                    continue;
                }
                FSpan trial = span;
                long gain = orbit_add(trial, cand[c]);
                if (gain > best_gain) {
                    best_gain = gain;
                    best = static_cast<long>(c);
                }
            }
            if (best < 0) break;
            orbit_add(span, cand[best]);
            gens.push_back(std::move(cand[best]));
            cand[best].clear();
        }
        R.ranks.push_back(static_cast<long>(gens.size()));
        R.gen_image.push_back(std::move(gens));
        d = R.full_boundary(n);
    }
    return R;
}

long mod_homology_dim(const ModResolution& R, int q) {
    if (q < 0 || q + 1 > R.top_degree())
        throw UnsupportedDegree("resolution too short for this degree");
    long kdim = q == 0 ? R.ranks[0]
                       : R.ranks[q] - f_rank(R.coinvariant_boundary(q));
    return kdim - f_rank(R.coinvariant_boundary(q + 1));
}

std::vector<int64_t> ModHomologyBasis::reduce(std::vector<int64_t> v) const {
    for (size_t r = 0; r < boundaries.rows.size(); ++r) {
        int64_t f = v[boundaries.pivot[r]];
        if (f == 0) continue;
        for (long k = 0; k < boundaries.n; ++k)
            v[k] = ((v[k] - f * boundaries.rows[r][k]) % p + p) % p;
    }
    std::vector<int64_t> out;
    out.reserve(free_coor.size());
    for (long j : free_coor) out.push_back(v[j]);
    return out;
}

ModHomologyBasis mod_homology_basis(const ModResolution& R, int q) {
    if (q < 0 || q + 1 > R.top_degree())
        throw UnsupportedDegree("resolution too short for this degree");
    ModHomologyBasis B;
    B.p = R.p;
    B.cycles = q == 0 ? FMat::identity(R.ranks[0], R.p)
                      : f_kernel_basis(R.coinvariant_boundary(q));
    B.boundaries = FSpan(B.cycles.cols, R.p);
    FMat din = R.coinvariant_boundary(q + 1);
    FSolver zc(B.cycles);
    for (long c = 0; c < din.cols; ++c) {
        std::vector<int64_t> w(din.rows), x;
        for (long r = 0; r < din.rows; ++r) w[r] = din.at(r, c);
        if (!zc.solve(w, x))
            throw BoundaryCheckFailed("boundary is not a cycle in the coinvariant complex");
        B.boundaries.add(std::move(x));
    }
    std::vector<bool> is_piv(B.cycles.cols, false);
    for (long j : B.boundaries.pivot) is_piv[j] = true;
    for (long j = 0; j < B.cycles.cols; ++j)
        if (!is_piv[j]) B.free_coor.push_back(j);
    return B;
}

FMat induced_mod_homology_matrix(const ModResolution& RH, const ModResolution& RG,
                                 const std::vector<int>& phi, int q) {
    if (RH.p != RG.p) throw UnsupportedDegree("mismatched coefficient fields");
    long p = RG.p;
    long gh = RH.G.order(), gg = RG.G.order();
    // lift the identity of F_p to a chain map F(H) -> F(G) over phi
    std::vector<std::vector<std::vector<int64_t>>> f(q + 1);
    f[0].push_back(std::vector<int64_t>(gg * RG.ranks[0], 0));
    f[0][0][0] = 1;
    for (int n = 1; n <= q; ++n) {
        FSolver dn(RG.full_boundary(n));
        for (long i = 0; i < RH.ranks[n]; ++i) {
            std::vector<int64_t> y(gg * RG.ranks[n - 1], 0);
            const std::vector<int64_t>& im = RH.gen_image[n][i];
            for (long j = 0; j < RH.ranks[n - 1]; ++j)
                for (long h = 0; h < gh; ++h) {
                    int64_t c = im[j * gh + h];
                    if (c == 0) continue;
                    const std::vector<int64_t>& v = f[n - 1][j];
                    for (long jp = 0; jp < RG.ranks[n - 1]; ++jp)
                        for (long a = 0; a < gg; ++a)
                            if (v[jp * gg + a] != 0) {
                                int64_t& dst = y[jp * gg + RG.G.mult[phi[h]][a]];
                                dst = (dst + c * v[jp * gg + a]) % p;
                            }
                }
            std::vector<int64_t> x;
            if (!dn.solve(y, x))
                throw BoundaryCheckFailed("chain map lift failed: target not exact");
            f[n].push_back(std::move(x));
        }
    }
    // collapse to coinvariants
    FMat mbar(RG.ranks[q], RH.ranks[q], p);
    for (long i = 0; i < RH.ranks[q]; ++i)
        for (long jp = 0; jp < RG.ranks[q]; ++jp) {
            int64_t s = 0;
            for (long a = 0; a < gg; ++a) s += f[q][i][jp * gg + a];
            mbar.at(jp, i) = s % p;
        }
    ModHomologyBasis bh = mod_homology_basis(RH, q);
    ModHomologyBasis bg = mod_homology_basis(RG, q);
    FSolver zg(bg.cycles);
    FMat out(bg.dim(), bh.dim(), p);
    for (long c = 0; c < bh.dim(); ++c) {
        std::vector<int64_t> w(mbar.rows, 0), x;
        long src = bh.free_coor[c];
        for (long r = 0; r < mbar.rows; ++r) {
            int64_t s = 0;
            for (long k = 0; k < bh.cycles.rows; ++k)
                s += mbar.at(r, k) * bh.cycles.at(k, src);
            w[r] = ((s % p) + p) % p;
        }
        if (!zg.solve(w, x))
            throw BoundaryCheckFailed("induced map does not preserve cycles");
        std::vector<int64_t> red = bg.reduce(std::move(x));
        for (long r = 0; r < out.rows; ++r) out.at(r, c) = red[r];
    }
    return out;
}

}  // namespace bianchi
