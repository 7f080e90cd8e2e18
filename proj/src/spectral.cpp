#include "bianchi/spectral.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace bianchi {

namespace {

std::array<std::vector<long>, 3> spine_cells(const OrbitComplex& oc) {
    std::array<std::vector<long>, 3> out;
    for (int d = 0; d <= 2; ++d)
        for (long c : oc.by_dim[d])
            if (oc.cells[c].in_spine) {
                if (oc.cells[c].on_cusp)
                    throw UnsupportedRing(
                        "spine cell touches a singular point: pages are only "
                        "built over rings of class number one");
                out[d].push_back(c);
            }
    return out;
}

// positions of the spine cells inside the page bookkeeping
std::map<long, long> index_of(const std::vector<long>& cells) {
    std::map<long, long> pos;
    for (size_t i = 0; i < cells.size(); ++i) pos[cells[i]] = static_cast<long>(i);
    return pos;
}

std::vector<long> offsets_from(const std::vector<long>& sizes) {
    std::vector<long> off(sizes.size() + 1, 0);
    for (size_t i = 0; i < sizes.size(); ++i) off[i + 1] = off[i] + sizes[i];
    return off;
}

IMat block_diagonal(const std::vector<const IMat*>& blocks) {
    long r = 0, c = 0;
    for (const IMat* b : blocks) r += b->rows, c += b->cols;
    IMat out(r, c);
    long ro = 0, co = 0;
    for (const IMat* b : blocks) {
        for (long i = 0; i < b->rows; ++i)
            for (long j = 0; j < b->cols; ++j) out.at(ro + i, co + j) = b->at(i, j);
        ro += b->rows;
        co += b->cols;
    }
    return out;
}

}  // namespace

IntegralPage integral_page(const OrbitComplex& oc, long qmax) {
    IntegralPage page;
    page.m = oc.ring.m;
    page.qmax = qmax;
    page.cells = spine_cells(oc);

    // one resolution per spine cell, long enough for every requested row
    std::map<long, ConcreteGroup> groups;
    std::map<long, Resolution> res;
    for (int p = 0; p <= 2; ++p)
        for (long c : page.cells[p]) {
            groups.emplace(c, make_concrete_group(oc.cells[c].stab));
            res.emplace(c, build_resolution(groups.at(c), static_cast<int>(qmax) + 1));
        }
    std::array<std::map<long, long>, 3> pos = {index_of(page.cells[0]),
                                               index_of(page.cells[1]),
                                               index_of(page.cells[2])};

    for (long q = 0; q <= qmax; ++q) {
        IntegralRow row;
        row.q = q;

        std::array<std::vector<HomologyPresentation>, 3> pres;
        std::array<std::vector<long>, 3> off;
        for (int p = 0; p <= 2; ++p) {
            std::vector<long> sizes;
            std::vector<const IMat*> rels;
            for (long c : page.cells[p]) {
                pres[p].push_back(homology_presentation(res.at(c), static_cast<int>(q)));
                sizes.push_back(pres[p].back().cycles.cols);
            }
            for (const HomologyPresentation& hp : pres[p]) rels.push_back(&hp.relations);
            off[p] = offsets_from(sizes);
            row.gens[p] = off[p].back();
            row.relations[p] = block_diagonal(rels);
        }

        auto differential = [&](int p) {
            IMat d(row.gens[p - 1], row.gens[p]);
            for (size_t ci = 0; ci < page.cells[p].size(); ++ci) {
                long sigma = page.cells[p][ci];
                for (const OrbitBoundaryTerm& t : oc.cells[sigma].boundary) {
                    auto it = pos[p - 1].find(t.orbit);
                    if (it == pos[p - 1].end())
                        throw BoundaryCheckFailed("spine cell with non-spine boundary");
                    std::vector<int> phi =
                        hom_by_conjugation(groups.at(sigma), groups.at(t.orbit), t.g);
                    IMat blk = induced_homology_matrix(res.at(sigma), res.at(t.orbit), phi,
                                                       static_cast<int>(q));
                    long ro = off[p - 1][it->second], co = off[p][ci];
                    for (long i = 0; i < blk.rows; ++i)
                        for (long j = 0; j < blk.cols; ++j)
                            d.at(ro + i, co + j) += t.sign * blk.at(i, j);
                }
            }
            return d;
        };
        row.d10 = differential(1);
        row.d21 = differential(2);

        // d1 d1 must vanish modulo the relations of the target presentation
        IMat prod = row.d10 * row.d21;
        SolvedSystem rel0(row.relations[0]);
        for (long c = 0; c < prod.cols; ++c) {
            std::vector<Int> b(prod.rows), x;
            bool zero = true;
            for (long r = 0; r < prod.rows; ++r) {
                b[r] = prod.at(r, c);
                zero = zero && b[r] == 0;
            }
            if (!zero && !rel0.solve(b, x))
                throw BoundaryCheckFailed("d1 d1 nonzero on integral row q = " +
                                          std::to_string(q));
        }

        row.e2[0] = fp_homology(IMat(0, row.gens[0]), IMat(0, 0), row.d10, row.relations[0]);
        row.e2[1] = fp_homology(row.d10, row.relations[0], row.d21, row.relations[1]);
        row.e2[2] = fp_homology(row.d21, row.relations[1], IMat(row.gens[2], 0),
                                row.relations[2]);
        page.rows.push_back(std::move(row));
    }
    return page;
}

ModPage mod_page(const OrbitComplex& oc, long ell, long qmax) {
    ModPage page;
    page.m = oc.ring.m;
    page.ell = ell;
    page.qmax = qmax;
    std::array<std::vector<long>, 3> cells = spine_cells(oc);

    std::map<long, ConcreteGroup> groups;
    std::map<long, ModResolution> res;
    for (int p = 0; p <= 2; ++p)
        for (long c : cells[p]) {
            groups.emplace(c, make_concrete_group(oc.cells[c].stab));
            res.emplace(c, build_mod_resolution(groups.at(c), ell, static_cast<int>(qmax) + 1));
        }
    std::array<std::map<long, long>, 3> pos = {index_of(cells[0]), index_of(cells[1]),
                                               index_of(cells[2])};

    for (long q = 0; q <= qmax; ++q) {
        std::array<std::vector<long>, 3> off;
        std::array<long, 3> dims{};
        for (int p = 0; p <= 2; ++p) {
            std::vector<long> sizes;
            for (long c : cells[p])
                sizes.push_back(mod_homology_dim(res.at(c), static_cast<int>(q)));
            off[p] = offsets_from(sizes);
            dims[p] = off[p].back();
        }

        auto differential = [&](int p) {
            FMat d(dims[p - 1], dims[p], ell);
            for (size_t ci = 0; ci < cells[p].size(); ++ci) {
                long sigma = cells[p][ci];
                if (off[p][ci + 1] == off[p][ci]) continue;
                for (const OrbitBoundaryTerm& t : oc.cells[sigma].boundary) {
                    auto it = pos[p - 1].find(t.orbit);
                    if (it == pos[p - 1].end())
                        throw BoundaryCheckFailed("spine cell with non-spine boundary");
                    std::vector<int> phi =
                        hom_by_conjugation(groups.at(sigma), groups.at(t.orbit), t.g);
                    FMat blk = induced_mod_homology_matrix(res.at(sigma), res.at(t.orbit),
                                                           phi, static_cast<int>(q));
                    long ro = off[p - 1][it->second], co = off[p][ci];
                    for (long i = 0; i < blk.rows; ++i)
                        for (long j = 0; j < blk.cols; ++j) {
                            int64_t v = d.at(ro + i, co + j) + t.sign * blk.at(i, j);
                            d.at(ro + i, co + j) = ((v % ell) + ell) % ell;
                        }
                }
            }
            return d;
        };
        FMat d10 = differential(1);
        FMat d21 = differential(2);
        if (!(d10 * d21).is_zero())
            throw BoundaryCheckFailed("d1 d1 nonzero on mod-" + std::to_string(ell) +
                                      " row q = " + std::to_string(q));
        long r10 = f_rank(d10), r21 = f_rank(d21);
        page.e1_dims.push_back(dims);
        page.e2_dims.push_back(
            {dims[0] - r10, dims[1] - r10 - r21, dims[2] - r21});
    }
    return page;
}

ModHomologyDims mod_homology_dims(const ModPage& page) {
    ModHomologyDims out;
    out.ell = page.ell;
    for (long n = 0; n <= page.qmax; ++n) {
        long total = 0;
        for (int p = 0; p <= 2 && p <= n; ++p) total += page.e2_dims[n - p][p];
        out.dims.push_back(total);
    }
    return out;
}

namespace {

// primes dividing any invariant factor of the given groups
std::vector<long> torsion_primes(const std::vector<AbelianGroup>& groups) {
    std::vector<long> primes;
    for (const AbelianGroup& g : groups)
        for (Int d : g.torsion)
            for (long p = 2; d > 1; ++p)
                while (d % p == 0) {
                    if (primes.empty() || primes.back() != p) primes.push_back(p);
                    d /= p;
                }
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    return primes;
}

bool pieces_share_a_prime(const std::vector<AbelianGroup>& pieces) {
    for (long p : torsion_primes(pieces)) {
        int with = 0;
        for (const AbelianGroup& g : pieces) with += g.torsion_corank(p) > 0 ? 1 : 0;
        if (with >= 2) return true;
    }
    return false;
}

}  // namespace

LowDegreeHomology assemble_low_degree(const IntegralPage& page) {
    if (page.qmax < 2) throw UnsupportedDegree("assembly needs rows up to q = 2");
    LowDegreeHomology out;
    const AbelianGroup& e01 = page.rows[1].e2[0];
    const AbelianGroup& e10 = page.rows[0].e2[1];
    out.h1 = e01.direct_sum(e10);
    out.h1_extension_ambiguous = pieces_share_a_prime({e01, e10});
    out.h2_graded = {page.rows[2].e2[0], page.rows[1].e2[1], page.rows[0].e2[2]};
    out.h2_direct_sum = out.h2_graded[0].direct_sum(out.h2_graded[1]).direct_sum(out.h2_graded[2]);
    out.h2_extension_ambiguous =
        pieces_share_a_prime({out.h2_graded[0], out.h2_graded[1], out.h2_graded[2]});
    return out;
}

namespace {

// ascending partitions of e into exactly t positive parts
void partitions_into(long e, long t, std::vector<long>& cur,
                     std::vector<std::vector<long>>& out) {
    if (t == 0) {
        if (e == 0) out.push_back(cur);
        return;
    }
    long lo = cur.empty() ? 1 : cur.back();
    for (long a = lo; a * t <= e; ++a) {
        cur.push_back(a);
        partitions_into(e - a, t - 1, cur, out);
        cur.pop_back();
    }
}

long exponent_of(const Int& d, long p) {
    long e = 0;
    Int x = d;
    while (x % p == 0) x /= p, ++e;
    return e;
}

}  // namespace

AbelianGroup resolve_h2(const LowDegreeHomology& low,
                        const std::map<long, long>& h2_mod_dims) {
    std::vector<AbelianGroup> pieces(low.h2_graded.begin(), low.h2_graded.end());
    long rank = 0;
    for (const AbelianGroup& g : pieces) rank += g.rank;

    // per prime: the surviving partition of the total exponent
    std::map<long, std::vector<long>> primary;
    for (long p : torsion_primes(pieces)) {
        long e = 0, piece_corank_sum = 0, piece_corank_max = 0, piece_exp_sum = 0,
             piece_exp_max = 0;
        for (const AbelianGroup& g : pieces) {
            long ce = 0, cm = 0;
            for (const Int& d : g.torsion) {
                ce += exponent_of(d, p);
                cm = std::max(cm, exponent_of(d, p));
            }
            e += ce;
            piece_exp_sum += cm;
            piece_exp_max = std::max(piece_exp_max, cm);
            piece_corank_sum += g.torsion_corank(p);
            piece_corank_max = std::max(piece_corank_max, g.torsion_corank(p));
        }
        auto it = h2_mod_dims.find(p);
        if (it == h2_mod_dims.end())
            throw AssemblyAmbiguous("no mod-" + std::to_string(p) +
                                    " dimension supplied for the extension problem");
        long t = it->second - rank - low.h1.torsion_corank(p);
        if (t < piece_corank_max || t > piece_corank_sum)
            throw AssemblyAmbiguous("mod-" + std::to_string(p) +
                                    " dimension incompatible with the graded pieces");
        std::vector<std::vector<long>> parts;
        std::vector<long> cur;
        partitions_into(e, t, cur, parts);
        std::vector<std::vector<long>> ok;
        for (const std::vector<long>& q : parts)
            if (q.back() >= piece_exp_max && q.back() <= piece_exp_sum) ok.push_back(q);
        if (ok.size() != 1)
            throw AssemblyAmbiguous(std::to_string(ok.size()) +
                                    " filtrations match the mod-" + std::to_string(p) +
                                    " dimension");
        primary[p] = ok[0];
    }

    // combine the primary decompositions into invariant factors
    AbelianGroup out;
    out.rank = rank;
    size_t nfac = 0;
    for (const auto& [p, exps] : primary) nfac = std::max(nfac, exps.size());
    std::vector<Int> factors(nfac, Int(1));  // ascending: align largest parts last
    for (const auto& [p, exps] : primary)
        for (size_t i = 0; i < exps.size(); ++i) {
            Int pw = 1;
            for (long k = 0; k < exps[exps.size() - 1 - i]; ++k) pw *= p;
            factors[nfac - 1 - i] *= pw;
        }
    out.torsion = factors;
    return out;
}

bool extension_consistent(const std::vector<AbelianGroup>& graded,
                          const AbelianGroup& candidate) {
    long rank_sum = 0;
    Int order_prod = 1, order_cand = 1;
    for (const AbelianGroup& g : graded) {
        rank_sum += g.rank;
        for (const Int& d : g.torsion) order_prod *= d;
    }
    for (const Int& d : candidate.torsion) order_cand *= d;
    if (rank_sum != candidate.rank || order_prod != order_cand) return false;

    std::vector<AbelianGroup> all = graded;
    all.push_back(candidate);
    for (long p : torsion_primes(all)) {
        long corank_sum = 0, corank_max = 0;
        for (const AbelianGroup& g : graded) {
            corank_sum += g.torsion_corank(p);
            corank_max = std::max(corank_max, g.torsion_corank(p));
        }
        long c = candidate.torsion_corank(p);
        if (c > corank_sum || c < corank_max) return false;
    }
    return true;
}

}  // namespace bianchi
