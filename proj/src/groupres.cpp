#include "bianchi/groupres.hpp"

#include <algorithm>
#include <map>

#include "bianchi/errors.hpp"

namespace bianchi {

int ConcreteGroup::index_of(const GroupElement& g) const {
    for (size_t i = 0; i < elems.size(); ++i)
        if (elems[i] == g) return static_cast<int>(i);
    throw NotASubgroup("element not in the subgroup");
}

ConcreteGroup make_concrete_group(std::vector<GroupElement> elems) {
    ConcreteGroup G;
    G.type = classify_finite_group(elems);  // also verifies closure
    std::sort(elems.begin(), elems.end());
    std::stable_partition(elems.begin(), elems.end(),
                          [](const GroupElement& g) { return g.is_identity(); });
    G.elems = std::move(elems);
    int n = static_cast<int>(G.elems.size());
    G.mult.assign(n, std::vector<int>(n, 0));
    G.inv.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) G.mult[i][j] = G.index_of(G.elems[i] * G.elems[j]);
        G.inv[i] = G.index_of(G.elems[i].inverse());
    }
    return G;
}

IMat Resolution::full_boundary(int n) const {
    long g = G.order();
    IMat d(g * ranks[n - 1], g * ranks[n]);
    for (long i = 0; i < ranks[n]; ++i) {
        const std::vector<Int>& im = gen_image[n][i];
        for (long a = 0; a < g; ++a) {  // column of a * e_i
            long col = i * g + a;
            for (long j = 0; j < ranks[n - 1]; ++j)
                for (long h = 0; h < g; ++h) {
                    const Int& c = im[j * g + h];
                    if (c != 0) d.at(j * g + G.mult[a][h], col) += c;
                }
        }
    }
    return d;
}

IMat Resolution::coinvariant_boundary(int n) const {
    long g = G.order();
    IMat d(ranks[n - 1], ranks[n]);
    for (long i = 0; i < ranks[n]; ++i)
        for (long j = 0; j < ranks[n - 1]; ++j)
            for (long h = 0; h < g; ++h) d.at(j, i) += gen_image[n][i][j * g + h];
    return d;
}

namespace {

bool is_zero_vec(const std::vector<Int>& v) {
    for (const Int& x : v)
        if (x != 0) return false;
    return true;
}

}  // namespace

Resolution build_resolution(const ConcreteGroup& G, int max_degree) {
    Resolution R;
    R.G = G;
    R.ranks = {1};
    R.gen_image.resize(1);
    long g = G.order();

    IMat d(1, g);  // augmentation
    for (long a = 0; a < g; ++a) d.at(0, a) = 1;

    for (int n = 1; n <= max_degree; ++n) {
        IMat K = kernel_basis(d);
        std::vector<std::vector<Int>> gens;
        IMat span(K.rows, 0);
        SolvedSystem span_solver;
        for (long c = 0; c < K.cols; ++c) {
            std::vector<Int> v(K.rows), xx;
            for (long r = 0; r < K.rows; ++r) v[r] = K.at(r, c);
            if (is_zero_vec(v)) continue;
            if (span.cols > 0 && span_solver.solve(v, xx)) continue;
            gens.push_back(v);
            // extend the spanned lattice by the whole module orbit of v
            long rank_prev = K.rows / g;
            IMat wider(K.rows, span.cols + g);
            for (long r = 0; r < K.rows; ++r)
                for (long s = 0; s < span.cols; ++s) wider.at(r, s) = span.at(r, s);
            for (long a = 0; a < g; ++a)
                for (long j = 0; j < rank_prev; ++j)
                    for (long h = 0; h < g; ++h)
                        if (v[j * g + h] != 0)
                            wider.at(j * g + G.mult[a][h], span.cols + a) += v[j * g + h];
            span = column_lattice_basis(wider);
            span_solver = SolvedSystem(span);
        }
        R.ranks.push_back(static_cast<long>(gens.size()));
        R.gen_image.push_back(std::move(gens));
        d = R.full_boundary(n);
    }
    return R;
}

AbelianGroup resolution_homology(const Resolution& R, int q) {
    if (q < 0 || q + 1 > R.top_degree())
        throw UnsupportedDegree("resolution too short for this degree");
    IMat d_out = q == 0 ? IMat(0, R.ranks[0]) : R.coinvariant_boundary(q);
    return subquotient_group(d_out, R.coinvariant_boundary(q + 1));
}

AbelianGroup finite_group_homology(FiniteGroupType t, long q) {
    AbelianGroup h;
    if (q < 0) return h;
    if (q == 0) {
        h.rank = 1;
        return h;
    }
    auto cyc = [](long n) {
        AbelianGroup c;
        c.torsion = {Int(n)};
        return c;
    };
    switch (t) {
        case FiniteGroupType::trivial: return h;
        case FiniteGroupType::c2: return q % 2 == 1 ? cyc(2) : h;
        case FiniteGroupType::c3: return q % 2 == 1 ? cyc(3) : h;
        case FiniteGroupType::v4: {
            // Kuenneth for Z/2 x Z/2
            long copies = q % 2 == 1 ? (q + 3) / 2 : q / 2;
            for (long i = 0; i < copies; ++i) h = h.direct_sum(cyc(2));
            return h;
        }
        case FiniteGroupType::s3:
            // 2-periodic 2-part, 4-periodic 3-part
            if (q % 4 == 1) return cyc(2);
            if (q % 4 == 3) return cyc(6);
            return h;
        case FiniteGroupType::a4: {
            // 3-part: the 3-Sylow is self-normalising, hence 2-periodicity;
            // 2-part: elementary abelian with mod-2 Betti numbers counted by
            // C_3-invariants in the symmetric algebra on the 2-Sylow
            if (q % 2 == 1) h = h.direct_sum(cyc(3));
            std::vector<long> tq(q + 1, 0);
            for (long n = 1; n <= q; ++n) {
                long dn = 0;
                for (long i = 0; i <= n; ++i)
                    if (i % 3 == (2 * n) % 3) ++dn;
                tq[n] = dn - tq[n - 1];
            }
            for (long i = 0; i < tq[q]; ++i) h = h.direct_sum(cyc(2));
            return h;
        }
    }
    return h;
}

AbelianGroup HomologyPresentation::group() const { return cokernel_group(cycles.cols, relations); }

HomologyPresentation homology_presentation(const Resolution& R, int q) {
    if (q < 0 || q + 1 > R.top_degree())
        throw UnsupportedDegree("resolution too short for this degree");
    HomologyPresentation P;
    P.cycles = q == 0 ? IMat::identity(R.ranks[0]) : kernel_basis(R.coinvariant_boundary(q));
    IMat din = R.coinvariant_boundary(q + 1);
    P.relations = IMat(P.cycles.cols, din.cols);
    for (long c = 0; c < din.cols; ++c) {
        std::vector<Int> w(din.rows), x;
        for (long r = 0; r < din.rows; ++r) w[r] = din.at(r, c);
        if (!solve_integer(P.cycles, w, x))
            throw BoundaryCheckFailed("boundary is not a cycle in the coinvariant complex");
        for (long r = 0; r < P.cycles.cols; ++r) P.relations.at(r, c) = x[r];
    }
    return P;
}

std::vector<int> hom_by_conjugation(const ConcreteGroup& H, const ConcreteGroup& G,
                                    const GroupElement& g) {
    GroupElement gi = g.inverse();
    std::vector<int> phi(H.elems.size());
    for (size_t i = 0; i < H.elems.size(); ++i) phi[i] = G.index_of(gi * H.elems[i] * g);
    for (size_t i = 0; i < H.elems.size(); ++i)
        for (size_t j = 0; j < H.elems.size(); ++j)
            if (phi[H.mult[i][j]] != G.mult[phi[i]][phi[j]])
                throw NotASubgroup("conjugation does not define a homomorphism");
    return phi;
}

IMat induced_homology_matrix(const Resolution& RH, const Resolution& RG,
                             const std::vector<int>& phi, int q) {
    long gh = RH.G.order(), gg = RG.G.order();
    // lift the identity of Z to a chain map F(H) -> F(G) over phi
    std::vector<std::vector<std::vector<Int>>> f(q + 1);
    f[0].push_back(std::vector<Int>(gg * RG.ranks[0], Int(0)));
    f[0][0][0] = 1;  // generator 0 at the identity of G
    for (int n = 1; n <= q; ++n) {
        SolvedSystem dn(RG.full_boundary(n));
        for (long i = 0; i < RH.ranks[n]; ++i) {
            std::vector<Int> y(gg * RG.ranks[n - 1], Int(0));
            const std::vector<Int>& im = RH.gen_image[n][i];
            for (long j = 0; j < RH.ranks[n - 1]; ++j)
                for (long h = 0; h < gh; ++h) {
                    const Int& c = im[j * gh + h];
                    if (c == 0) continue;
                    const std::vector<Int>& v = f[n - 1][j];
                    for (long jp = 0; jp < RG.ranks[n - 1]; ++jp)
                        for (long a = 0; a < gg; ++a)
                            if (v[jp * gg + a] != 0)
                                y[jp * gg + RG.G.mult[phi[h]][a]] += c * v[jp * gg + a];
                }
            std::vector<Int> x;
            if (!dn.solve(y, x))
                throw BoundaryCheckFailed("chain map lift failed: target not exact");
            f[n].push_back(std::move(x));
        }
    }
    // collapse to coinvariants
    IMat mbar(RG.ranks[q], RH.ranks[q]);
    for (long i = 0; i < RH.ranks[q]; ++i)
        for (long jp = 0; jp < RG.ranks[q]; ++jp)
            for (long a = 0; a < gg; ++a) mbar.at(jp, i) += f[q][i][jp * gg + a];
    // rewrite on the cycle bases
    HomologyPresentation ph = homology_presentation(RH, q);
    HomologyPresentation pg = homology_presentation(RG, q);
    IMat out(pg.cycles.cols, ph.cycles.cols);
    for (long c = 0; c < ph.cycles.cols; ++c) {
        std::vector<Int> w(mbar.rows, Int(0)), x;
        for (long r = 0; r < mbar.rows; ++r)
            for (long k = 0; k < ph.cycles.rows; ++k) w[r] += mbar.at(r, k) * ph.cycles.at(k, c);
        if (!solve_integer(pg.cycles, w, x))
            throw BoundaryCheckFailed("induced map does not preserve cycles");
        for (long r = 0; r < out.rows; ++r) out.at(r, c) = x[r];
    }
    return out;
}

}  // namespace bianchi
