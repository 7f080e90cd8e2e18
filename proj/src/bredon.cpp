#include "bianchi/bredon.hpp"

#include <map>
#include <string>

namespace bianchi {

namespace {

long order_of(const ConcreteGroup& G, int i) {
    long o = 1;
    int x = i;
    while (x != 0) {
        x = G.mult[x][i];
        ++o;
    }
    return o;
}

const Cyc ONE{1, 0}, W{0, 1}, WBAR{-1, -1};  // 1, w, w^2

Cyc zeta_pow(long k) {
    switch (((k % 3) + 3) % 3) {
        case 0: return ONE;
        case 1: return W;
        default: return WBAR;
    }
}

void verify_table(const CharacterTable& t) {
    long n = t.G.order();
    // expected irreducible count and sum of squared degrees
    Int degsq = 0;
    for (const auto& row : t.chi) degsq += Int(row[0].a) * row[0].a;
    if (degsq != n) throw InvariantViolation("character degrees do not sum to the order");
    // first orthogonality over elements
    for (size_t i = 0; i < t.chi.size(); ++i)
        for (size_t j = 0; j < t.chi.size(); ++j) {
            Cyc s{0, 0};
            for (long g = 0; g < n; ++g) s = s + t.chi[i][g] * t.chi[j][g].conj();
            if (s != Cyc{i == j ? n : 0, 0})
                throw InvariantViolation("character rows fail orthogonality");
        }
    // degree-one rows are homomorphisms
    for (const auto& row : t.chi) {
        if (row[0] != ONE) continue;
        for (long g = 0; g < n; ++g)
            for (long h = 0; h < n; ++h)
                if (row[t.G.mult[g][h]] != row[g] * row[h])
                    throw InvariantViolation("linear character is not multiplicative");
    }
}

}  // namespace

CharacterTable character_table(const ConcreteGroup& G) {
    CharacterTable t;
    t.G = G;
    long n = G.order();
    std::vector<long> ord(n);
    for (long i = 0; i < n; ++i) ord[i] = order_of(G, static_cast<int>(i));

    auto row_all = [&](Cyc v) { return std::vector<Cyc>(n, v); };
    switch (G.type) {
        case FiniteGroupType::trivial:
            t.chi = {row_all(ONE)};
            break;
        case FiniteGroupType::c2: {
            std::vector<Cyc> sgn(n, ONE);
            sgn[1] = {-1, 0};
            t.chi = {row_all(ONE), sgn};
            break;
        }
        case FiniteGroupType::c3: {
            // powers of the generator elems[1]
            std::vector<long> pw(n);
            int x = 0;
            for (long k = 0; k < n; ++k) {
                pw[x] = k;
                x = G.mult[x][1];
            }
            t.chi.push_back(row_all(ONE));
            for (long r = 1; r <= 2; ++r) {
                std::vector<Cyc> row(n);
                for (long g = 0; g < n; ++g) row[g] = zeta_pow(r * pw[g]);
                t.chi.push_back(row);
            }
            break;
        }
        case FiniteGroupType::v4: {
            t.chi.push_back(row_all(ONE));
            for (long k = 1; k <= 3; ++k) {
                std::vector<Cyc> row(n, Cyc{-1, 0});
                row[0] = ONE;
                row[k] = ONE;
                t.chi.push_back(row);
            }
            break;
        }
        case FiniteGroupType::s3: {
            std::vector<Cyc> sgn(n), two(n);
            for (long g = 0; g < n; ++g) {
                sgn[g] = ord[g] == 2 ? Cyc{-1, 0} : ONE;
                two[g] = ord[g] == 1 ? Cyc{2, 0} : (ord[g] == 2 ? Cyc{0, 0} : Cyc{-1, 0});
            }
            t.chi = {row_all(ONE), sgn, two};
            break;
        }
        case FiniteGroupType::a4: {
            // the order-3 elements fall into two conjugacy classes, swapped
            // by inversion; compute the class of the first one
            std::vector<bool> cls1(n, false);
            long first = -1;
            for (long i = 0; i < n && first < 0; ++i)
                if (ord[i] == 3) first = i;
            for (long g = 0; g < n; ++g)
                cls1[G.mult[G.mult[g][static_cast<int>(first)]][G.inv[g]]] = true;
            std::vector<Cyc> omega(n), omega2(n), three(n);
            for (long g = 0; g < n; ++g) {
                if (ord[g] != 3) {
                    omega[g] = omega2[g] = ONE;
                    three[g] = ord[g] == 1 ? Cyc{3, 0} : Cyc{-1, 0};
                } else {
                    omega[g] = cls1[g] ? W : WBAR;
                    omega2[g] = cls1[g] ? WBAR : W;
                    three[g] = {0, 0};
                }
            }
            t.chi = {row_all(ONE), omega, omega2, three};
            break;
        }
        default:
            throw UnknownType("no character table for this stabiliser type");
    }
    verify_table(t);
    return t;
}

IMat induction_matrix(const CharacterTable& H, const CharacterTable& G,
                      const std::vector<int>& phi) {
    long nh = H.G.order();
    IMat out(G.irreducibles(), H.irreducibles());
    for (long i = 0; i < out.rows; ++i)
        for (long j = 0; j < out.cols; ++j) {
            Cyc s{0, 0};
            for (long h = 0; h < nh; ++h) s = s + G.chi[i][phi[h]] * H.chi[j][h].conj();
            if (s.b != 0 || s.a % nh != 0 || s.a < 0)
                throw InvariantViolation("induction multiplicity is not a nonnegative integer");
            out.at(i, j) = s.a / nh;
        }
    // column degree count: dim Ind V = [G : H] dim V
    long index = G.G.order() / nh;
    for (long j = 0; j < out.cols; ++j) {
        Int total = 0;
        for (long i = 0; i < out.rows; ++i) total += out.at(i, j) * G.chi[i][0].a;
        if (total != index * H.chi[j][0].a)
            throw InvariantViolation("induced representation has the wrong dimension");
    }
    return out;
}

BredonComplex build_bredon_complex(const OrbitComplex& oc) {
    BredonComplex B;
    B.m = oc.ring.m;
    for (int d = 0; d <= 2; ++d)
        for (long c : oc.by_dim[d])
            if (oc.cells[c].in_spine) {
                if (oc.cells[c].on_cusp)
                    throw UnsupportedRing(
                        "spine cell touches a singular point: the Bredon "
                        "complex is only built over rings of class number one");
                B.cells[d].push_back(c);
            }

    std::map<long, ConcreteGroup> groups;
    std::map<long, CharacterTable> tables;
    std::array<std::map<long, long>, 3> pos;
    std::array<std::vector<long>, 3> off;
    for (int p = 0; p <= 2; ++p) {
        off[p].push_back(0);
        for (size_t i = 0; i < B.cells[p].size(); ++i) {
            long c = B.cells[p][i];
            pos[p][c] = static_cast<long>(i);
            groups.emplace(c, make_concrete_group(oc.cells[c].stab));
            tables.emplace(c, character_table(groups.at(c)));
            off[p].push_back(off[p].back() + tables.at(c).irreducibles());
        }
        B.dims[p] = off[p].back();
    }

    auto differential = [&](int p) {
        IMat d(B.dims[p - 1], B.dims[p]);
        for (size_t ci = 0; ci < B.cells[p].size(); ++ci) {
            long sigma = B.cells[p][ci];
            for (const OrbitBoundaryTerm& t : oc.cells[sigma].boundary) {
                auto it = pos[p - 1].find(t.orbit);
                if (it == pos[p - 1].end())
                    throw BoundaryCheckFailed("spine cell with non-spine boundary");
                std::vector<int> phi =
                    hom_by_conjugation(groups.at(sigma), groups.at(t.orbit), t.g);
                IMat blk = induction_matrix(tables.at(sigma), tables.at(t.orbit), phi);
                long ro = off[p - 1][it->second], co = off[p][ci];
                for (long i = 0; i < blk.rows; ++i)
                    for (long j = 0; j < blk.cols; ++j)
                        d.at(ro + i, co + j) += t.sign * blk.at(i, j);
            }
        }
        return d;
    };
    B.d1 = differential(1);
    B.d2 = differential(2);
    if (!(B.d1 * B.d2).is_zero())
        throw BoundaryCheckFailed("Bredon boundary of boundary nonzero");
    return B;
}

AbelianGroup bredon_homology(const BredonComplex& B, int p) {
    switch (p) {
        case 0: return cokernel_group(B.dims[0], B.d1);
        case 1: return subquotient_group(B.d1, B.d2);
        case 2: return subquotient_group(B.d2, IMat(B.dims[2], 0));
        default: return AbelianGroup{};  // the retract is 2-dimensional
    }
}

KHomologyResult k_homology_assembly(const BredonComplex& B) {
    KHomologyResult out;
    AbelianGroup h0 = bredon_homology(B, 0);
    AbelianGroup h1 = bredon_homology(B, 1);
    AbelianGroup h2 = bredon_homology(B, 2);
    out.k1 = h1;
    out.k0 = h0.direct_sum(h2);
    if (!h2.torsion.empty()) {
        out.split_assumed = true;
        out.warnings.push_back(
            "m=" + std::to_string(B.m) +
            ": degree-2 Bredon homology has torsion, so K_0 is reported as the "
            "split extension " + out.k0.str() + " without a proof of splitting");
    }
    return out;
}

}  // namespace bianchi
