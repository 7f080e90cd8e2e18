#pragma once

#include <array>
#include <string>
#include <vector>

#include "bianchi/groupres.hpp"
#include "bianchi/orbit.hpp"

namespace bianchi {

/// Exact cyclotomic integer a + b w with w a primitive cube root of unity
/// (w^2 = -1 - w).  Every character value of the six admissible stabiliser
/// types lies in this ring.
struct Cyc {
    long a = 0, b = 0;

    Cyc conj() const { return {a - b, -b}; }
    Cyc operator+(const Cyc& o) const { return {a + o.a, b + o.b}; }
    Cyc operator*(const Cyc& o) const {
        return {a * o.a - b * o.b, a * o.b + b * o.a - b * o.b};
    }
    bool operator==(const Cyc&) const = default;
};

/// Exact character table of a finite stabiliser, indexed by the elements of
/// the concrete group (not merely by classes, which keeps the induction
/// matrices independent of any class-ordering convention).
struct CharacterTable {
    ConcreteGroup G;
    std::vector<std::vector<Cyc>> chi;  // chi[irreducible][element index]

    long irreducibles() const { return static_cast<long>(chi.size()); }
};

/// Build and verify the table: first and second orthogonality relations hold
/// exactly, degree-one rows are multiplicative, degrees match the type.
CharacterTable character_table(const ConcreteGroup& G);

/// Matrix of the induction map R_C(H) -> R_C(G) along the injection phi
/// (index form, as produced by hom_by_conjugation), computed entrywise by
/// Frobenius reciprocity:  mult of chi^G_i in Ind chi^H_j  =
/// <Res chi^G_i, chi^H_j>_H.  Entries verified integral and nonnegative,
/// columns verified to have total degree [G : H] * deg chi^H_j.
IMat induction_matrix(const CharacterTable& H, const CharacterTable& G,
                      const std::vector<int>& phi);

/// Chain complex computing the Bredon homology of the action with
/// coefficients in the complex representation rings of the stabilisers,
/// built over the 2-dimensional cocompact retract.  Basis in dimension p:
/// pairs (spine p-cell orbit, irreducible of its stabiliser); boundary
/// blocks are incidence sign times an induction matrix through the gluing
/// element.  The top dimension of the retract is 2, so the Bredon homology
/// above degree 2 vanishes by construction.
struct BredonComplex {
    long m = 0;
    std::array<std::vector<long>, 3> cells;  // spine orbit cells per dimension
    std::array<long, 3> dims{};              // module ranks
    IMat d1, d2;                             // boundaries C1 -> C0, C2 -> C1
};

BredonComplex build_bredon_complex(const OrbitComplex& oc);

/// H_p of the complex (p = 0, 1, 2) in normal form.
AbelianGroup bredon_homology(const BredonComplex& B, int p);

/// Equivariant K-homology in degrees 0 and 1; the remaining degrees repeat
/// with period two.
struct KHomologyResult {
    AbelianGroup k0, k1;
    // K_0 sits in an extension of H_2 by H_0; it splits outright when H_2 is
    // free, and the warning lists anything that would permit another answer.
    bool split_assumed = false;
    std::vector<std::string> warnings;
};

/// Assemble K_0 = H_0 (+) H_2 and K_1 = H_1 for the 2-dimensional retract
/// (top Bredon homology vanishes, so the spectral assembly collapses).
KHomologyResult k_homology_assembly(const BredonComplex& B);

}  // namespace bianchi
