#pragma once

#include <vector>

#include "bianchi/snf.hpp"
#include "bianchi/stabilisers.hpp"

namespace bianchi {

/// A finite subgroup given by its element list, with multiplication tables.
/// elems[0] is the identity; the rest are sorted for determinism.
struct ConcreteGroup {
    std::vector<GroupElement> elems;
    FiniteGroupType type = FiniteGroupType::trivial;
    std::vector<std::vector<int>> mult;  // mult[i][j] = index of elems[i] * elems[j]
    std::vector<int> inv;

    long order() const { return static_cast<long>(elems.size()); }
    int index_of(const GroupElement& g) const;  // throws NotASubgroup when absent
};

ConcreteGroup make_concrete_group(std::vector<GroupElement> elems);

/// Free resolution of Z over the integral group ring: F_n = (ZG)^{ranks[n]}.
/// Elements of F_n are integer vectors of length |G| * ranks[n] with the
/// coordinate (generator j, group element g) at position j*|G| + g; the group
/// acts by left translation on the second index.
struct Resolution {
    ConcreteGroup G;
    std::vector<long> ranks;
    // gen_image[n][i]: boundary image of generator i of F_n inside F_{n-1};
    // gen_image[0] is empty (the augmentation is not stored).
    std::vector<std::vector<std::vector<Int>>> gen_image;

    int top_degree() const { return static_cast<int>(ranks.size()) - 1; }
    /// Boundary F_n -> F_{n-1} as a plain integer matrix (n >= 1).
    IMat full_boundary(int n) const;
    /// Boundary of the coinvariant complex F_* (x)_G Z, an r_{n-1} x r_n matrix.
    IMat coinvariant_boundary(int n) const;
};

/// Build a free resolution by iterated integer kernel computations,
/// choosing module generators greedily from a kernel lattice basis.
Resolution build_resolution(const ConcreteGroup& G, int max_degree);

/// H_q(G; Z) computed from the resolution (requires q < top_degree()).
AbelianGroup resolution_homology(const Resolution& R, int q);

/// Closed-form integral homology of the six admissible stabiliser types,
/// valid in every degree (periodicity / Kuenneth / Sylow-invariant counts).
AbelianGroup finite_group_homology(FiniteGroupType t, long q);

/// Homology presented on a fixed generating set: the cycle-lattice basis of
/// the coinvariant complex in degree q. The group is Z^{cycles.cols} modulo
/// the columns of relations.
struct HomologyPresentation {
    IMat cycles;     // columns: basis of ker(coinvariant d_q) in Z^{r_q}
    IMat relations;  // columns: im(coinvariant d_{q+1}) in cycle coordinates
    AbelianGroup group() const;
};

HomologyPresentation homology_presentation(const Resolution& R, int q);

/// Index form of a homomorphism H -> G: phi[i] is the index in G of the image
/// of H.elems[i]. Checked to be a homomorphism.
std::vector<int> hom_by_conjugation(const ConcreteGroup& H, const ConcreteGroup& G,
                                    const GroupElement& g);  // h -> g^{-1} h g

/// Matrix of H_q(phi): H_q(H) -> H_q(G) on the cycle-basis generators of the
/// two homology presentations (built by lifting a chain map through the two
/// resolutions).
IMat induced_homology_matrix(const Resolution& RH, const Resolution& RG,
                             const std::vector<int>& phi, int q);

}  // namespace bianchi
