#pragma once

#include "abvar/cmtypes.hpp"
#include "abvar/orders.hpp"

namespace abvar {

/// A place of L above p: the local factor of h over Q_p (known modulo
/// p^precision), ramification, residue degree and slope ord(pi)/ord(p).
struct PlaceData {
    PrimeIdeal prime;  // prime of O_L
    RatPoly local_factor;  // monic, coefficients reduced into [0, p^precision)
    int precision = 0;
    int e = 0, f = 0;
    Rat slope;
    int degree() const { return e * f; }
};

/// Places of L above p, in the order of primes_above on O_L. The local
/// factors are recomputed at doubled precision and must agree.
std::vector<PlaceData> factor_qp(const EtaleAlgebra& L, const Lattice& maximal, int precision = 30);

/// Lower convex hull slopes of h at p, one per root (sorted).
std::vector<Rat> newton_slopes(const RatPoly& h, const Int& p);
/// Number of roots of valuation 0.
int p_rank(const RatPoly& h, const Int& p);

/// Splitting field M of h with the roots of h as elements of M, the
/// Galois group as permutations of those roots, a pinned complex embedding
/// phi0 of M and a pinned prime P of M above p (the p-adic embedding j').
struct RootMatching {
    NumberAlgebra M;
    /// root[k] = phi0^{-1}(k-th embedding of L applied to pi), k indexing
    /// EtaleAlgebra::embeddings().
    std::vector<RatVec> root;
    /// Galois group of M/Q acting on embedding indices.
    std::vector<std::vector<int>> galois;
    /// Index into factor_qp places of the place of root k under j'.
    std::vector<int> place_of;
    /// Decomposition and inertia groups of P, as indices into `galois`.
    std::vector<int> decomposition, inertia;
    int residue_degree = 0;     // f(P | p)
    int ramification = 0;       // e(P | p)
    std::vector<PlaceData> places;
};

/// Throws SplittingFieldTooLarge when [M : Q] would exceed max_degree.
RootMatching build_matching(const EtaleAlgebra& L, const Lattice& maximal, std::size_t max_degree = 64,
                            int precision = 30);

bool shimura_taniyama(const EtaleAlgebra& L, const CMType& phi, const RootMatching& m);
/// Residue degree of the completion of the reflex field at P.
int reflex_residue_degree(const EtaleAlgebra& L, const CMType& phi, const RootMatching& m);
/// The reflex residue field embeds in F_q (q a power of p).
bool reflex_residue(const EtaleAlgebra& L, const CMType& phi, const RootMatching& m, const Int& q);

struct RRCResult {
    bool st = false;
    bool residue = false;
    bool holds() const { return st && residue; }
};
RRCResult rrc(const EtaleAlgebra& L, const CMType& phi, const RootMatching& m);

/// Certified members of S_Phi among the given overorders: R_w when the
/// p-rank is g, or g-1 with p odd; O_L and the Gorenstein conjugate-stable
/// overorders of index prime to p when the RRC holds.
std::vector<OrderInfo> candidate_orders(const EtaleAlgebra& L, const std::vector<OrderInfo>& overorders,
                                        bool rrc_holds);

// ---- exposed for tests ----

/// Fields Q[z]/(N_j) making up K (x) Q[x]/(g), with the images of the
/// generator of K and of x. g is irreducible over Q.
struct TensorFactor {
    RatPoly modulus;
    RatVec image_of_gen, image_of_x;
    Rat shift;  // the field generator is x + shift * gen
};
std::vector<TensorFactor> tensor_split(const NumberAlgebra& K, const RatPoly& g);

/// Roots of the Q-irreducible g lying in the field K.
std::vector<RatVec> roots_in_field(const NumberAlgebra& K, const RatPoly& g);

}  // namespace abvar
