#pragma once

#include <vector>

#include "abvar/lattice.hpp"

namespace abvar {

/// Structure constants of an order: coeff[i](j, k) is the coefficient of
/// w_k in w_i * w_j for the HNF basis w of the order.
struct OrderMult {
    std::size_t n = 0;
    std::vector<IntMatrix> coeff;
};

OrderMult order_mult(const NumberAlgebra& alg, const Lattice& order);

/// Radical of pT (elements x with x^(p^k) in pT).
Lattice p_radical(const NumberAlgebra& alg, const Lattice& order, const Int& p);
/// Round-2 enlargement at p until p-maximal.
Lattice p_maximal_order(const NumberAlgebra& alg, const Lattice& order, const Int& p);
/// Maximal order, starting from `start` (default Z[x]) and enlarging at every
/// p with p^2 dividing the discriminant of the start order.
Lattice maximal_order_of(const NumberAlgebra& alg);
Lattice maximal_order_of(const NumberAlgebra& alg, const Lattice& start);
/// Discriminant det(Tr(w_i w_j)) of a lattice.
Rat lattice_discriminant(const NumberAlgebra& alg, const Lattice& a);

/// A maximal ideal of an order lying above p.
struct PrimeIdeal {
    Lattice lat;
    Int p;
    int f = 0;       // residue degree: [T : P] = p^f
    RatVec idem;     // a lift of the primitive idempotent of T/pT for P
};

/// All maximal ideals of `order` containing p.
std::vector<PrimeIdeal> primes_above(const NumberAlgebra& alg, const Lattice& order, const Int& p);

/// v_P(x) for P a prime of an order that is maximal at P (x nonzero).
int prime_valuation(const NumberAlgebra& alg, const Lattice& order, const PrimeIdeal& P, const RatVec& x);

/// All orders between `order` and `top` (an order containing it), sorted by
/// index in `top` and then canonical basis. Throws IndexTooLarge when
/// [top : order] exceeds max_index.
std::vector<Lattice> intermediate_orders(const NumberAlgebra& alg, const Lattice& order, const Lattice& top,
                                         const Int& max_index);

/// All `order`-submodules M with lower subset M subset upper; lower and upper
/// must be order-modules with upper/lower finite.
std::vector<Lattice> intermediate_modules(const NumberAlgebra& alg, const Lattice& order, const Lattice& lower,
                                          const Lattice& upper, std::size_t limit = 2000000);

bool is_invertible(const NumberAlgebra& alg, const Lattice& ideal, const Lattice& order);
bool is_gorenstein(const NumberAlgebra& alg, const Lattice& order);
/// Coordinates of v on the basis of `a`, required to be integral.
IntVec integral_coords(const Lattice& a, const RatVec& v);

}  // namespace abvar
