#pragma once

#include <complex>

#include "abvar/orders.hpp"

namespace abvar {

/// Unit group of O_L presented as Z^m / rel. The first t generators are
/// roots of unity (one per factor of h, of the given orders), the remaining
/// ones generate a free complement. Subgroups of O_L^* are handled as their
/// full preimages in Z^m (lattices containing rel).
class UnitGroup {
public:
    static std::shared_ptr<const UnitGroup> compute(const Etale& L, const Lattice& maximal);

    const Etale& algebra() const { return L_; }
    const Lattice& maximal() const { return O_; }
    std::size_t rank() const { return gens_.size() - torsion_orders_.size(); }
    std::size_t ngens() const { return gens_.size(); }
    const std::vector<RatVec>& gens() const { return gens_; }
    const std::vector<long>& torsion_orders() const { return torsion_orders_; }
    /// Relation lattice: torsion_orders[i] * e_i.
    const IntMatrix& relations() const { return rel_; }
    /// Action of the involution on exponent vectors (row i = image of gen i).
    const IntMatrix& conjugation() const { return conj_; }

    /// prod gens^e.
    RatVec element(const IntVec& e) const;
    /// Exponent vector (torsion entries reduced) of a unit of O_L.
    IntVec dlog(const RatVec& u) const;
    /// log|phi(u)| for every embedding of L.
    std::vector<long double> log_embedding(const RatVec& u) const;

private:
    Etale L_;
    Lattice O_;
    std::vector<RatVec> gens_, inv_gens_;
    std::vector<long> torsion_orders_;
    IntMatrix rel_, conj_;
    struct Factor;
    std::vector<std::shared_ptr<const Factor>> factors_;
};

using Units = std::shared_ptr<const UnitGroup>;

/// Unit data of an order T inside O_L, as exponent lattices in Z^m.
struct OrderUnits {
    IntMatrix units;   // T^*
    IntMatrix real;    // T^* cap L_R
    IntMatrix totpos;  // totally positive elements of T^*
    IntMatrix norms;   // <v vbar : v in T^*>
    /// Sign vectors (one entry per real place, 1 = negative) of the basis rows of `real`.
    std::vector<std::vector<int>> real_signs;
};

OrderUnits order_units(const UnitGroup& U, const Lattice& T);

/// Index [A : B] of exponent lattices (B inside A, both full rank).
Int lattice_group_index(const IntMatrix& A, const IntMatrix& B);
/// Coset representatives of A/B.
std::vector<IntVec> coset_representatives(const IntMatrix& A, const IntMatrix& B);

/// Transversal of T^* / <v vbar>, as units of L.
std::vector<RatVec> unit_transversal(const UnitGroup& U, const OrderUnits& T);

/// Representatives of G_T = T^*_R / (T^* cap L^+), with their sign vectors.
struct SignClass {
    RatVec unit;
    std::vector<int> signs;
};
std::vector<SignClass> group_GS(const UnitGroup& U, const OrderUnits& T);

/// [T^* cap L^+ : <v vbar>] and the variant [T^*_R : <v vbar>].
Int ppav_count_formula(const OrderUnits& T);
Int ppav_count_formula_real(const OrderUnits& T);

/// Upper bound for the T2 norm of a balanced generator of a principal ideal
/// with the given component norms (|N_i| per factor of h), using T^*.
Rat balanced_generator_bound(const UnitGroup& U, const OrderUnits& T, const std::vector<Rat>& component_norms);

// ---- single number fields (exposed for tests) ----

/// Fundamental units of the maximal order of a real quadratic field given by
/// its discriminant D: smallest (X + Y sqrt D)/2 > 1 with X^2 - D Y^2 = +-4.
std::pair<Int, Int> quadratic_fundamental_unit(const Int& D);

/// Fundamental units of a totally real order (maximal) in Q[y]/(P), P
/// irreducible, with certified saturation. Throws UnitSearchExhausted.
std::vector<RatVec> real_fundamental_units(const NumberAlgebra& K, const Lattice& O);

}  // namespace abvar
