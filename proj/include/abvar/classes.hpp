#pragma once

#include "abvar/units.hpp"

namespace abvar {

/// Data shared by all orders of one isogeny class: L, O_L, R_w, O_L^* and
/// representatives of Pic(O_L) by integral ideals coprime to [O_L : R_w].
struct ClassContext {
    Etale L;
    Lattice R, O;
    Units U;
    std::vector<Lattice> pic_maximal;

    static std::shared_ptr<const ClassContext> make(const Etale& L, const Lattice& R, const Lattice& O);
    const NumberAlgebra& alg() const { return L->alg(); }
};

using Classes = std::shared_ptr<const ClassContext>;

/// Generator y of an invertible O_L-ideal A (yO_L = A), if A is principal.
/// Throws WitnessSearchExhausted if the certified search region is too large.
std::optional<RatVec> principal_generator(const UnitGroup& U, const Lattice& A);

/// 1 in (I:J)(J:I).
bool weakly_equivalent(const NumberAlgebra& alg, const Lattice& I, const Lattice& J);

/// Representatives of the weak equivalence classes of fractional ideals with
/// multiplicator ring T, all satisfying J*O = O and (when possible) T in J.
std::vector<Lattice> weak_classes(const ClassContext& C, const Lattice& T);

/// Representatives of Pic(T) (invertible T-ideals).
std::vector<Lattice> picard_group(const ClassContext& C, const Lattice& T, const OrderUnits& TU);

/// Isomorphism classes of fractional ideals with multiplicator ring T:
/// weak classes times Pic(T), sorted by canonical basis.
std::vector<Lattice> ideal_classes_with_ring(const ClassContext& C, const Lattice& T, const OrderUnits& TU);

/// x with x*I = J (I, J fractional ideals with multiplicator ring T).
std::optional<RatVec> iso_witness(const ClassContext& C, const Lattice& T, const Lattice& I, const Lattice& J);

/// |(A/B)^*| for orders/ideals B inside a ring A (B an ideal of A).
Int unit_count_quotient(const NumberAlgebra& alg, const Lattice& A, const Lattice& B);

}  // namespace abvar
