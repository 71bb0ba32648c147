#pragma once

#include "abvar/etale.hpp"
#include "abvar/ordertools.hpp"

namespace abvar {

struct OrderInfo {
    Lattice lat;
    Int index;  // [O_L : T]
    bool gorenstein = false;
    bool conj_stable = false;
};

/// R_w = Z[pi, p/pi].
Lattice frobenius_order(const EtaleAlgebra& L);
/// O_L.
Lattice maximal_order(const EtaleAlgebra& L);
/// Image under the CM involution.
Lattice conjugate(const EtaleAlgebra& L, const Lattice& a);
/// (T : O), the largest O-ideal inside T.
Lattice conductor(const NumberAlgebra& alg, const Lattice& order, const Lattice& top);

/// All orders between R and O (O containing R), sorted by index in O then
/// canonical basis, with Gorenstein and conjugation-stability flags.
/// Throws IndexTooLarge when [O : R] > max_index.
std::vector<OrderInfo> overorders(const EtaleAlgebra& L, const Lattice& R, const Lattice& O,
                                  const Int& max_index = Int(1) << 20);

}  // namespace abvar
