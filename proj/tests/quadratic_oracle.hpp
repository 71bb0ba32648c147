#pragma once

#include "abvar/pol.hpp"

// Principal polarizations on imaginary quadratic algebras without unit groups.

namespace abvar {

inline std::optional<Int> exact_sqrt(const Rat& r) {
    if (r < 0) return std::nullopt;
    Int n = r.get_num(), d = r.get_den();
    if (d != 1) return std::nullopt;
    Int s = sqrt(n);
    if (s * s != n) return std::nullopt;
    return s;
}

// Principal polarizations of an ideal I in an imaginary quadratic algebra,
// found without unit groups: a totally imaginary lambda is a rational
// multiple t of 2 pi - a, and lambda * dual(I) = I fixes t^2 by covolumes.
inline int quadratic_ppav_oracle(const EtaleAlgebra& L, const Lattice& I, const CMType& phi) {
    const auto& alg = L.alg();
    Rat a = -L.h().coeff(1);
    RatVec w = alg.sub(alg.scale(Rat(2), L.pi()), alg.scale(a, alg.one()));
    Lattice D = dual_ideal(L, I);
    Rat ratio = covolume(I) / covolume(D) / alg.norm(w);
    // t = u / v with t^2 = ratio
    auto u = exact_sqrt(Rat(ratio.get_num())), v = exact_sqrt(Rat(ratio.get_den()));
    if (!u || !v) return 0;
    int count = 0;
    for (int s : {1, -1}) {
        RatVec lam = alg.scale(Rat(*u * s, *v), w);
        if (lattice_mul_elem(alg, D, lam) == I && is_phi_positive(L, lam, phi)) ++count;
    }
    return count;
}

}  // namespace abvar
