#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "abvar/poly.hpp"

namespace abvar {

/// Polynomials over F_p with p < 2^31, coefficients lowest first.
using ModPoly = std::vector<std::uint64_t>;

ModPoly modp_reduce(const std::vector<Int>& f, std::uint64_t p);
/// Monic irreducible factors of a squarefree f over F_p (Cantor-Zassenhaus,
/// deterministic seed). p must be odd.
std::vector<ModPoly> modp_factor_squarefree(const ModPoly& f, std::uint64_t p);
/// f mod p has full degree and is squarefree (which certifies f squarefree).
bool squarefree_mod_p(const RatPoly& f, std::uint64_t p);
/// Degrees of the irreducible factors of f mod p; empty when f mod p is not
/// squarefree of full degree.
std::vector<int> modp_factor_degrees(const RatPoly& f, std::uint64_t p);

/// Irreducible factors over Q with multiplicities; factors monic and sorted
/// by (degree, coefficients).
std::vector<std::pair<RatPoly, int>> factor_q(const RatPoly& f);

/// Whether f (nonconstant) is irreducible over Q.
bool is_irreducible(const RatPoly& f);

}  // namespace abvar
