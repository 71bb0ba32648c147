#pragma once

#include <optional>
#include <vector>

#include "abvar/matrix.hpp"
#include "abvar/poly.hpp"

namespace abvar {

/// Q[x]/(f) for a monic, integral, squarefree f, with elements stored as
/// coordinate vectors on the power basis 1, x, ..., x^{n-1}. The Z-span of
/// the power basis is then an order, which the lattice code relies on.
class NumberAlgebra {
public:
    NumberAlgebra() = default;
    explicit NumberAlgebra(RatPoly f);

    std::size_t degree() const { return n_; }
    const RatPoly& modulus() const { return f_; }

    RatVec zero() const { return RatVec(n_, Rat(0)); }
    RatVec one() const;
    RatVec scalar(const Rat& a) const;
    /// Class of x.
    RatVec gen() const;
    RatVec from_poly(const RatPoly& p) const;
    RatPoly to_poly(const RatVec& a) const { return RatPoly(a); }

    RatVec add(const RatVec& a, const RatVec& b) const;
    RatVec sub(const RatVec& a, const RatVec& b) const;
    RatVec neg(const RatVec& a) const;
    RatVec scale(const Rat& s, const RatVec& a) const;
    RatVec mul(const RatVec& a, const RatVec& b) const;
    RatVec pow(RatVec a, unsigned long e) const;
    /// nullopt for zero divisors.
    std::optional<RatVec> inverse(const RatVec& a) const;
    bool is_unit(const RatVec& a) const { return norm(a) != 0; }
    bool is_zero(const RatVec& a) const;

    /// Row i holds the coordinates of a * x^i.
    RatMatrix mult_matrix(const RatVec& a) const;
    Rat trace(const RatVec& a) const;
    Rat norm(const RatVec& a) const;
    RatPoly charpoly(const RatVec& a) const;
    RatPoly minpoly(const RatVec& a) const;
    /// Gram matrix Tr(x^i x^j).
    const RatMatrix& trace_form() const { return trace_form_; }
    /// Evaluate a polynomial at an element.
    RatVec eval(const RatPoly& p, const RatVec& a) const;

private:
    RatPoly f_;
    std::size_t n_ = 0;
    std::vector<RatVec> xpow_;  // reductions of x^k, k < 2n-1
    std::vector<IntVec> xpow_num_;  // xpow_ * xpow_den_
    Int xpow_den_ = 1;
    RatVec power_traces_;       // Tr(x^k), k < 2n-1
    RatMatrix trace_form_;
};

}  // namespace abvar
