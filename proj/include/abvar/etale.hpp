#pragma once

#include <complex>
#include <memory>

#include "abvar/algebra.hpp"
#include "abvar/roots.hpp"

namespace abvar {

/// A complex embedding of L: root number `index` of factor `factor`.
struct Embedding {
    int factor = 0;
    int index = 0;
    RootBox box;
    int conj = -1;  // position of the complex-conjugate embedding
};

/// L = Q[x]/(h) for a validated squarefree Weil p-polynomial h without real
/// roots, with its CM involution pi -> p/pi.
class EtaleAlgebra {
public:
    /// Validates the Weil input; throws NotMonicIntegral, NotSquarefree,
    /// HasRealRoots, NotWeil or NonPrimeField.
    static std::shared_ptr<const EtaleAlgebra> make(const RatPoly& h, const Int& p);

    const NumberAlgebra& alg() const { return alg_; }
    const RatPoly& h() const { return h_; }
    const Int& p() const { return p_; }
    int g() const { return g_; }
    std::size_t degree() const { return alg_.degree(); }
    /// Monic irreducible factors h_1..h_t, sorted by degree then coefficients.
    const std::vector<RatPoly>& factors() const { return factors_; }
    const std::vector<RatVec>& idempotents() const { return idempotents_; }

    RatVec pi() const { return alg_.gen(); }
    /// p / pi
    RatVec vbar() const { return involve(pi()); }
    RatVec involve(const RatVec& x) const { return vec_mul(x, involution_); }
    const RatMatrix& involution() const { return involution_; }
    /// Basis (rows) of the totally real subalgebra L_R.
    const RatMatrix& real_basis() const { return real_basis_; }
    /// Basis (rows) of {x : involve(x) = -x}.
    const RatMatrix& imag_basis() const { return imag_basis_; }

    bool is_totally_imaginary(const RatVec& x) const;
    bool is_totally_real(const RatVec& x) const;
    /// Throws NotTotallyReal or NotAUnit when the precondition fails.
    bool is_totally_positive(const RatVec& x) const;
    /// Characteristic polynomial of multiplication by x on L_R (x real).
    RatPoly real_charpoly(const RatVec& x) const;

    Rat trace(const RatVec& x) const { return alg_.trace(x); }
    Rat norm(const RatVec& x) const { return alg_.norm(x); }

    /// All 2g complex embeddings ordered by (factor, root box order).
    const std::vector<Embedding>& embeddings() const { return embeddings_; }
    /// Element of L as a polynomial in pi reduced modulo factor i.
    RatPoly component(const RatVec& x, int factor) const;
    std::complex<double> embed_approx(const RatVec& x, std::size_t k) const;

private:
    RatPoly h_;
    Int p_;
    int g_ = 0;
    NumberAlgebra alg_;
    std::vector<RatPoly> factors_;
    std::vector<RatVec> idempotents_;
    RatMatrix involution_, real_basis_, imag_basis_;
    std::vector<Embedding> embeddings_;
};

using Etale = std::shared_ptr<const EtaleAlgebra>;

/// Validation only: throws the same errors as EtaleAlgebra::make.
void validate_weil(const RatPoly& h, const Int& p);

/// h(x) = x^g P(x + p/x); returns P (low to high). h must satisfy the
/// functional equation.
RatPoly real_weil_polynomial(const RatPoly& h, const Int& p);

}  // namespace abvar
