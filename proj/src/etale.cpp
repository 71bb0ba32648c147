#include "abvar/etale.hpp"

#include "abvar/factor.hpp"

namespace abvar {

RatPoly real_weil_polynomial(const RatPoly& h, const Int& p) {
    const int n = h.degree();
    const int g = n / 2;
    RatPoly r = h;
    std::vector<Rat> P(g + 1, Rat(0));
    RatPoly x2p{0, 0, 1};
    x2p = x2p + RatPoly::constant(Rat(p));
    for (int k = g; k >= 0; --k) {
        Rat c = r.coeff(g + k);
        P[k] = c;
        if (c == 0) continue;
        RatPoly t = RatPoly::monomial(c, g - k);
        for (int i = 0; i < k; ++i) t = t * x2p;
        r = r - t;
    }
    ABVAR_ASSERT(r.is_zero(), "polynomial does not satisfy the functional equation");
    return RatPoly(P);
}

void validate_weil(const RatPoly& h, const Int& p) {
    if (!is_prime(p)) fail(ErrorKind::NonPrimeField, "p = " + p.get_str() + " is not prime");
    if (h.degree() < 1 || h.lead() != 1) fail(ErrorKind::NotMonicIntegral, "polynomial is not monic");
    for (const auto& c : h.coeffs())
        if (c.get_den() != 1) fail(ErrorKind::NotMonicIntegral, "polynomial has non-integral coefficients");
    if (!is_squarefree(h)) fail(ErrorKind::NotSquarefree, h.str() + " is not squarefree");
    RatPoly x2mp{0, 0, 1};
    x2mp = x2mp - RatPoly::constant(Rat(p));
    if (gcd(h, x2mp).degree() > 0) fail(ErrorKind::HasRealRoots, h.str() + " has the real roots +-sqrt(p)");
    const int n = h.degree();
    if (n % 2) fail(ErrorKind::NotWeil, "odd degree");
    const int g = n / 2;
    // functional equation c_k = p^{g-k} c_{2g-k}
    for (int k = 0; k < g; ++k)
        if (h.coeff(k) != Rat(int_pow(p, g - k)) * h.coeff(2 * g - k))
            fail(ErrorKind::NotWeil, "functional equation fails for " + h.str());
    // all roots of the real Weil polynomial are real and in (-2 sqrt p, 2 sqrt p)
    RatPoly P = real_weil_polynomial(h, p);
    if (count_real_roots(P) != g) fail(ErrorKind::NotWeil, "roots off the circle |z|^2 = p");
    // S(y^2) = P(y) P(-y); roots of S are the squares of the roots of P
    RatPoly Pm = compose(P, RatPoly{0, -1});
    RatPoly prod = P * Pm;
    std::vector<Rat> s;
    for (std::size_t i = 0; i < prod.size(); i += 2) s.push_back(prod.coeffs()[i]);
    RatPoly S(s);
    RatPoly Ssf = S / gcd(S, derivative(S));
    auto seq = sturm_sequence(Ssf);
    Rat four_p = Rat(4 * p);
    int below = sturm_count_le(seq, four_p) - (Ssf(four_p) == 0 ? 1 : 0);
    if (below != count_real_roots(Ssf)) fail(ErrorKind::NotWeil, "roots off the circle |z|^2 = p");
}

std::shared_ptr<const EtaleAlgebra> EtaleAlgebra::make(const RatPoly& h, const Int& p) {
    validate_weil(h, p);
    auto L = std::make_shared<EtaleAlgebra>();
    L->h_ = h;
    L->p_ = p;
    L->g_ = h.degree() / 2;
    L->alg_ = NumberAlgebra(h);
    const std::size_t n = h.degree();
    for (auto& [f, m] : factor_q(h)) L->factors_.push_back(f);
    for (const auto& f : L->factors_) {
        RatPoly co = h / f;
        RatPoly e = (co * invmod(co % f, f)) % h;
        L->idempotents_.push_back(L->alg_.from_poly(e));
    }
    // involution: x^k -> (p/x)^k
    auto xinv = L->alg_.inverse(L->alg_.gen());
    ABVAR_ASSERT(xinv.has_value(), "pi is not invertible");
    RatVec pbar = L->alg_.scale(Rat(p), *xinv);
    L->involution_ = RatMatrix(n, n);
    RatVec cur = L->alg_.one();
    for (std::size_t k = 0; k < n; ++k) {
        L->involution_.set_row(k, cur);
        cur = L->alg_.mul(cur, pbar);
    }
    RatMatrix id = to_rat(IntMatrix::identity(n));
    L->real_basis_ = left_kernel(L->involution_ - id);
    L->imag_basis_ = left_kernel(L->involution_ + id);
    ABVAR_ASSERT(L->real_basis_.rows() == static_cast<std::size_t>(L->g_), "real subalgebra dimension");
    // complex embeddings
    const Rat width = Rat(1) / (Int(1) << 30);
    for (std::size_t i = 0; i < L->factors_.size(); ++i) {
        auto boxes = isolate_complex_roots(L->factors_[i], width);
        std::size_t base = L->embeddings_.size();
        for (std::size_t j = 0; j < boxes.size(); ++j)
            L->embeddings_.push_back({static_cast<int>(i), static_cast<int>(j), boxes[j], -1});
        for (std::size_t j = 0; j < boxes.size(); ++j) {
            const RootBox& b = boxes[j];
            RootBox mirror{b.re_lo, b.re_hi, -b.im_hi, -b.im_lo};
            for (std::size_t k = 0; k < boxes.size(); ++k)
                if (k != j && !mirror.disjoint(boxes[k])) L->embeddings_[base + j].conj = static_cast<int>(base + k);
            ABVAR_ASSERT(L->embeddings_[base + j].conj >= 0, "conjugate root not found");
        }
    }
    return L;
}

bool EtaleAlgebra::is_totally_imaginary(const RatVec& x) const { return involve(x) == alg_.neg(x); }

bool EtaleAlgebra::is_totally_real(const RatVec& x) const { return involve(x) == x; }

RatPoly EtaleAlgebra::real_charpoly(const RatVec& x) const {
    if (!is_totally_real(x)) fail(ErrorKind::NotTotallyReal, "element is not fixed by the involution");
    RatMatrix img = real_basis_ * alg_.mult_matrix(x);
    RatMatrix m(real_basis_.rows(), real_basis_.rows());
    for (std::size_t i = 0; i < img.rows(); ++i) {
        auto c = solve_left(real_basis_, img.row(i));
        ABVAR_ASSERT(c.has_value(), "L_R is not stable under a real element");
        m.set_row(i, *c);
    }
    return RatPoly(charpoly(m));
}

bool EtaleAlgebra::is_totally_positive(const RatVec& x) const {
    RatPoly chi = real_charpoly(x);
    if (chi.coeff(0) == 0) fail(ErrorKind::NotAUnit, "element is a zero divisor");
    RatPoly sf = chi / gcd(chi, derivative(chi));
    for (auto iv : isolate_real_roots(sf)) {
        while (iv.lo <= 0 && iv.hi >= 0) iv = refine_real_root(sf, iv, (iv.hi - iv.lo) / 2);
        if (iv.hi < 0) return false;
    }
    return true;
}

RatPoly EtaleAlgebra::component(const RatVec& x, int factor) const { return RatPoly(x) % factors_[factor]; }

std::complex<double> EtaleAlgebra::embed_approx(const RatVec& x, std::size_t k) const {
    std::complex<double> z = embeddings_[k].box.approx(), r = 0;
    for (std::size_t i = x.size(); i-- > 0;) r = r * z + x[i].get_d();
    return r;
}

}  // namespace abvar
