#include "abvar/algebra.hpp"

namespace abvar {

NumberAlgebra::NumberAlgebra(RatPoly f) : f_(std::move(f)) {
    ABVAR_ASSERT(f_.degree() >= 1 && f_.lead() == 1, "algebra modulus must be monic");
    n_ = static_cast<std::size_t>(f_.degree());
    const std::size_t m = 2 * n_ - 1;
    xpow_.assign(m, RatVec(n_, Rat(0)));
    for (std::size_t k = 0; k < n_; ++k) xpow_[k][k] = 1;
    for (std::size_t k = n_; k < m; ++k) {
        // x^k = x * x^{k-1}
        const RatVec& prev = xpow_[k - 1];
        RatVec cur(n_, Rat(0));
        for (std::size_t j = 0; j + 1 < n_; ++j) cur[j + 1] = prev[j];
        const Rat& top = prev[n_ - 1];
        if (top != 0)
            for (std::size_t j = 0; j < n_; ++j) cur[j] -= top * f_.coeffs()[j];
        xpow_[k] = std::move(cur);
    }
    for (const auto& v : xpow_)
        for (const auto& c : v) xpow_den_ = lcm(xpow_den_, Int(c.get_den()));
    for (const auto& v : xpow_) {
        IntVec w(n_);
        for (std::size_t j = 0; j < n_; ++j) w[j] = Int(v[j] * xpow_den_);
        xpow_num_.push_back(std::move(w));
    }
    // Newton sums
    power_traces_.assign(m, Rat(0));
    power_traces_[0] = static_cast<long>(n_);
    for (std::size_t k = 1; k < m; ++k) {
        Rat s = 0;
        // p_k = -(k c_{n-k} + sum_{i=1}^{k-1} c_{n-i} p_{k-i}) with monic f, for k <= n
        if (k <= n_) {
            s = -Rat(static_cast<long>(k)) * f_.coeff(n_ - k);
            for (std::size_t i = 1; i < k; ++i) s -= f_.coeff(n_ - i) * power_traces_[k - i];
        } else {
            for (std::size_t i = 1; i <= n_; ++i) s -= f_.coeff(n_ - i) * power_traces_[k - i];
        }
        power_traces_[k] = s;
    }
    trace_form_ = RatMatrix(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) trace_form_(i, j) = power_traces_[i + j];
}

RatVec NumberAlgebra::one() const { return scalar(1); }

RatVec NumberAlgebra::scalar(const Rat& a) const {
    RatVec v(n_, Rat(0));
    v[0] = a;
    return v;
}

RatVec NumberAlgebra::gen() const {
    if (n_ == 1) return RatVec{-f_.coeff(0)};
    RatVec v(n_, Rat(0));
    v[1] = 1;
    return v;
}

RatVec NumberAlgebra::from_poly(const RatPoly& p) const {
    RatPoly r = p % f_;
    RatVec v(n_, Rat(0));
    for (std::size_t i = 0; i < r.size(); ++i) v[i] = r.coeffs()[i];
    return v;
}

RatVec NumberAlgebra::add(const RatVec& a, const RatVec& b) const {
    RatVec c = a;
    for (std::size_t i = 0; i < n_; ++i) c[i] += b[i];
    return c;
}

RatVec NumberAlgebra::sub(const RatVec& a, const RatVec& b) const {
    RatVec c = a;
    for (std::size_t i = 0; i < n_; ++i) c[i] -= b[i];
    return c;
}

RatVec NumberAlgebra::neg(const RatVec& a) const {
    RatVec c = a;
    for (auto& x : c) x = -x;
    return c;
}

RatVec NumberAlgebra::scale(const Rat& s, const RatVec& a) const {
    RatVec c = a;
    for (auto& x : c) x *= s;
    return c;
}

namespace {

// v = num / den with integral num.
Int common_denominator(const RatVec& v, IntVec& num) {
    Int d = 1;
    for (const auto& c : v)
        if (c.get_den() != 1) d = lcm(d, Int(c.get_den()));
    num.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) num[i] = d == 1 ? Int(v[i].get_num()) : Int(v[i].get_num() * (d / v[i].get_den()));
    return d;
}

}  // namespace

RatVec NumberAlgebra::mul(const RatVec& a, const RatVec& b) const {
    // integer convolution over a common denominator, one division at the end
    IntVec A, B;
    Int den = common_denominator(a, A) * common_denominator(b, B);
    std::vector<Int> conv(2 * n_ - 1, Int(0));
    for (std::size_t i = 0; i < n_; ++i) {
        if (A[i] == 0) continue;
        for (std::size_t j = 0; j < n_; ++j)
            if (B[j] != 0) mpz_addmul(conv[i + j].get_mpz_t(), A[i].get_mpz_t(), B[j].get_mpz_t());
    }
    std::vector<Int> c(n_);
    bool high = false;
    for (std::size_t k = n_; k < conv.size(); ++k) high = high || conv[k] != 0;
    if (!high) {
        RatVec out(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            out[j] = Rat(conv[j], den);
            out[j].canonicalize();
        }
        return out;
    }
    for (std::size_t j = 0; j < n_; ++j) c[j] = conv[j] * xpow_den_;
    for (std::size_t k = n_; k < conv.size(); ++k) {
        if (conv[k] == 0) continue;
        for (std::size_t j = 0; j < n_; ++j)
            if (xpow_num_[k][j] != 0) mpz_addmul(c[j].get_mpz_t(), conv[k].get_mpz_t(), xpow_num_[k][j].get_mpz_t());
    }
    den *= xpow_den_;
    RatVec out(n_);
    for (std::size_t j = 0; j < n_; ++j) {
        out[j] = Rat(c[j], den);
        out[j].canonicalize();
    }
    return out;
}

RatVec NumberAlgebra::pow(RatVec a, unsigned long e) const {
    RatVec r = one();
    while (e) {
        if (e & 1) r = mul(r, a);
        e >>= 1;
        if (e) a = mul(a, a);
    }
    return r;
}

std::optional<RatVec> NumberAlgebra::inverse(const RatVec& a) const {
    RatPoly g, s, t;
    xgcd(to_poly(a), f_, g, s, t);
    if (g.degree() != 0) return std::nullopt;
    return from_poly(s);
}

bool NumberAlgebra::is_zero(const RatVec& a) const {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

RatMatrix NumberAlgebra::mult_matrix(const RatVec& a) const {
    RatMatrix m(n_, n_);
    RatVec row = a;
    for (std::size_t i = 0; i < n_; ++i) {
        m.set_row(i, row);
        // multiply by x
        RatVec nx(n_, Rat(0));
        for (std::size_t j = 0; j + 1 < n_; ++j) nx[j + 1] = row[j];
        const Rat top = row[n_ - 1];
        if (top != 0)
            for (std::size_t j = 0; j < n_; ++j) nx[j] -= top * f_.coeffs()[j];
        row = std::move(nx);
    }
    return m;
}

Rat NumberAlgebra::trace(const RatVec& a) const {
    Rat s = 0;
    for (std::size_t i = 0; i < n_; ++i)
        if (a[i] != 0) s += a[i] * power_traces_[i];
    return s;
}

Rat NumberAlgebra::norm(const RatVec& a) const {
    // resultant(f, a) since f is monic
    RatPoly ap = to_poly(a);
    if (ap.is_zero()) return 0;
    return resultant(f_, ap);
}

RatPoly NumberAlgebra::charpoly(const RatVec& a) const { return RatPoly(abvar::charpoly(mult_matrix(a))); }

RatPoly NumberAlgebra::minpoly(const RatVec& a) const {
    // smallest k with 1, a, ..., a^k dependent
    RatMatrix rows(0, n_);
    RatVec cur = one();
    for (std::size_t k = 0; k <= n_; ++k) {
        RatMatrix trial = rows;
        trial.append_row(cur);
        if (rank(trial) < trial.rows()) {
            auto sol = solve_left(rows, cur);
            ABVAR_ASSERT(sol.has_value(), "minpoly solve");
            std::vector<Rat> c(k + 1);
            for (std::size_t i = 0; i < k; ++i) c[i] = -(*sol)[i];
            c[k] = 1;
            return RatPoly(c);
        }
        rows = trial;
        cur = mul(cur, a);
    }
    fail(ErrorKind::Internal, "minimal polynomial not found");
}

RatVec NumberAlgebra::eval(const RatPoly& p, const RatVec& a) const {
    RatVec r = zero();
    for (std::size_t i = p.size(); i-- > 0;) {
        r = mul(r, a);
        r[0] += p.coeffs()[i];
    }
    return r;
}

}  // namespace abvar
