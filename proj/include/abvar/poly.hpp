#pragma once

#include <string>
#include <utility>
#include <vector>

#include "abvar/core.hpp"

namespace abvar {

/// Dense univariate polynomial over Q, coefficients lowest degree first.
/// The zero polynomial has an empty coefficient vector.
class RatPoly {
public:
    RatPoly() = default;
    RatPoly(std::vector<Rat> c) : c_(std::move(c)) { trim(); }
    RatPoly(std::initializer_list<long> c) {
        for (long v : c) c_.emplace_back(v);
        trim();
    }
    static RatPoly constant(const Rat& a) { return RatPoly(std::vector<Rat>{a}); }
    static RatPoly monomial(const Rat& a, std::size_t k) {
        std::vector<Rat> c(k + 1, Rat(0));
        c[k] = a;
        return RatPoly(std::move(c));
    }
    static RatPoly x() { return monomial(1, 1); }

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const Rat& lead() const { return c_.back(); }
    Rat coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }
    const std::vector<Rat>& coeffs() const { return c_; }
    std::size_t size() const { return c_.size(); }

    Rat operator()(const Rat& x) const;

    friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.c_ == b.c_; }
    friend RatPoly operator+(const RatPoly& a, const RatPoly& b);
    friend RatPoly operator-(const RatPoly& a, const RatPoly& b);
    friend RatPoly operator-(const RatPoly& a);
    friend RatPoly operator*(const RatPoly& a, const RatPoly& b);
    friend RatPoly operator*(const Rat& s, const RatPoly& a);

    std::string str(const char* var = "x") const;

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rat> c_;
};

std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b);
RatPoly operator/(const RatPoly& a, const RatPoly& b);
RatPoly operator%(const RatPoly& a, const RatPoly& b);
RatPoly monic(const RatPoly& a);
/// Monic gcd; gcd(0,0) = 0.
RatPoly gcd(const RatPoly& a, const RatPoly& b);
/// s*a + t*b = gcd(a,b) (monic).
void xgcd(const RatPoly& a, const RatPoly& b, RatPoly& g, RatPoly& s, RatPoly& t);
/// Inverse of a modulo m; throws Internal if not coprime.
RatPoly invmod(const RatPoly& a, const RatPoly& m);
RatPoly mulmod(const RatPoly& a, const RatPoly& b, const RatPoly& m);
RatPoly powmod(RatPoly a, unsigned long e, const RatPoly& m);
RatPoly derivative(const RatPoly& a);
/// a(b(x)).
RatPoly compose(const RatPoly& a, const RatPoly& b);
/// a(b(x)) mod m.
RatPoly compose_mod(const RatPoly& a, const RatPoly& b, const RatPoly& m);
bool is_squarefree(const RatPoly& a);
/// Monic squarefree decomposition: pairs (s_i, i) with a = c * prod s_i^i.
std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const RatPoly& a);
/// Integer polynomial with positive leading coefficient and content 1,
/// a rational multiple of a.
std::vector<Int> primitive_part(const RatPoly& a);
RatPoly from_ints(const std::vector<Int>& c);
Rat resultant(const RatPoly& a, const RatPoly& b);
Rat discriminant(const RatPoly& a);
/// Product of (x - r) over the given rationals.
RatPoly poly_from_roots(const std::vector<Rat>& r);

// ---- real roots ----

struct RatInterval {
    Rat lo, hi;  // closed, lo <= hi; an exact root is stored as lo == hi
};

/// Sturm sequence of a squarefree polynomial.
std::vector<RatPoly> sturm_sequence(const RatPoly& f);
/// Number of distinct real roots in (a, b].
int sturm_count(const std::vector<RatPoly>& seq, const Rat& a, const Rat& b);
/// Number of distinct real roots in (-inf, b].
int sturm_count_le(const std::vector<RatPoly>& seq, const Rat& b);
int count_real_roots(const RatPoly& f);
/// Rational upper bound for the absolute value of every complex root.
Rat root_bound(const RatPoly& f);
/// Disjoint isolating intervals, in increasing order. f must be squarefree.
std::vector<RatInterval> isolate_real_roots(const RatPoly& f);
/// Bisect until hi - lo <= width, keeping one root of f inside.
RatInterval refine_real_root(const RatPoly& f, RatInterval iv, const Rat& width);

}  // namespace abvar
