#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace abvar {

using Int = mpz_class;
using Rat = mpq_class;

enum class ErrorKind {
    NonPositiveDefinite,
    NotSquarefree,
    NotWeil,
    HasRealRoots,
    NotMonicIntegral,
    NotTotallyReal,
    NotTotallyImaginary,
    NotAUnit,
    IndexTooLarge,
    ClassGroupTooLarge,
    WitnessSearchExhausted,
    UnitSearchExhausted,
    PrecisionExhausted,
    SplittingFieldTooLarge,
    NotAnIsogeny,
    BadLabel,
    NonPrimeField,
    BadFixture,
    Internal,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

#define ABVAR_ASSERT(cond, msg)                                                         \
    do {                                                                                \
        if (!(cond)) ::abvar::fail(::abvar::ErrorKind::Internal, std::string(msg) +     \
                                   " (" #cond ")");                                     \
    } while (0)

inline Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int mod_floor(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int floor_rat(const Rat& q) { return floor_div(q.get_num(), q.get_den()); }

/// Nearest integer, ties rounded up.
inline Int round_rat(const Rat& q) { return floor_rat(q + Rat(1, 2)); }

inline int sgn(const Int& a) { return mpz_sgn(a.get_mpz_t()); }
inline int sgn(const Rat& a) { return mpq_sgn(a.get_mpq_t()); }

inline Int int_gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int int_lcm(const Int& a, const Int& b) {
    Int g;
    mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int int_pow(const Int& a, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), a.get_mpz_t(), e);
    return r;
}

inline bool is_prime(const Int& n) { return n > 1 && mpz_probab_prime_p(n.get_mpz_t(), 40) > 0; }

/// Exponent of p in n (n != 0).
inline int valuation(const Int& n, const Int& p) {
    if (n == 0) return 1 << 28;
    Int m = abs(n);
    int v = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
        m /= p;
        ++v;
    }
    return v;
}

inline int valuation(const Rat& q, const Int& p) {
    if (q == 0) return 1 << 28;
    return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

/// Prime factorization by trial division and Pollard rho. Throws Internal if
/// a composite cofactor resists the configured effort.
std::vector<std::pair<Int, int>> factor_integer(Int n);

}  // namespace abvar
