#include "abvar/core.hpp"

#include <algorithm>
#include <map>

namespace abvar {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::NonPositiveDefinite: return "NonPositiveDefinite";
        case ErrorKind::NotSquarefree: return "NotSquarefree";
        case ErrorKind::NotWeil: return "NotWeil";
        case ErrorKind::HasRealRoots: return "HasRealRoots";
        case ErrorKind::NotMonicIntegral: return "NotMonicIntegral";
        case ErrorKind::NotTotallyReal: return "NotTotallyReal";
        case ErrorKind::NotTotallyImaginary: return "NotTotallyImaginary";
        case ErrorKind::NotAUnit: return "NotAUnit";
        case ErrorKind::IndexTooLarge: return "IndexTooLarge";
        case ErrorKind::ClassGroupTooLarge: return "ClassGroupTooLarge";
        case ErrorKind::WitnessSearchExhausted: return "WitnessSearchExhausted";
        case ErrorKind::UnitSearchExhausted: return "UnitSearchExhausted";
        case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorKind::SplittingFieldTooLarge: return "SplittingFieldTooLarge";
        case ErrorKind::NotAnIsogeny: return "NotAnIsogeny";
        case ErrorKind::BadLabel: return "BadLabel";
        case ErrorKind::NonPrimeField: return "NonPrimeField";
        case ErrorKind::BadFixture: return "BadFixture";
        case ErrorKind::Internal: return "Internal";
    }
    return "Unknown";
}

namespace {

Int pollard_rho(const Int& n) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1; c < 200; ++c) {
        Int x = 2, y = 2, d = 1;
        auto f = [&](const Int& v) { return mod_floor(v * v + c, n); };
        for (unsigned long it = 0; d == 1 && it < 2000000; ++it) {
            x = f(x);
            y = f(f(y));
            d = int_gcd(abs(x - y), n);
        }
        if (d != 1 && d != n) return d;
    }
    fail(ErrorKind::Internal, "integer factorization failed");
}

void factor_rec(const Int& n, std::map<Int, int>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    Int d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

std::vector<std::pair<Int, int>> factor_integer(Int n) {
    n = abs(n);
    ABVAR_ASSERT(n != 0, "factor_integer(0)");
    std::map<Int, int> f;
    for (unsigned long p = 2; p < 10000 && p * p <= n; ++p) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            ++f[Int(p)];
            n /= p;
        }
    }
    factor_rec(n, f);
    return {f.begin(), f.end()};
}

}  // namespace abvar
