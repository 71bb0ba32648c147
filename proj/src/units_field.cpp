#include <algorithm>
#include <cmath>

#include "abvar/units.hpp"

namespace abvar {

namespace {

using LD = long double;

// Smallest regulator of any number field (Friedman), rounded down.
constexpr LD kRegulatorLowerBound = 0.2052L;

LD eval_real(const RatPoly& f, LD x) {
    LD r = 0;
    for (int i = f.degree(); i >= 0; --i) r = r * x + LD(f.coeff(i).get_d());
    return r;
}

// Solve z = c * E for c (E square, Gaussian elimination with pivoting).
std::vector<LD> solve_real(std::vector<std::vector<LD>> E, std::vector<LD> z) {
    const std::size_t n = z.size();
    // transpose to solve E^T c^T = z^T
    std::vector<std::vector<LD>> A(n, std::vector<LD>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) A[i][j] = E[j][i];
        A[i][n] = z[i];
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || A[r][c] == 0) continue;
            LD f = A[r][c] / A[c][c];
            for (std::size_t k = c; k <= n; ++k) A[r][k] -= f * A[c][k];
        }
    }
    std::vector<LD> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = A[i][n] / A[i][i];
    return x;
}

LD abs_det(std::vector<std::vector<LD>> a) {
    const std::size_t n = a.size();
    LD d = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        if (a[c][c] == 0) return 0;
        d *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            LD f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return std::fabs(d);
}

bool is_prime_small(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Numerical data for a totally real order.
struct RealField {
    const NumberAlgebra& K;
    std::vector<RatVec> basis;
    std::vector<LD> roots;
    std::vector<std::vector<LD>> E;  // E[i][k] = phi_k(basis_i)

    RealField(const NumberAlgebra& k, const std::vector<RatVec>& b) : K(k), basis(b) {
        for (const auto& z : approximate_roots(K.modulus())) roots.push_back(z.real());
        std::sort(roots.begin(), roots.end());
        for (const auto& w : basis) {
            std::vector<LD> row;
            for (LD r : roots) row.push_back(eval_real(K.to_poly(w), r));
            E.push_back(row);
        }
    }
    std::vector<LD> embed(const RatVec& x) const {
        std::vector<LD> v;
        for (LD r : roots) v.push_back(eval_real(K.to_poly(x), r));
        return v;
    }
    // Integral element with the given embedding values, if the rounding is clean.
    std::optional<RatVec> recover(const std::vector<LD>& z) const {
        auto c = solve_real(E, z);
        RatVec x = K.zero();
        for (std::size_t i = 0; i < c.size(); ++i) {
            LD r = std::nearbyint(c[i]);
            if (std::fabs(c[i] - r) > 1e-4L) return std::nullopt;
            Int ri;
            mpz_set_d(ri.get_mpz_t(), double(r));
            for (std::size_t k = 0; k < x.size(); ++k) x[k] += Rat(ri) * basis[i][k];
        }
        return x;
    }
};

std::vector<LD> log_vector(const RealField& F, const RatVec& u, std::size_t r) {
    auto v = F.embed(u);
    std::vector<LD> l(r);
    for (std::size_t k = 0; k < r; ++k) l[k] = std::log(std::fabs(v[k]));
    return l;
}

// An ell-th root of y in O, searched through the real embeddings.
std::optional<RatVec> real_root(const RealField& F, const RatVec& y, long ell) {
    auto v = F.embed(y);
    const std::size_t m = v.size();
    std::vector<LD> mag(m);
    for (std::size_t k = 0; k < m; ++k) {
        if (ell % 2 == 0 && v[k] <= 0) return std::nullopt;
        mag[k] = std::pow(std::fabs(v[k]), 1.0L / LD(ell));
        if (v[k] < 0) mag[k] = -mag[k];
    }
    const unsigned long patterns = ell % 2 ? 1 : 1ul << (m - 1);
    for (unsigned long s = 0; s < patterns; ++s) {
        std::vector<LD> z = mag;
        for (std::size_t k = 1; k < m; ++k)
            if (s >> (k - 1) & 1) z[k] = -z[k];
        auto x = F.recover(z);
        if (x && F.K.pow(*x, ell) == y) return x;
    }
    return std::nullopt;
}

RatVec unit_product(const NumberAlgebra& K, const std::vector<RatVec>& u, const std::vector<long>& a, int sign) {
    RatVec y = K.scalar(sign);
    for (std::size_t j = 0; j < u.size(); ++j)
        if (a[j]) y = K.mul(y, K.pow(u[j], a[j]));
    return y;
}

// Replace units by ell-th roots until Reg / lower bound certifies the index is 1.
void saturate(const RealField& F, std::vector<RatVec>& units) {
    const std::size_t r = units.size();
    for (;;) {
        std::vector<std::vector<LD>> logs;
        for (const auto& u : units) logs.push_back(log_vector(F, u, r));
        LD reg = abs_det(logs);
        long bound = long(std::floor(reg / kRegulatorLowerBound * (1 + 1e-9L)));
        if (bound > 100000) fail(ErrorKind::UnitSearchExhausted, "unit index bound too large for saturation");
        bool improved = false;
        for (long ell = 2; ell <= bound && !improved; ++ell) {
            if (!is_prime_small(ell)) continue;
            std::vector<long> a(r, 0);
            // vectors with first nonzero entry 1
            for (std::size_t lead = 0; lead < r && !improved; ++lead) {
                std::fill(a.begin(), a.end(), 0);
                a[lead] = 1;
                for (;;) {
                    for (int sign : {1, -1}) {
                        if (sign < 0 && ell % 2) continue;
                        auto z = real_root(F, unit_product(F.K, units, a, sign), ell);
                        if (z) {
                            units[lead] = *z;
                            improved = true;
                            break;
                        }
                    }
                    if (improved) break;
                    std::size_t j = r;
                    bool carry = true;
                    while (carry && j > lead + 1) {
                        --j;
                        if (++a[j] < ell) carry = false;
                        else a[j] = 0;
                    }
                    if (carry) break;
                }
            }
        }
        if (!improved) return;
    }
}

}  // namespace

std::pair<Int, Int> quadratic_fundamental_unit(const Int& D) {
    ABVAR_ASSERT(D > 1 && !mpz_perfect_square_p(D.get_mpz_t()), "real quadratic discriminant expected");
    auto is_unit = [&](const Int& X, const Int& Y) {
        Int n = X * X - D * Y * Y;
        return n == 4 || n == -4;
    };
    if (D <= 16) {
        for (Int Y = 1;; ++Y) {
            Int s = D * Y * Y;
            for (int t : {-4, 4}) {
                Int v = s + t, X;
                if (v < 0) continue;
                X = sqrt(v);
                if (X * X == v && X > 0) return {X, Y};
            }
        }
    }
    // convergents of sqrt(D)
    Int a0 = sqrt(D);
    Int P = 0, Q = 1, a = a0;
    Int pm = 1, p = a0, qm = 0, q = 1;
    std::optional<std::pair<Int, Int>> best;
    for (int iter = 0; iter < 1000000; ++iter) {
        for (int c : {1, 2}) {
            Int X = c * p, Y = c * q;
            if (is_unit(X, Y) && (!best || Y < best->second)) best = {X, Y};
        }
        if (best && q > best->second) return *best;
        P = a * Q - P;
        Q = (D - P * P) / Q;
        a = (a0 + P) / Q;
        Int pn = a * p + pm, qn = a * q + qm;
        pm = p;
        p = pn;
        qm = q;
        q = qn;
    }
    fail(ErrorKind::UnitSearchExhausted, "continued fraction of sqrt(" + D.get_str() + ") did not close");
}

std::vector<RatVec> real_fundamental_units(const NumberAlgebra& K, const Lattice& O) {
    const std::size_t m = K.degree();
    if (m == 1) return {};
    if (m == 2) {
        Rat d = lattice_discriminant(K, O);
        IntVec u = integral_coords(O, K.one());
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), u[0].get_mpz_t(), u[1].get_mpz_t());
        ABVAR_ASSERT(g == 1, "1 is not primitive in the order");
        // w with det(coords(1), coords(w)) = 1
        RatVec w = K.add(K.scale(Rat(-t), O.basis_vector(0)), K.scale(Rat(s), O.basis_vector(1)));
        Rat tr = K.trace(w);
        auto [X, Y] = quadratic_fundamental_unit(d.get_num());
        Rat c0 = (Rat(X) - Rat(Y) * tr) / 2;
        return {K.add(K.scalar(c0), K.scale(Rat(Y), w))};
    }

    const std::size_t r = m - 1;
    RatMatrix B = O.basis();
    RatMatrix G = B * K.trace_form() * B.transpose();
    IntMatrix red = lll_reduce(IntMatrix::identity(m), G);
    RatMatrix RB = to_rat(red) * B;
    RatMatrix RG = RB * K.trace_form() * RB.transpose();
    std::vector<RatVec> basis;
    for (std::size_t i = 0; i < m; ++i) basis.push_back(RB.row(i));
    RealField F(K, basis);

    std::vector<RatVec> units;
    std::vector<std::vector<LD>> gs;  // Gram-Schmidt of chosen log vectors
    for (Rat bound = Rat(long(4 * m)); units.size() < r; bound *= 4) {
        auto vecs = short_vectors(RG, bound, 400000);
        if (!vecs) fail(ErrorKind::UnitSearchExhausted, "too many short vectors while searching units");
        std::vector<std::pair<Rat, RatVec>> found;
        for (const auto& c : *vecs) {
            RatVec x = K.zero();
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t k = 0; k < m; ++k) x[k] += Rat(c[i]) * basis[i][k];
            Rat n = K.norm(x);
            if (n != 1 && n != -1) continue;
            found.push_back({K.trace(K.mul(x, x)), x});
        }
        std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        units.clear();
        gs.clear();
        for (const auto& [t2, x] : found) {
            if (units.size() == r) break;
            auto l = log_vector(F, x, r);
            LD norm0 = 0;
            for (LD v : l) norm0 += v * v;
            if (norm0 < 1e-12L) continue;  // +-1
            for (const auto& b : gs) {
                LD dot = 0, bb = 0;
                for (std::size_t k = 0; k < r; ++k) {
                    dot += l[k] * b[k];
                    bb += b[k] * b[k];
                }
                for (std::size_t k = 0; k < r; ++k) l[k] -= dot / bb * b[k];
            }
            LD rest = 0;
            for (LD v : l) rest += v * v;
            if (rest < 1e-8L * norm0) continue;
            gs.push_back(l);
            units.push_back(x);
        }
        if (bound > Rat(Int(1) << 40)) fail(ErrorKind::UnitSearchExhausted, "no independent units found");
    }
    saturate(F, units);
    return units;
}

}  // namespace abvar
