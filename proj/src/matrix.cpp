#include "abvar/matrix.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <functional>

namespace abvar {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulm(u64 a, u64 b, u64 p) { return u64(u128(a) * b % p); }

u64 powm(u64 a, u64 e, u64 p) {
    u64 r = 1;
    for (; e; e >>= 1, a = mulm(a, a, p))
        if (e & 1) r = mulm(r, a, p);
    return r;
}

}  // namespace

RatMatrix to_rat(const IntMatrix& m) {
    RatMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
    return r;
}

RatVec vec_mul(const RatVec& v, const RatMatrix& m) {
    ABVAR_ASSERT(v.size() == m.rows(), "vec_mul shape");
    RatVec out(m.cols(), Rat(0));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
    }
    return out;
}

IntVec vec_mul(const IntVec& v, const IntMatrix& m) {
    ABVAR_ASSERT(v.size() == m.rows(), "vec_mul shape");
    IntVec out(m.cols(), Int(0));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
    }
    return out;
}

namespace {

void row_addmul(IntMatrix& m, std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(src, j) != 0) m(dst, j) -= q * m(src, j);
}

void row_negate(IntMatrix& m, std::size_t i) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = -m(i, j);
}

void col_addmul(IntMatrix& m, std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < m.rows(); ++i)
        if (m(i, src) != 0) m(i, dst) -= q * m(i, src);
}

}  // namespace

HnfResult hnf(const IntMatrix& m) {
    IntMatrix H = m;
    IntMatrix U = IntMatrix::identity(m.rows());
    const std::size_t r = m.rows(), c = m.cols();
    std::size_t row = 0;
    for (std::size_t col = 0; col < c && row < r; ++col) {
        for (;;) {
            std::size_t piv = r;
            for (std::size_t k = row; k < r; ++k)
                if (H(k, col) != 0 && (piv == r || abs(H(k, col)) < abs(H(piv, col)))) piv = k;
            if (piv == r) break;
            H.swap_rows(row, piv);
            U.swap_rows(row, piv);
            bool done = true;
            for (std::size_t k = row + 1; k < r; ++k) {
                if (H(k, col) == 0) continue;
                Int q = floor_div(H(k, col), H(row, col));
                row_addmul(H, k, row, q);
                row_addmul(U, k, row, q);
                if (H(k, col) != 0) done = false;
            }
            if (done) break;
        }
        if (H(row, col) == 0) continue;
        if (H(row, col) < 0) {
            row_negate(H, row);
            row_negate(U, row);
        }
        for (std::size_t k = 0; k < row; ++k) {
            Int q = floor_div(H(k, col), H(row, col));
            row_addmul(H, k, row, q);
            row_addmul(U, k, row, q);
        }
        ++row;
    }
    return {std::move(H), std::move(U)};
}

IntMatrix hnf_basis(const IntMatrix& m, const Int& modulus) {
    const std::size_t c = m.cols();
    if (modulus == 0) {
        IntMatrix H = m;
        const std::size_t r = H.rows();
        std::size_t row = 0;
        for (std::size_t col = 0; col < c && row < r; ++col) {
            for (;;) {
                std::size_t piv = r;
                for (std::size_t k = row; k < r; ++k)
                    if (H(k, col) != 0 && (piv == r || abs(H(k, col)) < abs(H(piv, col)))) piv = k;
                if (piv == r) break;
                H.swap_rows(row, piv);
                bool done = true;
                for (std::size_t k = row + 1; k < r; ++k) {
                    if (H(k, col) == 0) continue;
                    row_addmul(H, k, row, floor_div(H(k, col), H(row, col)));
                    if (H(k, col) != 0) done = false;
                }
                if (done) break;
            }
            if (H(row, col) == 0) continue;
            if (H(row, col) < 0) row_negate(H, row);
            for (std::size_t k = 0; k < row; ++k) row_addmul(H, k, row, floor_div(H(k, col), H(row, col)));
            ++row;
        }
        return H.submatrix_rows(0, row);
    }
    // Modular variant: the lattice contains modulus * e_j for every j.
    const Int D = abs(modulus);
    std::vector<IntVec> rows;
    rows.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        IntVec v = m.row(i);
        bool nz = false;
        for (auto& x : v) {
            x = mod_floor(x, D);
            if (x != 0) nz = true;
        }
        if (nz) rows.push_back(std::move(v));
    }
    IntMatrix out(c, c);
    for (std::size_t col = 0; col < c; ++col) {
        IntVec piv(c, Int(0));
        piv[col] = D;
        for (auto& v : rows) {
            if (v[col] == 0) continue;
            // extended gcd combination of piv and v in column col
            Int g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), piv[col].get_mpz_t(), v[col].get_mpz_t());
            Int a = piv[col] / g, b = v[col] / g;
            IntVec np(c), nv(c);
            for (std::size_t j = col; j < c; ++j) {
                np[j] = mod_floor(s * piv[j] + t * v[j], D);
                nv[j] = mod_floor(a * v[j] - b * piv[j], D);
            }
            // keep the pivot value exact: it divides D
            np[col] = g;
            nv[col] = 0;
            piv = std::move(np);
            v = std::move(nv);
        }
        rows.erase(std::remove_if(rows.begin(), rows.end(),
                                  [&](const IntVec& v) {
                                      return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
                                  }),
                   rows.end());
        // D*e_j rows for j > col remain implicit; piv may be reduced mod D in later columns
        out.set_row(col, piv);
    }
    // Entries right of the pivot were reduced mod D; make the upper echelon canonical.
    for (std::size_t col = 0; col < c; ++col) {
        if (out(col, col) < 0) row_negate(out, col);
        for (std::size_t k = 0; k < col; ++k) row_addmul(out, k, col, floor_div(out(k, col), out(col, col)));
    }
    return out;
}

SnfResult snf(const IntMatrix& m) {
    IntMatrix D = m;
    const std::size_t r = m.rows(), c = m.cols();
    IntMatrix U = IntMatrix::identity(r), V = IntMatrix::identity(c);
    const std::size_t n = std::min(r, c);
    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            // smallest nonzero entry in the remaining block
            std::size_t pi = r, pj = c;
            for (std::size_t i = t; i < r; ++i)
                for (std::size_t j = t; j < c; ++j)
                    if (D(i, j) != 0 && (pi == r || abs(D(i, j)) < abs(D(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == r) break;
            D.swap_rows(t, pi);
            U.swap_rows(t, pi);
            D.swap_cols(t, pj);
            V.swap_cols(t, pj);
            bool clean = true;
            for (std::size_t i = t + 1; i < r; ++i) {
                if (D(i, t) == 0) continue;
                Int q = floor_div(D(i, t), D(t, t));
                row_addmul(D, i, t, q);
                row_addmul(U, i, t, q);
                if (D(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < c; ++j) {
                if (D(t, j) == 0) continue;
                Int q = floor_div(D(t, j), D(t, t));
                col_addmul(D, j, t, q);
                col_addmul(V, j, t, q);
                if (D(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility condition
            std::size_t bad = r;
            for (std::size_t i = t + 1; i < r && bad == r; ++i)
                for (std::size_t j = t + 1; j < c; ++j)
                    if (D(i, j) % D(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad == r) break;
            row_addmul(D, t, bad, Int(-1));
            row_addmul(U, t, bad, Int(-1));
        }
        if (D(t, t) < 0) {
            row_negate(D, t);
            row_negate(U, t);
        }
    }
    return {std::move(D), std::move(U), std::move(V)};
}

std::vector<Int> elementary_divisors(const IntMatrix& m) {
    auto s = snf(m);
    std::vector<Int> d;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) d.push_back(s.D(i, i));
    return d;
}

namespace {

Rat form(const IntVec& x, const RatMatrix& g, const IntVec& y) {
    Rat s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        Rat t = 0;
        for (std::size_t j = 0; j < y.size(); ++j)
            if (y[j] != 0) t += g(i, j) * y[j];
        s += x[i] * t;
    }
    return s;
}

}  // namespace

bool is_positive_definite(const RatMatrix& gram) {
    const std::size_t n = gram.rows();
    RatMatrix a = gram;
    for (std::size_t k = 0; k < n; ++k) {
        if (a(k, k) <= 0) return false;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            Rat f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return true;
}

IntMatrix lll_reduce(const IntMatrix& basis, const RatMatrix& gram) {
    IntMatrix hb = hnf_basis(basis);
    std::vector<IntVec> b;
    for (std::size_t i = 0; i < hb.rows(); ++i) b.push_back(hb.row(i));
    const std::size_t n = b.size();
    if (n == 0) return hb;
    {
        RatMatrix g(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g(i, j) = form(b[i], gram, b[j]);
        if (!is_positive_definite(g)) fail(ErrorKind::NonPositiveDefinite, "gram matrix is not positive definite on the lattice");
    }
    const Rat delta(3, 4);
    std::vector<std::vector<Rat>> mu(n, std::vector<Rat>(n, Rat(0)));
    std::vector<Rat> B(n);
    auto gs_row = [&](std::size_t k) {
        for (std::size_t j = 0; j < k; ++j) {
            Rat s = form(b[k], gram, b[j]);
            for (std::size_t i = 0; i < j; ++i) s -= mu[j][i] * mu[k][i] * B[i];
            mu[k][j] = s / B[j];
        }
        Rat s = form(b[k], gram, b[k]);
        for (std::size_t j = 0; j < k; ++j) s -= mu[k][j] * mu[k][j] * B[j];
        B[k] = s;
    };
    auto red = [&](std::size_t k, std::size_t l) {
        if (abs(mu[k][l]) * 2 <= 1) return;
        Int q = round_rat(mu[k][l]);
        for (std::size_t j = 0; j < b[k].size(); ++j) b[k][j] -= q * b[l][j];
        mu[k][l] -= q;
        for (std::size_t i = 0; i < l; ++i) mu[k][i] -= q * mu[l][i];
    };
    gs_row(0);
    std::size_t kmax = 0, k = 1;
    while (k < n) {
        if (k > kmax) {
            kmax = k;
            gs_row(k);
        }
        red(k, k - 1);
        if (B[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * B[k - 1]) {
            std::swap(b[k], b[k - 1]);
            for (std::size_t j = 0; j + 1 < k; ++j) std::swap(mu[k][j], mu[k - 1][j]);
            Rat m = mu[k][k - 1];
            Rat Bn = B[k] + m * m * B[k - 1];
            mu[k][k - 1] = m * B[k - 1] / Bn;
            B[k] = B[k - 1] * B[k] / Bn;
            B[k - 1] = Bn;
            for (std::size_t i = k + 1; i <= kmax; ++i) {
                Rat t = mu[i][k];
                mu[i][k] = mu[i][k - 1] - m * t;
                mu[i][k - 1] = t + mu[k][k - 1] * mu[i][k];
            }
            if (k > 1) --k;
        } else {
            for (std::size_t l = k - 1; l-- > 0;) red(k, l);
            ++k;
        }
    }
    IntMatrix out(n, basis.cols());
    for (std::size_t i = 0; i < n; ++i) out.set_row(i, b[i]);
    return out;
}

std::optional<std::vector<IntVec>> short_vectors(const RatMatrix& gram, const Rat& bound, std::size_t limit) {
    const std::size_t n = gram.rows();
    std::vector<IntVec> out;
    if (n == 0 || bound <= 0) return out;
    IntMatrix R = lll_reduce(IntMatrix::identity(n), gram);
    RatMatrix Rr = to_rat(R);
    RatMatrix G = Rr * gram * Rr.transpose();
    // Fincke-Pohst quadratic form decomposition in long double
    std::vector<std::vector<long double>> q(n, std::vector<long double>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) q[i][j] = static_cast<long double>(G(i, j).get_d());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            q[j][i] = q[i][j];
            q[i][j] = q[i][j] / q[i][i];
        }
        for (std::size_t k = i + 1; k < n; ++k)
            for (std::size_t l = k; l < n; ++l) q[k][l] -= q[k][i] * q[i][l];
    }
    const long double C = static_cast<long double>(bound.get_d()) * (1 + 1e-9L) + 1e-9L;
    std::vector<long long> x(n, 0);
    std::vector<long double> T(n, 0), U(n, 0);
    bool overflow = false;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (overflow) return;
        // center for coordinate i
        long double u = 0;
        for (std::size_t j = i + 1; j < n; ++j) u += q[i][j] * x[j];
        long double rem = C - T[i];
        if (rem < 0) return;
        long double z = std::sqrt(rem / q[i][i]);
        long long lo = static_cast<long long>(std::ceil(-z - u - 1e-9L));
        long long hi = static_cast<long long>(std::floor(z - u + 1e-9L));
        for (long long v = lo; v <= hi; ++v) {
            x[i] = v;
            long double t = (v + u);
            long double Ti = T[i] + q[i][i] * t * t;
            if (i == 0) {
                bool allzero = true;
                for (auto xv : x)
                    if (xv != 0) allzero = false;
                if (allzero) continue;
                IntVec xi(n);
                for (std::size_t j = 0; j < n; ++j) xi[j] = Int(static_cast<long>(x[j]));
                // transform back to the original coordinates
                IntVec y = vec_mul(xi, R);
                std::size_t fnz = 0;
                while (fnz < n && y[fnz] == 0) ++fnz;
                if (y[fnz] < 0) continue;  // keep one of +-y
                Rat val = 0;
                for (std::size_t a = 0; a < n; ++a) {
                    if (y[a] == 0) continue;
                    Rat s = 0;
                    for (std::size_t c2 = 0; c2 < n; ++c2)
                        if (y[c2] != 0) s += gram(a, c2) * y[c2];
                    val += y[a] * s;
                }
                if (val <= bound) {
                    out.push_back(std::move(y));
                    if (out.size() > limit) {
                        overflow = true;
                        return;
                    }
                }
            } else {
                if (Ti > C) continue;
                T[i - 1] = Ti;
                rec(i - 1);
                if (overflow) return;
            }
        }
        x[i] = 0;
    };
    T[n - 1] = 0;
    rec(n - 1);
    if (overflow) return std::nullopt;
    return out;
}

Rat determinant(const RatMatrix& m) {
    ABVAR_ASSERT(m.rows() == m.cols(), "determinant of non-square matrix");
    RatMatrix a = m;
    const std::size_t n = a.rows();
    Rat det = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a(p, k) == 0) ++p;
        if (p == n) return 0;
        if (p != k) {
            a.swap_rows(p, k);
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a(i, k) == 0) continue;
            Rat f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
        }
    }
    return det;
}

Int determinant(const IntMatrix& m) {
    ABVAR_ASSERT(m.rows() == m.cols(), "determinant of non-square matrix");
    // Bareiss fraction-free elimination
    IntMatrix a = m;
    const std::size_t n = a.rows();
    if (n == 0) return 1;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            a.swap_rows(p, k);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a(i, j) = t;
            }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& a) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t p = row;
        while (p < a.rows() && a(p, col) == 0) ++p;
        if (p == a.rows()) continue;
        a.swap_rows(p, row);
        Rat inv = 1 / a(row, col);
        for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == row || a(i, col) == 0) continue;
            Rat f = a(i, col);
            for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

std::size_t rank(const RatMatrix& m) {
    RatMatrix a = m;
    return rref(a).size();
}

RatMatrix inverse(const RatMatrix& m) {
    const std::size_t n = m.rows();
    ABVAR_ASSERT(n == m.cols(), "inverse of non-square matrix");
    RatMatrix a(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = m(i, j);
        a(i, n + i) = 1;
    }
    auto piv = rref(a);
    ABVAR_ASSERT(piv.size() == n && piv.back() == n - 1, "matrix is singular");
    RatMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = a(i, n + j);
    return inv;
}

RatMatrix left_kernel(const RatMatrix& m) {
    // x * m = 0  <=>  m^T x^T = 0
    RatMatrix a = m.transpose();
    auto piv = rref(a);
    const std::size_t n = a.cols();
    std::vector<bool> is_piv(n, false);
    for (auto p : piv) is_piv[p] = true;
    RatMatrix ker(0, n);
    for (std::size_t f = 0; f < n; ++f) {
        if (is_piv[f]) continue;
        RatVec v(n, Rat(0));
        v[f] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -a(r, f);
        ker.append_row(v);
    }
    if (ker.rows() == 0) ker = RatMatrix(0, n);
    return ker;
}

namespace {

// a = r/s mod m with |r|, s <= sqrt(m/2); false if none.
bool rational_reconstruct(const Int& a, const Int& m, Rat& out) {
    Int bound = sqrt(m / 2);
    Int r0 = m, r1 = mod_floor(a, m), t0 = 0, t1 = 1;
    while (r1 > bound) {
        Int q = r0 / r1;
        Int r2 = r0 - q * r1, t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (abs(t1) > bound || t1 == 0) return false;
    out = Rat(r1, t1);
    out.canonicalize();
    return true;
}

// Solve A y = C over Q for square integral A by CRT over word primes and
// rational reconstruction, verified exactly. nullopt if A looks singular.
std::optional<std::vector<Rat>> solve_square_multimodular(const IntMatrix& A, const std::vector<Int>& C) {
    const std::size_t n = A.rows();
    std::vector<Int> acc(n, Int(0));
    Int modulus = 1;
    Int prime = Int(1) << 61;
    int singular = 0, step = 0;
    while (true) {
        mpz_nextprime(prime.get_mpz_t(), prime.get_mpz_t());
        u64 p = prime.get_ui();
        std::vector<std::vector<u64>> M(n, std::vector<u64>(n + 1));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) M[i][j] = mod_floor(A(i, j), prime).get_ui();
            M[i][n] = mod_floor(C[i], prime).get_ui();
        }
        bool ok = true;
        for (std::size_t col = 0; col < n && ok; ++col) {
            std::size_t piv = col;
            while (piv < n && M[piv][col] == 0) ++piv;
            if (piv == n) {
                ok = false;
                break;
            }
            std::swap(M[piv], M[col]);
            u64 inv = powm(M[col][col], p - 2, p);
            for (std::size_t j = col; j <= n; ++j) M[col][j] = mulm(M[col][j], inv, p);
            for (std::size_t i = 0; i < n; ++i) {
                if (i == col || M[i][col] == 0) continue;
                u64 f = M[i][col];
                for (std::size_t j = col; j <= n; ++j) M[i][j] = (M[i][j] + p - mulm(f, M[col][j], p)) % p;
            }
        }
        if (!ok) {
            if (++singular >= 3) return std::nullopt;
            continue;
        }
        Int mm = mod_floor(modulus, prime), minv;
        mpz_invert(minv.get_mpz_t(), mm.get_mpz_t(), prime.get_mpz_t());
        for (std::size_t i = 0; i < n; ++i) {
            Int t = mod_floor(Int(Int(M[i][n]) - acc[i]) * minv, prime);
            acc[i] += modulus * t;
        }
        modulus *= prime;
        // try reconstruction on a doubling schedule
        if (++step & (step - 1)) continue;
        std::vector<Rat> y(n);
        bool rec = true;
        for (std::size_t i = 0; i < n && rec; ++i) rec = rational_reconstruct(acc[i], modulus, y[i]);
        if (!rec) continue;
        Int D = 1;
        for (const auto& v : y) D = lcm(D, Int(v.get_den()));
        std::vector<Int> Y(n);
        for (std::size_t i = 0; i < n; ++i) Y[i] = Int(y[i] * D);
        bool good = true;
        for (std::size_t i = 0; i < n && good; ++i) {
            Int s = 0;
            for (std::size_t j = 0; j < n; ++j) mpz_addmul(s.get_mpz_t(), A(i, j).get_mpz_t(), Y[j].get_mpz_t());
            good = s == D * C[i];
        }
        if (good) return y;
    }
}

}  // namespace

std::optional<RatVec> solve_left(const RatMatrix& m, const RatVec& b) {
    ABVAR_ASSERT(b.size() == m.cols(), "solve_left shape");
    const std::size_t r = m.rows(), c = m.cols();
    if (r == c && r >= 8) {
        // x m = b  <=>  (d m)^T x^T = d b
        Int d = 1;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) d = lcm(d, Int(m(i, j).get_den()));
        Int db = 1;
        for (const auto& v : b) db = lcm(db, Int(Rat(v * d).get_den()));
        IntMatrix A(c, r);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) A(j, i) = Int(m(i, j) * d);
        std::vector<Int> C(c);
        for (std::size_t j = 0; j < c; ++j) C[j] = Int(b[j] * d * db);
        if (auto y = solve_square_multimodular(A, C)) {
            RatVec x(r);
            for (std::size_t i = 0; i < r; ++i) {
                x[i] = (*y)[i] / db;
                x[i].canonicalize();
            }
            return x;
        }
    }
    RatMatrix a(c, r + 1);
    for (std::size_t i = 0; i < c; ++i) {
        for (std::size_t j = 0; j < r; ++j) a(i, j) = m(j, i);
        a(i, r) = b[i];
    }
    auto piv = rref(a);
    if (!piv.empty() && piv.back() == r) return std::nullopt;
    RatVec x(r, Rat(0));
    for (std::size_t k = 0; k < piv.size(); ++k) x[piv[k]] = a(k, r);
    return x;
}

IntMatrix left_kernel_mod(const IntMatrix& m, const Int& p) {
    // Gaussian elimination on m^T over F_p.
    const std::size_t r = m.rows(), c = m.cols();
    IntMatrix a(c, r);
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < r; ++j) a(i, j) = mod_floor(m(j, i), p);
    std::vector<std::size_t> piv;
    std::size_t row = 0;
    for (std::size_t col = 0; col < r && row < c; ++col) {
        std::size_t q = row;
        while (q < c && a(q, col) == 0) ++q;
        if (q == c) continue;
        a.swap_rows(q, row);
        Int inv;
        mpz_invert(inv.get_mpz_t(), a(row, col).get_mpz_t(), p.get_mpz_t());
        for (std::size_t j = col; j < r; ++j) a(row, j) = mod_floor(a(row, j) * inv, p);
        for (std::size_t i = 0; i < c; ++i) {
            if (i == row || a(i, col) == 0) continue;
            Int f = a(i, col);
            for (std::size_t j = col; j < r; ++j) a(i, j) = mod_floor(a(i, j) - f * a(row, j), p);
        }
        piv.push_back(col);
        ++row;
    }
    std::vector<bool> is_piv(r, false);
    for (auto x : piv) is_piv[x] = true;
    IntMatrix ker(0, r);
    for (std::size_t f = 0; f < r; ++f) {
        if (is_piv[f]) continue;
        IntVec v(r, Int(0));
        v[f] = 1;
        for (std::size_t k = 0; k < piv.size(); ++k) v[piv[k]] = mod_floor(-a(k, f), p);
        ker.append_row(v);
    }
    if (ker.rows() == 0) ker = IntMatrix(0, r);
    return ker;
}

std::size_t rank_mod(const IntMatrix& m, const Int& p) {
    return m.rows() - left_kernel_mod(m, p).rows();
}

namespace {

// Characteristic polynomial mod p via Hessenberg reduction (entries in [0,p)).
std::vector<u64> charpoly_mod(std::vector<std::vector<u64>> H, u64 p) {
    const std::size_t n = H.size();
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t piv = k + 1;
        while (piv < n && H[piv][k] == 0) ++piv;
        if (piv == n) continue;
        if (piv != k + 1) {
            std::swap(H[piv], H[k + 1]);
            for (std::size_t r = 0; r < n; ++r) std::swap(H[r][piv], H[r][k + 1]);
        }
        u64 inv = powm(H[k + 1][k], p - 2, p);
        for (std::size_t j = k + 2; j < n; ++j) {
            if (H[j][k] == 0) continue;
            u64 u = mulm(H[j][k], inv, p);
            for (std::size_t c = 0; c < n; ++c) H[j][c] = (H[j][c] + p - mulm(u, H[k + 1][c], p)) % p;
            for (std::size_t r = 0; r < n; ++r) H[r][k + 1] = (H[r][k + 1] + mulm(u, H[r][j], p)) % p;
        }
    }
    std::vector<std::vector<u64>> P(n + 1);
    P[0] = {1};
    for (std::size_t mm = 1; mm <= n; ++mm) {
        std::vector<u64> cur(mm + 1, 0);
        const auto& prev = P[mm - 1];
        u64 d = H[mm - 1][mm - 1];
        for (std::size_t i = 0; i < prev.size(); ++i) {
            cur[i + 1] = (cur[i + 1] + prev[i]) % p;
            cur[i] = (cur[i] + p - mulm(d, prev[i], p)) % p;
        }
        u64 prod = 1;
        for (std::size_t i = mm - 1; i-- > 0;) {
            prod = mulm(prod, H[i + 1][i], p);
            if (prod == 0) break;
            u64 coef = mulm(H[i][mm - 1], prod, p);
            if (coef == 0) continue;
            for (std::size_t a = 0; a < P[i].size(); ++a) cur[a] = (cur[a] + p - mulm(coef, P[i][a], p)) % p;
        }
        P[mm] = std::move(cur);
    }
    return P[n];
}

}  // namespace

RatVec charpoly(const RatMatrix& m) {
    const std::size_t n = m.rows();
    ABVAR_ASSERT(n == m.cols(), "charpoly of non-square matrix");
    if (n == 0) return {Rat(1)};
    // integral matrix A = d m; charpoly_m(x) = d^{-n} charpoly_A(d x)
    Int d = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d = lcm(d, Int(m(i, j).get_den()));
    IntMatrix A(n, n);
    // Hadamard: every principal k-minor is at most R^k, R the largest row norm
    Int R2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
        Int s = 0;
        for (std::size_t j = 0; j < n; ++j) {
            A(i, j) = Int(m(i, j) * d);
            s += A(i, j) * A(i, j);
        }
        R2 = std::max(R2, s);
    }
    Int R = sqrt(R2) + 1;
    Int bound = 1;
    for (std::size_t k = 0; k < n; ++k) bound *= R + 1;  // (1+R)^n >= sum_k C(n,k) R^k
    bound = 2 * bound + 1;
    std::vector<Int> coef(n + 1, Int(0));
    Int modulus = 1;
    Int prime = Int(1) << 61;
    while (modulus <= bound) {
        mpz_nextprime(prime.get_mpz_t(), prime.get_mpz_t());
        u64 p = prime.get_ui();
        std::vector<std::vector<u64>> H(n, std::vector<u64>(n));
        Int tmp;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) H[i][j] = mod_floor(A(i, j), prime).get_ui();
        auto c = charpoly_mod(std::move(H), p);
        // CRT: coef = coef + modulus * ((c - coef) / modulus mod p)
        Int minv;
        Int mm = mod_floor(modulus, prime);
        mpz_invert(minv.get_mpz_t(), mm.get_mpz_t(), prime.get_mpz_t());
        for (std::size_t k = 0; k <= n; ++k) {
            Int t = mod_floor(Int(Int(c[k]) - coef[k]) * minv, prime);
            coef[k] += modulus * t;
        }
        modulus *= prime;
    }
    RatVec out(n + 1);
    Int half = modulus / 2, dk = 1;
    for (std::size_t k = n + 1; k-- > 0;) {
        Int c = coef[k] > half ? Int(coef[k] - modulus) : coef[k];
        out[k] = Rat(c, dk);
        out[k].canonicalize();
        dk *= d;
    }
    return out;
}

}  // namespace abvar
