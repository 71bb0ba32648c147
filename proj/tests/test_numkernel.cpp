#include <doctest.h>

#include <random>

#include "abvar/matrix.hpp"

using namespace abvar;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
    return m;
}

IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
    IntMatrix u = IntMatrix::identity(n);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<long> coef(-3, 3);
    for (int k = 0; k < 12; ++k) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        long c = coef(rng);
        for (std::size_t t = 0; t < n; ++t) u(i, t) += c * u(j, t);
    }
    return u;
}

// Cofactor expansion; independent of the elimination code under test.
Int det_cofactor(const IntMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 1) return m(0, 0);
    Int s = 0;
    for (std::size_t j = 0; j < n; ++j) {
        IntMatrix minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0, kk = 0; k < n; ++k)
                if (k != j) minor(i - 1, kk++) = m(i, k);
        Int t = m(0, j) * det_cofactor(minor);
        s += (j % 2 ? -t : t);
    }
    return s;
}

}  // namespace

TEST_CASE("hnf basic examples") {
    auto id = IntMatrix::identity(3);
    auto r = hnf(id);
    CHECK(r.H == id);
    CHECK(r.U == id);
    IntMatrix m{{2, 0}, {0, -6}};
    auto h = hnf(m);
    CHECK(h.H == IntMatrix{{2, 0}, {0, 6}});
    CHECK(h.U * m == h.H);
}

TEST_CASE("hnf determinant matches cofactor oracle") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 50; ++t) {
        auto m = random_matrix(rng, 4, 4, -9, 9);
        Int d = det_cofactor(m);
        auto h = hnf(m);
        CHECK(h.U * m == h.H);
        CHECK(abs(determinant(h.U)) == 1);
        Int prod = 1;
        for (std::size_t i = 0; i < 4; ++i) prod *= h.H(i, i);
        if (d != 0) CHECK(prod == abs(d));
        CHECK(determinant(m) == d);
    }
}

TEST_CASE("hnf canonical under unimodular transforms (property)") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 2 + t % 4;
        auto m = random_matrix(rng, n + t % 3, n, -20, 20);
        auto P = random_unimodular(rng, m.rows());
        auto h1 = hnf_basis(m), h2 = hnf_basis(P * m);
        CHECK(h1 == h2);
        CHECK(hnf_basis(h1) == h1);
        if (h1.rows() == n) {
            Int d = 1;
            for (std::size_t i = 0; i < n; ++i) d *= h1(i, i);
            CHECK(hnf_basis(m, d * 3) == h1);
            CHECK(hnf_basis(m, d) == h1);
        }
    }
}

TEST_CASE("snf examples and invariants (property)") {
    IntMatrix d{{4, 0}, {0, 6}};
    auto s = snf(d);
    CHECK(s.D == IntMatrix{{2, 0}, {0, 12}});
    CHECK(snf(IntMatrix::identity(3)).D == IntMatrix::identity(3));
    CHECK(snf(IntMatrix(2, 3)).D.is_zero());
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        std::size_t r = 1 + t % 4, c = 1 + (t / 4) % 4;
        auto m = random_matrix(rng, r, c, -12, 12);
        auto res = snf(m);
        CHECK(res.U * m * res.V == res.D);
        CHECK(abs(determinant(res.U)) == 1);
        CHECK(abs(determinant(res.V)) == 1);
        std::size_t k = std::min(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                if (i != j) CHECK(res.D(i, j) == 0);
        for (std::size_t i = 0; i + 1 < k; ++i) {
            if (res.D(i, i) == 0) CHECK(res.D(i + 1, i + 1) == 0);
            else CHECK(res.D(i + 1, i + 1) % res.D(i, i) == 0);
        }
        if (r == c) {
            Int p = 1;
            for (std::size_t i = 0; i < r; ++i) p *= res.D(i, i);
            CHECK(p == abs(det_cofactor(m)));
        }
    }
}

TEST_CASE("lll") {
    RatMatrix g = to_rat(IntMatrix::identity(2));
    IntMatrix b{{1, 0}, {100, 1}};
    auto red = lll_reduce(b, g);
    REQUIRE(red.rows() == 2);
    // exhaustive oracle over a coefficient box
    Int shortest = -1;
    for (long x = -200; x <= 200; ++x)
        for (long y = -3; y <= 3; ++y) {
            if (!x && !y) continue;
            Int v0 = x + 100 * y, v1 = y;
            Int n = v0 * v0 + v1 * v1;
            if (shortest < 0 || n < shortest) shortest = n;
        }
    Int n0 = red(0, 0) * red(0, 0) + red(0, 1) * red(0, 1);
    CHECK(n0 <= 2 * shortest);
    CHECK(abs(determinant(red)) == 1);
    IntMatrix orth{{3, 0}, {0, 5}};
    auto o = lll_reduce(orth, g);
    CHECK(abs(o(0, 0)) == 3);
    CHECK(abs(o(1, 1)) == 5);
    IntMatrix rank1{{2, 4}, {3, 6}};
    auto r1 = lll_reduce(rank1, g);
    REQUIRE(r1.rows() == 1);
    CHECK(abs(r1(0, 0)) == 1);
    CHECK(abs(r1(0, 1)) == 2);
    RatMatrix bad{{1, 0}, {0, -1}};
    CHECK_THROWS_AS(lll_reduce(IntMatrix::identity(2), bad), Error);
}

TEST_CASE("short vectors") {
    RatMatrix g{{2, 1}, {1, 2}};  // A2 lattice
    auto sv = short_vectors(g, 2);
    REQUIRE(sv);
    CHECK(sv->size() == 3);
    auto sv2 = short_vectors(to_rat(IntMatrix::identity(3)), 1);
    REQUIRE(sv2);
    CHECK(sv2->size() == 3);
    // brute-force cross check on a random positive definite form
    RatMatrix q{{5, 2, 1}, {2, 6, -1}, {1, -1, 4}};
    auto s3 = short_vectors(q, 20);
    REQUIRE(s3);
    std::size_t cnt = 0;
    for (long a = -5; a <= 5; ++a)
        for (long b = -5; b <= 5; ++b)
            for (long c = -5; c <= 5; ++c) {
                long v[3] = {a, b, c};
                if (!a && !b && !c) continue;
                Rat val = 0;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) val += q(i, j) * v[i] * v[j];
                if (val <= 20) ++cnt;
            }
    CHECK(s3->size() * 2 == cnt);
}

TEST_CASE("linear algebra helpers") {
    RatMatrix m{{1, 2}, {3, 4}};
    CHECK(determinant(m) == -2);
    CHECK(inverse(m) * m == to_rat(IntMatrix::identity(2)));
    auto cp = charpoly(m);
    CHECK(cp == RatVec{Rat(-2), Rat(-5), Rat(1)});
    RatMatrix c{{0, 0, 0, -27}, {1, 0, 0, 0}, {0, 1, 0, -9}, {0, 0, 1, 0}};
    CHECK(charpoly(c.transpose()) == RatVec{27, 0, 9, 0, 1});
    RatMatrix s{{1, 2, 3}, {2, 4, 6}};
    auto k = left_kernel(s);
    CHECK(k.rows() == 1);
    auto x = solve_left(m, RatVec{Rat(5), Rat(8)});
    REQUIRE(x);
    CHECK(vec_mul(*x, m) == RatVec{Rat(5), Rat(8)});
    IntMatrix mm{{1, 1}, {1, 1}, {0, 2}};
    CHECK(left_kernel_mod(mm, Int(2)).rows() == 2);
    CHECK(rank_mod(mm, Int(3)) == 2);
    auto f = factor_integer(Int(360));
    CHECK(f.size() == 3);
    CHECK(f[0].first == 2);
    CHECK(f[0].second == 3);
    auto big = factor_integer(Int("1000000016000000063"));  // 1000000007 * 1000000009
    CHECK(big.size() == 2);
}
