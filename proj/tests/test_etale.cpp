#include <doctest.h>

#include <cmath>
#include <random>

#include "abvar/etale.hpp"
#include "abvar/lattice.hpp"

using namespace abvar;

namespace {

RatVec random_elem(std::mt19937_64& rng, std::size_t n, long c) {
    std::uniform_int_distribution<long> d(-c, c), den(1, 4);
    RatVec v(n);
    for (auto& x : v) {
        x = Rat(d(rng), den(rng));
        x.canonicalize();
    }
    return v;
}

ErrorKind kind_of(const RatPoly& h, long p) {
    try {
        EtaleAlgebra::make(h, Int(p));
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Internal;
}

}  // namespace

TEST_CASE("make_algebra validation") {
    auto L = EtaleAlgebra::make(RatPoly{3, 0, 1}, Int(3));
    CHECK(L->g() == 1);
    CHECK(L->factors().size() == 1);
    CHECK(kind_of(RatPoly{1, 0, 1}, 3) == ErrorKind::NotWeil);
    CHECK(kind_of(RatPoly{3, 0, 1} * RatPoly{3, 0, 1}, 3) == ErrorKind::NotSquarefree);
    CHECK(kind_of(RatPoly{-3, 0, 1}, 3) == ErrorKind::HasRealRoots);
    CHECK(kind_of(RatPoly{3, 0, 2}, 3) == ErrorKind::NotMonicIntegral);
    CHECK(kind_of(RatPoly{4, 0, 1}, 4) == ErrorKind::NonPrimeField);
    // x^2 - 4x + 3 = (x-1)(x-3): satisfies nothing
    CHECK(kind_of(RatPoly{3, -4, 1}, 3) == ErrorKind::NotWeil);
    // x^4 + 9 has roots of absolute value sqrt 3
    CHECK_NOTHROW(EtaleAlgebra::make(RatPoly{9, 0, 0, 0, 1}, Int(3)));
    CHECK_NOTHROW(EtaleAlgebra::make(RatPoly{16, 0, 0, 0, 0, 0, 0, 0, 1}, Int(2)));
    CHECK_NOTHROW(EtaleAlgebra::make(RatPoly{27, -9, 18, -6, 6, -1, 1}, Int(3)));
    // x^4 + 3x^2 + 9: both y = x+3/x roots real? P(y) = y^2 - 3, fine
    CHECK_NOTHROW(EtaleAlgebra::make(RatPoly{9, 0, 3, 0, 1}, Int(3)));
    // x^4 - 7x^2 + 9 -> P = y^2 - 13 with 13 > 12: roots are real, not Weil
    CHECK(kind_of(RatPoly{9, 0, -7, 0, 1}, 3) == ErrorKind::NotWeil);
}

TEST_CASE("involution, trace, norm") {
    auto L = EtaleAlgebra::make(RatPoly{3, 0, 1}, Int(3));
    auto pi = L->pi();
    CHECK(L->involve(pi) == L->alg().neg(pi));
    CHECK(L->is_totally_imaginary(pi));
    CHECK(!L->is_totally_imaginary(L->alg().one()));
    // pi + p/pi vanishes for x^2+3; use x^4+9 where it is a nonzero real element
    auto L4 = EtaleAlgebra::make(RatPoly{9, 0, 0, 0, 1}, Int(3));
    CHECK(!L4->is_totally_imaginary(L4->alg().add(L4->pi(), L4->vbar())));
    CHECK(L->trace(L->alg().one()) == 2);
    CHECK(L->trace(pi) == 0);
    CHECK(L->norm(pi) == 3);
    CHECK(L->embeddings().size() == 2);
    CHECK(L->embeddings()[0].conj == 1);
}

TEST_CASE("total positivity") {
    auto L = EtaleAlgebra::make(RatPoly{9, 0, 0, 0, 1}, Int(3));
    const auto& A = L->alg();
    RatVec beta = A.add(L->pi(), L->vbar());
    CHECK(A.mul(beta, beta) == A.scalar(6));
    CHECK(L->is_totally_positive(A.add(A.scalar(3), beta)));
    CHECK(!L->is_totally_positive(A.add(A.scalar(1), beta)));
    CHECK(L->is_totally_positive(A.one()));
    CHECK_THROWS_AS(L->is_totally_positive(L->pi()), Error);
    CHECK(std::sqrt(6.0) < 3.0);  // oracle for 3 - sqrt6 > 0
}

TEST_CASE("etale properties (property)") {
    std::vector<std::pair<RatPoly, long>> inputs = {
        {RatPoly{3, 0, 1}, 3},
        {RatPoly{9, 0, 0, 0, 1}, 3},
        {RatPoly{27, 0, 9, 0, 3, 0, 1}, 3},
        {RatPoly{16, 0, 0, 0, 0, 0, 0, 0, 1}, 2},
        {RatPoly{27, -9, 18, -6, 6, -1, 1}, 3},
    };
    std::mt19937_64 rng(17);
    int cases = 0;
    for (auto& [h, p] : inputs) {
        auto L = EtaleAlgebra::make(h, Int(p));
        const auto& A = L->alg();
        for (int t = 0; t < 50; ++t, ++cases) {
            RatVec x = random_elem(rng, A.degree(), 5), y = random_elem(rng, A.degree(), 5);
            CHECK(L->involve(A.add(x, y)) == A.add(L->involve(x), L->involve(y)));
            CHECK(L->involve(A.mul(x, y)) == A.mul(L->involve(x), L->involve(y)));
            CHECK(L->involve(L->involve(x)) == x);
            CHECK(L->is_totally_real(A.add(x, L->involve(x))));
            RatVec nx = A.mul(x, L->involve(x));
            CHECK(L->is_totally_real(nx));
            CHECK(L->trace(x) == L->trace(L->involve(x)));
            CHECK(L->norm(A.mul(x, y)) == L->norm(x) * L->norm(y));
            if (A.is_unit(x)) {
                // x * xbar is totally positive, and so is its product with squares
                CHECK(L->is_totally_positive(nx));
                RatVec r = A.add(y, L->involve(y));
                if (A.is_unit(r)) CHECK(L->is_totally_positive(A.mul(A.mul(r, r), nx)));
            }
        }
    }
    CHECK(cases >= 200);
}

TEST_CASE("lattice operations") {
    NumberAlgebra Qi(RatPoly{1, 0, 1});
    Lattice Zi = standard_lattice(2);
    Lattice td = lattice_trace_dual(Qi, Zi);
    CHECK(td == lattice_scale(Zi, Rat(1, 2)));
    CHECK(lattice_colon(Qi, Zi, Zi) == Zi);
    CHECK(lattice_trace_dual(Qi, td) == Zi);
    CHECK(is_order(Qi, Zi));
    CHECK(!is_order(Qi, td));
    Lattice two = lattice_scale(Zi, 2);
    CHECK(lattice_index(two, Zi) == 4);
    CHECK(lattice_subset(two, Zi));
    CHECK(!lattice_subset(Zi, two));
    CHECK(lattice_intersection(two, td) == two);
    CHECK(lattice_sum(two, td) == td);
    CHECK(lattice_product(Qi, td, td) == lattice_scale(Zi, Rat(1, 4)));
    // Z[2i] has multiplicator ring itself
    Lattice z2i = lattice_from_rows(RatMatrix{{1, 0}, {0, 2}});
    CHECK(is_order(Qi, z2i));
    CHECK(mult_ring(Qi, z2i) == z2i);
    CHECK(order_generated(Qi, {RatVec{Rat(0), Rat(2)}}) == z2i);
}
