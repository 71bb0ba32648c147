#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "abvar/orders.hpp"

using namespace abvar;

namespace {

Etale weil(std::initializer_list<long> coeffs, long p) { return EtaleAlgebra::make(RatPoly(coeffs), Int(p)); }

// Valid g=2 Weil polynomials x^4 + a x^3 + b x^2 + p a x + p^2.
std::vector<Etale> small_g2(long p) {
    std::vector<Etale> out;
    for (long a = -4; a <= 4; ++a)
        for (long b = -2 * p; b <= 2 * p + 4; ++b) {
            try {
                out.push_back(weil({p * p, p * a, b, a, 1}, p));
            } catch (const Error&) {
            }
        }
    return out;
}

// Integrality of an element via its characteristic polynomial.
bool is_integral(const NumberAlgebra& alg, const RatVec& x) {
    for (const auto& c : alg.charpoly(x).coeffs())
        if (c.get_den() != 1) return false;
    return true;
}

// Orders between R and O by enumerating subgroups of O/R as explicit sets.
std::size_t brute_force_order_count(const NumberAlgebra& alg, const Lattice& R, const Lattice& O) {
    const std::size_t n = O.dim();
    IntMatrix C(n, n);
    for (std::size_t i = 0; i < n; ++i) C.set_row(i, integral_coords(O, R.basis_vector(i)));
    SnfResult s = snf(C);
    std::vector<Int> d;
    for (std::size_t i = 0; i < n; ++i) d.push_back(s.D(i, i));
    RatMatrix vinv = inverse(to_rat(s.V));
    RatMatrix ob = O.basis();
    // class of an element of O as a tuple modulo the d_i
    auto cls = [&](const RatVec& x) {
        IntVec c = vec_mul(integral_coords(O, x), s.V);
        std::vector<long> t(n);
        for (std::size_t i = 0; i < n; ++i) t[i] = mod_floor(c[i], d[i]).get_si();
        return t;
    };
    std::vector<std::vector<long>> elems{std::vector<long>(n, 0)};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::vector<long>> next;
        for (const auto& e : elems)
            for (long k = 0; k < d[i].get_si(); ++k) {
                auto f = e;
                f[i] = k;
                next.push_back(f);
            }
        elems = next;
    }
    auto rep = [&](const std::vector<long>& t) {
        RatVec v(n, Rat(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) v[k] += Rat(t[i]) * vinv(i, k);
        return vec_mul(v, ob);
    };
    auto add = [&](const std::vector<long>& a, const std::vector<long>& b) {
        std::vector<long> c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = (a[i] + b[i]) % d[i].get_si();
        return c;
    };
    using Set = std::set<std::vector<long>>;
    auto closure = [&](Set s) {
        for (bool grew = true; grew;) {
            grew = false;
            Set t = s;
            for (const auto& a : s)
                for (const auto& b : s)
                    if (t.insert(add(a, b)).second) grew = true;
            s = t;
        }
        return s;
    };
    std::set<Set> subgroups{Set{elems[0]}};
    std::vector<Set> frontier{Set{elems[0]}};
    while (!frontier.empty()) {
        std::vector<Set> next;
        for (const auto& g : frontier)
            for (const auto& e : elems) {
                if (g.count(e)) continue;
                Set h = g;
                h.insert(e);
                h = closure(h);
                if (subgroups.insert(h).second) next.push_back(h);
            }
        frontier = next;
    }
    std::size_t count = 0;
    for (const auto& g : subgroups) {
        std::vector<RatVec> gens;
        for (std::size_t i = 0; i < n; ++i) gens.push_back(R.basis_vector(i));
        for (const auto& e : g) gens.push_back(rep(e));
        bool closed = true;
        for (std::size_t i = 0; i < gens.size() && closed; ++i)
            for (std::size_t j = i; j < gens.size() && closed; ++j)
                if (!g.count(cls(alg.mul(gens[i], gens[j])))) closed = false;
        if (closed) ++count;
    }
    return count;
}

// Local Gorenstein criterion: (T : P) / T is one-dimensional over T/P.
bool gorenstein_oracle(const NumberAlgebra& alg, const Lattice& T, const Lattice& O) {
    Rat idx = lattice_index(T, O);
    for (const auto& [p, e] : factor_integer(idx.get_num()))
        for (const auto& P : primes_above(alg, T, p)) {
            Rat q = lattice_index(T, lattice_colon(alg, T, P.lat));
            if (q != Rat(int_pow(p, P.f))) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("frobenius and maximal orders") {
    auto L = weil({3, 0, 1}, 3);
    Lattice R = frobenius_order(*L), O = maximal_order(*L);
    CHECK(lattice_index(R, O) == 2);
    CHECK(lattice_contains(O, RatVec{Rat(1, 2), Rat(1, 2)}));

    auto D = weil({27, -9, 18, -6, 6, -1, 1}, 3);
    CHECK(lattice_index(frobenius_order(*D), maximal_order(*D)) == 18);

    auto E = weil({16, 0, 0, 0, 0, 0, 0, 0, 1}, 2);
    Lattice RE = frobenius_order(*E), OE = maximal_order(*E);
    CHECK(lattice_index(RE, OE) == 256);
    // Q(zeta_16) has discriminant 2^24
    CHECK(lattice_discriminant(E->alg(), OE) == Rat(Int(1) << 24));
}

TEST_CASE("maximal order has no integral elements in (1/p)O outside O") {
    std::vector<Etale> inputs{weil({3, 0, 1}, 3), weil({27, -9, 18, -6, 6, -1, 1}, 3),
                              weil({9, 0, 3, 0, 1}, 3)};
    for (auto& L : small_g2(2)) inputs.push_back(L);
    int checked = 0;
    for (const auto& L : inputs) {
        const auto& alg = L->alg();
        Lattice O = maximal_order(*L);
        CHECK(is_order(alg, O));
        Rat d = lattice_discriminant(alg, O);
        const std::size_t n = alg.degree();
        for (const auto& [p, e] : factor_integer(abs(d.get_num()))) {
            if (e < 2 || int_pow(p, n) > 4096) continue;
            // every nonzero class of (1/p)O / O
            std::vector<long> c(n, 0);
            long P = p.get_si();
            for (;;) {
                std::size_t i = 0;
                while (i < n && ++c[i] == P) c[i++] = 0;
                if (i == n) break;
                RatVec x(n, Rat(0));
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k) x[k] += Rat(c[j], P) * O.basis_vector(j)[k];
                CHECK_FALSE(is_integral(alg, x));
                ++checked;
            }
        }
    }
    CHECK(checked > 200);
}

TEST_CASE("primes above p") {
    auto E = weil({16, 0, 0, 0, 0, 0, 0, 0, 1}, 2);
    Lattice OE = maximal_order(*E);
    auto ps = primes_above(E->alg(), OE, Int(2));
    REQUIRE(ps.size() == 1);
    CHECK(ps[0].f == 1);
    CHECK(prime_valuation(E->alg(), OE, ps[0], E->alg().scalar(2)) == 8);
    CHECK(prime_valuation(E->alg(), OE, ps[0], E->pi()) == 4);

    // sum of e*f equals the degree, and the product of P^e is pO
    int cases = 0;
    std::vector<Etale> inputs{weil({27, -9, 18, -6, 6, -1, 1}, 3), weil({9, 0, 3, 0, 1}, 3)};
    for (auto& L : small_g2(3)) inputs.push_back(L);
    for (const auto& L : inputs) {
        const auto& alg = L->alg();
        Lattice O = maximal_order(*L);
        for (long p : {2L, 3L, 5L, 7L}) {
            auto P = primes_above(alg, O, Int(p));
            int sum = 0;
            Lattice prod = O;
            for (const auto& Q : P) {
                int e = prime_valuation(alg, O, Q, alg.scalar(p));
                CHECK(e >= 1);
                sum += e * Q.f;
                for (int k = 0; k < e; ++k) prod = lattice_product(alg, prod, Q.lat);
            }
            CHECK(sum == int(alg.degree()));
            CHECK(prod == lattice_scale(O, Rat(p)));
            ++cases;
        }
    }
    CHECK(cases >= 20);
}

TEST_CASE("overorders") {
    auto L = weil({3, 0, 1}, 3);
    auto ov = overorders(*L, frobenius_order(*L), maximal_order(*L));
    CHECK(ov.size() == 2);

    auto D = weil({27, -9, 18, -6, 6, -1, 1}, 3);
    Lattice OD = maximal_order(*D);
    auto ovd = overorders(*D, frobenius_order(*D), OD);
    // one order for each divisor of 18
    REQUIRE(ovd.size() == 6);
    std::vector<long> idx;
    for (const auto& o : ovd) idx.push_back(o.index.get_si());
    CHECK(idx == std::vector<long>{1, 2, 3, 6, 9, 18});

    auto E = weil({16, 0, 0, 0, 0, 0, 0, 0, 1}, 2);
    auto ove = overorders(*E, frobenius_order(*E), maximal_order(*E));
    REQUIRE(ove.size() == 19);
    std::vector<long> eidx;
    int stable = 0;
    for (const auto& o : ove) {
        eidx.push_back(o.index.get_si());
        stable += o.conj_stable;
    }
    CHECK(eidx == std::vector<long>{1, 2, 4, 4, 4, 8, 8, 8, 16, 16, 16, 32, 32, 32, 64, 64, 64, 128, 256});
    CHECK(stable == 15);

    CHECK_THROWS_AS(overorders(*E, frobenius_order(*E), maximal_order(*E), Int(100)), Error);
}

TEST_CASE("overorder enumeration matches subgroup enumeration") {
    int compared = 0;
    std::vector<Etale> inputs{weil({27, -9, 18, -6, 6, -1, 1}, 3)};
    for (long p : {2L, 3L, 5L})
        for (auto& L : small_g2(p)) inputs.push_back(L);
    for (const auto& L : inputs) {
        Lattice R = frobenius_order(*L), O = maximal_order(*L);
        if (lattice_index(R, O) > 64) continue;
        auto ov = overorders(*L, R, O);
        CHECK(ov.size() == brute_force_order_count(L->alg(), R, O));
        for (const auto& o : ov) CHECK(o.gorenstein == gorenstein_oracle(L->alg(), o.lat, O));
        ++compared;
    }
    CHECK(compared >= 20);
}

TEST_CASE("fractional ideal identities (property)") {
    std::vector<Etale> algebras = {weil({3, 0, 1}, 3), weil({7, -1, 1}, 7), weil({9, 0, 0, 0, 1}, 3),
                                   weil({9, 3, 1, 1, 1}, 3), weil({27, -9, 18, -6, 6, -1, 1}, 3)};
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<long> d(-4, 4);
    int cases = 0;
    for (const auto& L : algebras) {
        const auto& A = L->alg();
        Lattice R = frobenius_order(*L);
        auto rand_elem = [&] {
            for (;;) {
                RatVec x(A.degree());
                for (auto& c : x) {
                    c = Rat(d(rng), 1 + long(rng() % 3));
                    c.canonicalize();
                }
                if (A.is_unit(x)) return x;
            }
        };
        auto rand_ideal = [&] {
            return lattice_sum(lattice_mul_elem(A, R, rand_elem()), lattice_mul_elem(A, R, rand_elem()));
        };
        for (int t = 0; t < 45; ++t, ++cases) {
            Lattice I = rand_ideal(), J = rand_ideal();
            Lattice It = lattice_trace_dual(A, I), Jt = lattice_trace_dual(A, J);
            CHECK(lattice_trace_dual(A, It) == I);
            CHECK(conjugate(*L, conjugate(*L, I)) == I);
            CHECK(conjugate(*L, lattice_product(A, I, J)) == lattice_product(A, conjugate(*L, I), conjugate(*L, J)));
            CHECK(conjugate(*L, It) == lattice_trace_dual(A, conjugate(*L, I)));
            Lattice IJ = lattice_colon(A, I, J);
            CHECK(IJ == lattice_trace_dual(A, lattice_product(A, J, It)));
            CHECK(lattice_subset(lattice_product(A, IJ, J), I));
            Lattice T = mult_ring(A, I);
            CHECK(is_order(A, T));
            CHECK(lattice_subset(R, T));
            CHECK(mult_ring(A, It) == T);
            RatVec x = rand_elem();
            CHECK(covolume(lattice_mul_elem(A, I, x)) == abs(A.norm(x)) * covolume(I));
            CHECK(lattice_colon(A, lattice_mul_elem(A, I, x), I) == lattice_mul_elem(A, T, x));
        }
    }
    CHECK(cases >= 200);
}
