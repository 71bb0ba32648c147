#include <doctest.h>

#include <algorithm>
#include <random>

#include "abvar/pol.hpp"
#include "quadratic_oracle.hpp"
#include "weil_gen.hpp"

using namespace abvar;

namespace {

Etale weil(std::initializer_list<long> coeffs, long p) { return EtaleAlgebra::make(RatPoly(coeffs), Int(p)); }

RatVec random_unit(std::mt19937_64& rng, const UnitGroup& U, const OrderUnits& T) {
    std::uniform_int_distribution<long> d(-2, 2);
    IntVec e(U.ngens(), Int(0));
    for (std::size_t r = 0; r < T.units.rows(); ++r) {
        long c = d(rng);
        for (std::size_t j = 0; j < e.size(); ++j) e[j] += c * T.units(r, j);
    }
    return U.element(e);
}

}  // namespace

TEST_CASE("dual ideals in Q(sqrt -3)") {
    auto L = weil({3, 0, 1}, 3);
    const auto& alg = L->alg();
    Lattice O = maximal_order(*L), R = frobenius_order(*L);
    CHECK(dual_ideal(*L, O) == lattice_mul_elem(alg, O, *alg.inverse(L->pi())));
    CHECK(dual_ideal(*L, dual_ideal(*L, R)) == R);
    CHECK(mult_ring(alg, dual_ideal(*L, R)) == R);
}

TEST_CASE("elliptic polarizations over Q(sqrt -3)") {
    auto L = weil({3, 0, 1}, 3);
    const auto& alg = L->alg();
    Lattice O = maximal_order(*L), R = frobenius_order(*L);
    auto C = ClassContext::make(L, R, O);
    RatVec s = L->pi();  // sqrt(-3)
    CMType phi = cm_type_of(*L, s), psi = conjugate_type(*L, phi);

    auto i0 = self_dual_witness(*C, O, O);
    REQUIRE(i0.has_value());
    CHECK(lattice_mul_elem(alg, dual_ideal(*L, O), *i0) == O);
    auto pd = order_pol_data(*C->U, O);
    CHECK(pd.transversal.size() == 6);
    CHECK(pd.ppav_count == 1);
    CHECK(p1_set(*L, pd, i0, phi) == std::vector<RatVec>{s});
    CHECK(p1_set(*L, pd, i0, psi) == std::vector<RatVec>{alg.neg(s)});
    CHECK(p1_set(*L, pd, std::nullopt, phi).empty());

    auto c = check_polarization(*L, O, s, phi, true);
    CHECK(c.is_pol == PolStatus::Yes);
    CHECK(c.degree == 1);
    CHECK(check_polarization(*L, O, alg.scale(Rat(3), s), phi, true).degree == 9);
    CHECK(check_polarization(*L, O, s, phi, false).is_pol == PolStatus::ConditionalOnAlpha);
    CHECK(check_polarization(*L, O, s, psi, true).is_pol == PolStatus::No);
    auto real = check_polarization(*L, O, alg.scale(Rat(3), alg.one()), phi, true);
    CHECK(real.is_pol == PolStatus::No);
    CHECK(real.degree == 3);
    CHECK_THROWS_AS(check_polarization(*L, O, alg.one(), phi, true), Error);

    CHECK(polarized_isomorphic(*C->U, pd, s, s));
    CHECK_FALSE(polarized_isomorphic(*C->U, pd, s, alg.neg(s)));
    CHECK(aut_polarized(*C->U, pd.units) == 6);
    CHECK(aut_polarized(*C->U, order_units(*C->U, R)) == 2);
}

TEST_CASE("P1 on imaginary quadratic orders matches the covolume oracle") {
    int cases = 0;
    for (long p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
        for (long t = 0; t * t < 4 * p; ++t) {
            auto L = weil({p, -t, 1}, p);
            Lattice R = frobenius_order(*L), O = maximal_order(*L);
            if (lattice_index(R, O) > 12) continue;
            auto C = ClassContext::make(L, R, O);
            for (const auto& info : overorders(*L, R, O)) {
                auto pd = order_pol_data(*C->U, info.lat);
                CHECK(pd.ppav_count == 1);
                for (const auto& I : ideal_classes_with_ring(*C, info.lat, pd.units)) {
                    auto i0 = self_dual_witness(*C, info.lat, I);
                    for (const auto& phi : all_cm_types(*L)) {
                        CAPTURE(p);
                        CAPTURE(t);
                        int n = int(p1_set(*L, pd, i0, phi).size());
                        CHECK(n == quadratic_ppav_oracle(*L, I, phi));
                        CHECK(n == 1);
                        ++cases;
                    }
                }
            }
        }
    }
    CHECK(cases >= 200);
}

TEST_CASE("detailed low p-rank example") {
    auto L = weil({27, -9, 18, -6, 6, -1, 1}, 3);
    auto rep = run_pipeline(L);
    CHECK(rep.p_rank == 1);
    CHECK(rep.rw_index == 18);
    REQUIRE(rep.base_type >= 0);
    CHECK(rep.orbit.size() == 8);
    std::vector<Int> S;
    for (const auto& s : rep.certified) S.push_back(s.index);
    CHECK(S == std::vector<Int>{1, 2});
    REQUIRE(rep.orders.size() == 6);
    for (const auto& o : rep.orders) {
        CAPTURE(o.order.index);
        long d = o.order.index.get_si();
        CHECK(18 % d == 0);
        CHECK(o.order.conj_stable);
        CHECK(o.cond2 == (d <= 2));
        if (d <= 2) {
            CHECK(o.outcome == Outcome::Determined);
            CHECK(o.counts == std::vector<std::vector<int>>{{1, 1}});
            for (const auto& c : o.classes) CHECK(c.representatives.size() == 1);
        } else if (d == 3 || d == 6) {
            for (const auto& c : o.classes)
                for (int s : c.sizes) CHECK(s == 0);
        } else {
            // half of the classes carry a unique principal polarization, in
            // an order that depends on the CM-type
            CHECK(o.outcome == Outcome::UpToPermutation);
            REQUIRE(o.counts.size() == 1);
            const auto& v = o.counts[0];
            CHECK(std::count(v.begin(), v.end(), 1) * 2 == long(v.size()));
            CHECK(std::count(v.begin(), v.end(), 0) * 2 == long(v.size()));
        }
    }
}

TEST_CASE("aggregation semantics") {
    std::vector<std::vector<int>> counts;
    bool c5;
    CHECK(aggregate_sizes({{1, 1}, {0, 0}}, false, counts, c5) == Outcome::Determined);
    CHECK(c5);
    CHECK(counts == std::vector<std::vector<int>>{{1, 0}});
    CHECK(aggregate_sizes({{1, 0}, {0, 1}}, false, counts, c5) == Outcome::UpToPermutation);
    CHECK_FALSE(c5);
    CHECK(counts == std::vector<std::vector<int>>{{1, 0}});
    CHECK(aggregate_sizes({{1, 0}, {0, 1}}, true, counts, c5) == Outcome::Determined);
    CHECK(counts == std::vector<std::vector<int>>{{1, 0}});
    CHECK(aggregate_sizes({{2, 0}}, false, counts, c5) == Outcome::Ambiguous);
    CHECK(counts == std::vector<std::vector<int>>{{0}, {2}});
    CHECK(aggregate_sizes({{0, 4, 0}, {0, 0, 4}, {0, 4, 0}, {0, 0, 4}}, false, counts, c5) == Outcome::Ambiguous);
    CHECK(counts == std::vector<std::vector<int>>{{0, 0, 0, 0}, {4, 4, 0, 0}});
}

namespace {

struct Sample {
    Etale L;
    Classes C;
    std::vector<OrderInfo> orders;
};

// Small algebras of dimension 1 to 3 whose orders are cheap to enumerate.
std::vector<Sample> property_samples() {
    std::vector<Sample> out;
    std::mt19937_64 rng(23);
    auto add = [&](const Etale& L) {
        Lattice R = frobenius_order(*L), O = maximal_order(*L);
        if (lattice_index(R, O) > 64) return;
        out.push_back({L, ClassContext::make(L, R, O), overorders(*L, R, O)});
    };
    add(weil({27, -9, 18, -6, 6, -1, 1}, 3));
    add(weil({9, 0, 0, 0, 1}, 3));
    add(weil({25, -15, 7, -3, 1}, 5));
    while (out.size() < 20) {
        long p = std::vector<long>{2, 3, 5, 7}[rng() % 4];
        add(EtaleAlgebra::make(random_weil(rng, p, 1 + int(rng() % 2)), Int(p)));
    }
    return out;
}

}  // namespace

TEST_CASE("P1 sizes do not depend on the transversal, on i0 or on the orientation") {
    std::mt19937_64 rng(31);
    int cases = 0;
    for (const auto& smp : property_samples()) {
        const auto& L = *smp.L;
        const auto& U = *smp.C->U;
        const auto& alg = L.alg();
        auto types = all_cm_types(L);
        for (const auto& info : smp.orders) {
            if (!info.conj_stable) continue;
            auto pd = order_pol_data(U, info.lat);
            for (const auto& I : ideal_classes_with_ring(*smp.C, info.lat, pd.units)) {
                auto i0 = self_dual_witness(*smp.C, info.lat, I);
                if (!i0) continue;
                // another witness and another transversal
                RatVec i1 = alg.mul(*i0, random_unit(rng, U, pd.units));
                CHECK(lattice_mul_elem(alg, dual_ideal(L, I), i1) == I);
                std::vector<RatVec> T2;
                for (const auto& u : pd.transversal) {
                    RatVec v = random_unit(rng, U, pd.units);
                    T2.push_back(alg.mul(u, alg.mul(v, L.involve(v))));
                }
                std::shuffle(T2.begin(), T2.end(), rng);
                for (const auto& phi : types) {
                    auto A = p1_set(L, pd, i0, phi);
                    auto B = p1_set(L, T2, i1, phi);
                    auto Cn = p1_set(L, pd, i0, conjugate_type(L, phi));
                    CHECK((A.empty() || Int(A.size()) == pd.ppav_count));
                    CHECK(A.size() == B.size());
                    CHECK(A.size() == Cn.size());
                    // matched one to one up to polarized isomorphism
                    for (const auto& a : A) {
                        CHECK(std::count_if(B.begin(), B.end(),
                                            [&](const RatVec& b) { return polarized_isomorphic(U, pd, a, b); }) == 1);
                        CHECK(std::count_if(Cn.begin(), Cn.end(), [&](const RatVec& c) {
                                  return polarized_isomorphic(U, pd, alg.neg(a), c);
                              }) == 1);
                        auto chk = check_polarization(L, I, a, phi, true);
                        CHECK(chk.is_pol == PolStatus::Yes);
                        CHECK(chk.degree == 1);
                    }
                    ++cases;
                }
            }
        }
    }
    MESSAGE("P1 property cases " << cases);
    CHECK(cases >= 200);
}

TEST_CASE("degree is multiplicative") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<long> d(-3, 3);
    int cases = 0;
    for (const auto& smp : property_samples()) {
        const auto& L = *smp.L;
        const auto& alg = L.alg();
        auto types = all_cm_types(L);
        for (const auto& info : smp.orders) {
            Lattice I = info.lat;
            Lattice D = dual_ideal(L, I);
            // lambda runs over (I : D), so lambda * D is inside I
            Lattice colon = lattice_colon(alg, I, D);
            for (int it = 0; it < 10; ++it) {
                RatVec lam = alg.zero(), mu = alg.zero();
                for (std::size_t r = 0; r < colon.dim(); ++r) lam = alg.add(lam, alg.scale(Rat(d(rng)), colon.basis_vector(r)));
                for (std::size_t r = 0; r < I.dim(); ++r) mu = alg.add(mu, alg.scale(Rat(d(rng)), info.lat.basis_vector(r)));
                if (!alg.inverse(lam) || !alg.inverse(mu)) continue;
                auto a = check_polarization(L, I, lam, types[0], true);
                auto b = check_polarization(L, I, alg.mul(lam, mu), types[0], true);
                Rat n = alg.norm(mu);
                CHECK(Rat(b.degree) == Rat(a.degree) * (n < 0 ? -n : n));
                ++cases;
            }
        }
    }
    CHECK(cases >= 200);
}

TEST_CASE("every elliptic class has one principal polarization per CM-type") {
    int cases = 0;
    for (long p : {3, 5, 7}) {
        for (long t = -3; t <= 3; ++t) {
            if (t * t >= 4 * p) continue;
            auto L = weil({p, -t, 1}, p);
            auto rep = run_pipeline(L);
            for (const auto& o : rep.orders) {
                REQUIRE(o.outcome == Outcome::Determined);
                for (const auto& c : o.classes) {
                    CHECK(c.sizes == std::vector<int>(rep.orbit.size(), 1));
                    for (const auto& lam : c.representatives)
                        CHECK(check_polarization(*L, c.ideal, lam, rep.types[rep.base_type], true).degree == 1);
                    ++cases;
                }
            }
            CHECK(rep.orbit.size() == 2);
        }
    }
    CHECK(cases > 20);
}
