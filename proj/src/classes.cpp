#include "abvar/classes.hpp"

#include <cmath>
#include <deque>
#include <map>

namespace abvar {

namespace {

using LD = long double;

// Gram matrix of T2(x) = Tr(x * conj(x)) on the power basis.
RatMatrix t2_form(const EtaleAlgebra& L) {
    const auto& alg = L.alg();
    const std::size_t n = alg.degree();
    std::vector<RatVec> pw, cpw;
    RatVec x = alg.one();
    for (std::size_t k = 0; k < n; ++k) {
        pw.push_back(x);
        cpw.push_back(L.involve(x));
        x = alg.mul(x, alg.gen());
    }
    RatMatrix H(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) H(a, b) = H(b, a) = alg.trace(alg.mul(pw[a], cpw[b]));
    return H;
}

// Rows of a and b stacked into one lattice.
Lattice span_of(const RatMatrix& a, const RatMatrix& b) {
    RatMatrix m = a;
    for (std::size_t i = 0; i < b.rows(); ++i) m.append_row(b.row(i));
    return lattice_from_rows(m);
}

RatMatrix scaled_rows(const NumberAlgebra& alg, const Lattice& a, const RatVec& x) {
    RatMatrix m(a.dim(), a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) m.set_row(i, alg.mul(a.basis_vector(i), x));
    return m;
}

// Exponent of exp() in the balanced-generator bound, via nearest-plane
// reduction against the Gram-Schmidt vectors of the unit logarithms.
LD unit_spread(const std::vector<std::vector<LD>>& logs) {
    if (logs.empty()) return 0;
    const std::size_t n = logs[0].size();
    std::vector<std::vector<LD>> gs;
    for (auto v : logs) {
        for (const auto& b : gs) {
            LD dot = 0, bb = 0;
            for (std::size_t k = 0; k < n; ++k) {
                dot += v[k] * b[k];
                bb += b[k] * b[k];
            }
            for (std::size_t k = 0; k < n; ++k) v[k] -= dot / bb * b[k];
        }
        gs.push_back(v);
    }
    LD plain = 0, ortho = 0;
    for (std::size_t k = 0; k < n; ++k) {
        LD s1 = 0, s2 = 0;
        for (std::size_t j = 0; j < logs.size(); ++j) {
            s1 += std::fabs(logs[j][k]);
            s2 += std::fabs(gs[j][k]);
        }
        plain = std::max(plain, s1);
        ortho = std::max(ortho, s2);
    }
    return std::min(plain, ortho);
}

std::map<Lattice, IntVec> unit_orbit(const UnitGroup& U, const Lattice& X) {
    const auto& alg = U.algebra()->alg();
    const std::size_t m = U.ngens();
    std::map<Lattice, IntVec> word{{X, IntVec(m, Int(0))}};
    std::deque<Lattice> queue{X};
    while (!queue.empty()) {
        Lattice Y = queue.front();
        queue.pop_front();
        IntVec w = word.at(Y);
        for (std::size_t j = 0; j < m; ++j) {
            Lattice Z = lattice_mul_elem(alg, Y, U.gens()[j]);
            if (word.count(Z)) continue;
            if (word.size() > 1000000) fail(ErrorKind::IndexTooLarge, "unit orbit too large");
            IntVec wz = w;
            wz[j] += 1;
            word.emplace(Z, wz);
            queue.push_back(Z);
        }
    }
    return word;
}

Lattice orbit_key(const UnitGroup& U, const Lattice& X) { return unit_orbit(U, X).begin()->first; }

Lattice inverse_ideal(const NumberAlgebra& alg, const Lattice& O, const Lattice& A) { return lattice_colon(alg, O, A); }

// Integral multiple of a lattice inside O.
Int integral_scale(const Lattice& O, const Lattice& A) {
    Int d = 1;
    for (std::size_t i = 0; i < A.dim(); ++i)
        for (const auto& c : lattice_coords(O, A.basis_vector(i))) d = int_lcm(d, c.get_den());
    return d;
}

}  // namespace

std::optional<RatVec> principal_generator(const UnitGroup& U, const Lattice& A0) {
    const auto& L = *U.algebra();
    const auto& alg = L.alg();
    const Lattice& O = U.maximal();
    Int d = integral_scale(O, A0);
    Lattice A = lattice_scale(A0, Rat(d));
    Rat N = lattice_index(A, O);
    ABVAR_ASSERT(N.get_den() == 1, "ideal not integral after scaling");

    // norms of the components of A
    LD base = 0;
    for (std::size_t i = 0; i < L.factors().size(); ++i) {
        RatVec c = alg.sub(alg.one(), L.idempotents()[i]);
        Rat Ni = lattice_index(span_of(A.basis(), scaled_rows(alg, O, c)), O);
        LD ni = LD(L.factors()[i].degree());
        base += ni * std::pow(LD(Ni.get_d()), 2 / ni);
    }
    std::vector<std::vector<LD>> logs;
    for (std::size_t j = U.torsion_orders().size(); j < U.ngens(); ++j) logs.push_back(U.log_embedding(U.gens()[j]));
    LD top = base * std::exp(unit_spread(logs)) * (1 + 1e-6L) + 1;
    Int bmax;
    mpz_set_d(bmax.get_mpz_t(), double(std::ceil(top)));

    RatMatrix B = A.basis();
    RatMatrix G = B * t2_form(L) * B.transpose();
    Int b;
    mpz_set_d(b.get_mpz_t(), double(std::ceil(base * (1 + 1e-9L))));
    for (;;) {
        if (b > bmax) b = bmax;
        auto vecs = short_vectors(G, Rat(b), 4000000);
        if (!vecs) fail(ErrorKind::WitnessSearchExhausted, "principal ideal search region too large");
        for (const auto& c : *vecs) {
            RatVec y = vec_mul(RatVec(c.begin(), c.end()), B);
            if (abs(alg.norm(y)) != N) continue;
            if (lattice_mul_elem(alg, O, y) == A) return alg.scale(Rat(1, 1) / Rat(d), y);
        }
        if (b == bmax) return std::nullopt;
        b *= 4;
    }
}

bool weakly_equivalent(const NumberAlgebra& alg, const Lattice& I, const Lattice& J) {
    Lattice p = lattice_product(alg, lattice_colon(alg, I, J), lattice_colon(alg, J, I));
    return lattice_contains(p, alg.one());
}

Int unit_count_quotient(const NumberAlgebra& alg, const Lattice& A, const Lattice& B) {
    Rat idx = lattice_index(B, A);
    ABVAR_ASSERT(idx.get_den() == 1, "not a subideal");
    Int count = idx.get_num();
    for (const auto& [p, e] : factor_integer(count))
        for (const auto& P : primes_above(alg, A, p)) {
            if (!lattice_subset(B, P.lat)) continue;
            Int q = int_pow(p, P.f);
            count = count / q * (q - 1);
        }
    return count;
}

namespace {

std::vector<Lattice> maximal_picard(const EtaleAlgebra& L, const UnitGroup& U, const Lattice& O, const Int& avoid) {
    const auto& alg = L.alg();
    auto same_class = [&](const Lattice& a, const Lattice& b) {
        return principal_generator(U, lattice_product(alg, a, inverse_ideal(alg, O, b))).has_value();
    };
    auto close = [&](std::vector<Lattice>& group, const Lattice& g) {
        for (bool grew = true; grew;) {
            grew = false;
            std::vector<Lattice> add;
            for (const auto& s : group) {
                Lattice t = lattice_product(alg, s, g);
                bool known = false;
                for (const auto& x : group)
                    if (same_class(t, x)) {
                        known = true;
                        break;
                    }
                for (const auto& x : add)
                    if (!known && same_class(t, x)) known = true;
                if (!known) add.push_back(t);
            }
            if (!add.empty()) grew = true;
            for (auto& a : add) group.push_back(std::move(a));
        }
    };

    // Minkowski bound, maximised over the factors
    LD bound = 1;
    for (std::size_t i = 0; i < L.factors().size(); ++i) {
        NumberAlgebra Ki(L.factors()[i]);
        RatMatrix rows(0, Ki.degree());
        for (std::size_t j = 0; j < O.dim(); ++j) rows.append_row(Ki.from_poly(L.component(O.basis_vector(j), int(i))));
        Rat disc = lattice_discriminant(Ki, lattice_from_rows(rows));
        const int n = int(Ki.degree());
        LD mk = std::pow(4 / LD(M_PI), n / 2) * std::sqrt(std::fabs(LD(disc.get_d())));
        for (int k = 1; k <= n; ++k) mk *= LD(k) / LD(n);
        bound = std::max(bound, mk);
    }
    std::vector<Lattice> group{O};
    for (long ell = 2; ell <= long(bound); ++ell) {
        if (!is_prime(Int(ell))) continue;
        for (const auto& P : primes_above(alg, O, Int(ell)))
            if (LD(int_pow(Int(ell), P.f).get_d()) <= bound) close(group, P.lat);
    }
    const std::size_t h = group.size();
    if (h == 1) return group;

    // same group again from primes coprime to `avoid`
    std::vector<Lattice> reps{O};
    for (long ell = 2; reps.size() < h; ++ell) {
        if (!is_prime(Int(ell)) || avoid % ell == 0) continue;
        for (const auto& P : primes_above(alg, O, Int(ell))) close(reps, P.lat);
        if (ell > 100000) fail(ErrorKind::ClassGroupTooLarge, "no coprime generators for Pic(O_L)");
    }
    return reps;
}

}  // namespace

std::shared_ptr<const ClassContext> ClassContext::make(const Etale& L, const Lattice& R, const Lattice& O) {
    auto C = std::make_shared<ClassContext>();
    C->L = L;
    C->R = R;
    C->O = O;
    C->U = UnitGroup::compute(L, O);
    Int avoid = lattice_index(R, O).get_num() * L->p();
    C->pic_maximal = maximal_picard(*L, *C->U, O, avoid);
    return C;
}

std::vector<Lattice> weak_classes(const ClassContext& C, const Lattice& T) {
    const auto& alg = C.alg();
    if (T == C.O) return {C.O};
    Lattice f = conductor(alg, T, C.O);
    // T-modules between T and O suffice unless some prime of T lies under
    // more primes of O than it has residue classes
    bool from_T = true;
    for (const auto& [p, e] : factor_integer(lattice_index(T, C.O).get_num())) {
        auto above = primes_above(alg, C.O, p);
        for (const auto& P : primes_above(alg, T, p)) {
            if (!lattice_subset(f, P.lat)) continue;
            long s = 0;
            for (const auto& Q : above) s += lattice_subset(P.lat, Q.lat);
            if (Int(s) > int_pow(p, P.f)) from_T = false;
        }
    }
    std::vector<Lattice> reps;
    for (const auto& J : intermediate_modules(alg, T, from_T ? T : f, C.O)) {
        if (mult_ring(alg, J) != T) continue;
        if (!from_T && lattice_product(alg, J, C.O) != C.O) continue;
        bool known = false;
        for (const auto& r : reps)
            if (weakly_equivalent(alg, r, J)) {
                known = true;
                break;
            }
        if (!known) reps.push_back(J);
    }
    // put T (the invertible class) first
    for (std::size_t i = 0; i < reps.size(); ++i)
        if (reps[i] == T) std::swap(reps[0], reps[i]);
    return reps;
}

std::vector<Lattice> picard_group(const ClassContext& C, const Lattice& T, const OrderUnits& TU) {
    const auto& alg = C.alg();
    if (T == C.O) return C.pic_maximal;
    const Lattice& O = C.O;
    Lattice f = conductor(alg, T, O);
    Int unit_index = abs(determinant(TU.units));
    Int num = unit_count_quotient(alg, O, f), den = unit_count_quotient(alg, T, f) * unit_index;
    ABVAR_ASSERT(num % den == 0, "Picard kernel order is not integral");
    const Int k = num / den;

    // kernel of Pic(T) -> Pic(O): classes of xT + f for x a unit mod f,
    // normalised by the O^*-orbit
    std::map<Lattice, Lattice> kernel{{orbit_key(*C.U, T), T}};
    auto close = [&](const Lattice& g) {
        for (bool grew = true; grew;) {
            grew = false;
            std::vector<Lattice> cur;
            for (const auto& [key, P] : kernel) cur.push_back(P);
            for (const auto& P : cur) {
                Lattice Q = lattice_product(alg, P, g);
                if (kernel.emplace(orbit_key(*C.U, Q), Q).second) grew = true;
            }
        }
    };
    const std::size_t n = O.dim();
    RatMatrix fb = f.basis();
    for (long radius = 1; Int(kernel.size()) < k; ++radius) {
        if (radius > 6) fail(ErrorKind::ClassGroupTooLarge, "Picard kernel generators not found");
        // coefficient vectors with max norm == radius, in lexicographic order
        std::vector<long> c(n, -radius);
        for (;;) {
            long mx = 0;
            for (long v : c) mx = std::max(mx, std::labs(v));
            if (mx == radius) {
                RatVec x = alg.zero();
                for (std::size_t i = 0; i < n; ++i)
                    if (c[i])
                        for (std::size_t j = 0; j < n; ++j) x[j] += Rat(c[i]) * O.basis_vector(i)[j];
                if (alg.norm(x) != 0 && lattice_sum(lattice_mul_elem(alg, O, x), f) == O) {
                    Lattice Px = span_of(scaled_rows(alg, T, x), fb);
                    if (!kernel.count(orbit_key(*C.U, Px))) close(Px);
                    if (Int(kernel.size()) == k) break;
                }
            }
            std::size_t i = 0;
            while (i < n && ++c[i] > radius) c[i++] = -radius;
            if (i == n) break;
        }
    }
    ABVAR_ASSERT(Int(kernel.size()) == k, "Picard kernel larger than expected");

    std::vector<Lattice> out;
    for (const auto& a : C.pic_maximal) {
        Lattice b = lattice_intersection(a, T);
        for (const auto& [key, P] : kernel) out.push_back(lattice_product(alg, P, b));
    }
    return out;
}

std::vector<Lattice> ideal_classes_with_ring(const ClassContext& C, const Lattice& T, const OrderUnits& TU) {
    std::vector<Lattice> out;
    auto pic = picard_group(C, T, TU);
    for (const auto& w : weak_classes(C, T))
        for (const auto& P : pic) out.push_back(lattice_product(C.alg(), w, P));
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<RatVec> iso_witness(const ClassContext& C, const Lattice& T, const Lattice& I, const Lattice& J) {
    const auto& alg = C.alg();
    if (!weakly_equivalent(alg, I, J)) return std::nullopt;
    Lattice K = lattice_colon(alg, J, I);
    ABVAR_ASSERT(lattice_product(alg, K, I) == J, "colon of weakly equivalent ideals");
    auto y = principal_generator(*C.U, lattice_product(alg, K, C.O));
    if (!y) return std::nullopt;
    Lattice K1 = lattice_mul_elem(alg, K, *alg.inverse(*y));
    auto orbit = unit_orbit(*C.U, T);
    auto it = orbit.find(K1);
    if (it == orbit.end()) return std::nullopt;
    RatVec x = alg.mul(*y, C.U->element(it->second));
    ABVAR_ASSERT(lattice_mul_elem(alg, I, x) == J, "isomorphism witness check");
    return x;
}

}  // namespace abvar
