#include "abvar/padic.hpp"

#include <algorithm>
#include <set>

#include "abvar/factor.hpp"

namespace abvar {

namespace {

RatVec to_ratvec(const IntVec& c) { return RatVec(c.begin(), c.end()); }

Int power(const Int& p, int k) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

IntVec reduce_mod(const RatVec& v, const Int& m) {
    IntVec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        ABVAR_ASSERT(v[i].get_den() == 1, "expected integral coordinates");
        out[i] = mod_floor(v[i].get_num(), m);
    }
    return out;
}

// Idempotent of P in O/p^k O, on the basis of O.
IntVec lift_idempotent(const NumberAlgebra& alg, const Lattice& O, const PrimeIdeal& P, const Int& modulus) {
    auto to_elem = [&](const IntVec& c) { return vec_mul(to_ratvec(c), O.basis()); };
    IntVec e = reduce_mod(lattice_coords(O, P.idem), modulus);
    for (int it = 0; it < 4096; ++it) {
        RatVec x = to_elem(e);
        RatVec x2 = alg.mul(x, x);
        RatVec x3 = alg.mul(x2, x);
        IntVec next = reduce_mod(lattice_coords(O, alg.sub(alg.scale(Rat(3), x2), alg.scale(Rat(2), x3))), modulus);
        if (next == e) return e;
        e = std::move(next);
    }
    fail(ErrorKind::Internal, "idempotent lifting did not converge");
}

RatPoly local_factor_at(const EtaleAlgebra& L, const Lattice& O, const PrimeIdeal& P, int degree, int precision) {
    const auto& alg = L.alg();
    Int mod = power(P.p, precision);
    IntVec e = lift_idempotent(alg, O, P, mod);
    RatVec pe = alg.mul(L.pi(), vec_mul(to_ratvec(e), O.basis()));
    // matrix of multiplication by pi*e on the basis of O
    RatMatrix B = O.basis();
    RatMatrix Binv = inverse(B);
    RatMatrix Mx = B * alg.mult_matrix(pe) * Binv;
    RatVec chi = charpoly(Mx);
    std::size_t n = alg.degree(), shift = n - std::size_t(degree);
    for (std::size_t i = 0; i < shift; ++i)
        ABVAR_ASSERT(mod_floor(chi[i].get_num(), mod) == 0 && chi[i].get_den() == 1, "local factor does not split off");
    std::vector<Rat> c;
    for (std::size_t i = shift; i <= n; ++i) c.push_back(Rat(mod_floor(chi[i].get_num(), mod)));
    return RatPoly(c);
}

RatPoly reduce_poly(const RatPoly& f, const Int& mod) {
    std::vector<Rat> c;
    for (const auto& a : f.coeffs()) c.push_back(Rat(mod_floor(a.get_num(), mod)));
    return RatPoly(c);
}

}  // namespace

std::vector<Rat> newton_slopes(const RatPoly& h, const Int& p) {
    std::vector<std::pair<long, long>> pts;
    for (long i = 0; i <= h.degree(); ++i)
        if (h.coeff(i) != 0) {
            ABVAR_ASSERT(h.coeff(i).get_den() == 1, "integral polynomial expected");
            pts.push_back({i, long(valuation(Int(h.coeff(i).get_num()), p))});
        }
    // lower convex hull, left to right
    std::vector<std::pair<long, long>> hull;
    for (const auto& q : pts) {
        while (hull.size() >= 2) {
            auto [x1, y1] = hull[hull.size() - 2];
            auto [x2, y2] = hull.back();
            // drop the middle point unless it lies strictly below the chord
            if ((y2 - y1) * (q.first - x1) >= (q.second - y1) * (x2 - x1)) hull.pop_back();
            else break;
        }
        hull.push_back(q);
    }
    std::vector<Rat> out;
    for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
        long dx = hull[i + 1].first - hull[i].first, dy = hull[i].second - hull[i + 1].second;
        for (long k = 0; k < dx; ++k) out.push_back(Rat(dy, dx));
    }
    // a root at zero contributes infinite slope; h(0) != 0 for Weil polynomials
    for (auto& r : out) r.canonicalize();
    std::sort(out.begin(), out.end());
    return out;
}

int p_rank(const RatPoly& h, const Int& p) {
    int r = 0;
    for (const auto& s : newton_slopes(h, p))
        if (s == 0) ++r;
    return r;
}

std::vector<PlaceData> factor_qp(const EtaleAlgebra& L, const Lattice& O, int precision) {
    const auto& alg = L.alg();
    std::vector<PlaceData> out;
    for (const auto& P : primes_above(alg, O, L.p())) {
        PlaceData d;
        d.prime = P;
        d.f = P.f;
        d.e = prime_valuation(alg, O, P, alg.scalar(Rat(L.p())));
        d.slope = Rat(prime_valuation(alg, O, P, L.pi()), d.e);
        d.slope.canonicalize();
        d.precision = precision;
        d.local_factor = local_factor_at(L, O, P, d.degree(), precision);
        RatPoly twice = local_factor_at(L, O, P, d.degree(), 2 * precision);
        if (reduce_poly(twice, power(L.p(), precision)) != d.local_factor)
            fail(ErrorKind::PrecisionExhausted, "local factor not stable under precision doubling");
        out.push_back(std::move(d));
    }
    return out;
}

namespace {

// x in P Z_(p): coordinates on P have denominators prime to p.
bool in_local(const Lattice& P, const RatVec& x, const Int& p) {
    for (const auto& c : lattice_coords(P, x))
        if (c.get_den() % p == 0) return false;
    return true;
}

// The automorphism z -> image of the field as a matrix on row vectors.
RatMatrix automorphism_matrix(const NumberAlgebra& M, const RatVec& image) {
    std::size_t n = M.degree();
    RatMatrix S(n, n);
    RatVec v = M.one();
    for (std::size_t i = 0; i < n; ++i) {
        S.set_row(i, v);
        v = M.mul(v, image);
    }
    return S;
}

std::vector<int> compose(const std::vector<int>& a, const std::vector<int>& b) {
    // (a o b)(k) = a(b(k))
    std::vector<int> r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[b[k]];
    return r;
}

std::size_t generated_order(const std::vector<std::vector<int>>& gens, std::size_t n) {
    std::vector<int> id(n);
    for (std::size_t k = 0; k < n; ++k) id[k] = int(k);
    std::set<std::vector<int>> seen{id};
    std::vector<std::vector<int>> todo{id};
    while (!todo.empty()) {
        auto x = todo.back();
        todo.pop_back();
        for (const auto& g : gens) {
            auto y = compose(g, x);
            if (seen.insert(y).second) todo.push_back(y);
        }
    }
    return seen.size();
}

}  // namespace

RootMatching build_matching(const EtaleAlgebra& L, const Lattice& maximal, std::size_t max_degree, int precision) {
    const auto& facs = L.factors();
    std::size_t n = L.degree();
    // M as Q[z]/(m); z = sum coef[j] * adjoined[j]
    NumberAlgebra M(RatPoly{0, 1});
    std::vector<RatVec> adjoined;
    std::vector<int> adjoined_factor;
    std::vector<Rat> coef;
    std::vector<std::vector<RatVec>> roots(facs.size());
    while (true) {
        std::size_t found = 0;
        for (std::size_t i = 0; i < facs.size(); ++i) {
            if (roots[i].size() < std::size_t(facs[i].degree())) roots[i] = roots_in_field(M, facs[i]);
            found += roots[i].size();
        }
        if (found == n) break;
        std::size_t i = 0;
        while (roots[i].size() == std::size_t(facs[i].degree())) ++i;
        auto parts = tensor_split(M, facs[i]);
        const TensorFactor* best = nullptr;
        for (const auto& t : parts)
            if (std::size_t(t.modulus.degree()) > M.degree() &&
                (!best || t.modulus.degree() < best->modulus.degree()))
                best = &t;
        ABVAR_ASSERT(best, "no proper extension found");
        if (std::size_t(best->modulus.degree()) > max_degree)
            fail(ErrorKind::SplittingFieldTooLarge, "splitting field degree exceeds " + std::to_string(max_degree));
        NumberAlgebra next(best->modulus);
        for (auto& a : adjoined) a = next.eval(RatPoly(a), best->image_of_gen);
        for (auto& rs : roots)
            for (auto& r : rs) r = next.eval(RatPoly(r), best->image_of_gen);
        adjoined.push_back(best->image_of_x);
        adjoined_factor.push_back(int(i));
        // new generator x + shift * old generator
        for (auto& c : coef) c *= best->shift;
        coef.push_back(Rat(1));
        M = std::move(next);
    }
    if (adjoined.empty()) {
        // h splits over Q: impossible for a Weil polynomial without real roots
        fail(ErrorKind::Internal, "Weil polynomial with rational roots");
    }
    const auto& m = M.modulus();

    // complex embedding phi0: first root box of m
    Rat width(1, 1 << 10);
    auto zboxes = isolate_complex_roots(m, width);
    RootBox z0 = zboxes.front();
    const auto& emb = L.embeddings();
    std::vector<RatVec> root(n);
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < facs.size(); ++i)
        for (const auto& r : roots[i]) {
            RootBox zb = z0;
            int hit = -1;
            for (int it = 0; it < 200 && hit < 0; ++it) {
                RootBox img = evaluate_box(RatPoly(r), zb);
                int cand = -1, count = 0;
                for (std::size_t k = 0; k < n; ++k)
                    if (emb[k].factor == int(i) && !img.disjoint(emb[k].box)) {
                        cand = int(k);
                        ++count;
                    }
                if (count == 1) hit = cand;
                else zb = refine_root_boxes(m, {zb}, zb.width() / 4).front();
            }
            if (hit < 0) fail(ErrorKind::PrecisionExhausted, "complex root matching did not separate");
            ABVAR_ASSERT(!used[hit], "two roots matched to one embedding");
            used[hit] = true;
            root[hit] = r;
        }

    RootMatching out{M, root, {}, {}, {}, {}, 0, 0, {}};
    const auto& alg = out.M;

    // Galois group: images of the adjoined roots among roots of the same factor
    std::vector<std::size_t> choice(adjoined.size(), 0);
    std::vector<std::vector<int>> same(adjoined.size());
    for (std::size_t j = 0; j < adjoined.size(); ++j)
        for (std::size_t k = 0; k < n; ++k)
            if (emb[k].factor == adjoined_factor[j]) same[j].push_back(int(k));
    std::vector<RatVec> images;
    while (true) {
        RatVec z = alg.zero();
        for (std::size_t j = 0; j < adjoined.size(); ++j) z = alg.add(z, alg.scale(coef[j], root[same[j][choice[j]]]));
        if (alg.is_zero(alg.eval(m, z))) {
            std::vector<int> perm(n, -1);
            bool ok = true;
            for (std::size_t k = 0; k < n && ok; ++k) {
                RatVec img = alg.eval(RatPoly(root[k]), z);
                for (std::size_t l = 0; l < n; ++l)
                    if (img == root[l]) perm[k] = int(l);
                ok = perm[k] >= 0;
            }
            ABVAR_ASSERT(ok, "automorphism does not permute the roots");
            out.galois.push_back(perm);
            images.push_back(z);
        }
        std::size_t j = 0;
        while (j < choice.size() && ++choice[j] == same[j].size()) choice[j++] = 0;
        if (j == choice.size()) break;
    }
    ABVAR_ASSERT(out.galois.size() == alg.degree(), "Galois group order differs from the field degree");

    // pinned prime of M above p
    const Int& p = L.p();
    Lattice OM = p_maximal_order(alg, standard_lattice(alg.degree()), p);
    auto primes = primes_above(alg, OM, p);
    const Lattice& P = primes.front().lat;
    out.residue_degree = primes.front().f;
    for (std::size_t g = 0; g < out.galois.size(); ++g) {
        RatMatrix S = automorphism_matrix(alg, images[g]);
        bool dec = true;
        for (std::size_t r = 0; r < P.basis().rows() && dec; ++r) dec = in_local(P, vec_mul(P.basis().row(r), S), p);
        if (!dec) continue;
        out.decomposition.push_back(int(g));
        bool inert = true;
        for (std::size_t r = 0; r < OM.basis().rows() && inert; ++r) {
            RatVec w = OM.basis().row(r);
            inert = in_local(P, alg.sub(vec_mul(w, S), w), p);
        }
        if (inert) out.inertia.push_back(int(g));
    }
    out.ramification = int(out.inertia.size());
    ABVAR_ASSERT(out.decomposition.size() == std::size_t(out.ramification * out.residue_degree),
                 "|D| differs from e f");

    // places of L under j'
    out.places = factor_qp(L, maximal, precision);
    out.place_of.assign(n, -1);
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < out.places.size(); ++j) {
            const Lattice& Q = out.places[j].prime.lat;
            bool inside = true;
            for (std::size_t r = 0; r < Q.basis().rows() && inside; ++r)
                inside = in_local(P, alg.eval(RatPoly(Q.basis().row(r)), root[k]), p);
            if (inside) {
                ABVAR_ASSERT(out.place_of[k] < 0, "root lies over two places");
                out.place_of[k] = int(j);
            }
        }
        ABVAR_ASSERT(out.place_of[k] >= 0, "root lies over no place");
    }
    return out;
}

bool shimura_taniyama(const EtaleAlgebra& L, const CMType& phi, const RootMatching& m) {
    (void)L;
    std::vector<long> count(m.places.size(), 0);
    for (int k : phi.embeddings) ++count[m.place_of[k]];
    for (std::size_t j = 0; j < m.places.size(); ++j)
        if (Rat(count[j]) != m.places[j].slope * m.places[j].degree()) return false;
    return true;
}

int reflex_residue_degree(const EtaleAlgebra& L, const CMType& phi, const RootMatching& m) {
    std::size_t n = L.degree();
    std::vector<std::vector<int>> gens;
    for (int g : m.inertia) gens.push_back(m.galois[g]);
    for (int g : m.decomposition) {
        std::vector<int> img;
        for (int k : phi.embeddings) img.push_back(m.galois[g][k]);
        std::sort(img.begin(), img.end());
        if (img == phi.embeddings) gens.push_back(m.galois[g]);
    }
    std::size_t sub = generated_order(gens, n);
    ABVAR_ASSERT(m.decomposition.size() % sub == 0, "subgroup order does not divide |D|");
    return int(m.decomposition.size() / sub);
}

bool reflex_residue(const EtaleAlgebra& L, const CMType& phi, const RootMatching& m, const Int& q) {
    int a = 0;
    for (Int t = q; t > 1; t /= L.p()) {
        ABVAR_ASSERT(t % L.p() == 0, "q is not a power of p");
        ++a;
    }
    // the residue field of the splitting field already fits
    if (a % m.residue_degree == 0) return true;
    return a % reflex_residue_degree(L, phi, m) == 0;
}

RRCResult rrc(const EtaleAlgebra& L, const CMType& phi, const RootMatching& m) {
    return {shimura_taniyama(L, phi, m), reflex_residue(L, phi, m, L.p())};
}

std::vector<OrderInfo> candidate_orders(const EtaleAlgebra& L, const std::vector<OrderInfo>& overorders,
                                        bool rrc_holds) {
    int r = p_rank(L.h(), L.p());
    std::vector<OrderInfo> out;
    const Int& top = overorders.back().index;  // R_w has the largest index
    for (const auto& o : overorders) {
        bool rw = o.index == top && (r == L.g() || (r == L.g() - 1 && L.p() != 2));
        bool local = rrc_holds && o.gorenstein && o.conj_stable && int_gcd(o.index, L.p()) == 1;
        if (rw || local) out.push_back(o);
    }
    return out;
}

}  // namespace abvar
