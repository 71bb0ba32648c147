#include "abvar/units.hpp"

#include <cmath>
#include <deque>
#include <map>

namespace abvar {

namespace {

using LD = long double;
using CLD = std::complex<long double>;

CLD eval_complex(const RatPoly& f, CLD z) {
    CLD r = 0;
    for (int i = f.degree(); i >= 0; --i) r = r * z + LD(f.coeff(i).get_d());
    return r;
}

// Solve z = c * E for real c (E square).
std::vector<LD> solve_ld(const std::vector<std::vector<LD>>& E, const std::vector<LD>& z) {
    const std::size_t n = z.size();
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

Int round_ld(LD v) {
    Int r;
    mpz_set_d(r.get_mpz_t(), double(std::nearbyint(v)));
    return r;
}

}  // namespace

namespace detail {
// One CM field factor of L with its unit group.
struct CMField {
    NumberAlgebra K;
    RatMatrix invol;
    Lattice O;
    std::vector<CLD> roots;  // one root per conjugate pair (imaginary part > 0)
    RatVec zeta;
    long w = 0;
    std::vector<RatVec> zeta_pows;
    std::vector<RatVec> free;  // fundamental units modulo torsion

    RatVec involve(const RatVec& x) const { return vec_mul(x, invol); }

    std::vector<LD> logs(const RatVec& u) const {
        std::vector<LD> l;
        for (std::size_t k = 0; k + 1 < roots.size(); ++k)
            l.push_back(std::log(std::abs(eval_complex(K.to_poly(u), roots[k]))));
        return l;
    }

    // z in O_K with z^2 = y, searched through the complex embeddings.
    std::optional<RatVec> square_root(const RatVec& y) const {
        const std::size_t g = roots.size(), n = K.degree();
        RatMatrix B = O.basis();
        std::vector<std::vector<LD>> E(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < g; ++k) {
                CLD v = eval_complex(K.to_poly(B.row(i)), roots[k]);
                E[i].push_back(v.real());
                E[i].push_back(v.imag());
            }
        std::vector<CLD> s;
        for (std::size_t k = 0; k < g; ++k) s.push_back(std::sqrt(eval_complex(K.to_poly(y), roots[k])));
        for (unsigned long pat = 0; pat < (1ul << (g - 1)); ++pat) {
            std::vector<LD> z;
            for (std::size_t k = 0; k < g; ++k) {
                CLD v = (k > 0 && (pat >> (k - 1) & 1)) ? -s[k] : s[k];
                z.push_back(v.real());
                z.push_back(v.imag());
            }
            auto c = solve_ld(E, z);
            bool clean = true;
            RatVec x = K.zero();
            for (std::size_t i = 0; i < n && clean; ++i) {
                if (std::fabs(c[i] - std::nearbyint(c[i])) > 1e-4L) clean = false;
                Rat ci(round_ld(c[i]));
                for (std::size_t j = 0; j < n; ++j) x[j] += ci * B(i, j);
            }
            if (clean && K.mul(x, x) == y) return x;
        }
        return std::nullopt;
    }
};

CMField make_cm_field(const RatPoly& h, const Int& p) {
    CMField F;
    F.K = NumberAlgebra(h);
    const std::size_t n = F.K.degree();
    RatVec vb = F.K.scale(Rat(p), *F.K.inverse(F.K.gen()));
    F.invol = RatMatrix(n, n);
    RatVec pw = F.K.one();
    for (std::size_t k = 0; k < n; ++k) {
        F.invol.set_row(k, pw);
        pw = F.K.mul(pw, vb);
    }
    F.O = maximal_order_of(F.K);
    for (const auto& z : approximate_roots(h))
        if (z.imag() > 0) F.roots.push_back(z);
    std::sort(F.roots.begin(), F.roots.end(),
              [](const CLD& a, const CLD& b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
    ABVAR_ASSERT(F.roots.size() * 2 == n, "CM field has real embeddings");

    // roots of unity: elements with T2 = n and norm 1
    RatMatrix B = F.O.basis(), H(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) H(a, b) = F.K.trace(F.K.mul(B.row(a), F.involve(B.row(b))));
    auto vecs = short_vectors(H, Rat(long(n)));
    ABVAR_ASSERT(vecs, "root of unity search overflow");
    std::vector<RatVec> mu;
    for (const auto& c : *vecs) {
        RatVec x = F.K.zero();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) x[j] += Rat(c[i]) * B(i, j);
        if (F.K.trace(F.K.mul(x, F.involve(x))) != Rat(long(n)) || F.K.norm(x) != 1) continue;
        mu.push_back(x);
        mu.push_back(F.K.neg(x));
    }
    F.w = long(mu.size());
    for (const auto& z : mu) {
        long ord = 1;
        for (RatVec t = z; t != F.K.one(); t = F.K.mul(t, z)) ++ord;
        if (ord == F.w) {
            F.zeta = z;
            break;
        }
    }
    ABVAR_ASSERT(!F.zeta.empty(), "torsion is not cyclic");
    RatVec t = F.K.one();
    for (long k = 0; k < F.w; ++k) {
        F.zeta_pows.push_back(t);
        t = F.K.mul(t, F.zeta);
    }

    // units of the real subfield, mapped through y -> x + p/x
    RatPoly P = real_weil_polynomial(h, p);
    NumberAlgebra Kp(P);
    Lattice Op = maximal_order_of(Kp);
    RatVec y = F.K.add(F.K.gen(), vb);
    for (const auto& u : real_fundamental_units(Kp, Op)) F.free.push_back(F.K.eval(Kp.to_poly(u), y));

    // unit index: is some zeta^c * prod eps_j a square?
    const std::size_t r = F.free.size();
    bool done = false;
    for (int c = 0; c < 2 && !done; ++c)
        for (unsigned long mask = 1; mask < (1ul << r) && !done; ++mask) {
            RatVec v = c ? F.zeta : F.K.one();
            for (std::size_t j = 0; j < r; ++j)
                if (mask >> j & 1) v = F.K.mul(v, F.free[j]);
            if (auto z = F.square_root(v)) {
                for (std::size_t j = 0; j < r; ++j)
                    if (mask >> j & 1) {
                        F.free[j] = *z;
                        break;
                    }
                done = true;
            }
        }
    return F;
}

}  // namespace detail

struct UnitGroup::Factor {
    detail::CMField F;
    std::size_t torsion_index = 0, free_begin = 0;
    std::vector<std::vector<LD>> free_logs;
};

namespace {

RatVec lift_component(const EtaleAlgebra& L, int i, const RatVec& a) {
    const auto& alg = L.alg();
    RatVec e = L.idempotents()[i];
    RatVec x = alg.mul(alg.from_poly(RatPoly(a)), e);
    return alg.add(x, alg.sub(alg.one(), e));
}

IntMatrix int_hnf(const IntMatrix& rows) { return hnf_basis(rows); }

// Integer left kernel {k : k * M = 0}.
IntMatrix int_left_kernel(const IntMatrix& M) {
    HnfResult h = hnf(M);
    IntMatrix K(0, M.rows());
    for (std::size_t i = 0; i < M.rows(); ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < M.cols() && zero; ++j) zero = h.H(i, j) == 0;
        if (zero) K.append_row(h.U.row(i));
    }
    return K;
}

IntMatrix stack(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix c = a;
    for (std::size_t i = 0; i < b.rows(); ++i) c.append_row(b.row(i));
    return c;
}

std::vector<int> sign_vector(const EtaleAlgebra& L, const RatVec& u) {
    std::vector<int> s;
    const auto& emb = L.embeddings();
    for (std::size_t k = 0; k < emb.size(); ++k) {
        if (emb[k].conj < int(k)) continue;
        RootBox box = emb[k].box;
        int sg = certified_real_sign(L.factors()[emb[k].factor], box, L.component(u, emb[k].factor));
        ABVAR_ASSERT(sg != 0, "unit vanishes at a real place");
        s.push_back(sg < 0 ? 1 : 0);
    }
    return s;
}

}  // namespace

std::shared_ptr<const UnitGroup> UnitGroup::compute(const Etale& L, const Lattice& maximal) {
    auto U = std::make_shared<UnitGroup>();
    U->L_ = L;
    U->O_ = maximal;
    const auto& alg = L->alg();
    const int t = int(L->factors().size());
    std::vector<std::shared_ptr<Factor>> fs;
    for (int i = 0; i < t; ++i) {
        auto f = std::make_shared<Factor>();
        f->F = detail::make_cm_field(L->factors()[i], L->p());
        f->torsion_index = U->gens_.size();
        U->gens_.push_back(lift_component(*L, i, f->F.zeta));
        U->torsion_orders_.push_back(f->F.w);
        fs.push_back(f);
    }
    for (int i = 0; i < t; ++i) {
        fs[i]->free_begin = U->gens_.size();
        for (const auto& u : fs[i]->F.free) {
            U->gens_.push_back(lift_component(*L, i, u));
            fs[i]->free_logs.push_back(fs[i]->F.logs(u));
        }
        U->factors_.push_back(fs[i]);
    }
    const std::size_t m = U->gens_.size();
    for (const auto& g : U->gens_) U->inv_gens_.push_back(*alg.inverse(g));
    U->rel_ = IntMatrix(t, m);
    for (int i = 0; i < t; ++i) U->rel_(i, i) = U->torsion_orders_[i];
    U->conj_ = IntMatrix(m, m);
    for (std::size_t j = 0; j < m; ++j) U->conj_.set_row(j, U->dlog(L->involve(U->gens_[j])));
    return U;
}

RatVec UnitGroup::element(const IntVec& e) const {
    const auto& alg = L_->alg();
    RatVec x = alg.one();
    for (std::size_t j = 0; j < gens_.size(); ++j) {
        Int k = e[j];
        if (j < torsion_orders_.size()) k = mod_floor(k, Int(torsion_orders_[j]));
        if (k == 0) continue;
        const RatVec& b = k > 0 ? gens_[j] : inv_gens_[j];
        x = alg.mul(x, alg.pow(b, Int(abs(k)).get_ui()));
    }
    return x;
}

IntVec UnitGroup::dlog(const RatVec& u) const {
    IntVec e(gens_.size(), Int(0));
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        const Factor& f = *factors_[i];
        const auto& K = f.F.K;
        RatVec ui = K.from_poly(L_->component(u, int(i)));
        const std::size_t r = f.F.free.size();
        if (r > 0) {
            auto a = solve_ld(f.free_logs, f.F.logs(ui));
            for (std::size_t j = 0; j < r; ++j) {
                Int aj = round_ld(a[j]);
                e[f.free_begin + j] = aj;
                if (aj == 0) continue;
                RatVec b = aj > 0 ? *K.inverse(f.F.free[j]) : f.F.free[j];
                ui = K.mul(ui, K.pow(b, Int(abs(aj)).get_ui()));
            }
        }
        long k = 0;
        while (k < f.F.w && f.F.zeta_pows[k] != ui) ++k;
        if (k == f.F.w) fail(ErrorKind::NotAUnit, "element is not a unit of the maximal order");
        e[f.torsion_index] = k;
    }
    return e;
}

std::vector<long double> UnitGroup::log_embedding(const RatVec& u) const {
    std::vector<LD> out;
    for (const auto& emb : L_->embeddings()) {
        auto z = emb.box.center();
        CLD zz(LD(z.re.get_d()), LD(z.im.get_d()));
        out.push_back(std::log(std::abs(eval_complex(L_->component(u, emb.factor), zz))));
    }
    return out;
}

OrderUnits order_units(const UnitGroup& U, const Lattice& T) {
    const auto& L = *U.algebra();
    const auto& alg = L.alg();
    const std::size_t m = U.ngens();
    // stabilizer of T under multiplication by units of O_L (Schreier vectors)
    std::map<Lattice, IntVec> word{{T, IntVec(m, Int(0))}};
    std::deque<Lattice> queue{T};
    IntMatrix stab = U.relations();
    while (!queue.empty()) {
        Lattice X = queue.front();
        queue.pop_front();
        IntVec wx = word.at(X);
        for (std::size_t j = 0; j < m; ++j) {
            Lattice Y = lattice_mul_elem(alg, X, U.gens()[j]);
            IntVec wy = wx;
            wy[j] += 1;
            auto it = word.find(Y);
            if (it == word.end()) {
                if (word.size() > 1000000) fail(ErrorKind::IndexTooLarge, "unit orbit too large");
                word.emplace(Y, wy);
                queue.push_back(Y);
            } else {
                for (std::size_t k = 0; k < m; ++k) wy[k] -= it->second[k];
                stab.append_row(wy);
            }
        }
    }
    OrderUnits R;
    R.units = int_hnf(stab);
    ABVAR_ASSERT(R.units.rows() == m, "unit lattice not of full rank");

    IntMatrix C = U.conjugation(), I = IntMatrix::identity(m);
    IntMatrix K = int_left_kernel(stack(R.units * (C - I), U.relations()));
    IntMatrix real = U.relations();
    for (std::size_t i = 0; i < K.rows(); ++i) {
        IntVec k = K.row(i);
        k.resize(m);
        real.append_row(vec_mul(k, R.units));
    }
    R.real = int_hnf(real);

    IntMatrix S(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        auto s = sign_vector(L, U.element(R.real.row(i)));
        R.real_signs.push_back(s);
    }
    const std::size_t places = R.real_signs.empty() ? 0 : R.real_signs[0].size();
    S = IntMatrix(m, places);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < places; ++j) S(i, j) = R.real_signs[i][j];
    IntMatrix coeff = places ? left_kernel_mod(S, Int(2)) : IntMatrix::identity(m);
    coeff = stack(coeff, IntMatrix::identity(m) + IntMatrix::identity(m));
    R.totpos = int_hnf(int_hnf(coeff) * R.real);

    R.norms = int_hnf(stack(R.units * (I + C), U.relations()));
    return R;
}

Int lattice_group_index(const IntMatrix& A, const IntMatrix& B) {
    Int a = abs(determinant(A)), b = abs(determinant(B));
    ABVAR_ASSERT(a != 0 && b % a == 0, "not a finite-index sublattice");
    return b / a;
}

std::vector<IntVec> coset_representatives(const IntMatrix& A, const IntMatrix& B) {
    const std::size_t m = A.cols();
    RatMatrix X = to_rat(B) * inverse(to_rat(A));
    IntMatrix Xi(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            ABVAR_ASSERT(X(i, j).get_den() == 1, "B is not contained in A");
            Xi(i, j) = X(i, j).get_num();
        }
    SnfResult s = snf(Xi);
    RatMatrix G = inverse(to_rat(s.V)) * to_rat(A);
    std::vector<IntVec> reps{IntVec(m, Int(0))};
    for (std::size_t i = 0; i < m; ++i) {
        Int d = s.D(i, i);
        if (d == 1) continue;
        std::vector<IntVec> next;
        for (const auto& r : reps)
            for (Int a = 0; a < d; ++a) {
                IntVec v = r;
                for (std::size_t k = 0; k < m; ++k) v[k] += a * G(i, k).get_num();
                next.push_back(v);
            }
        reps = std::move(next);
    }
    return reps;
}

std::vector<RatVec> unit_transversal(const UnitGroup& U, const OrderUnits& T) {
    std::vector<RatVec> out;
    for (const auto& e : coset_representatives(T.units, T.norms)) out.push_back(U.element(e));
    return out;
}

std::vector<SignClass> group_GS(const UnitGroup& U, const OrderUnits& T) {
    std::vector<SignClass> out;
    for (const auto& e : coset_representatives(T.real, T.totpos)) {
        RatVec u = U.element(e);
        out.push_back({u, sign_vector(*U.algebra(), u)});
    }
    return out;
}

Int ppav_count_formula(const OrderUnits& T) { return lattice_group_index(T.totpos, T.norms); }
Int ppav_count_formula_real(const OrderUnits& T) { return lattice_group_index(T.real, T.norms); }

Rat balanced_generator_bound(const UnitGroup& U, const OrderUnits& T, const std::vector<Rat>& component_norms) {
    const auto& L = *U.algebra();
    const std::size_t t = U.torsion_orders().size();
    std::vector<std::vector<LD>> logs;
    for (std::size_t i = 0; i < T.units.rows(); ++i) {
        std::size_t piv = 0;
        while (piv < T.units.cols() && T.units(i, piv) == 0) ++piv;
        if (piv < t) continue;
        logs.push_back(U.log_embedding(U.element(T.units.row(i))));
    }
    LD C = 0;
    for (std::size_t k = 0; k < L.embeddings().size(); ++k) {
        LD s = 0;
        for (const auto& l : logs) s += std::fabs(l[k]);
        C = std::max(C, s);
    }
    LD total = 0;
    for (std::size_t i = 0; i < L.factors().size(); ++i) {
        LD ni = LD(L.factors()[i].degree());
        total += ni * std::pow(LD(component_norms[i].get_d()), 2 / ni);
    }
    total = total * std::exp(C) * (1 + 1e-6L) + 1;
    Int b;
    mpz_set_d(b.get_mpz_t(), double(std::ceil(total)));
    return Rat(b);
}

}  // namespace abvar
