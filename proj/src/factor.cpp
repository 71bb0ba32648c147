#include "abvar/factor.hpp"

#include <algorithm>
#include <random>

namespace abvar {

namespace {

using u64 = std::uint64_t;

void mp_trim(ModPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

u64 mp_inv(u64 a, u64 p) {
    // Fermat
    u64 r = 1, e = p - 2;
    a %= p;
    while (e) {
        if (e & 1) r = r * a % p;
        a = a * a % p;
        e >>= 1;
    }
    return r;
}

ModPoly mp_sub(const ModPoly& a, const ModPoly& b, u64 p) {
    ModPoly c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] = (c[i] + p - b[i]) % p;
    mp_trim(c);
    return c;
}

ModPoly mp_mul(const ModPoly& a, const ModPoly& b, u64 p) {
    if (a.empty() || b.empty()) return {};
    ModPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    }
    mp_trim(c);
    return c;
}

void mp_divmod(const ModPoly& a, const ModPoly& b, u64 p, ModPoly* q, ModPoly* r) {
    ModPoly rem = a;
    const std::size_t db = b.size() - 1;
    ModPoly quo(a.size() >= b.size() ? a.size() - db : 0, 0);
    u64 inv = mp_inv(b.back(), p);
    for (std::size_t k = quo.size(); k-- > 0;) {
        u64 t = rem[k + db] * inv % p;
        quo[k] = t;
        if (!t) continue;
        for (std::size_t j = 0; j <= db; ++j) rem[k + j] = (rem[k + j] + p - t * b[j] % p) % p;
    }
    rem.resize(std::min(rem.size(), db));
    mp_trim(rem);
    mp_trim(quo);
    if (q) *q = std::move(quo);
    if (r) *r = std::move(rem);
}

ModPoly mp_mod(const ModPoly& a, const ModPoly& b, u64 p) {
    ModPoly r;
    mp_divmod(a, b, p, nullptr, &r);
    return r;
}

ModPoly mp_monic(ModPoly a, u64 p) {
    if (a.empty()) return a;
    u64 inv = mp_inv(a.back(), p);
    for (auto& x : a) x = x * inv % p;
    return a;
}

ModPoly mp_gcd(ModPoly a, ModPoly b, u64 p) {
    while (!b.empty()) {
        ModPoly r = mp_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return mp_monic(a, p);
}

ModPoly mp_powmod(ModPoly a, const Int& e, const ModPoly& m, u64 p) {
    ModPoly r{1};
    r = mp_mod(r, m, p);
    a = mp_mod(a, m, p);
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
        r = mp_mod(mp_mul(r, r, p), m, p);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mp_mod(mp_mul(r, a, p), m, p);
    }
    return r;
}

ModPoly mp_deriv(const ModPoly& a, u64 p) {
    if (a.size() <= 1) return {};
    ModPoly d(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = a[i] * (i % p) % p;
    mp_trim(d);
    return d;
}

void mp_edf(const ModPoly& g, int d, u64 p, std::mt19937_64& rng, std::vector<ModPoly>& out) {
    if (static_cast<int>(g.size()) - 1 == d) {
        out.push_back(g);
        return;
    }
    Int e = (int_pow(Int(static_cast<unsigned long>(p)), d) - 1) / 2;
    std::uniform_int_distribution<u64> coef(0, p - 1);
    for (;;) {
        ModPoly a(g.size() - 1);
        for (auto& x : a) x = coef(rng);
        mp_trim(a);
        if (a.size() <= 1) continue;
        ModPoly b = mp_powmod(a, e, g, p);
        b = mp_sub(b, ModPoly{1}, p);
        ModPoly c = mp_gcd(g, b, p);
        if (c.size() > 1 && c.size() < g.size()) {
            ModPoly q;
            mp_divmod(g, c, p, &q, nullptr);
            mp_edf(c, d, p, rng, out);
            mp_edf(mp_monic(q, p), d, p, rng, out);
            return;
        }
    }
}

// ---- polynomials over Z / m with Int coefficients ----

using ZPoly = std::vector<Int>;

void z_trim(ZPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

ZPoly z_mod(ZPoly a, const Int& m) {
    for (auto& x : a) x = mod_floor(x, m);
    z_trim(a);
    return a;
}

ZPoly z_add(const ZPoly& a, const ZPoly& b) {
    ZPoly c(std::max(a.size(), b.size()), Int(0));
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
    z_trim(c);
    return c;
}

ZPoly z_sub(const ZPoly& a, const ZPoly& b) {
    ZPoly c(std::max(a.size(), b.size()), Int(0));
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] -= b[i];
    z_trim(c);
    return c;
}

ZPoly z_mul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly c(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    }
    z_trim(c);
    return c;
}

// Division by a monic polynomial modulo m.
void z_divmod_monic(const ZPoly& a, const ZPoly& b, const Int& m, ZPoly* q, ZPoly* r) {
    ZPoly rem = z_mod(a, m);
    const std::size_t db = b.size() - 1;
    ZPoly quo(rem.size() >= b.size() ? rem.size() - db : 0, Int(0));
    for (std::size_t k = quo.size(); k-- > 0;) {
        Int t = mod_floor(rem[k + db], m);
        quo[k] = t;
        if (t == 0) continue;
        for (std::size_t j = 0; j <= db; ++j) rem[k + j] = mod_floor(rem[k + j] - t * b[j], m);
    }
    rem.resize(std::min(rem.size(), db));
    z_trim(rem);
    z_trim(quo);
    if (q) *q = std::move(quo);
    if (r) *r = std::move(rem);
}

ZPoly to_z(const ModPoly& a) {
    ZPoly z;
    for (u64 x : a) z.emplace_back(static_cast<unsigned long>(x));
    z_trim(z);
    return z;
}

// Extended gcd over F_p: s*a + t*b = 1 (a, b coprime).
void mp_xgcd(const ModPoly& a, const ModPoly& b, u64 p, ModPoly& s, ModPoly& t) {
    ModPoly r0 = a, r1 = b, s0{1}, s1, t0, t1{1};
    while (!r1.empty()) {
        ModPoly q, r;
        mp_divmod(r0, r1, p, &q, &r);
        ModPoly s2 = mp_sub(s0, mp_mul(q, s1, p), p), t2 = mp_sub(t0, mp_mul(q, t1, p), p);
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    ABVAR_ASSERT(r0.size() == 1, "Hensel factors not coprime");
    u64 inv = mp_inv(r0[0], p);
    s = s0;
    t = t0;
    for (auto& x : s) x = x * inv % p;
    for (auto& x : t) x = x * inv % p;
}

// Lift f = g*h (g, h monic, f monic) from mod p to mod p^k with p^k >= target.
void hensel_two(const ZPoly& f, ZPoly& g, ZPoly& h, u64 p, const Int& target) {
    ModPoly gm, hm, sm, tm;
    for (const auto& x : g) gm.push_back(mod_floor(x, Int(static_cast<unsigned long>(p))).get_ui());
    for (const auto& x : h) hm.push_back(mod_floor(x, Int(static_cast<unsigned long>(p))).get_ui());
    mp_xgcd(gm, hm, p, sm, tm);
    ZPoly s = to_z(sm), t = to_z(tm);
    Int m = static_cast<unsigned long>(p);
    while (m < target) {
        Int m2 = m * m;
        ZPoly e = z_mod(z_sub(f, z_mul(g, h)), m2);
        ZPoly q, r;
        z_divmod_monic(z_mul(s, e), h, m2, &q, &r);
        ZPoly gs = z_mod(z_add(z_add(g, z_mul(t, e)), z_mul(q, g)), m2);
        ZPoly hs = z_mod(z_add(h, r), m2);
        ZPoly b = z_mod(z_sub(z_add(z_mul(s, gs), z_mul(t, hs)), ZPoly{Int(1)}), m2);
        ZPoly c, d;
        z_divmod_monic(z_mul(s, b), hs, m2, &c, &d);
        s = z_mod(z_sub(s, d), m2);
        t = z_mod(z_sub(z_sub(t, z_mul(t, b)), z_mul(c, gs)), m2);
        g = std::move(gs);
        h = std::move(hs);
        m = m2;
    }
    g = z_mod(g, target);
    h = z_mod(h, target);
}

ZPoly symmetric(ZPoly a, const Int& m) {
    Int half = m / 2;
    for (auto& x : a) {
        x = mod_floor(x, m);
        if (x > half) x -= m;
    }
    z_trim(a);
    return a;
}

// Exact division over Z; returns false when b does not divide a.
bool z_exact_div(const ZPoly& a, const ZPoly& b, ZPoly& q) {
    ZPoly rem = a;
    const std::size_t db = b.size() - 1;
    if (rem.size() < b.size()) return rem.empty();
    q.assign(rem.size() - db, Int(0));
    for (std::size_t k = q.size(); k-- > 0;) {
        if (!mpz_divisible_p(rem[k + db].get_mpz_t(), b.back().get_mpz_t())) return false;
        Int t = rem[k + db] / b.back();
        q[k] = t;
        if (t == 0) continue;
        for (std::size_t j = 0; j <= db; ++j) rem[k + j] -= t * b[j];
    }
    for (std::size_t i = 0; i < db && i < rem.size(); ++i)
        if (rem[i] != 0) return false;
    return true;
}

ZPoly z_primitive(ZPoly a) {
    Int g = 0;
    for (const auto& x : a) g = int_gcd(g, x);
    if (a.back() < 0) g = -g;
    for (auto& x : a) x /= g;
    return a;
}

// Irreducible factors of a primitive squarefree integer polynomial.
std::vector<ZPoly> zassenhaus(const ZPoly& f) {
    const int n = static_cast<int>(f.size()) - 1;
    if (n <= 1) return {f};
    const Int lc = f.back();
    // choose a prime with few modular factors
    u64 best_p = 0;
    std::vector<ModPoly> best;
    std::vector<bool> possible(n + 1, true);
    int tried = 0;
    for (u64 p = 3; tried < 6 && p < 100000; p += 2) {
        if (!is_prime(Int(static_cast<unsigned long>(p)))) continue;
        if (mpz_divisible_ui_p(lc.get_mpz_t(), p)) continue;
        ModPoly fm = modp_reduce(f, p);
        if (mp_gcd(fm, mp_deriv(fm, p), p).size() != 1) continue;
        ++tried;
        auto facs = modp_factor_squarefree(mp_monic(fm, p), p);
        // subset-sum of degrees restricts possible true factor degrees
        std::vector<bool> reach(n + 1, false);
        reach[0] = true;
        for (const auto& g : facs) {
            int d = static_cast<int>(g.size()) - 1;
            for (int s = n; s >= d; --s)
                if (reach[s - d]) reach[s] = true;
        }
        for (int s = 0; s <= n; ++s) possible[s] = possible[s] && reach[s];
        if (best.empty() || facs.size() < best.size()) {
            best = facs;
            best_p = p;
        }
        bool irreducible = true;
        for (int s = 1; s < n; ++s)
            if (possible[s]) irreducible = false;
        if (irreducible) return {f};
    }
    const u64 p = best_p;
    // Mignotte-style bound on factor coefficients
    Int norm2 = 0;
    for (const auto& x : f) norm2 += x * x;
    Int nrm;
    mpz_sqrt(nrm.get_mpz_t(), norm2.get_mpz_t());
    nrm += 1;
    Int bound = 2 * abs(lc) * (Int(1) << n) * nrm + 1;
    Int target = static_cast<unsigned long>(p);
    while (target < bound) target *= static_cast<unsigned long>(p);
    // monic version of f mod target
    Int lcinv;
    mpz_invert(lcinv.get_mpz_t(), lc.get_mpz_t(), target.get_mpz_t());
    ZPoly fmon;
    for (const auto& x : f) fmon.push_back(mod_floor(x * lcinv, target));
    std::vector<ZPoly> lifted;
    ZPoly F = fmon;
    for (std::size_t i = 0; i + 1 < best.size(); ++i) {
        ModPoly rest{1};
        for (std::size_t j = i + 1; j < best.size(); ++j) rest = mp_mul(rest, best[j], p);
        ZPoly g = to_z(best[i]), h = to_z(rest);
        hensel_two(F, g, h, p, target);
        lifted.push_back(g);
        F = h;
    }
    lifted.push_back(F);
    // recombination
    std::vector<ZPoly> result;
    ZPoly cur = f;
    std::vector<ZPoly> pool = lifted;
    std::size_t k = 1;
    while (2 * k <= pool.size()) {
        bool found = false;
        std::vector<std::size_t> idx(k);
        for (std::size_t i = 0; i < k; ++i) idx[i] = i;
        for (;;) {
            int deg = 0;
            for (auto i : idx) deg += static_cast<int>(pool[i].size()) - 1;
            if (possible[deg]) {
                ZPoly g{cur.back()};
                for (auto i : idx) g = z_mod(z_mul(g, pool[i]), target);
                g = z_primitive(symmetric(g, target));
                ZPoly q;
                if (z_exact_div(cur, g, q)) {
                    result.push_back(g);
                    cur = q;
                    std::vector<ZPoly> np;
                    for (std::size_t i = 0; i < pool.size(); ++i)
                        if (std::find(idx.begin(), idx.end(), i) == idx.end()) np.push_back(pool[i]);
                    pool = std::move(np);
                    found = true;
                    break;
                }
            }
            // next combination
            std::size_t i = k;
            while (i > 0 && idx[i - 1] == pool.size() - k + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!found) ++k;
    }
    if (cur.size() > 1) result.push_back(z_primitive(cur));
    return result;
}

}  // namespace

ModPoly modp_reduce(const std::vector<Int>& f, std::uint64_t p) {
    ModPoly m;
    Int P = static_cast<unsigned long>(p);
    for (const auto& x : f) m.push_back(mod_floor(x, P).get_ui());
    mp_trim(m);
    return m;
}

std::vector<ModPoly> modp_factor_squarefree(const ModPoly& fin, std::uint64_t p) {
    ABVAR_ASSERT(p % 2 == 1, "odd prime required");
    std::vector<ModPoly> out;
    ModPoly f = mp_monic(fin, p);
    std::mt19937_64 rng(0x5eed + p);
    ModPoly x{0, 1};
    ModPoly h = mp_mod(x, f, p);
    Int P = static_cast<unsigned long>(p);
    for (int d = 1; f.size() > 1; ++d) {
        if (2 * d > static_cast<int>(f.size()) - 1) {
            out.push_back(f);
            break;
        }
        h = mp_powmod(h, P, f, p);
        ModPoly g = mp_gcd(f, mp_sub(h, x, p), p);
        if (g.size() > 1) {
            mp_edf(g, d, p, rng, out);
            ModPoly q;
            mp_divmod(f, g, p, &q, nullptr);
            f = mp_monic(q, p);
            h = mp_mod(h, f, p);
        }
    }
    std::sort(out.begin(), out.end(), [](const ModPoly& a, const ModPoly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

bool squarefree_mod_p(const RatPoly& f, std::uint64_t p) {
    auto z = primitive_part(f);
    if (mpz_divisible_ui_p(z.back().get_mpz_t(), p)) return false;
    ModPoly fm = modp_reduce(z, p);
    return mp_gcd(fm, mp_deriv(fm, p), p).size() == 1;
}

std::vector<int> modp_factor_degrees(const RatPoly& f, std::uint64_t p) {
    auto z = primitive_part(f);
    if (mpz_divisible_ui_p(z.back().get_mpz_t(), p)) return {};
    ModPoly fm = modp_reduce(z, p);
    if (mp_gcd(fm, mp_deriv(fm, p), p).size() != 1) return {};
    std::vector<int> d;
    for (const auto& g : modp_factor_squarefree(fm, p)) d.push_back(static_cast<int>(g.size()) - 1);
    return d;
}

std::vector<std::pair<RatPoly, int>> factor_q(const RatPoly& f) {
    ABVAR_ASSERT(!f.is_zero(), "factor_q of zero");
    std::vector<std::pair<RatPoly, int>> out;
    for (const auto& [s, mult] : squarefree_decomposition(f)) {
        auto z = primitive_part(s);
        // pull out factors of x separately
        std::size_t k = 0;
        while (k < z.size() && z[k] == 0) ++k;
        if (k > 0) {
            out.emplace_back(RatPoly::x(), mult * static_cast<int>(k));
            z.erase(z.begin(), z.begin() + k);
        }
        if (z.size() <= 1) continue;
        for (const auto& g : zassenhaus(z)) out.emplace_back(monic(from_ints(g)), mult);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        return a.first.coeffs() < b.first.coeffs();
    });
    return out;
}

bool is_irreducible(const RatPoly& f) {
    if (f.degree() <= 0) return false;
    auto fac = factor_q(f);
    return fac.size() == 1 && fac[0].second == 1;
}

}  // namespace abvar
