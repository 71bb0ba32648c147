#include "abvar/poly.hpp"

#include "abvar/factor.hpp"

#include <sstream>

namespace abvar {

Rat RatPoly::operator()(const Rat& x) const {
    Rat r = 0;
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
}

RatPoly operator+(const RatPoly& a, const RatPoly& b) {
    std::vector<Rat> c(std::max(a.size(), b.size()), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] += b.c_[i];
    return RatPoly(std::move(c));
}

RatPoly operator-(const RatPoly& a) {
    std::vector<Rat> c = a.c_;
    for (auto& x : c) x = -x;
    return RatPoly(std::move(c));
}

RatPoly operator-(const RatPoly& a, const RatPoly& b) { return a + (-b); }

RatPoly operator*(const RatPoly& a, const RatPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rat> c(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return RatPoly(std::move(c));
}

RatPoly operator*(const Rat& s, const RatPoly& a) {
    std::vector<Rat> c = a.c_;
    for (auto& x : c) x *= s;
    return RatPoly(std::move(c));
}

std::string RatPoly::str(const char* var) const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
        const Rat& a = c_[i];
        if (a == 0) continue;
        Rat m = abs(a);
        if (first) {
            if (a < 0) os << "-";
        } else {
            os << (a < 0 ? " - " : " + ");
        }
        first = false;
        if (i == 0 || m != 1) os << m;
        if (i > 0) {
            if (m != 1) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
    ABVAR_ASSERT(!b.is_zero(), "polynomial division by zero");
    if (a.degree() < b.degree()) return {RatPoly(), a};
    std::vector<Rat> r = a.coeffs();
    const int db = b.degree();
    std::vector<Rat> q(a.degree() - db + 1, Rat(0));
    Rat inv = 1 / b.lead();
    for (int k = a.degree() - db; k >= 0; --k) {
        Rat t = r[k + db] * inv;
        q[k] = t;
        if (t == 0) continue;
        for (int j = 0; j <= db; ++j) r[k + j] -= t * b.coeffs()[j];
    }
    r.resize(db);
    return {RatPoly(std::move(q)), RatPoly(std::move(r))};
}

RatPoly operator/(const RatPoly& a, const RatPoly& b) { return divmod(a, b).first; }
RatPoly operator%(const RatPoly& a, const RatPoly& b) { return divmod(a, b).second; }

RatPoly monic(const RatPoly& a) {
    if (a.is_zero()) return a;
    return Rat(1 / a.lead()) * a;
}

RatPoly gcd(const RatPoly& a, const RatPoly& b) {
    RatPoly x = a, y = b;
    while (!y.is_zero()) {
        RatPoly r = x % y;
        x = std::move(y);
        y = monic(r);
    }
    return monic(x);
}

void xgcd(const RatPoly& a, const RatPoly& b, RatPoly& g, RatPoly& s, RatPoly& t) {
    RatPoly r0 = a, r1 = b, s0 = RatPoly::constant(1), s1, t0, t1 = RatPoly::constant(1);
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        RatPoly s2 = s0 - q * s1, t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.is_zero()) {
        g = s = t = RatPoly();
        return;
    }
    Rat inv = 1 / r0.lead();
    g = inv * r0;
    s = inv * s0;
    t = inv * t0;
}

RatPoly invmod(const RatPoly& a, const RatPoly& m) {
    RatPoly g, s, t;
    xgcd(a % m, m, g, s, t);
    if (g.degree() != 0) fail(ErrorKind::Internal, "element is not invertible modulo " + m.str());
    return s % m;
}

RatPoly mulmod(const RatPoly& a, const RatPoly& b, const RatPoly& m) { return (a * b) % m; }

RatPoly powmod(RatPoly a, unsigned long e, const RatPoly& m) {
    RatPoly r = RatPoly::constant(1) % m;
    a = a % m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        e >>= 1;
        if (e) a = mulmod(a, a, m);
    }
    return r;
}

RatPoly derivative(const RatPoly& a) {
    if (a.degree() <= 0) return {};
    std::vector<Rat> c(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) c[i - 1] = a.coeffs()[i] * static_cast<long>(i);
    return RatPoly(std::move(c));
}

RatPoly compose(const RatPoly& a, const RatPoly& b) {
    RatPoly r;
    for (std::size_t i = a.size(); i-- > 0;) r = r * b + RatPoly::constant(a.coeffs()[i]);
    return r;
}

RatPoly compose_mod(const RatPoly& a, const RatPoly& b, const RatPoly& m) {
    RatPoly r;
    RatPoly bm = b % m;
    for (std::size_t i = a.size(); i-- > 0;) r = (r * bm + RatPoly::constant(a.coeffs()[i])) % m;
    return r;
}

bool is_squarefree(const RatPoly& a) {
    if (a.degree() <= 0) return true;
    for (std::uint64_t p : {1000003ULL, 1000033ULL, 1000037ULL, 1000039ULL})
        if (squarefree_mod_p(a, p)) return true;
    return gcd(a, derivative(a)).degree() == 0;
}

std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const RatPoly& f) {
    // Yun's algorithm
    std::vector<std::pair<RatPoly, int>> out;
    if (f.degree() <= 0) return out;
    RatPoly a = monic(f);
    if (is_squarefree(a)) return {{a, 1}};
    RatPoly d = derivative(a);
    RatPoly b = gcd(a, d);
    RatPoly c = a / b, w = d / b;
    RatPoly y = w - derivative(c);
    for (int i = 1; c.degree() > 0; ++i) {
        RatPoly z = gcd(c, y);
        if (z.degree() > 0) out.emplace_back(z, i);
        c = c / z;
        y = (y / z) - derivative(c);
    }
    return out;
}

std::vector<Int> primitive_part(const RatPoly& a) {
    std::vector<Int> out;
    if (a.is_zero()) return out;
    Int den = 1;
    for (const auto& x : a.coeffs()) den = int_lcm(den, x.get_den());
    Int g = 0;
    for (const auto& x : a.coeffs()) {
        Int v = x.get_num() * (den / x.get_den());
        out.push_back(v);
        g = int_gcd(g, v);
    }
    if (a.lead() < 0) g = -g;
    for (auto& v : out) v /= g;
    return out;
}

RatPoly from_ints(const std::vector<Int>& c) {
    std::vector<Rat> r(c.begin(), c.end());
    return RatPoly(std::move(r));
}

Rat resultant(const RatPoly& a, const RatPoly& b) {
    if (a.is_zero() || b.is_zero()) return 0;
    int m = a.degree(), n = b.degree();
    if (n == 0) {
        Rat r = 1;
        for (int i = 0; i < m; ++i) r *= b.lead();
        return r;
    }
    if (m == 0) {
        Rat r = 1;
        for (int i = 0; i < n; ++i) r *= a.lead();
        return r;
    }
    RatPoly r = a % b;
    if (r.is_zero()) return 0;
    Rat f = 1;
    for (int i = 0; i < m - r.degree(); ++i) f *= b.lead();
    if ((m * n) % 2) f = -f;
    return f * resultant(b, r);
}

Rat discriminant(const RatPoly& a) {
    int n = a.degree();
    Rat r = resultant(a, derivative(a)) / a.lead();
    if ((n * (n - 1) / 2) % 2) r = -r;
    return r;
}

RatPoly poly_from_roots(const std::vector<Rat>& r) {
    RatPoly p = RatPoly::constant(1);
    for (const auto& x : r) p = p * RatPoly(std::vector<Rat>{-x, Rat(1)});
    return p;
}

std::vector<RatPoly> sturm_sequence(const RatPoly& f) {
    std::vector<RatPoly> s{f, derivative(f)};
    while (!s.back().is_zero()) {
        RatPoly r = -(s[s.size() - 2] % s.back());
        if (r.is_zero()) break;
        s.push_back(r);
    }
    if (s.back().is_zero()) s.pop_back();
    return s;
}

namespace {

int sign_changes(const std::vector<int>& signs) {
    int v = 0, last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++v;
        last = s;
    }
    return v;
}

int variations_at(const std::vector<RatPoly>& seq, const Rat& x) {
    std::vector<int> s;
    for (const auto& p : seq) s.push_back(sgn(p(x)));
    return sign_changes(s);
}

int variations_neg_inf(const std::vector<RatPoly>& seq) {
    std::vector<int> s;
    for (const auto& p : seq) s.push_back(p.degree() % 2 ? -sgn(p.lead()) : sgn(p.lead()));
    return sign_changes(s);
}

}  // namespace

int sturm_count(const std::vector<RatPoly>& seq, const Rat& a, const Rat& b) {
    return variations_at(seq, a) - variations_at(seq, b);
}

int sturm_count_le(const std::vector<RatPoly>& seq, const Rat& b) {
    return variations_neg_inf(seq) - variations_at(seq, b);
}

int count_real_roots(const RatPoly& f) {
    if (f.degree() <= 0) return 0;
    auto seq = sturm_sequence(f);
    std::vector<int> s;
    for (const auto& p : seq) s.push_back(sgn(p.lead()));
    return variations_neg_inf(seq) - sign_changes(s);
}

Rat root_bound(const RatPoly& f) {
    // Cauchy bound 1 + max |a_i / a_n|
    Rat m = 0;
    for (int i = 0; i < f.degree(); ++i) {
        Rat t = abs(f.coeffs()[i] / f.lead());
        if (t > m) m = t;
    }
    return m + 1;
}

std::vector<RatInterval> isolate_real_roots(const RatPoly& f) {
    std::vector<RatInterval> out;
    if (f.degree() <= 0) return out;
    auto seq = sturm_sequence(f);
    Rat B = root_bound(f);
    struct Job {
        Rat a, b;
        int n;
    };
    std::vector<Job> stack{{-B, B, sturm_count(seq, -B, B)}};
    while (!stack.empty()) {
        Job j = stack.back();
        stack.pop_back();
        if (j.n == 0) continue;
        if (j.n == 1 && f(j.b) == 0) {
            out.push_back({j.b, j.b});
            continue;
        }
        if (j.n == 1 && f(j.a) != 0) {
            out.push_back({j.a, j.b});
            continue;
        }
        Rat mid = (j.a + j.b) / 2;
        int left = sturm_count(seq, j.a, mid);
        stack.push_back({mid, j.b, j.n - left});
        stack.push_back({j.a, mid, left});
    }
    std::sort(out.begin(), out.end(), [](const RatInterval& x, const RatInterval& y) { return x.lo < y.lo; });
    // neighbours may share a (non-root) endpoint; shrink until strictly separated
    for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        while (out[i].hi >= out[i + 1].lo) {
            RatInterval& w = (out[i].hi - out[i].lo >= out[i + 1].hi - out[i + 1].lo) ? out[i] : out[i + 1];
            w = refine_real_root(f, w, (w.hi - w.lo) / 2);
        }
    }
    return out;
}

RatInterval refine_real_root(const RatPoly& f, RatInterval iv, const Rat& width) {
    if (iv.lo == iv.hi) return iv;
    int slo = sgn(f(iv.lo));
    ABVAR_ASSERT(slo != 0 && slo != sgn(f(iv.hi)), "interval does not bracket a simple root");
    while (iv.hi - iv.lo > width) {
        Rat mid = (iv.lo + iv.hi) / 2;
        int s = sgn(f(mid));
        if (s == 0) return {mid, mid};
        if (s == slo) iv.lo = mid;
        else iv.hi = mid;
    }
    return iv;
}

}  // namespace abvar
