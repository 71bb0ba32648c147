#include "abvar/roots.hpp"

#include <algorithm>
#include <cmath>

namespace abvar {

QComplex operator+(const QComplex& a, const QComplex& b) { return {a.re + b.re, a.im + b.im}; }
QComplex operator-(const QComplex& a, const QComplex& b) { return {a.re - b.re, a.im - b.im}; }
QComplex operator*(const QComplex& a, const QComplex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Rat norm2(const QComplex& a) { return a.re * a.re + a.im * a.im; }

QComplex evaluate(const RatPoly& f, const QComplex& z) {
    QComplex r{0, 0};
    for (std::size_t i = f.size(); i-- > 0;) {
        r = r * z;
        r.re += f.coeffs()[i];
    }
    return r;
}

namespace {

struct MC {
    mpf_class re, im;
};

MC mc_make(long double r, long double i, unsigned bits) {
    return {mpf_class(static_cast<double>(r), bits), mpf_class(static_cast<double>(i), bits)};
}
MC mc_add(const MC& a, const MC& b) { return {a.re + b.re, a.im + b.im}; }
MC mc_sub(const MC& a, const MC& b) { return {a.re - b.re, a.im - b.im}; }
MC mc_mul(const MC& a, const MC& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
MC mc_div(const MC& a, const MC& b) {
    mpf_class d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
mpf_class mc_abs2(const MC& a) { return a.re * a.re + a.im * a.im; }

using CLD = std::complex<long double>;

std::vector<CLD> aberth_ld(const RatPoly& f) {
    const int n = f.degree();
    std::vector<long double> c(n + 1);
    for (int i = 0; i <= n; ++i) c[i] = static_cast<long double>(Rat(f.coeffs()[i] / f.lead()).get_d());
    long double R = 0;
    for (int i = 0; i < n; ++i) R = std::max(R, std::pow(std::fabs(c[i]), 1.0L / (n - i)));
    R = std::max(R, 1e-3L);
    std::vector<CLD> z(n);
    for (int k = 0; k < n; ++k) z[k] = std::polar(R, 2 * M_PIl * k / n + 0.4L);
    for (int it = 0; it < 500; ++it) {
        long double maxstep = 0;
        for (int i = 0; i < n; ++i) {
            CLD p = 0, dp = 0;
            for (int k = n; k >= 0; --k) {
                dp = dp * z[i] + p;
                p = p * z[i] + c[k];
            }
            if (p == CLD(0)) continue;
            CLD ratio = p / dp;
            CLD s = 0;
            for (int j = 0; j < n; ++j)
                if (j != i) s += 1.0L / (z[i] - z[j]);
            CLD w = ratio / (1.0L - ratio * s);
            z[i] -= w;
            maxstep = std::max(maxstep, std::abs(w) / (1 + std::abs(z[i])));
        }
        if (maxstep < 1e-17L) break;
    }
    return z;
}

std::vector<MC> aberth_mp(const RatPoly& f, const std::vector<CLD>& start, unsigned bits) {
    const int n = f.degree();
    std::vector<MC> c(n + 1);
    for (int i = 0; i <= n; ++i) {
        mpf_class v(0, bits);
        v = Rat(f.coeffs()[i] / f.lead());
        c[i] = {v, mpf_class(0, bits)};
    }
    std::vector<MC> z(n);
    for (int i = 0; i < n; ++i) z[i] = mc_make(start[i].real(), start[i].imag(), bits);
    mpf_class tol(1, bits);
    mpf_div_2exp(tol.get_mpf_t(), tol.get_mpf_t(), bits - 8);
    mpf_class tol2 = tol * tol;
    for (int it = 0; it < 300; ++it) {
        bool done = true;
        for (int i = 0; i < n; ++i) {
            MC p = {mpf_class(0, bits), mpf_class(0, bits)}, dp = p;
            for (int k = n; k >= 0; --k) {
                dp = mc_add(mc_mul(dp, z[i]), p);
                p = mc_add(mc_mul(p, z[i]), c[k]);
            }
            if (mc_abs2(p) == 0) continue;
            MC ratio = mc_div(p, dp);
            MC s = {mpf_class(0, bits), mpf_class(0, bits)};
            MC one = {mpf_class(1, bits), mpf_class(0, bits)};
            for (int j = 0; j < n; ++j)
                if (j != i) s = mc_add(s, mc_div(one, mc_sub(z[i], z[j])));
            MC w = mc_div(ratio, mc_sub(one, mc_mul(ratio, s)));
            z[i] = mc_sub(z[i], w);
            if (mc_abs2(w) > tol2 * (1 + mc_abs2(z[i]))) done = false;
        }
        if (done) break;
    }
    return z;
}

Rat to_rat(const mpf_class& x) {
    mpq_class q;
    mpq_set_f(q.get_mpq_t(), x.get_mpf_t());
    return q;
}

// Rational upper bound for sqrt(x), x >= 0.
Rat sqrt_upper(const Rat& x) {
    if (x == 0) return 0;
    mpf_class v(0, 128);
    v = x;
    mpf_sqrt(v.get_mpf_t(), v.get_mpf_t());
    Rat r = to_rat(v) * Rat(1000001, 1000000);
    while (r * r < x) r *= 2;
    return r;
}

std::vector<RootBox> try_certify(const RatPoly& f, const std::vector<QComplex>& z, const Rat& width) {
    const std::size_t n = z.size();
    std::vector<Rat> R(n);
    const Rat lc2 = f.lead() * f.lead();
    for (std::size_t i = 0; i < n; ++i) {
        QComplex prod{1, 0};
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) prod = prod * (z[i] - z[j]);
        Rat pn = norm2(prod);
        if (pn == 0) return {};
        Rat r2 = Rat(static_cast<long>(n * n)) * norm2(evaluate(f, z[i])) / (lc2 * pn);
        R[i] = sqrt_upper(r2);
        // keep a strictly positive radius so boxes are never degenerate
        if (R[i] == 0) R[i] = Rat(1, 1) / (Int(1) << 400);
        if (2 * R[i] > width) return {};
    }
    std::vector<RootBox> boxes(n);
    for (std::size_t i = 0; i < n; ++i)
        boxes[i] = {z[i].re - R[i], z[i].re + R[i], z[i].im - R[i], z[i].im + R[i]};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!boxes[i].disjoint(boxes[j])) return {};
            Rat s = R[i] + R[j];
            if (norm2(z[i] - z[j]) <= s * s) return {};
        }
    return boxes;
}

}  // namespace

std::vector<CLD> approximate_roots(const RatPoly& f, unsigned bits) {
    auto z0 = aberth_ld(f);
    auto z = aberth_mp(f, z0, bits);
    std::vector<CLD> out;
    for (auto& v : z) out.emplace_back(v.re.get_d(), v.im.get_d());
    return out;
}

std::vector<RootBox> isolate_complex_roots(const RatPoly& f, const Rat& width) {
    ABVAR_ASSERT(f.degree() >= 1, "isolate_complex_roots of a constant");
    if (f.degree() == 1) {
        Rat r = -f.coeffs()[0] / f.coeffs()[1];
        return {RootBox{r, r, 0, 0}};
    }
    auto z0 = aberth_ld(f);
    for (unsigned bits = 128; bits <= 8192; bits *= 2) {
        auto z = aberth_mp(f, z0, bits);
        std::vector<QComplex> q;
        for (auto& v : z) {
            // drop trailing mantissa bits so the exact certificate stays small
            mpf_class re(v.re, bits - 16), im(v.im, bits - 16);
            q.push_back({to_rat(re), to_rat(im)});
        }
        auto boxes = try_certify(f, q, width);
        if (!boxes.empty()) {
            std::sort(boxes.begin(), boxes.end(), [](const RootBox& a, const RootBox& b) {
                auto ca = a.center(), cb = b.center();
                if (ca.re != cb.re) return ca.re < cb.re;
                return ca.im < cb.im;
            });
            return boxes;
        }
        for (std::size_t i = 0; i < z.size(); ++i) z0[i] = CLD(z[i].re.get_d(), z[i].im.get_d());
    }
    fail(ErrorKind::PrecisionExhausted, "complex root isolation did not certify for " + f.str());
}

std::vector<RootBox> refine_root_boxes(const RatPoly& f, const std::vector<RootBox>& boxes, const Rat& width) {
    if (f.degree() == 1) return boxes;
    Rat w = width;
    for (int attempt = 0; attempt < 8; ++attempt, w /= 16) {
        auto fresh = isolate_complex_roots(f, w);
        std::vector<RootBox> out;
        for (const auto& old : boxes) {
            bool found = false;
            for (const auto& nb : fresh)
                if (old.contains(nb)) {
                    out.push_back(nb);
                    found = true;
                    break;
                }
            if (!found) break;
        }
        if (out.size() == boxes.size()) return out;
    }
    fail(ErrorKind::PrecisionExhausted, "root box refinement failed");
}

namespace {

struct Iv {
    Rat lo, hi;
};
Iv iv_add(const Iv& a, const Iv& b) { return {a.lo + b.lo, a.hi + b.hi}; }
Iv iv_sub(const Iv& a, const Iv& b) { return {a.lo - b.hi, a.hi - b.lo}; }
Iv iv_mul(const Iv& a, const Iv& b) {
    Rat p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

}  // namespace

RootBox evaluate_box(const RatPoly& g, const RootBox& box) {
    Iv zr{box.re_lo, box.re_hi}, zi{box.im_lo, box.im_hi};
    Iv ar{0, 0}, ai{0, 0};
    for (std::size_t k = g.size(); k-- > 0;) {
        Iv nr = iv_sub(iv_mul(ar, zr), iv_mul(ai, zi));
        Iv ni = iv_add(iv_mul(ar, zi), iv_mul(ai, zr));
        nr.lo += g.coeffs()[k];
        nr.hi += g.coeffs()[k];
        ar = nr;
        ai = ni;
    }
    return {ar.lo, ar.hi, ai.lo, ai.hi};
}

namespace {

int certified_sign(const RatPoly& f, RootBox& box, const RatPoly& g, bool imag) {
    const Rat give_up = Rat(1) / (Int(1) << 300);
    for (;;) {
        RootBox v = evaluate_box(g, box);
        const Rat& lo = imag ? v.im_lo : v.re_lo;
        const Rat& hi = imag ? v.im_hi : v.re_hi;
        if (lo > 0) return 1;
        if (hi < 0) return -1;
        if (box.width() < give_up) return 0;
        box = refine_root_boxes(f, {box}, box.width() / 1024)[0];
    }
}

}  // namespace

int certified_imag_sign(const RatPoly& f, RootBox& box, const RatPoly& g) {
    return certified_sign(f, box, g, true);
}

int certified_real_sign(const RatPoly& f, RootBox& box, const RatPoly& g) {
    return certified_sign(f, box, g, false);
}

}  // namespace abvar
