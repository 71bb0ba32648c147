#pragma once

#include <complex>
#include <vector>

#include "abvar/poly.hpp"

namespace abvar {

/// Exact complex number with rational parts.
struct QComplex {
    Rat re, im;
};

QComplex operator+(const QComplex& a, const QComplex& b);
QComplex operator-(const QComplex& a, const QComplex& b);
QComplex operator*(const QComplex& a, const QComplex& b);
Rat norm2(const QComplex& a);
/// f(z) exactly.
QComplex evaluate(const RatPoly& f, const QComplex& z);

/// Axis-parallel closed box with rational corners.
struct RootBox {
    Rat re_lo, re_hi, im_lo, im_hi;
    QComplex center() const { return {(re_lo + re_hi) / 2, (im_lo + im_hi) / 2}; }
    Rat width() const { return std::max(Rat(re_hi - re_lo), Rat(im_hi - im_lo)); }
    std::complex<double> approx() const {
        auto c = center();
        return {c.re.get_d(), c.im.get_d()};
    }
    bool contains(const RootBox& o) const {
        return re_lo <= o.re_lo && o.re_hi <= re_hi && im_lo <= o.im_lo && o.im_hi <= im_hi;
    }
    bool disjoint(const RootBox& o) const {
        return re_hi < o.re_lo || o.re_hi < re_lo || im_hi < o.im_lo || o.im_hi < im_lo;
    }
};

/// Certified isolation of all complex roots of a squarefree f: deg(f)
/// pairwise disjoint boxes of width <= `width`, each containing exactly one
/// root (Weierstrass inclusion disks checked in exact arithmetic). Boxes are
/// ordered by (real center, imaginary center).
std::vector<RootBox> isolate_complex_roots(const RatPoly& f, const Rat& width);

/// Shrink each box to width <= `width` while keeping it inside the old box.
std::vector<RootBox> refine_root_boxes(const RatPoly& f, const std::vector<RootBox>& boxes, const Rat& width);

/// Rectangle enclosing {g(z) : z in box}, by rational interval Horner.
RootBox evaluate_box(const RatPoly& g, const RootBox& box);

/// Sign of Im(g(root)) certified by refining the box of a root of f;
/// returns 0 only when g(root) is real to within `give_up` width.
int certified_imag_sign(const RatPoly& f, RootBox& box, const RatPoly& g);
/// Sign of Re(g(root)), same conventions.
int certified_real_sign(const RatPoly& f, RootBox& box, const RatPoly& g);

/// Floating approximations (long double) of all roots, high-precision polish.
std::vector<std::complex<long double>> approximate_roots(const RatPoly& f, unsigned bits = 256);

}  // namespace abvar
