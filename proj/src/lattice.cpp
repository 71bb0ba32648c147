#include "abvar/lattice.hpp"

#include <algorithm>

namespace abvar {

namespace {

Lattice normalize(IntMatrix h, Int den) {
    ABVAR_ASSERT(h.rows() == h.cols(), "lattice is not of full rank");
    Int g = den;
    for (const auto& x : h.data()) g = int_gcd(g, x);
    if (g != 1) {
        for (std::size_t i = 0; i < h.rows(); ++i)
            for (std::size_t j = 0; j < h.cols(); ++j) h(i, j) /= g;
        den /= g;
    }
    return Lattice{den, std::move(h)};
}

Int common_den(const RatMatrix& m) {
    Int d = 1;
    for (const auto& x : m.data()) d = int_lcm(d, x.get_den());
    return d;
}

IntMatrix scale_to_int(const RatMatrix& m, const Int& d) {
    IntMatrix r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            Rat v = m(i, j) * d;
            ABVAR_ASSERT(v.get_den() == 1, "scale_to_int");
            r(i, j) = v.get_num();
        }
    return r;
}

Int diag_product(const IntMatrix& h) {
    Int d = 1;
    for (std::size_t i = 0; i < h.rows(); ++i) d *= h(i, i);
    return d;
}

// Inverse of an upper-triangular nonsingular integer matrix.
RatMatrix upper_inverse(const IntMatrix& u) {
    const std::size_t n = u.rows();
    RatMatrix inv(n, n);
    for (std::size_t j = n; j-- > 0;) {
        inv(j, j) = Rat(1) / Rat(u(j, j));
        for (std::size_t i = j; i-- > 0;) {
            Rat s = 0;
            for (std::size_t k = i + 1; k <= j; ++k) s += Rat(u(i, k)) * inv(k, j);
            inv(i, j) = -s / Rat(u(i, i));
        }
    }
    return inv;
}

}  // namespace

bool operator<(const Lattice& a, const Lattice& b) {
    if (a.den != b.den) return a.den < b.den;
    return std::lexicographical_compare(a.num.data().begin(), a.num.data().end(), b.num.data().begin(),
                                        b.num.data().end());
}

RatMatrix Lattice::basis() const {
    RatMatrix b = to_rat(num);
    if (den != 1)
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) b(i, j) /= den;
    return b;
}

RatVec Lattice::basis_vector(std::size_t i) const {
    RatVec v(num.cols());
    for (std::size_t j = 0; j < num.cols(); ++j) v[j] = Rat(num(i, j), den);
    for (auto& x : v) x.canonicalize();
    return v;
}

Lattice lattice_from_rows(const RatMatrix& rows) {
    Int d = common_den(rows);
    return normalize(hnf_basis(scale_to_int(rows, d)), d);
}

Lattice lattice_from_int(const IntMatrix& rows, const Int& den, const Int& modulus) {
    return normalize(hnf_basis(rows, modulus), den);
}

Lattice standard_lattice(std::size_t n) { return Lattice{1, IntMatrix::identity(n)}; }

Rat covolume(const Lattice& a) {
    Rat c = diag_product(a.num);
    Rat dn = 1;
    for (std::size_t i = 0; i < a.dim(); ++i) dn *= a.den;
    return c / dn;
}

Rat lattice_index(const Lattice& a, const Lattice& b) { return covolume(a) / covolume(b); }

RatVec lattice_coords(const Lattice& a, const RatVec& v) {
    const std::size_t n = a.dim();
    RatVec t(n);
    for (std::size_t j = 0; j < n; ++j) t[j] = v[j] * a.den;
    RatVec y(n, Rat(0));
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = t[i] / Rat(a.num(i, i));
        if (y[i] == 0) continue;
        for (std::size_t j = i; j < n; ++j) t[j] -= y[i] * a.num(i, j);
    }
    return y;
}

bool lattice_contains(const Lattice& a, const RatVec& v) {
    for (const auto& y : lattice_coords(a, v))
        if (y.get_den() != 1) return false;
    return true;
}

bool lattice_subset(const Lattice& a, const Lattice& b) {
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (!lattice_contains(b, a.basis_vector(i))) return false;
    return true;
}

Lattice lattice_sum(const Lattice& a, const Lattice& b) {
    Int D = int_lcm(a.den, b.den);
    Int fa = D / a.den, fb = D / b.den;
    const std::size_t n = a.dim();
    IntMatrix m(2 * n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = a.num(i, j) * fa;
            m(n + i, j) = b.num(i, j) * fb;
        }
    Int mod = diag_product(a.num) * int_pow(fa, n);
    return lattice_from_int(m, D, mod);
}

Lattice lattice_scale(const Lattice& a, const Rat& s) {
    ABVAR_ASSERT(s != 0, "scaling a lattice by zero");
    Int u = abs(s.get_num()), v = s.get_den();
    IntMatrix m = a.num;
    if (u != 1)
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) *= u;
    return normalize(std::move(m), a.den * v);
}

Lattice lattice_dual(const Lattice& a) {
    RatMatrix inv = upper_inverse(a.num).transpose();
    if (a.den != 1)
        for (std::size_t i = 0; i < inv.rows(); ++i)
            for (std::size_t j = 0; j < inv.cols(); ++j) inv(i, j) *= a.den;
    return lattice_from_rows(inv);
}

Lattice lattice_intersection(const Lattice& a, const Lattice& b) {
    return lattice_dual(lattice_sum(lattice_dual(a), lattice_dual(b)));
}

Lattice lattice_image(const Lattice& a, const RatMatrix& map) { return lattice_from_rows(a.basis() * map); }

Lattice lattice_product(const NumberAlgebra& alg, const Lattice& a, const Lattice& b) {
    const std::size_t n = a.dim();
    IntMatrix gens(n * n, n);
    for (std::size_t i = 0; i < n; ++i) {
        IntVec ar = a.num.row(i);
        RatVec ai(ar.begin(), ar.end());
        for (std::size_t j = 0; j < n; ++j) {
            IntVec br = b.num.row(j);
            RatVec bj(br.begin(), br.end());
            RatVec c = alg.mul(ai, bj);
            for (std::size_t k = 0; k < n; ++k) {
                ABVAR_ASSERT(c[k].get_den() == 1, "lattice_product needs an integral power basis");
                gens(i * n + j, k) = c[k].get_num();
            }
        }
    }
    return lattice_from_int(gens, a.den * b.den, diag_product(a.num) * diag_product(b.num));
}

Lattice lattice_mul_elem(const NumberAlgebra& alg, const Lattice& a, const RatVec& x) {
    return lattice_from_rows(a.basis() * alg.mult_matrix(x));
}

Lattice lattice_colon(const NumberAlgebra& alg, const Lattice& j, const Lattice& i) {
    const std::size_t n = i.dim();
    RatMatrix jinv = upper_inverse(j.num);
    if (j.den != 1)
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) jinv(r, c) *= j.den;
    // Columns of M_b * J^{-1}, for b running over a basis of i, span a lattice
    // whose dual is the colon.
    RatMatrix cols(n * n, n);
    for (std::size_t k = 0; k < n; ++k) {
        RatMatrix K = alg.mult_matrix(i.basis_vector(k)) * jinv;
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t r = 0; r < n; ++r) cols(k * n + c, r) = K(r, c);
    }
    return lattice_dual(lattice_from_rows(cols));
}

Lattice lattice_trace_dual(const NumberAlgebra& alg, const Lattice& i) {
    return lattice_dual(lattice_from_rows(i.basis() * alg.trace_form()));
}

Lattice mult_ring(const NumberAlgebra& alg, const Lattice& i) { return lattice_colon(alg, i, i); }

bool is_order(const NumberAlgebra& alg, const Lattice& a) {
    if (!lattice_contains(a, alg.one())) return false;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i; j < a.dim(); ++j)
            if (!lattice_contains(a, alg.mul(a.basis_vector(i), a.basis_vector(j)))) return false;
    return true;
}

Lattice ring_closure(const NumberAlgebra& alg, const Lattice& a) {
    RatMatrix m = a.basis();
    m.append_row(alg.one());
    Lattice cur = lattice_from_rows(m);
    for (;;) {
        Lattice next = lattice_sum(cur, lattice_product(alg, cur, cur));
        if (next == cur) return cur;
        cur = std::move(next);
    }
}

Lattice order_generated(const NumberAlgebra& alg, const std::vector<RatVec>& gens) {
    const std::size_t n = alg.degree();
    // span of 1, gens and their products, grown until stable
    RatMatrix rows(0, n);
    rows.append_row(alg.one());
    std::size_t prev_rank = 0;
    for (;;) {
        RatMatrix next = rows;
        for (std::size_t r = 0; r < rows.rows(); ++r)
            for (const auto& g : gens) next.append_row(alg.mul(rows.row(r), g));
        Int d = common_den(next);
        IntMatrix h = hnf_basis(scale_to_int(next, d));
        RatMatrix hr = to_rat(h);
        for (std::size_t i = 0; i < hr.rows(); ++i)
            for (std::size_t j = 0; j < hr.cols(); ++j) hr(i, j) /= d;
        if (h.rows() == n && prev_rank == n) {
            Lattice a = lattice_from_int(h, d);
            if (a == lattice_from_rows(rows)) return ring_closure(alg, a);
        }
        prev_rank = h.rows();
        rows = std::move(hr);
    }
}

}  // namespace abvar
