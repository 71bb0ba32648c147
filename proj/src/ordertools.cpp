#include "abvar/ordertools.hpp"

#include <deque>
#include <set>

namespace abvar {

IntVec integral_coords(const Lattice& a, const RatVec& v) {
    RatVec c = lattice_coords(a, v);
    IntVec r(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        ABVAR_ASSERT(c[i].get_den() == 1, "element not in lattice");
        r[i] = c[i].get_num();
    }
    return r;
}

OrderMult order_mult(const NumberAlgebra& alg, const Lattice& order) {
    const std::size_t n = order.dim();
    OrderMult m;
    m.n = n;
    m.coeff.assign(n, IntMatrix(n, n));
    std::vector<RatVec> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = order.basis_vector(i);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            IntVec c = integral_coords(order, alg.mul(w[i], w[j]));
            m.coeff[i].set_row(j, c);
            m.coeff[j].set_row(i, c);
        }
    return m;
}

namespace {

IntVec reduce(IntVec v, const Int& p) {
    for (auto& x : v) x = mod_floor(x, p);
    return v;
}

IntVec mulmod(const OrderMult& m, const IntVec& a, const IntVec& b, const Int& p) {
    IntVec r(m.n, Int(0));
    for (std::size_t i = 0; i < m.n; ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < m.n; ++j) {
            if (b[j] == 0) continue;
            Int s = a[i] * b[j];
            for (std::size_t k = 0; k < m.n; ++k) r[k] += s * m.coeff[i](j, k);
        }
    }
    return reduce(std::move(r), p);
}

IntVec powmod(const OrderMult& m, IntVec a, Int e, const IntVec& one, const Int& p) {
    IntVec r = one;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = mulmod(m, r, a, p);
        e >>= 1;
        if (e > 0) a = mulmod(m, a, a, p);
    }
    return r;
}

IntVec unit_vector(std::size_t n, std::size_t i) {
    IntVec v(n, Int(0));
    v[i] = 1;
    return v;
}

bool is_zero_vec(const IntVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

// Lattice in algebra coordinates spanned by rows (order coordinates) + p*order.
Lattice from_order_coords(const Lattice& order, const IntMatrix& rows, const Int& p) {
    IntMatrix r = rows;
    for (std::size_t i = 0; i < order.dim(); ++i) {
        IntVec e = unit_vector(order.dim(), i);
        e[i] = p;
        r.append_row(e);
    }
    return lattice_image(lattice_from_int(r, 1, p), order.basis());
}

// Radical of O/pO as rows in order coordinates (entries in [0, p)).
IntMatrix radical_rows(const OrderMult& m, const IntVec& one, const Int& p) {
    Int q = p;
    while (q < Int(m.n)) q *= p;
    IntMatrix F(m.n, m.n);
    for (std::size_t i = 0; i < m.n; ++i) F.set_row(i, powmod(m, unit_vector(m.n, i), q, one, p));
    return left_kernel_mod(F, p);
}

}  // namespace

Lattice p_radical(const NumberAlgebra& alg, const Lattice& order, const Int& p) {
    OrderMult m = order_mult(alg, order);
    IntVec one = integral_coords(order, alg.one());
    return from_order_coords(order, radical_rows(m, one, p), p);
}

Lattice p_maximal_order(const NumberAlgebra& alg, const Lattice& order, const Int& p) {
    Lattice cur = order;
    for (;;) {
        Lattice next = mult_ring(alg, p_radical(alg, cur, p));
        if (next == cur) return cur;
        cur = std::move(next);
    }
}

Rat lattice_discriminant(const NumberAlgebra& alg, const Lattice& a) {
    RatMatrix b = a.basis();
    return determinant(b * alg.trace_form() * b.transpose());
}

Lattice maximal_order_of(const NumberAlgebra& alg) { return maximal_order_of(alg, standard_lattice(alg.degree())); }

Lattice maximal_order_of(const NumberAlgebra& alg, const Lattice& start) {
    Rat d = lattice_discriminant(alg, start);
    ABVAR_ASSERT(d.get_den() == 1 && d != 0, "start is not an order of a reduced algebra");
    Lattice cur = start;
    for (const auto& [p, e] : factor_integer(abs(d.get_num())))
        if (e >= 2) cur = p_maximal_order(alg, cur, p);
    return cur;
}

std::vector<PrimeIdeal> primes_above(const NumberAlgebra& alg, const Lattice& order, const Int& p) {
    ABVAR_ASSERT(p < Int(1) << 24, "prime too large for idempotent splitting");
    const std::size_t n = order.dim();
    OrderMult m = order_mult(alg, order);
    IntVec one = integral_coords(order, alg.one());
    IntMatrix rad = radical_rows(m, one, p);

    // the F_p-algebra {x : x^p = x} is spanned by the primitive idempotents
    IntMatrix fr(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        IntVec e = unit_vector(n, i);
        IntVec y = powmod(m, e, p, one, p);
        for (std::size_t k = 0; k < n; ++k) y[k] -= e[k];
        fr.set_row(i, reduce(y, p));
    }
    IntMatrix split = left_kernel_mod(fr, p);
    const std::size_t r = split.rows();

    std::vector<IntVec> idems{one};
    for (std::size_t b = 0; b < split.rows() && idems.size() < r; ++b) {
        std::vector<IntVec> next;
        for (const auto& e : idems) {
            IntVec x = mulmod(m, split.row(b), e, p);
            IntVec rest = e;
            for (Int a = 0; a < p && !is_zero_vec(rest); ++a) {
                IntVec y(n);
                for (std::size_t k = 0; k < n; ++k) y[k] = x[k] - a * e[k];
                IntVec t = mulmod(m, powmod(m, reduce(y, p), p - 1, one, p), e, p);
                IntVec ea(n);
                for (std::size_t k = 0; k < n; ++k) ea[k] = e[k] - t[k];
                ea = reduce(ea, p);
                if (is_zero_vec(ea)) continue;
                next.push_back(ea);
                for (std::size_t k = 0; k < n; ++k) rest[k] -= ea[k];
                rest = reduce(rest, p);
            }
        }
        idems = std::move(next);
    }
    ABVAR_ASSERT(idems.size() == r, "idempotent splitting incomplete");

    std::vector<PrimeIdeal> out;
    RatMatrix basis = order.basis();
    for (const auto& e : idems) {
        IntMatrix rows = rad;
        IntVec c(n);
        for (std::size_t k = 0; k < n; ++k) c[k] = one[k] - e[k];
        for (std::size_t j = 0; j < n; ++j) rows.append_row(mulmod(m, c, unit_vector(n, j), p));
        PrimeIdeal P;
        P.lat = from_order_coords(order, rows, p);
        P.p = p;
        Rat idx = lattice_index(P.lat, order);
        ABVAR_ASSERT(idx.get_den() == 1, "prime index");
        Int t = idx.get_num();
        while (t > 1) {
            ABVAR_ASSERT(t % p == 0, "prime index not a power of p");
            t /= p;
            ++P.f;
        }
        RatVec ev(n);
        for (std::size_t k = 0; k < n; ++k) ev[k] = Rat(e[k]);
        P.idem = vec_mul(ev, basis);
        out.push_back(std::move(P));
    }
    std::sort(out.begin(), out.end(), [](const PrimeIdeal& a, const PrimeIdeal& b) {
        if (a.f != b.f) return a.f < b.f;
        return a.lat < b.lat;
    });
    return out;
}

int prime_valuation(const NumberAlgebra& alg, const Lattice& order, const PrimeIdeal& P, const RatVec& x) {
    ABVAR_ASSERT(!alg.is_zero(x), "valuation of zero");
    auto val_integral = [&](const RatVec& y) {
        int k = 0;
        Lattice pw = P.lat;
        while (lattice_contains(pw, y)) {
            ++k;
            pw = lattice_product(alg, pw, P.lat);
        }
        return k;
    };
    Int d = 1;
    for (const auto& c : lattice_coords(order, x)) d = int_lcm(d, c.get_den());
    int v = val_integral(alg.scale(Rat(d), x));
    long vd = valuation(d, P.p);
    if (vd > 0) v -= int(vd) * val_integral(alg.scalar(Rat(P.p)));
    return v;
}

namespace {

// Representatives of the nonzero F_p-lines of the p-torsion of upper/lower,
// as algebra elements.
std::vector<RatVec> torsion_lines(const Lattice& lower, const Lattice& upper, const Int& p) {
    const std::size_t n = upper.dim();
    IntMatrix C(n, n);
    for (std::size_t i = 0; i < n; ++i) C.set_row(i, integral_coords(upper, lower.basis_vector(i)));
    SnfResult s = snf(C);
    RatMatrix vinv = inverse(to_rat(s.V));
    std::vector<RatVec> gens;
    for (std::size_t i = 0; i < n; ++i) {
        const Int& d = s.D(i, i);
        if (d % p != 0) continue;
        RatVec g = vinv.row(i);
        for (auto& x : g) x *= Rat(d / p);
        gens.push_back(g);
    }
    std::vector<RatVec> out;
    const std::size_t r = gens.size();
    if (r == 0) return out;
    RatMatrix ub = upper.basis();
    std::vector<Int> c(r, Int(0));
    // enumerate vectors whose first nonzero entry is 1
    for (std::size_t lead = 0; lead < r; ++lead) {
        std::fill(c.begin(), c.end(), Int(0));
        c[lead] = 1;
        for (;;) {
            RatVec v(n, Rat(0));
            for (std::size_t j = 0; j < r; ++j)
                if (c[j] != 0)
                    for (std::size_t k = 0; k < n; ++k) v[k] += Rat(c[j]) * gens[j][k];
            out.push_back(vec_mul(v, ub));
            // odometer on positions after lead
            std::size_t j = r;
            bool carry = true;
            while (carry && j > lead + 1) {
                --j;
                if (++c[j] < p) carry = false;
                else c[j] = 0;
            }
            if (carry) break;
        }
    }
    return out;
}

std::vector<Int> index_primes(const Lattice& lower, const Lattice& upper) {
    Rat idx = lattice_index(lower, upper);
    ABVAR_ASSERT(idx.get_den() == 1, "not a sublattice");
    std::vector<Int> ps;
    for (const auto& [p, e] : factor_integer(idx.get_num())) ps.push_back(p);
    return ps;
}

}  // namespace

std::vector<Lattice> intermediate_orders(const NumberAlgebra& alg, const Lattice& order, const Lattice& top,
                                         const Int& max_index) {
    Rat idx = lattice_index(order, top);
    ABVAR_ASSERT(idx.get_den() == 1, "order not contained in top");
    if (idx.get_num() > max_index)
        fail(ErrorKind::IndexTooLarge, "index " + idx.get_num().get_str() + " exceeds bound " + max_index.get_str());
    std::set<Lattice> seen{order};
    std::deque<Lattice> queue{order};
    while (!queue.empty()) {
        Lattice t = queue.front();
        queue.pop_front();
        for (const Int& p : index_primes(t, top))
            for (const RatVec& x : torsion_lines(t, top, p)) {
                RatMatrix rows = t.basis();
                rows.append_row(x);
                Lattice u = ring_closure(alg, lattice_from_rows(rows));
                if (seen.insert(u).second) queue.push_back(u);
            }
    }
    std::vector<Lattice> out(seen.begin(), seen.end());
    std::stable_sort(out.begin(), out.end(), [&](const Lattice& a, const Lattice& b) {
        Rat ia = lattice_index(a, top), ib = lattice_index(b, top);
        if (ia != ib) return ia < ib;
        return a < b;
    });
    return out;
}

std::vector<Lattice> intermediate_modules(const NumberAlgebra& alg, const Lattice& order, const Lattice& lower,
                                          const Lattice& upper, std::size_t limit) {
    std::set<Lattice> seen{lower};
    std::deque<Lattice> queue{lower};
    std::vector<RatVec> w;
    for (std::size_t i = 0; i < order.dim(); ++i) w.push_back(order.basis_vector(i));
    while (!queue.empty()) {
        Lattice t = queue.front();
        queue.pop_front();
        for (const Int& p : index_primes(t, upper))
            for (const RatVec& x : torsion_lines(t, upper, p)) {
                if (lattice_contains(t, x)) continue;
                RatMatrix rows = t.basis();
                for (const auto& b : w) rows.append_row(alg.mul(b, x));
                Lattice u = lattice_from_rows(rows);
                if (seen.insert(u).second) {
                    if (seen.size() > limit) fail(ErrorKind::IndexTooLarge, "too many submodules");
                    queue.push_back(u);
                }
            }
    }
    return {seen.begin(), seen.end()};
}

bool is_invertible(const NumberAlgebra& alg, const Lattice& ideal, const Lattice& order) {
    return lattice_product(alg, ideal, lattice_colon(alg, order, ideal)) == order;
}

bool is_gorenstein(const NumberAlgebra& alg, const Lattice& order) {
    return is_invertible(alg, lattice_trace_dual(alg, order), order);
}

}  // namespace abvar
