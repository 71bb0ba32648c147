#pragma once

#include "abvar/algebra.hpp"

namespace abvar {

/// Full-rank Z-lattice (1/den) * rowspace(num) in the coordinate space of a
/// NumberAlgebra. `num` is the upper-triangular HNF and den is minimal, so
/// two lattices are equal iff their representations are equal.
struct Lattice {
    Int den = 1;
    IntMatrix num;

    std::size_t dim() const { return num.cols(); }
    RatMatrix basis() const;
    RatVec basis_vector(std::size_t i) const;

    friend bool operator==(const Lattice& a, const Lattice& b) { return a.den == b.den && a.num == b.num; }
    friend bool operator<(const Lattice& a, const Lattice& b);
};

/// Lattice spanned by the rows (any number, rank must equal the column count).
Lattice lattice_from_rows(const RatMatrix& rows);
Lattice lattice_from_int(const IntMatrix& rows, const Int& den = 1, const Int& modulus = 0);
Lattice standard_lattice(std::size_t n);

/// Covolume det(num) / den^n.
Rat covolume(const Lattice& a);
/// [b : a] for a contained in b (may be fractional otherwise).
Rat lattice_index(const Lattice& a, const Lattice& b);
bool lattice_contains(const Lattice& a, const RatVec& v);
bool lattice_subset(const Lattice& a, const Lattice& b);
/// Coordinates of v in the basis of a (rational in general).
RatVec lattice_coords(const Lattice& a, const RatVec& v);

Lattice lattice_sum(const Lattice& a, const Lattice& b);
Lattice lattice_scale(const Lattice& a, const Rat& s);
/// {y : y . x in Z for all x in a} for the coordinate pairing.
Lattice lattice_dual(const Lattice& a);
Lattice lattice_intersection(const Lattice& a, const Lattice& b);
/// Image under a linear map given by a matrix acting on row vectors.
Lattice lattice_image(const Lattice& a, const RatMatrix& map);

// ---- multiplicative structure ----

Lattice lattice_product(const NumberAlgebra& alg, const Lattice& a, const Lattice& b);
Lattice lattice_mul_elem(const NumberAlgebra& alg, const Lattice& a, const RatVec& x);
/// (j : i) = {x : x*i subset of j}.
Lattice lattice_colon(const NumberAlgebra& alg, const Lattice& j, const Lattice& i);
/// {x : Tr(x*i) subset of Z}.
Lattice lattice_trace_dual(const NumberAlgebra& alg, const Lattice& i);
Lattice mult_ring(const NumberAlgebra& alg, const Lattice& i);
/// Whether a contains 1 and is closed under multiplication.
bool is_order(const NumberAlgebra& alg, const Lattice& a);
/// Smallest order containing the lattice a (a must contain 1 up to scaling by
/// Z-span closure), computed by repeated products.
Lattice ring_closure(const NumberAlgebra& alg, const Lattice& a);
/// Z-order generated by the given elements (which must be integral).
Lattice order_generated(const NumberAlgebra& alg, const std::vector<RatVec>& gens);

}  // namespace abvar
