#include "abvar/factor.hpp"
#include "abvar/padic.hpp"

namespace abvar {

namespace {

// Multiplication by y (generator of K) and by x on K (x) Q[x]/(g), basis
// y^a x^b at index a + d b, acting on row vectors.
RatMatrix tensor_mult(const NumberAlgebra& K, const RatPoly& g, const Rat& s) {
    std::size_t d = K.degree(), e = std::size_t(g.degree()), D = d * e;
    RatMatrix Y = K.mult_matrix(K.gen());
    RatMatrix Z(D, D);
    for (std::size_t b = 0; b < e; ++b)
        for (std::size_t a = 0; a < d; ++a) {
            std::size_t row = a + d * b;
            // s * y * (y^a x^b)
            if (s != 0)
                for (std::size_t c = 0; c < d; ++c)
                    if (Y(a, c) != 0) Z(row, c + d * b) += s * Y(a, c);
            // x * (y^a x^b)
            if (b + 1 < e) {
                Z(row, a + d * (b + 1)) += 1;
            } else {
                for (std::size_t c = 0; c < e; ++c)
                    if (g.coeff(c) != 0) Z(row, a + d * c) -= g.coeff(c);
            }
        }
    return Z;
}

RatPoly poly_of(const RatVec& v) { return RatPoly(v); }

}  // namespace

std::vector<TensorFactor> tensor_split(const NumberAlgebra& K, const RatPoly& g) {
    std::size_t d = K.degree(), D = d * std::size_t(g.degree());
    for (long t = 0;; ++t) {
        Rat s = (t % 2 == 0) ? Rat(t / 2) : Rat(-(t + 1) / 2);
        if (d == 1 && t > 0) break;
        RatMatrix Z = tensor_mult(K, g, s);
        RatPoly chi(charpoly(Z));
        if (!is_squarefree(chi)) continue;
        // powers of z as rows, to express y in terms of z
        RatMatrix P(D, D);
        RatVec v(D, Rat(0));
        v[0] = 1;
        for (std::size_t i = 0; i < D; ++i) {
            P.set_row(i, v);
            v = vec_mul(v, Z);
        }
        RatVec yvec(D, Rat(0));
        if (d > 1) yvec[1] = 1;
        else yvec[0] = -K.modulus().coeff(0);
        auto ycoef = solve_left(P, yvec);
        ABVAR_ASSERT(ycoef.has_value(), "tensor generator not primitive");
        RatPoly Ypoly = poly_of(*ycoef);
        std::vector<TensorFactor> out;
        for (const auto& [N, mult] : factor_q(chi)) {
            NumberAlgebra F(N);
            RatVec Yi = F.from_poly(Ypoly);
            // x = z - s y
            RatVec Xi = F.sub(F.gen(), F.scale(s, Yi));
            out.push_back({N, Yi, Xi, s});
        }
        return out;
    }
    fail(ErrorKind::Internal, "no primitive element found for tensor product");
}

std::vector<RatVec> roots_in_field(const NumberAlgebra& K, const RatPoly& g) {
    std::vector<RatVec> out;
    std::size_t d = K.degree();
    for (const auto& T : tensor_split(K, g)) {
        if (std::size_t(T.modulus.degree()) != d) continue;
        // invert K -> Q[z]/(N), y -> Y
        NumberAlgebra F(T.modulus);
        RatMatrix Psi(d, d);
        RatVec p = F.one();
        for (std::size_t i = 0; i < d; ++i) {
            Psi.set_row(i, p);
            p = F.mul(p, T.image_of_gen);
        }
        auto c = solve_left(Psi, T.image_of_x);
        ABVAR_ASSERT(c.has_value(), "tensor factor is not isomorphic to K");
        out.push_back(*c);
    }
    return out;
}

}  // namespace abvar
