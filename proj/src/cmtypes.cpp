#include "abvar/cmtypes.hpp"

#include <algorithm>
#include <map>

namespace abvar {

bool CMType::contains(int k) const { return std::binary_search(embeddings.begin(), embeddings.end(), k); }

std::vector<int> imag_signs(const EtaleAlgebra& L, const RatVec& x) {
    const auto& emb = L.embeddings();
    std::vector<int> out(emb.size());
    std::vector<RatPoly> comp;
    for (std::size_t i = 0; i < L.factors().size(); ++i) comp.push_back(L.component(x, int(i)));
    for (std::size_t k = 0; k < emb.size(); ++k) {
        RootBox box = emb[k].box;
        out[k] = comp[emb[k].factor].is_zero() ? 0
                                                : certified_imag_sign(L.factors()[emb[k].factor], box, comp[emb[k].factor]);
    }
    return out;
}

namespace {

// Sign pattern of x on the embeddings, or nullopt if some value is not
// certifiably off the real axis.
std::optional<std::vector<int>> type_subset(const EtaleAlgebra& L, const RatVec& x) {
    auto s = imag_signs(L, x);
    std::vector<int> sub;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k] == 0) return std::nullopt;
        if (s[k] > 0) sub.push_back(int(k));
    }
    return sub;
}

// pi^k - conj(pi^k), keeping the first g independent ones.
std::vector<RatVec> imaginary_generators(const EtaleAlgebra& L) {
    const auto& alg = L.alg();
    std::vector<RatVec> gens;
    RatMatrix span(0, alg.degree());
    RatVec x = alg.one();
    for (std::size_t k = 1; k <= alg.degree() && gens.size() < std::size_t(L.g()); ++k) {
        x = alg.mul(x, L.pi());
        RatVec d = alg.sub(x, L.involve(x));
        RatMatrix trial = span;
        trial.append_row(d);
        if (rank(trial) == trial.rows()) {
            span = trial;
            gens.push_back(d);
        }
    }
    ABVAR_ASSERT(gens.size() == std::size_t(L.g()), "imaginary part of L not spanned by pi^k - conj(pi^k)");
    return gens;
}

// Pairs canonical form: for each conjugate pair the embedding with the smaller index.
std::vector<std::pair<int, int>> conjugate_pairs(const EtaleAlgebra& L) {
    std::vector<std::pair<int, int>> out;
    const auto& emb = L.embeddings();
    for (std::size_t k = 0; k < emb.size(); ++k)
        if (int(k) < emb[k].conj) out.push_back({int(k), emb[k].conj});
    return out;
}

}  // namespace

CMType cm_type_of(const EtaleAlgebra& L, const RatVec& x) {
    if (!L.is_totally_imaginary(x)) fail(ErrorKind::NotTotallyImaginary, "CM-type of a non totally imaginary element");
    auto sub = type_subset(L, x);
    if (!sub) fail(ErrorKind::NotAUnit, "element vanishes at an embedding");
    return {*sub, x};
}

std::vector<CMType> all_cm_types(const EtaleAlgebra& L) {
    auto pairs = conjugate_pairs(L);
    std::size_t total = std::size_t(1) << pairs.size();
    auto gens = imaginary_generators(L);
    const auto& alg = L.alg();
    std::size_t g = gens.size();
    std::map<std::vector<int>, RatVec> found;

    auto consider = [&](const std::vector<long>& c) {
        RatVec x = alg.zero();
        for (std::size_t j = 0; j < g; ++j)
            if (c[j]) x = alg.add(x, alg.scale(Rat(c[j]), gens[j]));
        // cheap floating prefilter, then certification
        for (std::size_t k = 0; k < L.embeddings().size(); ++k)
            if (std::abs(L.embed_approx(x, k).imag()) < 1e-9) return;
        auto sub = type_subset(L, x);
        if (sub && !found.count(*sub)) found.emplace(*sub, x);
    };
    // breadth-first by height, lexicographic inside a height
    for (long H = 1; found.size() < total && H <= 6; ++H) {
        std::vector<long> c(g, -H);
        while (true) {
            long m = 0;
            for (long v : c) m = std::max(m, std::labs(v));
            if (m == H) consider(c);
            std::size_t i = 0;
            while (i < g && c[i] == H) c[i++] = -H;
            if (i == g) break;
            ++c[i];
        }
    }
    if (found.size() < total) {
        // sign patterns missed by the small search: solve for the target signs
        std::vector<std::vector<double>> M(g, std::vector<double>(pairs.size()));
        for (std::size_t j = 0; j < g; ++j)
            for (std::size_t q = 0; q < pairs.size(); ++q) M[j][q] = L.embed_approx(gens[j], pairs[q].first).imag();
        for (std::size_t mask = 0; mask < total; ++mask) {
            std::vector<double> y(pairs.size());
            for (std::size_t q = 0; q < pairs.size(); ++q) y[q] = (mask >> q) & 1 ? 1.0 : -1.0;
            // c M = y by Gaussian elimination on the transpose
            std::vector<std::vector<double>> A(pairs.size(), std::vector<double>(g + 1));
            for (std::size_t q = 0; q < pairs.size(); ++q) {
                for (std::size_t j = 0; j < g; ++j) A[q][j] = M[j][q];
                A[q][g] = y[q];
            }
            for (std::size_t col = 0; col < g; ++col) {
                std::size_t piv = col;
                for (std::size_t r = col; r < g; ++r)
                    if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
                std::swap(A[col], A[piv]);
                for (std::size_t r = 0; r < g; ++r)
                    if (r != col) {
                        double f = A[r][col] / A[col][col];
                        for (std::size_t j = col; j <= g; ++j) A[r][j] -= f * A[col][j];
                    }
            }
            for (double scale = 1; scale < 1e12 && found.size() < total; scale *= 4) {
                std::vector<long> c(g);
                for (std::size_t j = 0; j < g; ++j) c[j] = std::lround(scale * A[j][g] / A[j][j]);
                std::size_t before = found.size();
                consider(c);
                if (found.size() > before) break;
            }
        }
    }
    ABVAR_ASSERT(found.size() == total, "CM-type representatives not found");
    std::vector<CMType> out;
    for (auto& [sub, b] : found) out.push_back({sub, b});
    return out;
}

bool is_phi_positive(const EtaleAlgebra& L, const RatVec& lambda, const CMType& phi) {
    if (!L.is_totally_imaginary(lambda)) fail(ErrorKind::NotTotallyImaginary, "Phi-positivity of a non totally imaginary element");
    auto binv = L.alg().inverse(phi.b);
    ABVAR_ASSERT(binv.has_value(), "CM-type representative is not invertible");
    return L.is_totally_positive(L.alg().mul(lambda, *binv));
}

CMType scale_cm_type(const EtaleAlgebra& L, const CMType& phi, const RatVec& c) {
    if (!L.is_totally_real(c)) fail(ErrorKind::NotTotallyReal, "scaling a CM-type by a non-real element");
    return cm_type_of(L, L.alg().mul(c, phi.b));
}

CMType conjugate_type(const EtaleAlgebra& L, const CMType& phi) { return cm_type_of(L, L.alg().neg(phi.b)); }

std::vector<CMType> cm_orbit(const EtaleAlgebra& L, const CMType& phi, const std::vector<RatVec>& units) {
    std::vector<CMType> out{phi};
    for (const auto& u : units) {
        CMType t = scale_cm_type(L, phi, u);
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace abvar
