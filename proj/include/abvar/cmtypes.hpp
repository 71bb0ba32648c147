#pragma once

#include "abvar/etale.hpp"

namespace abvar {

/// A CM-type: one embedding from each conjugate pair, with a totally
/// imaginary b such that Im phi(b) > 0 exactly for phi in the type.
struct CMType {
    std::vector<int> embeddings;  // sorted indices into EtaleAlgebra::embeddings()
    RatVec b;

    bool contains(int k) const;
    /// Types compare by their embedding subsets only.
    bool operator==(const CMType& o) const { return embeddings == o.embeddings; }
    bool operator<(const CMType& o) const { return embeddings < o.embeddings; }
};

/// Certified sign of Im phi_k(x) for every embedding.
std::vector<int> imag_signs(const EtaleAlgebra& L, const RatVec& x);

/// The CM-type of a totally imaginary x (x invertible). Throws NotTotallyImaginary.
CMType cm_type_of(const EtaleAlgebra& L, const RatVec& x);

/// All prod 2^{g_i} CM-types in canonical order, each with a small representative.
std::vector<CMType> all_cm_types(const EtaleAlgebra& L);

/// Im phi(lambda) > 0 for phi in the type, decided exactly as lambda/b >> 0.
bool is_phi_positive(const EtaleAlgebra& L, const RatVec& lambda, const CMType& phi);

/// The type of c*b for a totally real unit c.
CMType scale_cm_type(const EtaleAlgebra& L, const CMType& phi, const RatVec& c);

CMType conjugate_type(const EtaleAlgebra& L, const CMType& phi);

/// {Phi_{ub}} for u running over the given totally real units, deduplicated and sorted.
std::vector<CMType> cm_orbit(const EtaleAlgebra& L, const CMType& phi, const std::vector<RatVec>& units);

}  // namespace abvar
