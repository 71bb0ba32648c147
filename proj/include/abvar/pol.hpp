#pragma once

#include "abvar/classes.hpp"
#include "abvar/cmtypes.hpp"
#include "abvar/padic.hpp"

namespace abvar {

/// conj(trace dual of I): the ideal of the dual variety.
Lattice dual_ideal(const EtaleAlgebra& L, const Lattice& I);

/// i0 with i0 * dual_ideal(I) = I, if it exists. T = mult ring of I must be
/// conjugation stable.
std::optional<RatVec> self_dual_witness(const ClassContext& C, const Lattice& T, const Lattice& I);

/// Unit data of an order needed for polarizations.
struct OrderPolData {
    Lattice T;
    OrderUnits units;
    std::vector<RatVec> transversal;  // T^* / <v vbar>
    Int ppav_count;                   // [T^* cap L^+ : <v vbar>]
};
OrderPolData order_pol_data(const UnitGroup& U, const Lattice& T);

/// {i0 u : u in transversal, i0 u totally imaginary and Phi-positive}, empty
/// without i0. The size is asserted to be 0 or ppav_count.
std::vector<RatVec> p1_set(const EtaleAlgebra& L, const OrderPolData& T, const std::optional<RatVec>& i0,
                           const CMType& phi);
/// Same with an explicit transversal.
std::vector<RatVec> p1_set(const EtaleAlgebra& L, const std::vector<RatVec>& transversal,
                           const std::optional<RatVec>& i0, const CMType& phi);

enum class PolStatus { Yes, No, ConditionalOnAlpha };
struct PolCheck {
    PolStatus is_pol = PolStatus::No;
    Int degree;  // #(I / lambda dual(I))
};
/// Throws NotAnIsogeny unless lambda * dual(I) is contained in I.
PolCheck check_polarization(const EtaleAlgebra& L, const Lattice& I, const RatVec& lambda, const CMType& phi,
                            bool assume_alpha_one);

/// lambda = v vbar lambda' for some v in T^*.
bool polarized_isomorphic(const UnitGroup& U, const OrderPolData& T, const RatVec& lambda, const RatVec& lambda2);
/// Order of the torsion of T^*.
Int aut_polarized(const UnitGroup& U, const OrderUnits& T);

/// S^*_R inside T^*_R.
bool eff_cond1(const OrderUnits& S, const OrderUnits& T);
/// Every generator xi of S^*_R has a transversal element u with u / xi >> 0.
bool eff_cond2(const UnitGroup& U, const OrderUnits& S, const std::vector<RatVec>& transversal);

struct ClassReport {
    Lattice ideal;
    std::optional<RatVec> i0;
    std::vector<int> sizes;                // |P^1| per orbit type
    std::vector<RatVec> representatives;   // only when certified
};

enum class Outcome { Determined, UpToPermutation, Ambiguous, NotSelfDual, Unknown };
const char* outcome_name(Outcome o);

struct OrderReport {
    OrderInfo order;
    bool cond1 = false, cond2 = false, cond5 = false;
    Outcome outcome = Outcome::Unknown;
    /// Determined: one count per class. UpToPermutation: the multiset of
    /// counts, sorted decreasingly. Ambiguous: the distinct such multisets
    /// over the orbit.
    std::vector<std::vector<int>> counts;
    std::vector<ClassReport> classes;
    Int ppav_count;
};

/// Aggregation of the size table; sizes[i][k] is |P^1| of class i for orbit
/// type k (type 0 is the base type).
Outcome aggregate_sizes(const std::vector<std::vector<int>>& sizes, bool certified,
                        std::vector<std::vector<int>>& counts, bool& cond5);

struct PipelineConfig {
    Int max_index = Int(1) << 20;
    int precision = 30;
    std::size_t max_splitting_degree = 64;
};

struct IsogenyReport {
    Etale L;
    Classes context;
    int p_rank = 0;
    Int rw_index;
    std::vector<CMType> types;
    bool rrc_available = false;
    std::vector<RRCResult> rrc;       // per type when available
    int base_type = -1;               // index into types, -1 when nothing is certified
    std::vector<OrderInfo> certified; // the set S for the base type
    std::vector<int> orbit;           // indices into types
    std::vector<OrderReport> orders;
};

IsogenyReport run_pipeline(const Etale& L, const PipelineConfig& cfg = {});

}  // namespace abvar
