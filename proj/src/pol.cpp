#include "abvar/pol.hpp"

#include <algorithm>

namespace abvar {

namespace {

RatVec int_to_rat(const IntVec& v) {
    RatVec out;
    for (const auto& a : v) out.push_back(Rat(a));
    return out;
}

bool in_exponent_lattice(const IntMatrix& A, const IntVec& e) {
    return lattice_contains(lattice_from_int(A), int_to_rat(e));
}

bool is_unit_of(const NumberAlgebra& alg, const Lattice& T, const RatVec& x) {
    if (!lattice_contains(T, x)) return false;
    auto inv = alg.inverse(x);
    return inv && lattice_contains(T, *inv);
}

}  // namespace

Lattice dual_ideal(const EtaleAlgebra& L, const Lattice& I) {
    return conjugate(L, lattice_trace_dual(L.alg(), I));
}

std::optional<RatVec> self_dual_witness(const ClassContext& C, const Lattice& T, const Lattice& I) {
    ABVAR_ASSERT(conjugate(*C.L, T) == T, "self-duality needs a conjugation stable ring");
    return iso_witness(C, T, dual_ideal(*C.L, I), I);
}

OrderPolData order_pol_data(const UnitGroup& U, const Lattice& T) {
    OrderPolData d;
    d.T = T;
    d.units = order_units(U, T);
    d.transversal = unit_transversal(U, d.units);
    d.ppav_count = ppav_count_formula(d.units);
    return d;
}

std::vector<RatVec> p1_set(const EtaleAlgebra& L, const std::vector<RatVec>& transversal,
                           const std::optional<RatVec>& i0, const CMType& phi) {
    std::vector<RatVec> out;
    if (!i0) return out;
    for (const auto& u : transversal) {
        RatVec x = L.alg().mul(*i0, u);
        if (L.is_totally_imaginary(x) && is_phi_positive(L, x, phi)) out.push_back(std::move(x));
    }
    return out;
}

std::vector<RatVec> p1_set(const EtaleAlgebra& L, const OrderPolData& T, const std::optional<RatVec>& i0,
                           const CMType& phi) {
    auto out = p1_set(L, T.transversal, i0, phi);
    ABVAR_ASSERT(out.empty() || Int(out.size()) == T.ppav_count, "size of P1 differs from the unit index");
    return out;
}

PolCheck check_polarization(const EtaleAlgebra& L, const Lattice& I, const RatVec& lambda, const CMType& phi,
                            bool assume_alpha_one) {
    const auto& alg = L.alg();
    if (!alg.inverse(lambda)) fail(ErrorKind::NotAnIsogeny, "lambda is a zero divisor");
    Lattice image = lattice_mul_elem(alg, dual_ideal(L, I), lambda);
    if (!lattice_subset(image, I)) fail(ErrorKind::NotAnIsogeny, "lambda * dual(I) is not contained in I");
    PolCheck r;
    Rat idx = lattice_index(image, I);
    ABVAR_ASSERT(idx.get_den() == 1, "index of a sublattice");
    r.degree = idx.get_num();
    if (!L.is_totally_imaginary(lambda)) r.is_pol = PolStatus::No;
    else if (!assume_alpha_one) r.is_pol = PolStatus::ConditionalOnAlpha;
    else r.is_pol = is_phi_positive(L, lambda, phi) ? PolStatus::Yes : PolStatus::No;
    return r;
}

bool polarized_isomorphic(const UnitGroup& U, const OrderPolData& T, const RatVec& lambda, const RatVec& lambda2) {
    const auto& alg = U.algebra()->alg();
    auto inv = alg.inverse(lambda2);
    if (!inv) return false;
    RatVec q = alg.mul(lambda, *inv);
    if (!is_unit_of(alg, T.T, q)) return false;
    return in_exponent_lattice(T.units.norms, U.dlog(q));
}

Int aut_polarized(const UnitGroup& U, const OrderUnits& T) {
    const auto& ord = U.torsion_orders();
    std::size_t m = U.ngens();
    Int count = 0;
    IntVec e(m, Int(0));
    // odometer over the torsion coordinates
    while (true) {
        if (in_exponent_lattice(T.units, e)) ++count;
        std::size_t i = 0;
        while (i < ord.size() && e[i] + 1 == ord[i]) e[i++] = 0;
        if (i == ord.size()) break;
        e[i] += 1;
    }
    return count;
}

bool eff_cond1(const OrderUnits& S, const OrderUnits& T) {
    return lattice_subset(lattice_from_int(S.real), lattice_from_int(T.real));
}

bool eff_cond2(const UnitGroup& U, const OrderUnits& S, const std::vector<RatVec>& transversal) {
    const auto& L = *U.algebra();
    std::vector<RatVec> real;
    for (const auto& u : transversal)
        if (L.is_totally_real(u)) real.push_back(u);
    for (std::size_t i = 0; i < S.real.rows(); ++i) {
        RatVec xi = U.element(S.real.row(i));
        bool found = false;
        for (const auto& u : real)
            if (L.is_totally_positive(L.alg().mul(u, xi))) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Determined: return "determined";
        case Outcome::UpToPermutation: return "up_to_permutation";
        case Outcome::Ambiguous: return "ambiguous";
        case Outcome::NotSelfDual: return "not_self_dual";
        case Outcome::Unknown: return "unknown";
    }
    return "?";
}

Outcome aggregate_sizes(const std::vector<std::vector<int>>& sizes, bool certified,
                        std::vector<std::vector<int>>& counts, bool& cond5) {
    counts.clear();
    std::size_t r = sizes.size(), ntypes = r ? sizes[0].size() : 0;
    cond5 = true;
    for (const auto& row : sizes)
        for (int s : row) cond5 = cond5 && s == row[0];
    std::vector<std::vector<int>> vecs(ntypes, std::vector<int>(r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < ntypes; ++k) vecs[k][i] = sizes[i][k];
    if (r == 0 || ntypes == 0) {
        counts.push_back({});
        return Outcome::Determined;
    }
    if (certified || cond5) {
        counts.push_back(vecs[0]);
        return Outcome::Determined;
    }
    auto sorted = [](std::vector<int> v) {
        std::sort(v.rbegin(), v.rend());
        return v;
    };
    bool perm = true;
    for (const auto& v : vecs) perm = perm && sorted(v) == sorted(vecs[0]);
    if (perm) {
        counts.push_back(sorted(vecs[0]));
        return Outcome::UpToPermutation;
    }
    for (auto& v : vecs) v = sorted(v);
    std::sort(vecs.begin(), vecs.end());
    vecs.erase(std::unique(vecs.begin(), vecs.end()), vecs.end());
    counts = vecs;
    return Outcome::Ambiguous;
}

namespace {

bool rw_lifts(const EtaleAlgebra& L, int prank) {
    return prank == L.g() || (prank == L.g() - 1 && L.p() != 2);
}

// Base CM-type and its certified orders: the first type satisfying the RRC,
// else the first Shimura-Taniyama type when R_w lifts canonically.
void choose_base(IsogenyReport& rep, const std::vector<OrderInfo>& ords) {
    const auto& L = *rep.L;
    if (rep.rrc_available) {
        for (std::size_t k = 0; k < rep.types.size(); ++k)
            if (rep.rrc[k].holds()) {
                rep.base_type = int(k);
                rep.certified = candidate_orders(L, ords, true);
                return;
            }
        if (rw_lifts(L, rep.p_rank))
            for (std::size_t k = 0; k < rep.types.size(); ++k)
                if (rep.rrc[k].st) {
                    rep.base_type = int(k);
                    rep.certified = candidate_orders(L, ords, false);
                    return;
                }
        return;
    }
    // the type of the canonical lift is unknown: use every type
    if (rw_lifts(L, rep.p_rank)) {
        rep.base_type = 0;
        rep.certified = candidate_orders(L, ords, false);
    }
}

int index_of(const std::vector<CMType>& types, const CMType& t) {
    auto it = std::lower_bound(types.begin(), types.end(), t);
    ABVAR_ASSERT(it != types.end() && *it == t, "CM-type not in the canonical list");
    return int(it - types.begin());
}

}  // namespace

IsogenyReport run_pipeline(const Etale& Lp, const PipelineConfig& cfg) {
    IsogenyReport rep;
    rep.L = Lp;
    const auto& L = *Lp;
    Lattice R = frobenius_order(L), O = maximal_order(L);
    rep.p_rank = p_rank(L.h(), L.p());
    Rat ri = lattice_index(R, O);
    rep.rw_index = ri.get_num();
    auto ords = overorders(L, R, O, cfg.max_index);
    rep.types = all_cm_types(L);
    try {
        auto m = build_matching(L, O, cfg.max_splitting_degree, cfg.precision);
        for (const auto& t : rep.types) rep.rrc.push_back(rrc(L, t, m));
        rep.rrc_available = true;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SplittingFieldTooLarge) throw;
    }
    choose_base(rep, ords);

    auto C = ClassContext::make(Lp, R, O);
    rep.context = C;
    const auto& U = *C->U;
    std::vector<std::pair<OrderInfo, OrderUnits>> S;
    for (auto it = rep.certified.rbegin(); it != rep.certified.rend(); ++it)
        S.push_back({*it, order_units(U, it->lat)});

    // orbit of the base type: the smallest G_S orbit over certified S
    if (rep.base_type >= 0) {
        if (!rep.rrc_available) {
            for (std::size_t k = 0; k < rep.types.size(); ++k) rep.orbit.push_back(int(k));
        } else {
            std::vector<int> best;
            for (const auto& [info, su] : S) {
                std::vector<RatVec> gs;
                for (const auto& c : group_GS(U, su)) gs.push_back(c.unit);
                std::vector<int> orb;
                for (const auto& t : cm_orbit(L, rep.types[rep.base_type], gs)) orb.push_back(index_of(rep.types, t));
                if (best.empty() || orb.size() < best.size()) best = orb;
            }
            // base type first
            std::stable_partition(best.begin(), best.end(), [&](int k) { return k == rep.base_type; });
            rep.orbit = best;
        }
    }

    for (const auto& info : ords) {
        OrderReport orr;
        orr.order = info;
        if (!info.conj_stable) {
            auto ideals = ideal_classes_with_ring(*C, info.lat, order_units(U, info.lat));
            for (const auto& I : ideals) orr.classes.push_back({I, std::nullopt, {}, {}});
            orr.outcome = Outcome::NotSelfDual;
            orr.counts.push_back(std::vector<int>(ideals.size(), 0));
            rep.orders.push_back(std::move(orr));
            continue;
        }
        OrderPolData pd = order_pol_data(U, info.lat);
        orr.ppav_count = pd.ppav_count;
        auto ideals = ideal_classes_with_ring(*C, info.lat, pd.units);
        bool certified = false;
        if (rep.rrc_available)
            for (const auto& [sinfo, su] : S) {
                orr.cond1 = orr.cond1 || eff_cond1(su, pd.units);
                orr.cond2 = orr.cond2 || eff_cond2(U, su, pd.transversal);
            }
        certified = orr.cond1 || orr.cond2;
        std::vector<std::vector<int>> sizes;
        for (const auto& I : ideals) {
            ClassReport cr;
            cr.ideal = I;
            cr.i0 = self_dual_witness(*C, info.lat, I);
            for (int k : rep.orbit) {
                auto P = p1_set(L, pd, cr.i0, rep.types[k]);
                cr.sizes.push_back(int(P.size()));
                if (k == rep.base_type && certified) cr.representatives = P;
            }
            sizes.push_back(cr.sizes);
            orr.classes.push_back(std::move(cr));
        }
        if (rep.base_type < 0) {
            orr.outcome = Outcome::Unknown;
        } else {
            orr.outcome = aggregate_sizes(sizes, certified, orr.counts, orr.cond5);
            if (orr.outcome == Outcome::Determined && !certified)
                for (auto& cr : orr.classes)
                    cr.representatives = p1_set(L, pd, cr.i0, rep.types[rep.base_type]);
        }
        rep.orders.push_back(std::move(orr));
    }
    return rep;
}

}  // namespace abvar
