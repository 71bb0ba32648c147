#include "abvar/orders.hpp"

namespace abvar {

Lattice frobenius_order(const EtaleAlgebra& L) { return order_generated(L.alg(), {L.pi(), L.vbar()}); }

Lattice maximal_order(const EtaleAlgebra& L) { return maximal_order_of(L.alg(), frobenius_order(L)); }

Lattice conjugate(const EtaleAlgebra& L, const Lattice& a) { return lattice_image(a, L.involution()); }

Lattice conductor(const NumberAlgebra& alg, const Lattice& order, const Lattice& top) {
    return lattice_colon(alg, order, top);
}

std::vector<OrderInfo> overorders(const EtaleAlgebra& L, const Lattice& R, const Lattice& O, const Int& max_index) {
    std::vector<OrderInfo> out;
    for (auto& t : intermediate_orders(L.alg(), R, O, max_index)) {
        OrderInfo info;
        info.index = lattice_index(t, O).get_num();
        info.gorenstein = is_gorenstein(L.alg(), t);
        info.conj_stable = conjugate(L, t) == t;
        info.lat = std::move(t);
        out.push_back(std::move(info));
    }
    return out;
}

}  // namespace abvar
