#pragma once

#include <string>

#include "abvar/poly.hpp"

namespace abvar {

/// A Weil polynomial input: h = x^{2g} + a_1 x^{2g-1} + ... + q^g.
struct WeilInput {
    int g = 0;
    Int q;
    std::vector<Int> a;  // a_1 .. a_g
    RatPoly h;
};

/// "g.q.c1_..._cg" with base-26 coefficient words (a = 0, ..., z = 25, most
/// significant first, a leading 'a' marks a negative value). Throws BadLabel,
/// or NonPrimeField when q is not prime.
WeilInput parse_label(const std::string& s);
std::string format_label(int g, const Int& q, const std::vector<Int>& a);
/// Label of a polynomial satisfying the functional equation.
std::string format_label(const RatPoly& h, const Int& q);

std::string encode_coefficient(const Int& v);
Int decode_coefficient(const std::string& w);

/// Full polynomial from a_1..a_g via a_{g+i} = q^i a_{g-i}.
RatPoly weil_from_coefficients(int g, const Int& q, const std::vector<Int>& a);

/// "c_0 c_1 ... c_n p=<prime>" (coefficients low to high). Throws BadLabel.
WeilInput parse_poly_line(const std::string& line);
std::string format_poly_line(const RatPoly& h, const Int& p);

/// A label, a polynomial line, or a path to a file holding one polynomial line.
WeilInput parse_input(const std::string& arg);

}  // namespace abvar
