#include "abvar/label.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace abvar {

namespace {

Int ipow(const Int& b, unsigned e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

bool is_prime_power(const Int& q) {
    if (q < 2) return false;
    for (unsigned k = 1; k < 64; ++k) {
        Int r;
        if (mpz_root(r.get_mpz_t(), q.get_mpz_t(), k) && is_prime(r)) return true;
        if (r < 2) break;
    }
    return false;
}

Int parse_int(const std::string& s, const std::string& what) {
    Int v;
    if (s.empty() || v.set_str(s, 10) != 0) fail(ErrorKind::BadLabel, "bad " + what + " '" + s + "'");
    return v;
}

}  // namespace

std::string encode_coefficient(const Int& v) {
    if (v == 0) return "a";
    Int m = abs(v);
    std::string digits;
    while (m > 0) {
        Int d = m % 26;
        digits.insert(digits.begin(), char('a' + d.get_si()));
        m /= 26;
    }
    return v < 0 ? "a" + digits : digits;
}

Int decode_coefficient(const std::string& w) {
    if (w.empty()) fail(ErrorKind::BadLabel, "empty coefficient word");
    for (char c : w)
        if (c < 'a' || c > 'z') fail(ErrorKind::BadLabel, "coefficient word '" + w + "' is not in a-z");
    if (w == "a") return 0;
    bool neg = w[0] == 'a';
    std::string digits = neg ? w.substr(1) : w;
    if (digits[0] == 'a') fail(ErrorKind::BadLabel, "coefficient word '" + w + "' has a leading zero");
    Int v = 0;
    for (char c : digits) v = v * 26 + (c - 'a');
    return neg ? Int(-v) : v;
}

RatPoly weil_from_coefficients(int g, const Int& q, const std::vector<Int>& a) {
    ABVAR_ASSERT(int(a.size()) == g, "coefficient count");
    // c[k] = coefficient of x^{2g-k}
    std::vector<Int> c(2 * g + 1);
    c[0] = 1;
    for (int i = 1; i <= g; ++i) c[i] = a[i - 1];
    for (int i = 1; i <= g; ++i) c[g + i] = ipow(q, unsigned(i)) * c[g - i];
    std::vector<Rat> low(2 * g + 1);
    for (int k = 0; k <= 2 * g; ++k) low[2 * g - k] = Rat(c[k]);
    return RatPoly(low);
}

WeilInput parse_label(const std::string& s) {
    auto d1 = s.find('.'), d2 = d1 == std::string::npos ? d1 : s.find('.', d1 + 1);
    if (d2 == std::string::npos) fail(ErrorKind::BadLabel, "label '" + s + "' is not of the form g.q.coefficients");
    WeilInput w;
    Int g = parse_int(s.substr(0, d1), "dimension");
    if (g < 1 || g > 64) fail(ErrorKind::BadLabel, "dimension out of range in '" + s + "'");
    w.g = int(g.get_si());
    w.q = parse_int(s.substr(d1 + 1, d2 - d1 - 1), "field size");
    if (!is_prime(w.q)) {
        if (is_prime_power(w.q))
            fail(ErrorKind::NonPrimeField, "q = " + w.q.get_str() +
                                               " is a proper prime power; the ideal description of the "
                                               "isogeny class used here holds over prime fields F_p only");
        fail(ErrorKind::BadLabel, "q = " + w.q.get_str() + " is not a prime power");
    }
    std::string rest = s.substr(d2 + 1);
    std::stringstream ss(rest);
    std::string word;
    while (std::getline(ss, word, '_')) w.a.push_back(decode_coefficient(word));
    if (int(w.a.size()) != w.g) fail(ErrorKind::BadLabel, "label '" + s + "' needs " + g.get_str() + " coefficients");
    w.h = weil_from_coefficients(w.g, w.q, w.a);
    return w;
}

std::string format_label(int g, const Int& q, const std::vector<Int>& a) {
    std::string s = std::to_string(g) + "." + q.get_str() + ".";
    for (std::size_t i = 0; i < a.size(); ++i) s += (i ? "_" : "") + encode_coefficient(a[i]);
    return s;
}

std::string format_label(const RatPoly& h, const Int& q) {
    int n = int(h.degree());
    if (n % 2) fail(ErrorKind::BadLabel, "odd degree polynomial has no label");
    int g = n / 2;
    std::vector<Int> a;
    for (int i = 1; i <= g; ++i) a.push_back(h.coeff(n - i).get_num());
    if (weil_from_coefficients(g, q, a) != h) fail(ErrorKind::BadLabel, "polynomial fails the functional equation");
    return format_label(g, q, a);
}

WeilInput parse_poly_line(const std::string& line) {
    std::stringstream ss(line);
    std::string tok;
    std::vector<Rat> c;
    std::optional<Int> p;
    while (ss >> tok) {
        if (tok.rfind("p=", 0) == 0) p = parse_int(tok.substr(2), "prime");
        else if (p) fail(ErrorKind::BadLabel, "coefficients after p=");
        else c.push_back(Rat(parse_int(tok, "coefficient")));
    }
    if (!p) fail(ErrorKind::BadLabel, "polynomial line lacks p=<prime>");
    if (!is_prime(*p)) fail(ErrorKind::NonPrimeField, "p = " + p->get_str() + " is not prime");
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.size() < 2) fail(ErrorKind::BadLabel, "polynomial line needs a non-constant polynomial");
    WeilInput w;
    w.q = *p;
    w.h = RatPoly(c);
    w.g = int(w.h.degree()) / 2;
    for (int i = 1; i <= w.g; ++i) w.a.push_back(w.h.coeff(w.h.degree() - i).get_num());
    return w;
}

std::string format_poly_line(const RatPoly& h, const Int& p) {
    std::string s;
    for (long i = 0; i <= h.degree(); ++i) s += h.coeff(i).get_str() + " ";
    return s + "p=" + p.get_str();
}

WeilInput parse_input(const std::string& arg) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) {
        std::ifstream in(arg);
        std::string line;
        while (std::getline(in, line))
            if (line.find_first_not_of(" \t\r") != std::string::npos) return parse_poly_line(line);
        fail(ErrorKind::BadLabel, "file " + arg + " holds no polynomial");
    }
    if (arg.find("p=") != std::string::npos) return parse_poly_line(arg);
    return parse_label(arg);
}

}  // namespace abvar
