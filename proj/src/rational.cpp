#include "logvertex/rational.hpp"

#include <stdexcept>

namespace logvertex {

std::string to_pq_string(const Rational& r) {
    Rational c = r;
    c.canonicalize();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string to_short_string(const Rational& r) {
    Rational c = r;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

namespace {

bool valid_integer(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') return false;
    return true;
}

mpz_class to_mpz(std::string_view s) {
    if (s[0] == '+') s.remove_prefix(1);
    return mpz_class(std::string(s), 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    const auto num = text.substr(0, slash);
    if (!valid_integer(num)) throw std::invalid_argument("malformed rational: " + std::string(text));
    if (slash == std::string_view::npos) return Rational(to_mpz(num));
    const auto den = text.substr(slash + 1);
    if (!valid_integer(den) || den[0] == '-' || den[0] == '+')
        throw std::invalid_argument("malformed rational: " + std::string(text));
    mpz_class d = to_mpz(den);
    if (d == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    Rational r(to_mpz(num), d);
    r.canonicalize();
    return r;
}

Rational binom(const Rational& r, int k) {
    if (k < 0) return 0;
    Rational acc = 1;
    for (int i = 0; i < k; ++i) acc *= (r - i);
    acc /= factorial(k);
    return acc;
}

Rational factorial(int n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n < 0 ? 0 : n));
    return Rational(f);
}

}  // namespace logvertex
