#include "logvertex/fock.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace logvertex {

FockMonomial::FockMonomial(int charge, Exponents exps) : charge_(charge) {
    std::sort(exps.begin(), exps.end());
    for (const auto& [level, power] : exps) {
        if (level < 1) throw std::invalid_argument("xi level must be >= 1");
        if (power < 0) throw std::invalid_argument("negative xi exponent");
        if (power == 0) continue;
        if (!exps_.empty() && exps_.back().first == level)
            exps_.back().second += power;
        else
            exps_.emplace_back(level, power);
        weight_ += level * power;
    }
}

FockMonomial FockMonomial::xi(int level, int power) { return FockMonomial(0, {{level, power}}); }

int FockMonomial::exponent(int level) const {
    auto it = std::lower_bound(exps_.begin(), exps_.end(), std::pair{level, 0});
    return (it != exps_.end() && it->first == level) ? it->second : 0;
}

FockMonomial FockMonomial::operator*(const FockMonomial& other) const {
    FockMonomial out;
    out.charge_ = charge_ + other.charge_;
    out.weight_ = weight_ + other.weight_;
    out.exps_.reserve(exps_.size() + other.exps_.size());
    auto a = exps_.begin();
    auto b = other.exps_.begin();
    while (a != exps_.end() || b != other.exps_.end()) {
        if (b == other.exps_.end() || (a != exps_.end() && a->first < b->first)) {
            out.exps_.push_back(*a++);
        } else if (a == exps_.end() || b->first < a->first) {
            out.exps_.push_back(*b++);
        } else {
            out.exps_.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    return out;
}

FockMonomial FockMonomial::with_charge(int charge) const {
    FockMonomial out = *this;
    out.charge_ = charge;
    return out;
}

FockMonomial FockMonomial::adjusted(int level, int delta) const {
    FockMonomial out = *this;
    auto it = std::lower_bound(out.exps_.begin(), out.exps_.end(), std::pair{level, 0});
    if (it != out.exps_.end() && it->first == level) {
        it->second += delta;
        if (it->second < 0) throw std::invalid_argument("negative xi exponent");
        if (it->second == 0) out.exps_.erase(it);
    } else {
        if (delta < 0) throw std::invalid_argument("negative xi exponent");
        if (delta > 0) out.exps_.insert(it, {level, delta});
    }
    out.weight_ += level * delta;
    return out;
}

std::strong_ordering operator<=>(const FockMonomial& a, const FockMonomial& b) {
    if (auto c = a.charge_ <=> b.charge_; c != 0) return c;
    if (auto c = a.weight_ <=> b.weight_; c != 0) return c;
    return a.exps_ <=> b.exps_;
}

FockVector::FockVector(const Rational& scalar) {
    add_term(FockMonomial(), scalar);
}

FockVector::FockVector(const FockMonomial& m, const Rational& c) {
    add_term(m, c);
}

Rational FockVector::coefficient(const FockMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void FockVector::add_term(const FockMonomial& m, const Rational& c) {
    // callers may pass mpq values built without canonicalize()
    Rational cc = c;
    cc.canonicalize();
    if (cc == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, cc);
    if (!inserted) {
        it->second += cc;
        if (it->second == 0) terms_.erase(it);
    }
}

int FockVector::max_weight() const {
    int w = 0;
    for (const auto& [m, c] : terms_) w = std::max(w, m.weight());
    return w;
}

int FockVector::max_level() const {
    int l = 0;
    for (const auto& [m, c] : terms_) l = std::max(l, m.max_level());
    return l;
}

FockVector& FockVector::operator+=(const FockVector& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

FockVector& FockVector::operator-=(const FockVector& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

FockVector& FockVector::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

FockVector fv_mul(const FockVector& a, const FockVector& b) {
    FockVector out;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
    return out;
}

FockVector d_xi(int level, const FockVector& v) {
    if (level < 0) throw std::invalid_argument("d_xi: negative level");
    FockVector out;
    for (const auto& [m, c] : v.terms()) {
        if (level == 0) {
            out.add_term(m, c * m.charge());
        } else if (int e = m.exponent(level); e > 0) {
            out.add_term(m.adjusted(level, -1), c * e);
        }
    }
    return out;
}

std::map<int, FockVector> charge_decompose(const FockVector& v) {
    std::map<int, FockVector> out;
    for (const auto& [m, c] : v.terms()) out[m.charge()].add_term(m, c);
    return out;
}

std::vector<FockVector> p_polynomials(int order) {
    if (order < 1) throw std::invalid_argument("p_polynomials: order must be >= 1");
    std::vector<FockVector> p(static_cast<std::size_t>(order) + 1);
    p[0] = FockVector(Rational(1));
    for (int k = 1; k <= order; ++k) {
        FockVector acc;
        for (int n = 1; n <= k; ++n) acc += fv_mul(FockVector::xi(n), p[static_cast<std::size_t>(k - n)]) * Rational(n);
        p[static_cast<std::size_t>(k)] = acc * Rational(1, k);
    }
    p.erase(p.begin());
    return p;
}

std::string render(const FockMonomial& m) {
    std::ostringstream os;
    bool first = true;
    if (m.charge() != 0) {
        os << "e(" << m.charge() << ")";
        first = false;
    }
    for (const auto& [level, power] : m.exponents()) {
        if (!first) os << "*";
        os << "xi(" << level << ")";
        if (power != 1) os << "^" << power;
        first = false;
    }
    return first ? "1" : os.str();
}

std::string render(const FockVector& v) {
    if (v.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : v.terms()) {
        Rational mag = abs(c);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        if (m.is_one()) {
            os << to_short_string(mag);
        } else {
            if (mag != 1) os << to_short_string(mag) << "*";
            os << render(m);
        }
    }
    return os.str();
}

namespace {

void partitions(int remaining, int max_part, FockMonomial::Exponents& current,
                const std::function<void(const FockMonomial::Exponents&)>& emit) {
    if (remaining == 0) {
        emit(current);
        return;
    }
    for (int part = std::min(remaining, max_part); part >= 1; --part) {
        for (int mult = 1; mult * part <= remaining; ++mult) {
            current.emplace_back(part, mult);
            partitions(remaining - mult * part, part - 1, current, emit);
            current.pop_back();
        }
    }
}

}  // namespace

std::vector<FockMonomial> basis_monomials(int max_weight, int max_charge) {
    std::vector<FockMonomial> out;
    for (int w = 0; w <= max_weight; ++w) {
        FockMonomial::Exponents cur;
        partitions(w, w, cur, [&](const FockMonomial::Exponents& e) {
            for (int q = -max_charge; q <= max_charge; ++q) out.emplace_back(q, e);
        });
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace logvertex
