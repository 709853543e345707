#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "exform/error.hpp"

namespace exform {

using Rational = mpq_class;

/// Canonical string for an exact rational ("3/2", "-1", "0").
inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Product of variable powers with positive exponents. Factors are kept sorted
/// by variable name; zero exponents are never stored.
class Monomial {
public:
    using Factor = std::pair<std::string, std::uint32_t>;

    Monomial() = default;

    static Monomial variable(std::string name, std::uint32_t exponent = 1) {
        Monomial m;
        if (exponent > 0) m.factors_.emplace_back(std::move(name), exponent);
        return m;
    }

    const std::vector<Factor>& factors() const noexcept { return factors_; }
    bool is_one() const noexcept { return factors_.empty(); }

    std::uint32_t total_degree() const noexcept {
        std::uint32_t d = 0;
        for (const auto& f : factors_) d += f.second;
        return d;
    }

    std::uint32_t exponent(std::string_view var) const noexcept {
        auto it = std::lower_bound(factors_.begin(), factors_.end(), var,
                                   [](const Factor& f, std::string_view v) { return f.first < v; });
        return (it != factors_.end() && it->first == var) ? it->second : 0;
    }

    /// Returns this monomial with the exponent of `var` replaced.
    Monomial with_exponent(std::string_view var, std::uint32_t exponent) const {
        Monomial m;
        bool placed = false;
        for (const auto& f : factors_) {
            if (!placed && f.first >= var) {
                if (exponent > 0) m.factors_.emplace_back(std::string(var), exponent);
                placed = true;
                if (f.first == var) continue;
            }
            m.factors_.push_back(f);
        }
        if (!placed && exponent > 0) m.factors_.emplace_back(std::string(var), exponent);
        return m;
    }

    friend Monomial operator*(const Monomial& a, const Monomial& b) {
        Monomial m;
        m.factors_.reserve(a.factors_.size() + b.factors_.size());
        auto i = a.factors_.begin();
        auto j = b.factors_.begin();
        while (i != a.factors_.end() || j != b.factors_.end()) {
            if (j == b.factors_.end() || (i != a.factors_.end() && i->first < j->first)) {
                m.factors_.push_back(*i++);
            } else if (i == a.factors_.end() || j->first < i->first) {
                m.factors_.push_back(*j++);
            } else {
                m.factors_.emplace_back(i->first, i->second + j->second);
                ++i;
                ++j;
            }
        }
        return m;
    }

    /// Componentwise minimum of exponents (the monomial gcd).
    friend Monomial gcd(const Monomial& a, const Monomial& b) {
        Monomial m;
        auto i = a.factors_.begin();
        auto j = b.factors_.begin();
        while (i != a.factors_.end() && j != b.factors_.end()) {
            if (i->first < j->first) {
                ++i;
            } else if (j->first < i->first) {
                ++j;
            } else {
                m.factors_.emplace_back(i->first, std::min(i->second, j->second));
                ++i;
                ++j;
            }
        }
        return m;
    }

    /// Exact quotient; `divisor` must divide this monomial.
    Monomial divided_by(const Monomial& divisor) const {
        Monomial m;
        for (const auto& f : factors_) {
            const auto e = f.second - divisor.exponent(f.first);
            if (e > 0) m.factors_.emplace_back(f.first, e);
        }
        return m;
    }

    bool operator==(const Monomial&) const = default;

    /// Graded lexicographic order over variable names: higher total degree
    /// first, then the first variable (alphabetically) with a larger exponent.
    friend bool grlex_greater(const Monomial& a, const Monomial& b) {
        const auto da = a.total_degree();
        const auto db = b.total_degree();
        if (da != db) return da > db;
        auto i = a.factors_.begin();
        auto j = b.factors_.begin();
        while (i != a.factors_.end() && j != b.factors_.end()) {
            if (i->first != j->first) return i->first < j->first;
            if (i->second != j->second) return i->second > j->second;
            ++i;
            ++j;
        }
        return i != a.factors_.end() && j == b.factors_.end();
    }

    std::string str() const {
        std::string out;
        for (const auto& [var, e] : factors_) {
            if (!out.empty()) out += '*';
            out += var;
            if (e != 1) out += "**" + std::to_string(e);
        }
        return out;
    }

private:
    std::vector<Factor> factors_;
};

struct MonomialOrder {
    bool operator()(const Monomial& a, const Monomial& b) const { return grlex_greater(a, b); }
};

/// Multivariate polynomial with exact rational coefficients. Terms iterate
/// from the leading (graded-lex largest) monomial downwards; no zero
/// coefficients are stored.
class Polynomial {
public:
    using Terms = std::map<Monomial, Rational, MonomialOrder>;

    Polynomial() = default;
    Polynomial(const Rational& c) {  // NOLINT(google-explicit-constructor)
        if (c != 0) terms_.emplace(Monomial{}, c);
    }
    Polynomial(long c) : Polynomial(Rational(c)) {}  // NOLINT(google-explicit-constructor)

    static Polynomial variable(const std::string& name) { return term(Monomial::variable(name), 1); }

    static Polynomial term(const Monomial& m, const Rational& c) {
        Polynomial p;
        if (c != 0) p.terms_.emplace(m, c);
        return p;
    }

    const Terms& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    bool is_constant() const noexcept {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
    }

    Rational constant_value() const {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// Leading term under graded-lex order; zero polynomial has none.
    const std::pair<const Monomial, Rational>& leading() const { return *terms_.begin(); }

    std::uint32_t total_degree() const noexcept {
        std::uint32_t d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
        return d;
    }

    std::set<std::string> variables() const {
        std::set<std::string> out;
        for (const auto& [m, c] : terms_)
            for (const auto& f : m.factors()) out.insert(f.first);
        return out;
    }

    /// Gcd of all monomials (the largest monomial dividing every term).
    Monomial monomial_content() const {
        if (terms_.empty()) return {};
        Monomial g = terms_.begin()->first;
        for (const auto& [m, c] : terms_) g = gcd(g, m);
        return g;
    }

    Polynomial divided_by_monomial(const Monomial& m) const {
        Polynomial p;
        for (const auto& [mono, c] : terms_) p.terms_.emplace(mono.divided_by(m), c);
        return p;
    }

    Polynomial& operator+=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) accumulate(m, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        for (const auto& [m, c] : o.terms_) accumulate(m, -c);
        return *this;
    }
    Polynomial& operator*=(const Rational& s) {
        if (s == 0) {
            terms_.clear();
        } else {
            for (auto& [m, c] : terms_) c *= s;
        }
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator-(Polynomial a) {
        for (auto& [m, c] : a.terms_) c = -c;
        return a;
    }
    friend Polynomial operator*(Polynomial a, const Rational& s) { return a *= s; }
    friend Polynomial operator*(const Rational& s, Polynomial a) { return a *= s; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial p;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) p.accumulate(ma * mb, ca * cb);
        return p;
    }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

    Polynomial pow(std::uint32_t e) const {
        Polynomial result(1);
        Polynomial base = *this;
        while (e > 0) {
            if (e & 1u) result *= base;
            e >>= 1;
            if (e > 0) base *= base;
        }
        return result;
    }

    Polynomial derivative(std::string_view var) const {
        Polynomial p;
        for (const auto& [m, c] : terms_) {
            const auto e = m.exponent(var);
            if (e == 0) continue;
            p.accumulate(m.with_exponent(var, e - 1), c * e);
        }
        return p;
    }

    /// Exact value at a point; every variable present must be assigned.
    template <typename Point>
    Rational evaluate(const Point& point) const {
        Rational sum = 0;
        for (const auto& [m, c] : terms_) {
            Rational v = c;
            for (const auto& [var, e] : m.factors()) {
                auto it = point.find(var);
                if (it == point.end()) throw UnknownVariable("no value for variable '" + var + "'");
                for (std::uint32_t k = 0; k < e; ++k) v *= it->second;
            }
            sum += v;
        }
        return sum;
    }

    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }

    /// Text in .form coefficient syntax, e.g. "x**2*y - 3/2*x + 1".
    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            Rational mag = abs(c);
            std::string body;
            if (m.is_one()) {
                body = to_string(mag);
            } else if (mag == 1) {
                body = m.str();
            } else {
                body = to_string(mag) + "*" + m.str();
            }
            if (first) {
                out = (c < 0 ? "-" : "") + body;
            } else {
                out += (c < 0 ? " - " : " + ") + body;
            }
            first = false;
        }
        return out;
    }

private:
    void accumulate(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Terms terms_;
};

/// Computes the integral over t in [0, 1] of t^shift * p(t*x): a monomial of
/// total degree d is divided by d + shift + 1. This is the radial kernel of the
/// Poincare-lemma homotopy operator.
inline Polynomial radial_scale_integrate(const Polynomial& p, std::uint32_t degree_shift) {
    Polynomial out;
    for (const auto& [m, c] : p.terms())
        out += Polynomial::term(m, c / Rational(m.total_degree() + degree_shift + 1));
    return out;
}

}  // namespace exform
