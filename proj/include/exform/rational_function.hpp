#pragma once

#include <algorithm>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "exform/error.hpp"
#include "exform/polynomial.hpp"

namespace exform {

/// Exact multivariate rational function numerator/denominator.
///
/// Normal form, applied after every operation:
///   - zero is 0/1;
///   - monomial factors common to numerator and denominator are cancelled;
///   - a constant denominator is folded into the numerator;
///   - otherwise both sides are scaled so the denominator's leading
///     coefficient (graded-lex) is 1;
///   - a numerator that is a scalar multiple of the denominator collapses to
///     that scalar.
/// There is no polynomial gcd, so two equal functions may still differ in
/// representation; operator== decides equality by cross-multiplication.
class RationalFunction {
public:
    RationalFunction() : den_(1) {}
    RationalFunction(const Rational& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
    RationalFunction(long c) : RationalFunction(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    RationalFunction(Polynomial p) : num_(std::move(p)), den_(1) {}  // NOLINT(google-explicit-constructor)

    RationalFunction(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw DivisionByZero("rational function with zero denominator");
        normalize();
    }

    static RationalFunction variable(const std::string& name) { return Polynomial::variable(name); }

    const Polynomial& numerator() const noexcept { return num_; }
    const Polynomial& denominator() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_polynomial() const noexcept { return den_.is_constant(); }
    bool is_constant() const noexcept { return num_.is_constant() && den_.is_constant(); }

    Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }

    std::set<std::string> variables() const {
        auto vars = num_.variables();
        auto d = den_.variables();
        vars.insert(d.begin(), d.end());
        return vars;
    }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return a + (-b);
    }
    friend RationalFunction operator-(RationalFunction a) {
        a.num_ = -a.num_;
        return a;
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.is_polynomial() && b.is_polynomial()) return RationalFunction(a.num_ * b.num_);
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.is_zero()) throw DivisionByZero("division by the zero rational function");
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }

    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

    /// Integer power; negative exponents invert (zero base raises DivisionByZero).
    RationalFunction pow(long e) const {
        if (e < 0) return RationalFunction(1) / pow(-e);
        return RationalFunction(num_.pow(static_cast<std::uint32_t>(e)), den_.pow(static_cast<std::uint32_t>(e)));
    }

    /// Quotient-rule partial derivative. Variables absent from the function
    /// differentiate to zero.
    RationalFunction derivative(std::string_view var) const {
        if (is_polynomial()) return RationalFunction(num_.derivative(var) * (1 / den_.constant_value()));
        Polynomial dn = num_.derivative(var);
        Polynomial dd = den_.derivative(var);
        if (dd.is_zero()) return RationalFunction(dn, den_);
        return RationalFunction(dn * den_ - num_ * dd, den_ * den_);
    }

    template <typename Point>
    Rational evaluate(const Point& point) const {
        Rational d = den_.evaluate(point);
        if (d == 0) throw PoleAtPoint("denominator vanishes at the evaluation point");
        return num_.evaluate(point) / d;
    }

    /// Simultaneous substitution of every variable named in `values`.
    /// Variables not in the map are left as they are.
    template <typename Values>
    RationalFunction substitute(const Values& values) const {
        return substitute_poly(num_, values) / substitute_poly(den_, values);
    }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        if (a.den_ == b.den_) return a.num_ == b.num_;
        return a.num_ * b.den_ == b.num_ * a.den_;
    }

    /// Text in .form coefficient syntax. The result is a single product-level
    /// expression only when the numerator is a single term or the function has
    /// a denominator; callers needing a factor should use `is_sum()`.
    std::string str() const {
        if (is_polynomial()) return num_.str();
        std::string n = num_.size() > 1 ? "(" + num_.str() + ")" : num_.str();
        return n + "/" + denominator_str();
    }

    /// True when str() has a top-level + or - between terms.
    bool is_sum() const noexcept { return is_polynomial() && num_.size() > 1; }

private:
    std::string denominator_str() const {
        const auto& [m, c] = den_.leading();
        if (den_.size() == 1 && c == 1 && m.factors().size() == 1) return m.str();
        return "(" + den_.str() + ")";
    }

    template <typename Values>
    static RationalFunction substitute_poly(const Polynomial& p, const Values& values) {
        RationalFunction sum;
        std::map<std::pair<std::string, std::uint32_t>, RationalFunction> powers;
        for (const auto& [m, c] : p.terms()) {
            RationalFunction t(c);
            Polynomial kept = Polynomial::term(Monomial{}, 1);
            for (const auto& [var, e] : m.factors()) {
                auto it = values.find(var);
                if (it == values.end()) {
                    kept *= Polynomial::term(Monomial::variable(var, e), 1);
                    continue;
                }
                auto key = std::make_pair(var, e);
                auto cached = powers.find(key);
                if (cached == powers.end())
                    cached = powers.emplace(key, RationalFunction(it->second).pow(e)).first;
                t *= cached->second;
            }
            sum += t * RationalFunction(kept);
        }
        return sum;
    }

    void normalize() {
        if (num_.is_zero()) {
            den_ = Polynomial(1);
            return;
        }
        if (!den_.is_constant()) {
            Monomial g = gcd(num_.monomial_content(), den_.monomial_content());
            if (!g.is_one()) {
                num_ = num_.divided_by_monomial(g);
                den_ = den_.divided_by_monomial(g);
            }
        }
        if (den_.is_constant()) {
            num_ *= Rational(1 / den_.constant_value());
            den_ = Polynomial(1);
            return;
        }
        const Rational lc = den_.leading().second;
        if (lc != 1) {
            const Rational inv = 1 / lc;
            num_ *= inv;
            den_ *= inv;
        }
        if (num_.size() == den_.size()) {
            const Rational ratio = num_.leading().second;
            if (num_.leading().first == den_.leading().first && num_ == den_ * ratio) {
                num_ = Polynomial(ratio);
                den_ = Polynomial(1);
            }
        }
    }

    Polynomial num_;
    Polynomial den_;
};

/// Partial derivative checked against an ambient variable list.
inline RationalFunction partial(const RationalFunction& f, std::string_view var,
                                std::span<const std::string> ambient) {
    if (std::find(ambient.begin(), ambient.end(), var) == ambient.end())
        throw UnknownVariable("variable '" + std::string(var) + "' is not in the variable list");
    return f.derivative(var);
}

}  // namespace exform
