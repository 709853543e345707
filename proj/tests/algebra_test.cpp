#include <gtest/gtest.h>

#include "exform/exform.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace exform;
using exform::testing::Generator;
using exform::testing::Point;

namespace {

RationalFunction var(const char* name) { return RationalFunction::variable(name); }
Polynomial pvar(const char* name) { return Polynomial::variable(name); }

/// Independent cross-check of equality: agreement at several random points
/// where both denominators are nonzero.
bool agree_at_points(const RationalFunction& a, const RationalFunction& b, Generator& gen, const Variables& vars) {
    int checked = 0;
    for (int tries = 0; tries < 40 && checked < 5; ++tries) {
        const Point pt = gen.point(vars);
        if (a.denominator().evaluate(pt) == 0 || b.denominator().evaluate(pt) == 0) continue;
        if (a.evaluate(pt) != b.evaluate(pt)) return false;
        ++checked;
    }
    return checked > 0;
}

}  // namespace

TEST(Polynomial, CanonicalFormDropsZeroCoefficients) {
    const auto x = pvar("x");
    const auto p = x * x + x - x * x;
    EXPECT_EQ(p.size(), 1u);
    EXPECT_EQ(p, x);
    EXPECT_TRUE((x - x).is_zero());
    EXPECT_EQ((x + Polynomial(1)).pow(2).str(), "x**2 + 2*x + 1");
}

TEST(Polynomial, RingLawsOnRandomTriples) {
    Generator gen(11);
    const Variables vars{"x", "y", "z"};
    for (int i = 0; i < 100; ++i) {
        const auto a = gen.polynomial(vars, 3), b = gen.polynomial(vars, 3), c = gen.polynomial(vars, 3);
        EXPECT_EQ(a + b, b + a);
        EXPECT_EQ(a * b, b * a);
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
    }
}

TEST(RationalFunction, CommonDenominator) {
    const auto sum = var("x") / var("y") + RationalFunction(1) / var("y");
    EXPECT_EQ(sum, (var("x") + 1) / var("y"));
    EXPECT_EQ(sum.str(), "(x + 1)/y");
}

TEST(RationalFunction, EqualityByCrossMultiplication) {
    const auto x = pvar("x");
    const RationalFunction f(x * x - Polynomial(1), x - Polynomial(1));
    const auto g = f * RationalFunction(1);
    EXPECT_EQ(g, RationalFunction(x + Polynomial(1)));
    // oracle: (x^2 - 1) = (x + 1)(x - 1) as polynomials
    EXPECT_EQ(g.numerator() * Polynomial(1), (x + Polynomial(1)) * g.denominator());
    EXPECT_NE(g, RationalFunction(x));
}

TEST(RationalFunction, DivisionByZeroThrows) {
    EXPECT_THROW(RationalFunction(1) / RationalFunction(0), DivisionByZero);
    EXPECT_THROW(RationalFunction(Polynomial(1), Polynomial()), DivisionByZero);
    EXPECT_THROW((var("x") - var("x")).pow(-1), DivisionByZero);
}

TEST(RationalFunction, FieldLawsOnRandomTriples) {
    Generator gen(12);
    const Variables vars{"x", "y"};
    for (int i = 0; i < 100; ++i) {
        const auto a = gen.coefficient(vars, 2, 0.5), b = gen.coefficient(vars, 2, 0.5),
                   c = gen.coefficient(vars, 2, 0.5);
        EXPECT_EQ((a + b) + c, a + (b + c));
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ(a - a, RationalFunction(0));
        if (!b.is_zero()) {
            EXPECT_EQ((a / b) * b, a);
            EXPECT_TRUE(agree_at_points(a / b, a * b.pow(-1), gen, vars));
        }
    }
}

TEST(RationalFunction, PartialDerivativeExamples) {
    EXPECT_EQ(partial(var("x").pow(2) * var("y"), "x", Variables{"x", "y"}), 2 * var("x") * var("y"));
    const auto R = var("R"), T = var("T"), V = var("V");
    EXPECT_EQ(partial(R * T / V, "T", Variables{"R", "T", "V"}), R / V);
    EXPECT_EQ(partial(RationalFunction(1) / var("x"), "x", Variables{"x"}), RationalFunction(-1) / var("x").pow(2));
    EXPECT_EQ(partial(var("y"), "x", Variables{"x", "y"}), RationalFunction(0));
    EXPECT_THROW(partial(var("x"), "q", Variables{"x", "y"}), UnknownVariable);
}

TEST(RationalFunction, DerivativeMatchesJetOracle) {
    Generator gen(13);
    const Variables vars{"x", "y", "z"};
    for (int i = 0; i < 100; ++i) {
        const auto f = gen.coefficient(vars, 3, 0.7);
        const Point pt = gen.point(vars);
        for (const auto& v : vars)
            EXPECT_EQ(f.derivative(v).evaluate(pt), exform::testing::partial_at(f, pt, v)) << f.str() << " d/d" << v;
    }
}

TEST(RationalFunction, MixedPartialsCommute) {
    Generator gen(14);
    const Variables vars{"x", "y"};
    for (int i = 0; i < 100; ++i) {
        const auto f = gen.coefficient(vars, 3, 0.8) * gen.coefficient(vars, 2, 1.0);
        EXPECT_EQ(f.derivative("x").derivative("y"), f.derivative("y").derivative("x")) << f.str();
    }
}

TEST(RationalFunction, DerivativeIsLinearAndSatisfiesProductRule) {
    Generator gen(15);
    const Variables vars{"x", "y"};
    for (int i = 0; i < 100; ++i) {
        const auto f = gen.coefficient(vars, 3, 0.5), g = gen.coefficient(vars, 3, 0.5);
        const auto c = gen.rational();
        EXPECT_EQ((f + RationalFunction(c) * g).derivative("x"), f.derivative("x") + RationalFunction(c) * g.derivative("x"));
        EXPECT_EQ((f * g).derivative("y"), f.derivative("y") * g + f * g.derivative("y"));
    }
}

TEST(RationalFunction, Evaluate) {
    EXPECT_EQ((var("x") + var("y")).evaluate(Point{{"x", 1}, {"y", 2}}), 3);
    EXPECT_THROW((RationalFunction(1) / var("x")).evaluate(Point{{"x", 0}}), PoleAtPoint);
    const auto x = pvar("x");
    const RationalFunction f(x * x - Polynomial(1), x - Polynomial(1));
    // oracle: numerator and denominator evaluated separately, 3 / 1
    EXPECT_EQ(x.pow(2).evaluate(Point{{"x", 2}}) - 1, 3);
    EXPECT_EQ(f.evaluate(Point{{"x", 2}}), 3);
    EXPECT_THROW(var("x").evaluate(Point{{"y", 1}}), UnknownVariable);
}

TEST(RationalFunction, SubstitutionIsSimultaneous) {
    const auto f = var("x") - var("y");
    const auto g = f.substitute(std::map<std::string, RationalFunction>{{"x", var("y")}, {"y", var("x")}});
    EXPECT_EQ(g, var("y") - var("x"));
}

TEST(RationalFunction, RenderingIsCanonical) {
    EXPECT_EQ((RationalFunction(Rational(3, 2)) * var("x") / (var("y") * var("z"))).str(), "3/2*x/(y*z)");
    EXPECT_EQ((var("T") / var("V")).str(), "T/V");
    EXPECT_EQ(RationalFunction(0).str(), "0");
    EXPECT_EQ((RationalFunction(2) * var("x") / (RationalFunction(4) * var("x"))).str(), "1/2");
}

TEST(RadialScaleIntegrate, Examples) {
    EXPECT_EQ(radial_scale_integrate(Polynomial(1), 0), Polynomial(1));
    const auto x = pvar("x"), y = pvar("y");
    EXPECT_EQ(radial_scale_integrate(x * x * y, 1), Rational(1, 5) * (x * x * y));
    EXPECT_EQ(radial_scale_integrate(x + y, 0), Rational(1, 2) * (x + y));
}

TEST(RadialScaleIntegrate, MonomialExhaustive) {
    // Oracle: substitute x -> t x, multiply by t^s and integrate term-wise in t:
    // the integrand is c t^{d+s}, whose integral over [0, 1] is c / (d+s+1).
    const Variables vars{"x", "y", "z"};
    for (std::uint32_t d = 0; d <= 6; ++d) {
        for (std::uint32_t s = 0; s <= 6; ++s) {
            for (std::uint32_t a = 0; a <= d; ++a) {
                for (std::uint32_t b = 0; a + b <= d; ++b) {
                    Monomial m;
                    for (std::uint32_t k = 0; k < a; ++k) m = m * Monomial::variable("x");
                    for (std::uint32_t k = 0; k < b; ++k) m = m * Monomial::variable("y");
                    for (std::uint32_t k = 0; k < d - a - b; ++k) m = m * Monomial::variable("z");
                    const auto p = Polynomial::term(m, 1);
                    RationalFunction scaled = RationalFunction(p).substitute(std::map<std::string, RationalFunction>
                        {{"x", var("t") * var("x")}, {"y", var("t") * var("y")}, {"z", var("t") * var("z")}});
                    Polynomial integrand = scaled.numerator() * Polynomial::variable("t").pow(s);
                    Polynomial integral;
                    for (const auto& [mono, c] : integrand.terms()) {
                        Monomial rest;
                        std::uint32_t te = 0;
                        for (const auto& [v, e] : mono.factors()) {
                            if (v == "t") te = e;
                            else
                                for (std::uint32_t k = 0; k < e; ++k) rest = rest * Monomial::variable(v);
                        }
                        integral += Polynomial::term(rest, c / Rational(te + 1));
                    }
                    ASSERT_EQ(radial_scale_integrate(p, s), integral) << p.str() << " shift " << s;
                }
            }
        }
    }
}

TEST(RadialScaleIntegrate, IsLinear) {
    Generator gen(16);
    const Variables vars{"x", "y"};
    for (int i = 0; i < 50; ++i) {
        const auto a = gen.polynomial(vars, 4), b = gen.polynomial(vars, 4);
        const auto c = gen.rational();
        const std::uint32_t s = static_cast<std::uint32_t>(gen.integer(0, 3));
        EXPECT_EQ(radial_scale_integrate(a + c * b, s), radial_scale_integrate(a, s) + c * radial_scale_integrate(b, s));
    }
}
