#pragma once

#include <optional>
#include <string>

#include "exform/error.hpp"
#include "exform/form.hpp"
#include "exform/metric.hpp"

namespace exform {

struct ClosureCheck {
    bool closed = false;
    DifferentialForm residual;  // dw
};

inline ClosureCheck is_closed(const DifferentialForm& w) {
    ClosureCheck out;
    out.residual = exterior_derivative(w);
    out.closed = out.residual.is_zero();
    return out;
}

inline bool has_polynomial_coefficients(const DifferentialForm& w) {
    for (const auto& [I, c] : w.coefficients())
        if (!c.is_polynomial()) return false;
    return true;
}

/// Poincare-lemma homotopy operator about the origin,
///   K(a dx^{i1}^...^dx^{ip}) = sum_r (-1)^(r-1) x^{ir} [int_0^1 t^(p-1) a(tx) dt] dx^{..omit ir..},
/// for forms of degree >= 1 with polynomial coefficients. Satisfies
/// dK + Kd = identity on such forms.
inline DifferentialForm homotopy_operator(const DifferentialForm& w) {
    if (w.degree() == 0) throw DegreeError("homotopy operator needs a form of degree >= 1");
    if (!has_polynomial_coefficients(w))
        throw WitnessUndecided("coefficients are not polynomial; the radial integral may leave the rational functions");
    const auto& vars = w.variables();
    const auto shift = static_cast<std::uint32_t>(w.degree() - 1);
    DifferentialForm out(vars, w.degree() - 1);
    for (const auto& [I, a] : w.coefficients()) {
        RationalFunction radial(radial_scale_integrate(a.numerator(), shift));
        for (std::size_t r = 0; r < I.size(); ++r) {
            RationalFunction c = RationalFunction::variable(vars[I[r]]) * radial;
            out.add_term(I.without_position(r).indices(), r % 2 == 0 ? c : -c);
        }
    }
    return out;
}

/// Form theta with d(theta) = w, built by the homotopy operator. The witness
/// is the canonical one, not the unique one.
inline DifferentialForm exactness_witness(const DifferentialForm& w) {
    if (w.degree() == 0) throw DegreeError("a 0-form is never a differential");
    if (!is_closed(w).closed) throw NotClosed("form is not closed, so it has no exactness witness");
    DifferentialForm theta = homotopy_operator(w);
    if (!(exterior_derivative(theta) == w))
        throw std::logic_error("homotopy witness failed verification");
    return theta;
}

enum class Exactness { yes, no, undecided };
enum class Classification { exact, closed, unclosed };

inline const char* to_string(Exactness e) {
    switch (e) {
        case Exactness::yes: return "yes";
        case Exactness::no: return "no";
        case Exactness::undecided: return "undecided";
    }
    return "?";
}

inline const char* to_string(Classification c) {
    switch (c) {
        case Classification::exact: return "exact";
        case Classification::closed: return "closed";
        case Classification::unclosed: return "unclosed";
    }
    return "?";
}

struct ClosureReport {
    bool closed = false;
    DifferentialForm differential;
    Exactness exact = Exactness::no;
    std::optional<DifferentialForm> witness;
    std::string exactness_reason;
    std::optional<bool> dual_closed;
    std::optional<DifferentialForm> dual_residual;
    Classification classification = Classification::unclosed;
    /// Source dimension of the map when the report came from restrict_and_test.
    std::optional<std::size_t> pseudostructure_dim;
};

inline ClosureReport classify_form(const DifferentialForm& w, const std::optional<DiagonalMetric>& g = std::nullopt) {
    ClosureReport r;
    auto check = is_closed(w);
    r.closed = check.closed;
    r.differential = std::move(check.residual);
    if (!r.closed) {
        r.exact = Exactness::no;
        r.exactness_reason = "form is not closed";
    } else if (w.degree() == 0) {
        r.exact = Exactness::no;
        r.exactness_reason = "closed 0-form (constant) is not a differential";
    } else {
        try {
            r.witness = exactness_witness(w);
            r.exact = Exactness::yes;
        } catch (const WitnessUndecided& e) {
            r.exact = Exactness::undecided;
            r.exactness_reason = e.message();
        }
    }
    if (g) {
        auto dual = dual_closure_check(w, *g);
        r.dual_closed = dual.closed;
        r.dual_residual = std::move(dual.residual);
    }
    if (r.exact == Exactness::yes) {
        r.classification = Classification::exact;
    } else if (r.closed) {
        r.classification = Classification::closed;
    } else {
        r.classification = Classification::unclosed;
    }
    return r;
}

/// Pulls w back along a parametrized pseudostructure and classifies the result
/// on the source variables.
inline ClosureReport restrict_and_test(const DifferentialForm& w, const RationalMap& phi) {
    ClosureReport r = classify_form(pullback(phi, w));
    r.pseudostructure_dim = phi.source.size();
    return r;
}

}  // namespace exform
