#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "exform/closure.hpp"
#include "exform/error.hpp"
#include "exform/form.hpp"
#include "exform/linear_algebra.hpp"

namespace exform {

/// Torsion 2-forms T^a = d(dx^a) describing an unclosed metric form. A variable
/// without an entry has T^a = 0; all-zero torsion is the ordinary manifold.
struct StructureCoefficients {
    std::map<std::string, DifferentialForm> torsion;

    bool is_zero() const {
        return std::all_of(torsion.begin(), torsion.end(), [](const auto& kv) { return kv.second.is_zero(); });
    }
};

/// d_ev w = dw + sum_I a_I sum_r (-1)^(r-1) dx^{a1} ^ ... ^ T^{ar} ^ ... ^ dx^{ap}.
inline DifferentialForm evolutionary_differential(const DifferentialForm& w, const StructureCoefficients& T) {
    const auto& vars = w.variables();
    for (const auto& [var, t] : T.torsion) {
        if (std::find(vars.begin(), vars.end(), var) == vars.end())
            throw VariableMismatch("torsion given for '" + var + "', which is not a variable of the form");
        if (t.variables() != vars) throw VariableMismatch("torsion form for '" + var + "' uses a different variable list");
        if (t.degree() != 2) throw DegreeError("torsion form for '" + var + "' must have degree 2");
    }

    DifferentialForm out = exterior_derivative(w);
    for (const auto& [I, a] : w.coefficients()) {
        for (std::size_t r = 0; r < I.size(); ++r) {
            auto it = T.torsion.find(vars[I[r]]);
            if (it == T.torsion.end() || it->second.is_zero()) continue;
            DifferentialForm term = DifferentialForm::scalar(vars, a);
            for (std::size_t s = 0; s < I.size() && !term.is_zero(); ++s)
                term = wedge(term, s == r ? it->second : DifferentialForm::differential(vars, vars[I[s]]));
            if (term.is_zero()) continue;
            if (r % 2 == 0) {
                out += term;
            } else {
                out -= term;
            }
        }
    }
    return out;
}

/// dpsi = omega^p assembled from balance-law coefficients. psi is a symbol
/// only; it is never given a value.
struct EvolutionaryRelation {
    std::string psi;
    DifferentialForm omega;

    std::size_t degree() const noexcept { return omega.degree(); }
};

inline constexpr std::size_t kMaxRelationDegree = 3;

inline EvolutionaryRelation build_evolutionary_relation(std::string psi, DifferentialForm omega) {
    if (omega.degree() > kMaxRelationDegree)
        throw DegreeError("evolutionary relations have degree 0..3, got " + std::to_string(omega.degree()));
    return {std::move(psi), std::move(omega)};
}

/// Coefficients are listed in lexicographic multi-index order over the
/// coordinates: one scalar for p = 0, A_mu per coordinate for p = 1, and the
/// C(n, p) components of the p-form for p = 2, 3.
inline EvolutionaryRelation build_evolutionary_relation(std::string psi, const Variables& coordinates,
                                                        const std::vector<RationalFunction>& coefficients,
                                                        std::size_t p) {
    if (p > kMaxRelationDegree) throw DegreeError("evolutionary relations have degree 0..3, got " + std::to_string(p));
    const auto basis = basis_indices(coordinates.size(), p);
    if (basis.size() != coefficients.size())
        throw VariableMismatch("expected " + std::to_string(basis.size()) + " coefficients for a " +
                               std::to_string(p) + "-form on " + std::to_string(coordinates.size()) +
                               " coordinates, got " + std::to_string(coefficients.size()));
    DifferentialForm omega(coordinates, p);
    for (std::size_t k = 0; k < basis.size(); ++k) omega.add_term(basis[k].indices(), coefficients[k]);
    return {std::move(psi), std::move(omega)};
}

struct NonidentityReport {
    /// Commutator matrix; present for 1-forms. For higher degrees the
    /// residual's coefficients carry the same information.
    std::optional<CommutatorMatrix> commutator;
    bool identical = false;
    /// d_ev omega (plain d omega without torsion).
    DifferentialForm internal_force_measure;
    bool torsion_applied = false;
};

inline NonidentityReport nonidentity_report(const EvolutionaryRelation& rel,
                                            const std::optional<StructureCoefficients>& T = std::nullopt) {
    NonidentityReport r;
    r.torsion_applied = T.has_value();
    r.internal_force_measure = T ? evolutionary_differential(rel.omega, *T) : exterior_derivative(rel.omega);
    r.identical = r.internal_force_measure.is_zero();
    if (rel.degree() == 1) {
        const std::size_t n = rel.omega.dimension();
        CommutatorMatrix K(n, std::vector<RationalFunction>(n));
        for (const auto& [I, c] : r.internal_force_measure.coefficients()) {
            K[I[0]][I[1]] = c;
            K[I[1]][I[0]] = -c;
        }
        r.commutator = std::move(K);
    }
    return r;
}

/// w ^ dw == 0, the integrability condition for a 1-form.
inline bool frobenius_test(const DifferentialForm& w) {
    if (w.degree() != 1) throw DegreeError("Frobenius test needs a 1-form, got degree " + std::to_string(w.degree()));
    return wedge(w, exterior_derivative(w)).is_zero();
}

enum class FactorOutcome { found, frobenius_fails, not_found_within_ansatz };

inline const char* to_string(FactorOutcome o) {
    switch (o) {
        case FactorOutcome::found: return "found";
        case FactorOutcome::frobenius_fails: return "FrobeniusFails";
        case FactorOutcome::not_found_within_ansatz: return "NotFoundWithinAnsatz";
    }
    return "?";
}

struct IntegratingFactorResult {
    FactorOutcome outcome = FactorOutcome::not_found_within_ansatz;
    std::optional<RationalFunction> factor;
    /// "closed", "monomial" or "linear-combination" when found.
    std::string stage;
    std::string reason;
};

inline constexpr int kDefaultExponentBound = 3;

namespace detail {

/// Exponent vectors in [-E, E]^n ordered by sum of |e_i|, then
/// lexicographically.
inline std::vector<std::vector<int>> laurent_exponents(std::size_t n, int E, bool total_bound) {
    std::vector<std::vector<int>> out;
    std::vector<int> e(n, -E);
    while (true) {
        int weight = 0;
        for (int v : e) weight += std::abs(v);
        if (!total_bound || weight <= E) out.push_back(e);
        std::size_t k = n;
        while (k > 0 && e[k - 1] == E) e[--k] = -E;
        if (k == 0) break;
        ++e[k - 1];
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        int wa = 0, wb = 0;
        for (int v : a) wa += std::abs(v);
        for (int v : b) wb += std::abs(v);
        if (wa != wb) return wa < wb;
        return a < b;
    });
    return out;
}

inline RationalFunction laurent_monomial(const Variables& vars, const std::vector<int>& e) {
    Monomial num, den;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (e[i] > 0) num = num * Monomial::variable(vars[i], static_cast<std::uint32_t>(e[i]));
        if (e[i] < 0) den = den * Monomial::variable(vars[i], static_cast<std::uint32_t>(-e[i]));
    }
    return RationalFunction(Polynomial::term(num, 1), Polynomial::term(den, 1));
}

inline bool closes(const RationalFunction& mu, const DifferentialForm& w) {
    return exterior_derivative(mu * w).is_zero();
}

}  // namespace detail

/// Searches mu with d(mu w) = 0. Stage 1 tries Laurent monomials
/// prod x_i^{e_i}, e_i in [-E, E]; stage 2 solves for rational linear
/// combinations of the Laurent monomials with sum |e_i| <= E. Any returned mu
/// has been verified exactly.
inline IntegratingFactorResult integrating_factor_search(const DifferentialForm& w,
                                                         int exponent_bound = kDefaultExponentBound) {
    if (w.degree() != 1) throw DegreeError("integrating factor search needs a 1-form");
    if (exponent_bound < 1) throw ParameterError("exponent bound must be at least 1");
    IntegratingFactorResult res;
    if (is_closed(w).closed) {
        res.outcome = FactorOutcome::found;
        res.factor = RationalFunction(1);
        res.stage = "closed";
        return res;
    }
    if (!frobenius_test(w)) {
        res.outcome = FactorOutcome::frobenius_fails;
        res.reason = "w ^ dw != 0, so no integrating factor exists";
        return res;
    }
    const auto& vars = w.variables();

    // d(x^e w) = x^e (sum_i e_i/x_i dx^i ^ w + dw), so the monomial test is
    // linear in e over precomputed 2-forms.
    const DifferentialForm dw = exterior_derivative(w);
    std::vector<DifferentialForm> log_terms;
    for (const auto& v : vars)
        log_terms.push_back(RationalFunction(1) / RationalFunction::variable(v) *
                            wedge(DifferentialForm::differential(vars, v), w));
    for (const auto& e : detail::laurent_exponents(vars.size(), exponent_bound, false)) {
        DifferentialForm total = dw;
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (e[i] != 0) total += RationalFunction(e[i]) * log_terms[i];
        if (!total.is_zero()) continue;
        RationalFunction mu = detail::laurent_monomial(vars, e);
        if (!detail::closes(mu, w)) continue;
        res.outcome = FactorOutcome::found;
        res.factor = std::move(mu);
        res.stage = "monomial";
        return res;
    }

    // Stage 2: unknown coefficients, linear constraints sampled at rational
    // points, candidates verified symbolically.
    const auto exps = detail::laurent_exponents(vars.size(), exponent_bound, true);
    std::vector<RationalFunction> monomials;
    std::vector<DifferentialForm> images;
    for (const auto& e : exps) {
        monomials.push_back(detail::laurent_monomial(vars, e));
        images.push_back(exterior_derivative(monomials.back() * w));
    }
    const auto components = basis_indices(vars.size(), 2);
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_int_distribution<long> num_dist(1, 97), den_dist(1, 13), sign_dist(0, 1);
    RationalMatrix rows;
    const std::size_t unknowns = monomials.size();
    for (int round = 0; round < 6; ++round) {
        std::size_t target_points = unknowns + 4 + static_cast<std::size_t>(round) * unknowns;
        std::size_t attempts = 0;
        while (rows.size() < target_points * components.size() && attempts++ < 50 * target_points) {
            std::map<std::string, Rational> pt;
            for (const auto& v : vars) {
                Rational q(num_dist(rng), den_dist(rng));
                q.canonicalize();
                pt.emplace(v, sign_dist(rng) ? q : Rational(-q));
            }
            try {
                RationalMatrix block;
                for (const auto& I : components) {
                    std::vector<Rational> row;
                    row.reserve(unknowns);
                    for (const auto& img : images) row.push_back(img.coefficient(I).evaluate(pt));
                    block.push_back(std::move(row));
                }
                rows.insert(rows.end(), block.begin(), block.end());
            } catch (const PoleAtPoint&) {
            }
        }
        const auto basis = nullspace(rows, unknowns);
        if (basis.empty()) break;
        for (const auto& v : basis) {
            RationalFunction mu;
            for (std::size_t k = 0; k < unknowns; ++k)
                if (v[k] != 0) mu += RationalFunction(v[k]) * monomials[k];
            if (mu.is_zero() || !detail::closes(mu, w)) continue;
            mu = RationalFunction(Rational(1 / mu.numerator().leading().second)) * mu;
            res.outcome = FactorOutcome::found;
            res.factor = std::move(mu);
            res.stage = "linear-combination";
            return res;
        }
    }
    res.outcome = FactorOutcome::not_found_within_ansatz;
    res.reason = "no factor among Laurent monomials with exponents in [-" + std::to_string(exponent_bound) + ", " +
                 std::to_string(exponent_bound) + "] or their combinations of total weight <= " +
                 std::to_string(exponent_bound);
    return res;
}

struct JacobianReport {
    RationalFunction determinant;
    bool identically_zero = false;
    /// Grid points (values in {-2, -1, -1/2, 0, 1/2, 1, 2}) where the determinant vanishes.
    std::vector<std::map<std::string, Rational>> vanishing_points;
    bool truncated = false;
};

inline constexpr std::size_t kMaxVanishingPoints = 16;

namespace detail {
inline RationalFunction determinant(std::vector<std::vector<RationalFunction>> m) {
    const std::size_t n = m.size();
    if (n == 0) return RationalFunction(1);
    if (n == 1) return m[0][0];
    RationalFunction det;
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<RationalFunction>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<RationalFunction> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        RationalFunction t = m[0][j] * determinant(std::move(minor));
        det += (j % 2 == 0) ? t : -t;
    }
    return det;
}
}  // namespace detail

inline JacobianReport jacobian_determinant(const RationalMap& phi) {
    if (phi.components.size() != phi.target.size())
        throw ArityError("map has " + std::to_string(phi.components.size()) + " components for " +
                         std::to_string(phi.target.size()) + " target variables");
    if (phi.source.size() != phi.target.size())
        throw ArityError("Jacobian determinant needs a square map, got " + std::to_string(phi.source.size()) +
                         " -> " + std::to_string(phi.target.size()));
    const std::size_t n = phi.source.size();
    std::vector<std::vector<RationalFunction>> J(n, std::vector<RationalFunction>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) J[i][j] = phi.components[i].derivative(phi.source[j]);

    JacobianReport rep;
    rep.determinant = detail::determinant(std::move(J));
    rep.identically_zero = rep.determinant.is_zero();
    if (rep.identically_zero || n == 0) return rep;

    const std::vector<Rational> grid{Rational(-2), Rational(-1), Rational(-1, 2), Rational(0),
                                     Rational(1, 2), Rational(1), Rational(2)};
    std::vector<std::size_t> idx(n, 0);
    while (true) {
        std::map<std::string, Rational> pt;
        for (std::size_t i = 0; i < n; ++i) pt.emplace(phi.source[i], grid[idx[i]]);
        try {
            if (rep.determinant.evaluate(pt) == 0) {
                if (rep.vanishing_points.size() == kMaxVanishingPoints) {
                    rep.truncated = true;
                    break;
                }
                rep.vanishing_points.push_back(std::move(pt));
            }
        } catch (const PoleAtPoint&) {
        }
        std::size_t k = n;
        while (k > 0 && idx[k - 1] + 1 == grid.size()) idx[--k] = 0;
        if (k == 0) break;
        ++idx[k - 1];
    }
    return rep;
}

/// {f, g} = sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i).
inline RationalFunction poisson_bracket(const RationalFunction& f, const RationalFunction& g,
                                        const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::set<std::string> seen;
    for (const auto& [q, p] : pairs) {
        if (!seen.insert(q).second || !seen.insert(p).second)
            throw VariableMismatch("variable repeated in canonical pairs");
    }
    RationalFunction sum;
    for (const auto& [q, p] : pairs)
        sum += f.derivative(q) * g.derivative(p) - f.derivative(p) * g.derivative(q);
    return sum;
}

enum class DescentOutcome { descended, not_closed, undecided };

inline const char* to_string(DescentOutcome o) {
    switch (o) {
        case DescentOutcome::descended: return "descended";
        case DescentOutcome::not_closed: return "not_closed";
        case DescentOutcome::undecided: return "undecided";
    }
    return "?";
}

/// d_pi psi = d_pi theta, holding on the pseudostructure.
struct IdenticalRelation {
    std::string psi;
    DifferentialForm theta;
    DifferentialForm d_theta;  // equals the pulled-back omega
};

struct DescentResult {
    DescentOutcome outcome = DescentOutcome::not_closed;
    DifferentialForm restricted;  // omega pulled back along the map
    DifferentialForm residual;    // d of the restricted form
    std::optional<IdenticalRelation> identical;
    std::optional<EvolutionaryRelation> next;
    std::string reason;
};

inline DescentResult degree_descent(const EvolutionaryRelation& rel, const RationalMap& phi) {
    if (rel.degree() == 0) throw DegreeError("degree descent needs a relation of degree >= 1");
    DescentResult res;
    res.restricted = pullback(phi, rel.omega);
    auto check = is_closed(res.restricted);
    res.residual = std::move(check.residual);
    if (!check.closed) {
        res.outcome = DescentOutcome::not_closed;
        res.reason = "restricted form is not closed";
        return res;
    }
    try {
        DifferentialForm theta = exactness_witness(res.restricted);
        res.identical = IdenticalRelation{rel.psi, theta, exterior_derivative(theta)};
        res.next = EvolutionaryRelation{rel.psi, std::move(theta)};
        res.outcome = DescentOutcome::descended;
    } catch (const WitnessUndecided& e) {
        res.outcome = DescentOutcome::undecided;
        res.reason = e.message();
    }
    return res;
}

}  // namespace exform
