#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "exform/closure.hpp"
#include "exform/evolutionary.hpp"
#include "exform/metric.hpp"

namespace exform {

// ---------------------------------------------------------------------------
// Electromagnetism: theta^2 = 1/2 F_{mu nu} dx^mu dx^nu. The 1/2 is absorbed by
// storing each unordered pair once, so the coefficient of dx^mu ^ dx^nu
// (mu < nu) is F_{mu nu} itself.

struct MaxwellReport {
    DifferentialForm dF;
    DifferentialForm d_star_F;
    bool satisfied = false;
};

inline MaxwellReport maxwell_check(const DifferentialForm& F, const DiagonalMetric& g = DiagonalMetric::minkowski()) {
    if (F.degree() != 2 || F.dimension() != 4)
        throw DegreeError("Maxwell check needs a 2-form in 4 variables, got degree " + std::to_string(F.degree()) +
                          " in " + std::to_string(F.dimension()));
    MaxwellReport r;
    r.dF = exterior_derivative(F);
    r.d_star_F = exterior_derivative(hodge_star(F, g));
    r.satisfied = r.dF.is_zero() && r.d_star_F.is_zero();
    return r;
}

// ---------------------------------------------------------------------------
// Hamiltonian mechanics: omega_pc = -H dt + p_j dq_j on (t, q_1..q_m, p_1..p_m).

struct PoincareCartanReport {
    DifferentialForm omega_pc;
    DifferentialForm d_omega_pc;
    VectorField characteristic;
    DifferentialForm contraction_residual;  // i_X d(omega_pc)
    bool satisfied = false;
};

inline PoincareCartanReport poincare_cartan_check(const RationalFunction& H, const Variables& vars) {
    if (vars.size() < 3 || vars.size() % 2 == 0)
        throw VariableMismatch("Hamiltonian variables must be (t, q_1..q_m, p_1..p_m) with m >= 1");
    for (const auto& v : H.variables())
        if (std::find(vars.begin(), vars.end(), v) == vars.end())
            throw VariableMismatch("Hamiltonian uses '" + v + "', which is not in the variable list");
    const std::size_t m = (vars.size() - 1) / 2;
    const std::string& t = vars[0];

    PoincareCartanReport r;
    r.omega_pc = -(H * DifferentialForm::differential(vars, t));
    for (std::size_t j = 0; j < m; ++j)
        r.omega_pc += RationalFunction::variable(vars[1 + m + j]) * DifferentialForm::differential(vars, vars[1 + j]);
    r.d_omega_pc = exterior_derivative(r.omega_pc);

    r.characteristic.components[t] = RationalFunction(1);
    for (std::size_t j = 0; j < m; ++j) {
        const auto& q = vars[1 + j];
        const auto& p = vars[1 + m + j];
        r.characteristic.components[q] = H.derivative(p);
        r.characteristic.components[p] = -H.derivative(q);
    }
    r.contraction_residual = interior_product(r.characteristic, r.d_omega_pc);
    r.satisfied = r.contraction_residual.is_zero();
    return r;
}

// ---------------------------------------------------------------------------
// Thermodynamics of an ideal gas on (T, V): heat form c_v dT + (R T / V) dV.

struct ThermoReport {
    Rational c_v;
    Rational R;
    DifferentialForm heat_form;
    DifferentialForm d_heat_form;
    bool nonidentical = false;  // d(heat) != 0
    RationalFunction commutator_TV;
    IntegratingFactorResult factor;
    std::optional<DifferentialForm> entropy_form;    // mu * heat
    std::optional<DifferentialForm> d_entropy_form;  // d(mu * heat)
    bool identical_after_factor = false;
    Exactness entropy_witness = Exactness::undecided;
    std::optional<DifferentialForm> entropy_witness_form;
    std::string entropy_witness_reason;
};

inline DifferentialForm heat_form(const Rational& c_v, const Rational& R) {
    const Variables vars{"T", "V"};
    const auto T = RationalFunction::variable("T");
    const auto V = RationalFunction::variable("V");
    return RationalFunction(c_v) * DifferentialForm::differential(vars, "T") +
           (RationalFunction(R) * T / V) * DifferentialForm::differential(vars, "V");
}

/// c_v must be positive; R = 0 is accepted as the degenerate closed case.
inline ThermoReport thermo_demo(const Rational& c_v, const Rational& R, int exponent_bound = kDefaultExponentBound) {
    if (c_v <= 0) throw ParameterError("c_v must be positive");
    if (R < 0) throw ParameterError("R must be non-negative");
    ThermoReport r;
    r.c_v = c_v;
    r.R = R;
    r.heat_form = heat_form(c_v, R);
    r.d_heat_form = exterior_derivative(r.heat_form);
    r.nonidentical = !r.d_heat_form.is_zero();
    r.commutator_TV = commutator(r.heat_form)[0][1];
    r.factor = integrating_factor_search(r.heat_form, exponent_bound);
    if (r.factor.factor) {
        r.entropy_form = *r.factor.factor * r.heat_form;
        r.d_entropy_form = exterior_derivative(*r.entropy_form);
        r.identical_after_factor = r.d_entropy_form->is_zero();
        try {
            r.entropy_witness_form = exactness_witness(*r.entropy_form);
            r.entropy_witness = Exactness::yes;
        } catch (const WitnessUndecided& e) {
            r.entropy_witness = Exactness::undecided;
            r.entropy_witness_reason = e.message();
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// (p, k, n) classification table.

enum class Interaction { strong, weak, electromagnetic, gravitational };

inline const char* to_string(Interaction i) {
    switch (i) {
        case Interaction::strong: return "strong";
        case Interaction::weak: return "weak";
        case Interaction::electromagnetic: return "electromagnetic";
        case Interaction::gravitational: return "gravitational";
    }
    return "?";
}

inline Interaction interaction_for(int k) {
    switch (k) {
        case 0: return Interaction::strong;
        case 1: return Interaction::weak;
        case 2: return Interaction::electromagnetic;
        case 3: return Interaction::gravitational;
        default: throw DegreeError("closed form degree k must be in 0..3");
    }
}

struct ClassificationRow {
    int p = 0;  // evolutionary form degree
    int k = 0;  // closed form degree
    int n = 0;  // initial space dimension
    Interaction interaction = Interaction::strong;
    int pseudostructure_dim = 0;  // n + 1 - k
    int metric_structure_dim = 0; // N = n + 1
    std::string element_label;
    std::string sources;
};

/// Opaque labels of the table cell at (k, n); empty outside the table.
inline std::pair<std::string, std::string> table_cell_label(int k, int n) {
    static const std::array<const char*, 4> families{"quanta", "neutrino", "photon", "graviton"};
    if (k < 0 || k > 3 || n < k || n > 3) return {"", ""};
    if (k == 3) return {"graviton", "electron, proton, neutron, photon"};
    std::string name = std::string(families[static_cast<std::size_t>(k)]) + std::to_string(n);
    std::string sources;
    if (n == k) {
        static const std::array<const char*, 3> diag{"quarks?", "electron, quanta", "electron, proton, neutrino"};
        sources = diag[static_cast<std::size_t>(k)];
    }
    return {name, sources};
}

/// Footer of the table, one entry per column n = 0..3.
struct TableColumn {
    int n = 0;
    int metric_structure_dim = 0;
    std::string exact_form_label;  // massive particle formed by the exact 0-form
    std::string structure_label;   // "time", "time+1 coord.", ...
};

inline std::vector<TableColumn> table_columns() {
    static const std::array<const char*, 4> exact{"electron", "proton", "neutron", "deuteron?"};
    std::vector<TableColumn> cols;
    for (int n = 0; n <= 3; ++n) {
        std::string structure = n == 0 ? "time" : "time+" + std::to_string(n) + " coord.";
        cols.push_back({n, n + 1, exact[static_cast<std::size_t>(n)], structure});
    }
    return cols;
}

/// Rows for p = 0..3, k = 0..p. Without `fixed_n` the dimension follows the
/// table (n = p); with it, every row uses that n and rows with k > n are
/// omitted.
inline std::vector<ClassificationRow> classification_table(std::optional<int> fixed_n = std::nullopt) {
    if (fixed_n && *fixed_n < 0) throw ParameterError("space dimension must be non-negative");
    std::vector<ClassificationRow> rows;
    for (int p = 0; p <= 3; ++p) {
        const int n = fixed_n.value_or(p);
        for (int k = 0; k <= p && k <= n; ++k) {
            ClassificationRow row;
            row.p = p;
            row.k = k;
            row.n = n;
            row.interaction = interaction_for(k);
            row.pseudostructure_dim = n + 1 - k;
            row.metric_structure_dim = n + 1;
            std::tie(row.element_label, row.sources) = table_cell_label(k, n);
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

}  // namespace exform
