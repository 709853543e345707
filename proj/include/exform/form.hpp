#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "exform/error.hpp"
#include "exform/rational_function.hpp"

namespace exform {

/// Strictly increasing positions into a variable list: the basis monomial
/// dx^{i1} ^ ... ^ dx^{ip}.
class MultiIndex {
public:
    MultiIndex() = default;
    MultiIndex(std::initializer_list<std::size_t> idx) : idx_(idx) {}

    /// Sorts an arbitrary index tuple. Returns the permutation sign, or 0 when
    /// an index repeats (dx^i ^ dx^i = 0).
    static std::pair<MultiIndex, int> sorted(std::vector<std::size_t> raw) {
        int sign = 1;
        // insertion sort, counting transpositions
        for (std::size_t i = 1; i < raw.size(); ++i) {
            for (std::size_t j = i; j > 0 && raw[j - 1] >= raw[j]; --j) {
                if (raw[j - 1] == raw[j]) return {MultiIndex{}, 0};
                std::swap(raw[j - 1], raw[j]);
                sign = -sign;
            }
        }
        MultiIndex m;
        m.idx_ = std::move(raw);
        return {std::move(m), sign};
    }

    const std::vector<std::size_t>& indices() const noexcept { return idx_; }
    std::size_t size() const noexcept { return idx_.size(); }
    std::size_t operator[](std::size_t r) const { return idx_[r]; }

    bool contains(std::size_t i) const { return std::binary_search(idx_.begin(), idx_.end(), i); }

    /// Number of entries smaller than i.
    std::size_t rank_of(std::size_t i) const {
        return static_cast<std::size_t>(std::lower_bound(idx_.begin(), idx_.end(), i) - idx_.begin());
    }

    MultiIndex without_position(std::size_t r) const {
        MultiIndex m;
        m.idx_ = idx_;
        m.idx_.erase(m.idx_.begin() + static_cast<std::ptrdiff_t>(r));
        return m;
    }

    /// Indices in [0, n) not present here, ascending.
    MultiIndex complement(std::size_t n) const {
        MultiIndex m;
        for (std::size_t i = 0; i < n; ++i)
            if (!contains(i)) m.idx_.push_back(i);
        return m;
    }

    auto operator<=>(const MultiIndex&) const = default;
    bool operator==(const MultiIndex&) const = default;

private:
    std::vector<std::size_t> idx_;
};

/// All strictly increasing index tuples of length p over n positions, in
/// lexicographic order.
inline std::vector<MultiIndex> basis_indices(std::size_t n, std::size_t p) {
    std::vector<MultiIndex> out;
    if (p > n) return out;
    std::vector<std::size_t> cur(p);
    for (std::size_t i = 0; i < p; ++i) cur[i] = i;
    while (true) {
        out.push_back(MultiIndex::sorted(cur).first);
        std::size_t k = p;
        while (k > 0 && cur[k - 1] == n - p + (k - 1)) --k;
        if (k == 0) break;
        ++cur[k - 1];
        for (std::size_t j = k; j < p; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

using Variables = std::vector<std::string>;

/// Skew-symmetric differential form of degree p on an ordered variable list.
/// Coefficients are keyed by strictly increasing multi-indices; zero
/// coefficients are never stored, so a form of degree > n is always empty.
class DifferentialForm {
public:
    using Coefficients = std::map<MultiIndex, RationalFunction>;

    DifferentialForm() = default;
    DifferentialForm(Variables vars, std::size_t degree) : vars_(std::move(vars)), degree_(degree) {}

    /// 0-form.
    static DifferentialForm scalar(Variables vars, const RationalFunction& f) {
        DifferentialForm w(std::move(vars), 0);
        w.add_term(std::vector<std::size_t>{}, f);
        return w;
    }

    /// Basis differential dx^{var}.
    static DifferentialForm differential(Variables vars, const std::string& var) {
        DifferentialForm w(std::move(vars), 1);
        w.add_term(std::vector<std::size_t>{w.position(var)}, 1);
        return w;
    }

    const Variables& variables() const noexcept { return vars_; }
    std::size_t dimension() const noexcept { return vars_.size(); }
    std::size_t degree() const noexcept { return degree_; }
    const Coefficients& coefficients() const noexcept { return coeffs_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }

    std::size_t position(std::string_view var) const {
        auto it = std::find(vars_.begin(), vars_.end(), var);
        if (it == vars_.end()) throw UnknownVariable("variable '" + std::string(var) + "' is not in the variable list");
        return static_cast<std::size_t>(it - vars_.begin());
    }

    RationalFunction coefficient(const MultiIndex& I) const {
        auto it = coeffs_.find(I);
        return it == coeffs_.end() ? RationalFunction{} : it->second;
    }

    /// Value of a 0-form (zero if empty).
    RationalFunction scalar_value() const {
        if (degree_ != 0) throw DegreeError("scalar value requested from a form of degree " + std::to_string(degree_));
        return coefficient(MultiIndex{});
    }

    /// Adds c * dx^{raw[0]} ^ ... ^ dx^{raw[p-1]}; the index tuple may be in
    /// any order and the permutation sign is folded into the coefficient.
    void add_term(std::vector<std::size_t> raw, const RationalFunction& c) {
        if (raw.size() != degree_)
            throw DegreeError("basis of length " + std::to_string(raw.size()) + " in a form of degree " +
                              std::to_string(degree_));
        for (auto i : raw)
            if (i >= vars_.size()) throw VariableMismatch("basis index out of range");
        auto [I, sign] = MultiIndex::sorted(std::move(raw));
        if (sign == 0 || c.is_zero()) return;
        add_sorted(I, sign > 0 ? c : -c);
    }

    DifferentialForm& operator+=(const DifferentialForm& o) {
        require_compatible(o);
        for (const auto& [I, c] : o.coeffs_) add_sorted(I, c);
        return *this;
    }
    DifferentialForm& operator-=(const DifferentialForm& o) {
        require_compatible(o);
        for (const auto& [I, c] : o.coeffs_) add_sorted(I, -c);
        return *this;
    }
    friend DifferentialForm operator+(DifferentialForm a, const DifferentialForm& b) { return a += b; }
    friend DifferentialForm operator-(DifferentialForm a, const DifferentialForm& b) { return a -= b; }
    friend DifferentialForm operator-(DifferentialForm a) {
        for (auto& [I, c] : a.coeffs_) c = -c;
        return a;
    }

    /// Multiplication by a 0-form coefficient.
    friend DifferentialForm operator*(const RationalFunction& f, const DifferentialForm& w) {
        DifferentialForm out(w.vars_, w.degree_);
        if (f.is_zero()) return out;
        for (const auto& [I, c] : w.coeffs_) out.add_sorted(I, f * c);
        return out;
    }

    friend bool operator==(const DifferentialForm& a, const DifferentialForm& b) {
        if (a.vars_ != b.vars_ || a.degree_ != b.degree_ || a.coeffs_.size() != b.coeffs_.size()) return false;
        auto i = a.coeffs_.begin();
        for (auto j = b.coeffs_.begin(); j != b.coeffs_.end(); ++i, ++j)
            if (i->first != j->first || !(i->second == j->second)) return false;
        return true;
    }

    /// Basis text such as "dx^dy".
    std::string basis_str(const MultiIndex& I) const {
        std::string out;
        for (std::size_t r = 0; r < I.size(); ++r) {
            if (r) out += '^';
            out += "d" + vars_[I[r]];
        }
        return out;
    }

    void require_compatible(const DifferentialForm& o) const {
        if (vars_ != o.vars_) throw VariableMismatch("forms are defined over different variable lists");
        if (degree_ != o.degree_)
            throw DegreeError("cannot add forms of degree " + std::to_string(degree_) + " and " +
                              std::to_string(o.degree_));
    }

private:
    void add_sorted(const MultiIndex& I, const RationalFunction& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = coeffs_.try_emplace(I, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    Variables vars_;
    std::size_t degree_ = 0;
    Coefficients coeffs_;
};

/// Vector field as components along the named variables; missing components
/// are zero.
struct VectorField {
    std::map<std::string, RationalFunction> components;

    RationalFunction component(const std::string& var) const {
        auto it = components.find(var);
        return it == components.end() ? RationalFunction{} : it->second;
    }
};

/// Parametrized map from `source` variables into `target` variables; one
/// rational component per target variable, written in the source variables.
struct RationalMap {
    Variables source;
    Variables target;
    std::vector<RationalFunction> components;

    static RationalMap identity(const Variables& vars) {
        RationalMap phi{vars, vars, {}};
        for (const auto& v : vars) phi.components.push_back(RationalFunction::variable(v));
        return phi;
    }
};

// ---------------------------------------------------------------------------
// Core exterior algebra.

inline DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
    if (a.variables() != b.variables()) throw VariableMismatch("wedge of forms over different variable lists");
    DifferentialForm out(a.variables(), a.degree() + b.degree());
    for (const auto& [I, ca] : a.coefficients()) {
        for (const auto& [J, cb] : b.coefficients()) {
            std::vector<std::size_t> raw = I.indices();
            raw.insert(raw.end(), J.indices().begin(), J.indices().end());
            out.add_term(std::move(raw), ca * cb);
        }
    }
    return out;
}

/// d(sum a_I dx^I) = sum da_I ^ dx^I.
inline DifferentialForm exterior_derivative(const DifferentialForm& w) {
    const auto& vars = w.variables();
    DifferentialForm out(vars, w.degree() + 1);
    for (const auto& [I, a] : w.coefficients()) {
        for (std::size_t j = 0; j < vars.size(); ++j) {
            if (I.contains(j)) continue;
            RationalFunction da = a.derivative(vars[j]);
            if (da.is_zero()) continue;
            std::vector<std::size_t> raw{j};
            raw.insert(raw.end(), I.indices().begin(), I.indices().end());
            out.add_term(std::move(raw), da);
        }
    }
    return out;
}

/// Differential of a 0-form given as a bare function.
inline DifferentialForm exterior_derivative(const Variables& vars, const RationalFunction& f) {
    return exterior_derivative(DifferentialForm::scalar(vars, f));
}

/// Antisymmetric n x n matrix of a 1-form's commutator,
/// K[i][j] = d a_j / d x^i - d a_i / d x^j, i.e. the coefficient of
/// dx^i ^ dx^j in dw for i < j.
using CommutatorMatrix = std::vector<std::vector<RationalFunction>>;

inline CommutatorMatrix commutator(const DifferentialForm& w) {
    if (w.degree() != 1)
        throw DegreeError("commutator is defined for 1-forms, got degree " + std::to_string(w.degree()));
    const std::size_t n = w.dimension();
    CommutatorMatrix K(n, std::vector<RationalFunction>(n));
    const DifferentialForm dw = exterior_derivative(w);
    for (const auto& [I, c] : dw.coefficients()) {
        K[I[0]][I[1]] = c;
        K[I[1]][I[0]] = -c;
    }
    return K;
}

/// Contraction i_X w.
inline DifferentialForm interior_product(const VectorField& X, const DifferentialForm& w) {
    if (w.degree() == 0) throw DegreeError("interior product of a 0-form");
    const auto& vars = w.variables();
    for (const auto& [var, c] : X.components)
        if (std::find(vars.begin(), vars.end(), var) == vars.end())
            throw VariableMismatch("vector field component '" + var + "' is not in the form's variable list");
    DifferentialForm out(vars, w.degree() - 1);
    for (const auto& [I, a] : w.coefficients()) {
        for (std::size_t r = 0; r < I.size(); ++r) {
            RationalFunction x = X.component(vars[I[r]]);
            if (x.is_zero()) continue;
            RationalFunction c = x * a;
            out.add_term(I.without_position(r).indices(), r % 2 == 0 ? c : -c);
        }
    }
    return out;
}

/// phi^* w: substitute the components into the coefficients and replace each
/// dx^i with d(phi^i).
inline DifferentialForm pullback(const RationalMap& phi, const DifferentialForm& w) {
    if (phi.components.size() != phi.target.size())
        throw VariableMismatch("map has " + std::to_string(phi.components.size()) + " components for " +
                               std::to_string(phi.target.size()) + " target variables");
    if (phi.target != w.variables()) throw VariableMismatch("map target does not match the form's variable list");

    std::map<std::string, RationalFunction> values;
    for (std::size_t i = 0; i < phi.target.size(); ++i) values.emplace(phi.target[i], phi.components[i]);

    std::vector<DifferentialForm> dphi;
    dphi.reserve(phi.components.size());
    for (const auto& c : phi.components) dphi.push_back(exterior_derivative(phi.source, c));

    DifferentialForm out(phi.source, w.degree());
    for (const auto& [I, a] : w.coefficients()) {
        DifferentialForm term = DifferentialForm::scalar(phi.source, a.substitute(values));
        for (auto i : I.indices()) {
            term = wedge(term, dphi[i]);
            if (term.is_zero()) break;
        }
        if (term.is_zero()) continue;
        // degree of `term` is the form degree whenever it is non-empty
        out += term;
    }
    return out;
}

}  // namespace exform
