#pragma once

#include <string>
#include <vector>

#include "exform/error.hpp"
#include "exform/form.hpp"

namespace exform {

/// Constant diagonal metric: one +1/-1 entry per variable. The variable order
/// of the forms it acts on fixes the orientation (dx^1 ^ ... ^ dx^n is
/// positive).
class DiagonalMetric {
public:
    DiagonalMetric() = default;
    explicit DiagonalMetric(std::vector<int> signature) : signature_(std::move(signature)) {
        for (int s : signature_)
            if (s != 1 && s != -1) throw ParameterError("metric signature entries must be +1 or -1");
    }

    static DiagonalMetric euclidean(std::size_t n) { return DiagonalMetric(std::vector<int>(n, 1)); }
    /// Signature (+,-,-,-).
    static DiagonalMetric minkowski() { return DiagonalMetric({1, -1, -1, -1}); }

    const std::vector<int>& signature() const noexcept { return signature_; }
    std::size_t dimension() const noexcept { return signature_.size(); }
    int operator[](std::size_t i) const { return signature_[i]; }

    /// Product of the signature entries (sign of det g).
    int sign() const noexcept {
        int s = 1;
        for (int e : signature_) s *= e;
        return s;
    }

    bool operator==(const DiagonalMetric&) const = default;

private:
    std::vector<int> signature_;
};

// Sign conventions
//   *(dx^I) = sgn(I, I^c) * prod_{i in I} g^{ii} * dx^{I^c}
//     where sgn(I, I^c) sorts the concatenated tuple (I, complement of I).
//   **w = (-1)^{p(n-p)} sgn(g) w.
//   delta = (-1)^{n(p+1)+1} sgn(g) *d* on p-forms, so on R^n delta(f dx) = -df/dx.
//   Laplace-de Rham = d delta + delta d, so on 0-forms it is
//   -sum_i g^{ii} d^2 f / (dx^i)^2.

inline int star_star_sign(std::size_t n, std::size_t p, int metric_sign) {
    return ((p * (n - p)) % 2 == 0 ? 1 : -1) * metric_sign;
}

inline int codifferential_sign(std::size_t n, std::size_t p, int metric_sign) {
    return ((n * (p + 1) + 1) % 2 == 0 ? 1 : -1) * metric_sign;
}

inline DifferentialForm hodge_star(const DifferentialForm& w, const DiagonalMetric& g) {
    const std::size_t n = w.dimension();
    if (g.dimension() != n)
        throw VariableMismatch("metric of dimension " + std::to_string(g.dimension()) + " applied to a form in " +
                               std::to_string(n) + " variables");
    if (w.degree() > n) throw DegreeError("Hodge star of a form whose degree exceeds the dimension");
    DifferentialForm out(w.variables(), n - w.degree());
    for (const auto& [I, c] : w.coefficients()) {
        MultiIndex J = I.complement(n);
        std::vector<std::size_t> raw = I.indices();
        raw.insert(raw.end(), J.indices().begin(), J.indices().end());
        int sign = MultiIndex::sorted(raw).second;
        for (auto i : I.indices()) sign *= g[i];
        out.add_term(J.indices(), sign > 0 ? c : -c);
    }
    return out;
}

/// delta: p-form -> (p-1)-form.
inline DifferentialForm codifferential(const DifferentialForm& w, const DiagonalMetric& g) {
    if (w.degree() == 0) throw DegreeError("codifferential of a 0-form");
    const std::size_t n = w.dimension();
    if (g.dimension() != n) throw VariableMismatch("metric dimension does not match the form");
    if (w.degree() > n) return DifferentialForm(w.variables(), w.degree() - 1);
    DifferentialForm r = hodge_star(exterior_derivative(hodge_star(w, g)), g);
    return codifferential_sign(n, w.degree(), g.sign()) > 0 ? r : -r;
}

namespace detail {
inline DifferentialForm d_delta(const DifferentialForm& w, const DiagonalMetric& g) {
    if (w.degree() == 0) return DifferentialForm(w.variables(), 0);
    return exterior_derivative(codifferential(w, g));
}
inline DifferentialForm delta_d(const DifferentialForm& w, const DiagonalMetric& g) {
    return codifferential(exterior_derivative(w), g);
}
}  // namespace detail

/// Laplace-de Rham operator d delta + delta d.
inline DifferentialForm laplace_de_rham(const DifferentialForm& w, const DiagonalMetric& g) {
    if (g.dimension() != w.dimension()) throw VariableMismatch("metric dimension does not match the form");
    return detail::d_delta(w, g) + detail::delta_d(w, g);
}

/// The alternate combination d delta - delta d, reported next to the
/// Laplace-de Rham operator.
inline DifferentialForm laplace_difference_variant(const DifferentialForm& w, const DiagonalMetric& g) {
    if (g.dimension() != w.dimension()) throw VariableMismatch("metric dimension does not match the form");
    return detail::d_delta(w, g) - detail::delta_d(w, g);
}

struct DualClosure {
    bool closed = false;
    DifferentialForm residual;  // d(*w)
};

inline DualClosure dual_closure_check(const DifferentialForm& w, const DiagonalMetric& g) {
    DualClosure out;
    out.residual = exterior_derivative(hodge_star(w, g));
    out.closed = out.residual.is_zero();
    return out;
}

}  // namespace exform
