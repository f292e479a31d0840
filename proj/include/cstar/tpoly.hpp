#pragma once

#include <map>
#include <string>
#include <vector>

#include "cstar/poly.hpp"

namespace cstar {

/// Strictly increasing list of zero-based axes: the key of one component
/// ∂_{i_1} ∧ ... ∧ ∂_{i_k} of a multivector field.
using AxisSet = std::vector<int>;

/// Skew multivector field with polynomial coefficients on R^d.
///
/// Internally a PolyVector of arity a is a polynomial in the odd variables
/// θ_i ↔ ∂_i that is homogeneous of θ-degree a. `degree()` reports the Lie
/// grading a - 1 (functions have degree -1, vector fields 0, bivectors 1).
class PolyVector {
public:
    using ComponentMap = std::map<AxisSet, Polynomial>;

    PolyVector(int dim, int arity);

    static PolyVector function(const Polynomial& f);
    /// The basis multivector ∂_{axes[0]} ∧ ... with the given coefficient;
    /// axes may be in any order (the permutation sign is applied).
    static PolyVector basis(int dim, const std::vector<int>& axes, const Polynomial& coeff);

    int dim() const noexcept { return dim_; }
    int arity() const noexcept { return arity_; }
    int degree() const noexcept { return arity_ - 1; }
    const ComponentMap& components() const noexcept { return components_; }
    bool is_zero() const noexcept { return components_.empty(); }

    /// Adds `coeff` to the component ∂_{axes[0]} ∧ ... ∧ ∂_{axes[k-1]}; axes in
    /// any order, repeated axes contribute nothing.
    void add(const std::vector<int>& axes, const Polynomial& coeff);

    /// Full skew tensor entry γ^{i_1 ... i_k} for an arbitrary index list.
    Polynomial tensor(const std::vector<int>& indices) const;

    PolyVector& operator+=(const PolyVector& other);
    PolyVector& operator-=(const PolyVector& other);
    PolyVector& operator*=(const Rational& c);
    friend PolyVector operator+(PolyVector a, const PolyVector& b) { return a += b; }
    friend PolyVector operator-(PolyVector a, const PolyVector& b) { return a -= b; }
    friend PolyVector operator*(PolyVector a, const Rational& c) { return a *= c; }
    friend PolyVector operator*(const Rational& c, PolyVector a) { return a *= c; }
    PolyVector operator-() const { return *this * Rational(-1); }

    friend bool operator==(const PolyVector& a, const PolyVector& b)
    {
        return a.dim_ == b.dim_ && a.arity_ == b.arity_ && a.components_ == b.components_;
    }

private:
    void check_compatible(const PolyVector& other) const;

    int dim_;
    int arity_;
    ComponentMap components_;
};

/// Volume form Ω = e^ρ dx_1 ∧ ... ∧ dx_d with polynomial log-density ρ.
struct VolumeForm {
    Polynomial log_density;

    static VolumeForm constant(int dim) { return VolumeForm{Polynomial(dim)}; }
    int dim() const { return log_density.dim(); }
};

/// Exterior product (θ-multiplication). Zero when the arities overflow dim.
PolyVector wedge(const PolyVector& a, const PolyVector& b);

/// Schouten-Nijenhuis bracket
///   [P, Q] = Σ_i (P ∂⃖/∂θ_i)(∂Q/∂x_i) - (∂P/∂x_i)(∂⃗/∂θ_i Q).
/// Restricts to the Lie bracket on vector fields and to ξ(f) on (ξ, f).
PolyVector schouten(const PolyVector& a, const PolyVector& b);

/// div_Ω P = Σ_i (∂_i + ∂_iρ)(∂⃗/∂θ_i P).
///
/// With this convention, for γ1 of Lie degree k1,
///   (-1)^{k1} (div(γ1∧γ2) - div(γ1)∧γ2 + (-1)^{k1} γ1∧div(γ2)) = [γ1, γ2]
///   div[γ1, γ2] = [div γ1, γ2] + (-1)^{k1} [γ1, div γ2]
/// and div∘div = 0, for every e^ρ volume form.
PolyVector divergence(const PolyVector& a, const VolumeForm& vol);

/// Jacobi identity [π, π] = 0 for a bivector field.
bool is_poisson(const PolyVector& pi);

std::string render(const PolyVector& v);

} // namespace cstar
