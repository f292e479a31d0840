#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "cstar/poly.hpp"
#include "cstar/tpoly.hpp"

namespace cstar {

/// Multi-index of a partial derivative ∂^I, one exponent per axis.
using MultiIndex = Exponent;

/// k-ary polydifferential operator Σ c(x) ∂^{I_1}f_1 ⋯ ∂^{I_k}f_k.
///
/// Terms are keyed by the tuple (I_1, ..., I_k) with merged coefficients;
/// zero coefficients are dropped. Arity 0 is allowed and stands for a
/// multiplication-free function c(x) (the key is the empty tuple).
class PolyDiffOperator {
public:
    using Key = std::vector<MultiIndex>;
    using TermMap = std::map<Key, Polynomial>;

    PolyDiffOperator(int dim, int arity);

    /// m(f, g) = f·g.
    static PolyDiffOperator multiplication(int dim);
    /// id(f) = f.
    static PolyDiffOperator identity(int dim);
    static PolyDiffOperator term(int dim, Key indices, const Polynomial& coeff);

    int dim() const noexcept { return dim_; }
    int arity() const noexcept { return arity_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    /// Highest total number of derivatives across all slots.
    int order() const;

    void add_term(const Key& indices, const Polynomial& coeff);

    PolyDiffOperator& operator+=(const PolyDiffOperator& other);
    PolyDiffOperator& operator-=(const PolyDiffOperator& other);
    PolyDiffOperator& operator*=(const Rational& c);
    /// Multiplies every coefficient by a function.
    PolyDiffOperator& operator*=(const Polynomial& f);
    friend PolyDiffOperator operator+(PolyDiffOperator a, const PolyDiffOperator& b) { return a += b; }
    friend PolyDiffOperator operator-(PolyDiffOperator a, const PolyDiffOperator& b) { return a -= b; }
    friend PolyDiffOperator operator*(PolyDiffOperator a, const Rational& c) { return a *= c; }
    friend PolyDiffOperator operator*(const Rational& c, PolyDiffOperator a) { return a *= c; }
    PolyDiffOperator operator-() const { return *this * Rational(-1); }

    friend bool operator==(const PolyDiffOperator& a, const PolyDiffOperator& b)
    {
        return a.dim_ == b.dim_ && a.arity_ == b.arity_ && a.terms_ == b.terms_;
    }

private:
    void check_compatible(const PolyDiffOperator& other) const;

    int dim_;
    int arity_;
    TermMap terms_;
};

Polynomial apply(const PolyDiffOperator& psi, std::span<const Polynomial> args);
Polynomial apply(const PolyDiffOperator& psi, std::initializer_list<Polynomial> args);

/// ∂/∂x_axis of the whole expression ψ(f_1, ..., f_k), expanded by Leibniz.
PolyDiffOperator differentiate(const PolyDiffOperator& psi, int axis);

/// The operator (f_1, ..., f_k) ↦ ψ(f_1, ..., f_k)·f_{k+1}.
PolyDiffOperator append_factor(const PolyDiffOperator& psi);

/// E with ∫ D(f_1, ..., f_k)·Ω = ∫ f_1·E(f_2, ..., f_k)·Ω for compactly
/// supported arguments: every derivative on slot 1 is moved off by
/// integration by parts against e^ρ.
PolyDiffOperator ibp_normal_form(const PolyDiffOperator& d, const VolumeForm& vol);

/// C(ψ) = (-1)^k · ibp_normal_form(ψ(f_1..f_k)·f_{k+1}), so that
/// ∫ ψ(f_1..f_k) f_{k+1} Ω = (-1)^k ∫ C(ψ)(f_2..f_{k+1}) f_1 Ω.
/// C^{k+1} is the identity.
PolyDiffOperator cyclic_shift(const PolyDiffOperator& psi, const VolumeForm& vol);
bool is_cyclic(const PolyDiffOperator& psi, const VolumeForm& vol);
/// (1/(k+1)) Σ_{i=0}^{k} C^i(ψ).
PolyDiffOperator cyclic_projector(const PolyDiffOperator& psi, const VolumeForm& vol);

/// ψ1 ∘_slot ψ2: ψ2 inserted into the zero-based slot of ψ1.
PolyDiffOperator insert(const PolyDiffOperator& psi1, int slot, const PolyDiffOperator& psi2);

/// (dψ)(f_1..f_{k+1}) = f_1 ψ(f_2..) + Σ_i (-1)^i ψ(.., f_i f_{i+1}, ..)
///                      + (-1)^{k+1} ψ(f_1..f_k) f_{k+1}.
PolyDiffOperator hochschild_differential(const PolyDiffOperator& psi);

/// [ψ1, ψ2] = ψ1∘ψ2 - (-1)^{(k1-1)(k2-1)} ψ2∘ψ1 with
/// ψ1∘ψ2 = Σ_i (-1)^{i(k2-1)} ψ1 ∘_i ψ2. With these signs
/// dψ = (-1)^{k-1} [m, ψ].
PolyDiffOperator gerstenhaber(const PolyDiffOperator& psi1, const PolyDiffOperator& psi2);

/// Text form such as `(1/2)*d1(f1)*d2(f2) + (-1/2)*d2(f1)*d1(f2)`.
std::string render(const PolyDiffOperator& psi);

} // namespace cstar
