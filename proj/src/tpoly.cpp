#include "cstar/tpoly.hpp"

#include <algorithm>
#include <sstream>

namespace cstar {

namespace {

// Sorts `axes` in place; returns the sign of the permutation, or 0 when an
// axis repeats.
int sort_with_sign(std::vector<int>& axes)
{
    int sign = 1;
    for (std::size_t i = 0; i < axes.size(); ++i) {
        for (std::size_t j = i + 1; j < axes.size(); ++j) {
            if (axes[i] == axes[j]) {
                return 0;
            }
            if (axes[i] > axes[j]) {
                sign = -sign;
            }
        }
    }
    std::sort(axes.begin(), axes.end());
    return sign;
}

// θ_K θ_L for sorted K, L: sign of the merge, 0 on overlap.
int merge_sign(const AxisSet& k, const AxisSet& l, AxisSet& out)
{
    int inversions = 0;
    for (int a : k) {
        for (int b : l) {
            if (a == b) {
                return 0;
            }
            if (a > b) {
                ++inversions;
            }
        }
    }
    out.clear();
    std::merge(k.begin(), k.end(), l.begin(), l.end(), std::back_inserter(out));
    return inversions % 2 == 0 ? 1 : -1;
}

enum class Side { Left, Right };

// ∂/∂θ_axis from the given side.
PolyVector theta_derivative(const PolyVector& p, int axis, Side side)
{
    PolyVector r(p.dim(), std::max(p.arity() - 1, 0));
    if (p.arity() == 0) {
        return r;
    }
    for (const auto& [key, coeff] : p.components()) {
        auto it = std::find(key.begin(), key.end(), axis);
        if (it == key.end()) {
            continue;
        }
        auto pos = static_cast<int>(it - key.begin());
        int moves = side == Side::Left ? pos : static_cast<int>(key.size()) - 1 - pos;
        AxisSet rest = key;
        rest.erase(rest.begin() + pos);
        r.add(rest, moves % 2 == 0 ? coeff : -coeff);
    }
    return r;
}

PolyVector x_derivative(const PolyVector& p, int axis)
{
    PolyVector r(p.dim(), p.arity());
    for (const auto& [key, coeff] : p.components()) {
        r.add(key, partial(coeff, axis));
    }
    return r;
}

} // namespace

PolyVector::PolyVector(int dim, int arity) : dim_(dim), arity_(arity)
{
    if (dim <= 0) {
        throw DimensionError("polyvector dimension must be positive");
    }
    if (arity < 0) {
        throw std::invalid_argument("polyvector arity must be non-negative");
    }
}

PolyVector PolyVector::function(const Polynomial& f)
{
    PolyVector r(f.dim(), 0);
    r.add({}, f);
    return r;
}

PolyVector PolyVector::basis(int dim, const std::vector<int>& axes, const Polynomial& coeff)
{
    PolyVector r(dim, static_cast<int>(axes.size()));
    r.add(axes, coeff);
    return r;
}

void PolyVector::add(const std::vector<int>& axes, const Polynomial& coeff)
{
    if (static_cast<int>(axes.size()) != arity_) {
        throw std::invalid_argument("component key length does not match arity");
    }
    if (coeff.dim() != dim_) {
        throw DimensionError("component coefficient has wrong dimension");
    }
    for (int a : axes) {
        if (a < 0 || a >= dim_) {
            throw DimensionError("component axis out of range");
        }
    }
    if (coeff.is_zero()) {
        return;
    }
    AxisSet key = axes;
    int sign = sort_with_sign(key);
    if (sign == 0) {
        return;
    }
    auto [it, inserted] = components_.try_emplace(key, Polynomial(dim_));
    if (sign > 0) {
        it->second += coeff;
    } else {
        it->second -= coeff;
    }
    if (it->second.is_zero()) {
        components_.erase(it);
    }
}

Polynomial PolyVector::tensor(const std::vector<int>& indices) const
{
    AxisSet key = indices;
    int sign = sort_with_sign(key);
    if (sign == 0) {
        return Polynomial(dim_);
    }
    auto it = components_.find(key);
    if (it == components_.end()) {
        return Polynomial(dim_);
    }
    return sign > 0 ? it->second : -it->second;
}

void PolyVector::check_compatible(const PolyVector& other) const
{
    if (dim_ != other.dim_) {
        throw DimensionError("polyvector dimension mismatch");
    }
    if (arity_ != other.arity_) {
        throw std::invalid_argument("polyvector arity mismatch");
    }
}

PolyVector& PolyVector::operator+=(const PolyVector& other)
{
    check_compatible(other);
    for (const auto& [k, c] : other.components_) {
        add(k, c);
    }
    return *this;
}

PolyVector& PolyVector::operator-=(const PolyVector& other)
{
    check_compatible(other);
    for (const auto& [k, c] : other.components_) {
        add(k, -c);
    }
    return *this;
}

PolyVector& PolyVector::operator*=(const Rational& c)
{
    if (c == 0) {
        components_.clear();
        return *this;
    }
    for (auto& [k, v] : components_) {
        v *= c;
    }
    return *this;
}

PolyVector wedge(const PolyVector& a, const PolyVector& b)
{
    if (a.dim() != b.dim()) {
        throw DimensionError("wedge: dimension mismatch");
    }
    PolyVector r(a.dim(), a.arity() + b.arity());
    AxisSet merged;
    for (const auto& [ka, ca] : a.components()) {
        for (const auto& [kb, cb] : b.components()) {
            int sign = merge_sign(ka, kb, merged);
            if (sign == 0) {
                continue;
            }
            Polynomial c = ca * cb;
            r.add(merged, sign > 0 ? c : -c);
        }
    }
    return r;
}

PolyVector schouten(const PolyVector& a, const PolyVector& b)
{
    if (a.dim() != b.dim()) {
        throw DimensionError("schouten: dimension mismatch");
    }
    int arity = a.arity() + b.arity() - 1;
    PolyVector r(a.dim(), std::max(arity, 0));
    if (arity < 0) {
        return r;
    }
    for (int i = 0; i < a.dim(); ++i) {
        if (a.arity() > 0) {
            r += wedge(theta_derivative(a, i, Side::Right), x_derivative(b, i));
        }
        if (b.arity() > 0) {
            r -= wedge(x_derivative(a, i), theta_derivative(b, i, Side::Left));
        }
    }
    return r;
}

PolyVector divergence(const PolyVector& a, const VolumeForm& vol)
{
    if (a.dim() != vol.dim()) {
        throw DimensionError("divergence: volume form dimension mismatch");
    }
    if (a.arity() == 0) {
        throw std::invalid_argument("divergence of a function (degree -1) is undefined");
    }
    PolyVector r(a.dim(), a.arity() - 1);
    for (int i = 0; i < a.dim(); ++i) {
        PolyVector t = theta_derivative(a, i, Side::Left);
        Polynomial rho_i = partial(vol.log_density, i);
        for (const auto& [key, coeff] : t.components()) {
            r.add(key, partial(coeff, i) + rho_i * coeff);
        }
    }
    return r;
}

bool is_poisson(const PolyVector& pi)
{
    if (pi.arity() != 2) {
        throw std::invalid_argument("is_poisson expects a bivector field");
    }
    return schouten(pi, pi).is_zero();
}

std::string render(const PolyVector& v)
{
    if (v.is_zero()) {
        return "0";
    }
    std::ostringstream out;
    bool first = true;
    for (const auto& [key, coeff] : v.components()) {
        if (!first) {
            out << " + ";
        }
        first = false;
        out << "(" << render(coeff) << ")";
        for (std::size_t j = 0; j < key.size(); ++j) {
            out << (j == 0 ? "*" : "^") << "d" << key[j] + 1;
        }
    }
    return out.str();
}

} // namespace cstar
