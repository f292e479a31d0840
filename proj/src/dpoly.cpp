#include "cstar/dpoly.hpp"

#include <numeric>
#include <sstream>

namespace cstar {

PolyDiffOperator::PolyDiffOperator(int dim, int arity) : dim_(dim), arity_(arity)
{
    if (dim <= 0) {
        throw DimensionError("operator dimension must be positive");
    }
    if (arity < 0) {
        throw std::invalid_argument("operator arity must be non-negative");
    }
}

PolyDiffOperator PolyDiffOperator::multiplication(int dim)
{
    return term(dim, Key(2, MultiIndex(dim, 0)), Polynomial::constant(dim, 1));
}

PolyDiffOperator PolyDiffOperator::identity(int dim)
{
    return term(dim, Key(1, MultiIndex(dim, 0)), Polynomial::constant(dim, 1));
}

PolyDiffOperator PolyDiffOperator::term(int dim, Key indices, const Polynomial& coeff)
{
    PolyDiffOperator r(dim, static_cast<int>(indices.size()));
    r.add_term(indices, coeff);
    return r;
}

int PolyDiffOperator::order() const
{
    int best = 0;
    for (const auto& [key, c] : terms_) {
        int total = 0;
        for (const auto& idx : key) {
            total = std::accumulate(idx.begin(), idx.end(), total);
        }
        best = std::max(best, total);
    }
    return best;
}

void PolyDiffOperator::add_term(const Key& indices, const Polynomial& coeff)
{
    if (static_cast<int>(indices.size()) != arity_) {
        throw std::invalid_argument("term has " + std::to_string(indices.size()) + " slots, operator arity is " +
                                    std::to_string(arity_));
    }
    if (coeff.dim() != dim_) {
        throw DimensionError("term coefficient has wrong dimension");
    }
    for (const auto& idx : indices) {
        if (static_cast<int>(idx.size()) != dim_) {
            throw DimensionError("multi-index has wrong length");
        }
        for (int e : idx) {
            if (e < 0) {
                throw std::invalid_argument("negative derivative order");
            }
        }
    }
    if (coeff.is_zero()) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(indices, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }
}

void PolyDiffOperator::check_compatible(const PolyDiffOperator& other) const
{
    if (dim_ != other.dim_) {
        throw DimensionError("operator dimension mismatch");
    }
    if (arity_ != other.arity_) {
        throw std::invalid_argument("operator arity mismatch");
    }
}

PolyDiffOperator& PolyDiffOperator::operator+=(const PolyDiffOperator& other)
{
    check_compatible(other);
    for (const auto& [k, c] : other.terms_) {
        add_term(k, c);
    }
    return *this;
}

PolyDiffOperator& PolyDiffOperator::operator-=(const PolyDiffOperator& other)
{
    check_compatible(other);
    for (const auto& [k, c] : other.terms_) {
        add_term(k, -c);
    }
    return *this;
}

PolyDiffOperator& PolyDiffOperator::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, v] : terms_) {
        v *= c;
    }
    return *this;
}

PolyDiffOperator& PolyDiffOperator::operator*=(const Polynomial& f)
{
    if (f.dim() != dim_) {
        throw DimensionError("operator dimension mismatch");
    }
    TermMap old;
    old.swap(terms_);
    for (const auto& [k, v] : old) {
        add_term(k, v * f);
    }
    return *this;
}

Polynomial apply(const PolyDiffOperator& psi, std::span<const Polynomial> args)
{
    if (static_cast<int>(args.size()) != psi.arity()) {
        throw std::invalid_argument("apply: expected " + std::to_string(psi.arity()) + " arguments, got " +
                                    std::to_string(args.size()));
    }
    for (const auto& a : args) {
        if (a.dim() != psi.dim()) {
            throw DimensionError("apply: argument dimension mismatch");
        }
    }
    Polynomial total(psi.dim());
    for (const auto& [key, coeff] : psi.terms()) {
        Polynomial t = coeff;
        for (std::size_t j = 0; j < key.size() && !t.is_zero(); ++j) {
            t *= partial(args[j], key[j]);
        }
        total += t;
    }
    return total;
}

Polynomial apply(const PolyDiffOperator& psi, std::initializer_list<Polynomial> args)
{
    return apply(psi, std::span<const Polynomial>(args.begin(), args.size()));
}

PolyDiffOperator differentiate(const PolyDiffOperator& psi, int axis)
{
    if (axis < 0 || axis >= psi.dim()) {
        throw DimensionError("differentiate: axis out of range");
    }
    PolyDiffOperator r(psi.dim(), psi.arity());
    for (const auto& [key, coeff] : psi.terms()) {
        r.add_term(key, partial(coeff, axis));
        for (std::size_t j = 0; j < key.size(); ++j) {
            auto shifted = key;
            ++shifted[j][axis];
            r.add_term(shifted, coeff);
        }
    }
    return r;
}

PolyDiffOperator append_factor(const PolyDiffOperator& psi)
{
    PolyDiffOperator r(psi.dim(), psi.arity() + 1);
    for (const auto& [key, coeff] : psi.terms()) {
        auto k = key;
        k.emplace_back(psi.dim(), 0);
        r.add_term(k, coeff);
    }
    return r;
}

PolyDiffOperator ibp_normal_form(const PolyDiffOperator& d, const VolumeForm& vol)
{
    if (d.dim() != vol.dim()) {
        throw DimensionError("ibp_normal_form: volume form dimension mismatch");
    }
    if (d.arity() < 1) {
        throw std::invalid_argument("ibp_normal_form needs at least one slot");
    }
    const int dim = d.dim();
    std::vector<Polynomial> rho(dim, Polynomial(dim));
    for (int a = 0; a < dim; ++a) {
        rho[a] = partial(vol.log_density, a);
    }
    PolyDiffOperator out(dim, d.arity() - 1);
    for (const auto& [key, coeff] : d.terms()) {
        PolyDiffOperator r = PolyDiffOperator::term(dim, PolyDiffOperator::Key(key.begin() + 1, key.end()), coeff);
        int sign = 1;
        // ∫ ∂_a F · R e^ρ = -∫ F · (∂_a + ∂_aρ)(R) e^ρ
        for (int a = 0; a < dim; ++a) {
            for (int e = 0; e < key[0][a]; ++e) {
                PolyDiffOperator next = differentiate(r, a);
                if (!rho[a].is_zero()) {
                    PolyDiffOperator weighted = r;
                    weighted *= rho[a];
                    next += weighted;
                }
                r = std::move(next);
                sign = -sign;
            }
        }
        if (sign < 0) {
            out -= r;
        } else {
            out += r;
        }
    }
    return out;
}

PolyDiffOperator cyclic_shift(const PolyDiffOperator& psi, const VolumeForm& vol)
{
    if (psi.arity() < 1) {
        throw std::invalid_argument("cyclic_shift needs arity >= 1");
    }
    PolyDiffOperator e = ibp_normal_form(append_factor(psi), vol);
    return psi.arity() % 2 == 0 ? e : -e;
}

bool is_cyclic(const PolyDiffOperator& psi, const VolumeForm& vol)
{
    return cyclic_shift(psi, vol) == psi;
}

PolyDiffOperator cyclic_projector(const PolyDiffOperator& psi, const VolumeForm& vol)
{
    PolyDiffOperator sum = psi;
    PolyDiffOperator power = psi;
    for (int i = 1; i <= psi.arity(); ++i) {
        power = cyclic_shift(power, vol);
        sum += power;
    }
    return sum * Rational(1, psi.arity() + 1);
}

PolyDiffOperator insert(const PolyDiffOperator& psi1, int slot, const PolyDiffOperator& psi2)
{
    if (psi1.dim() != psi2.dim()) {
        throw DimensionError("insert: dimension mismatch");
    }
    if (slot < 0 || slot >= psi1.arity()) {
        throw std::invalid_argument("insert: slot out of range");
    }
    const int dim = psi1.dim();
    PolyDiffOperator out(dim, psi1.arity() + psi2.arity() - 1);
    std::map<MultiIndex, PolyDiffOperator> derived;
    for (const auto& [key, coeff] : psi1.terms()) {
        const MultiIndex& outer = key[slot];
        auto it = derived.find(outer);
        if (it == derived.end()) {
            PolyDiffOperator d = psi2;
            for (int a = 0; a < dim; ++a) {
                for (int e = 0; e < outer[a]; ++e) {
                    d = differentiate(d, a);
                }
            }
            it = derived.emplace(outer, std::move(d)).first;
        }
        for (const auto& [inner, c2] : it->second.terms()) {
            PolyDiffOperator::Key k(key.begin(), key.begin() + slot);
            k.insert(k.end(), inner.begin(), inner.end());
            k.insert(k.end(), key.begin() + slot + 1, key.end());
            out.add_term(k, coeff * c2);
        }
    }
    return out;
}

PolyDiffOperator hochschild_differential(const PolyDiffOperator& psi)
{
    const int k = psi.arity();
    const auto m = PolyDiffOperator::multiplication(psi.dim());
    PolyDiffOperator out = insert(m, 1, psi);
    for (int i = 1; i <= k; ++i) {
        PolyDiffOperator t = insert(psi, i - 1, m);
        if (i % 2 == 0) {
            out += t;
        } else {
            out -= t;
        }
    }
    PolyDiffOperator last = insert(m, 0, psi);
    if ((k + 1) % 2 == 0) {
        out += last;
    } else {
        out -= last;
    }
    return out;
}

namespace {

PolyDiffOperator compose(const PolyDiffOperator& a, const PolyDiffOperator& b)
{
    PolyDiffOperator out(a.dim(), std::max(a.arity() + b.arity() - 1, 0));
    for (int i = 0; i < a.arity(); ++i) {
        PolyDiffOperator t = insert(a, i, b);
        if ((i * (b.arity() - 1)) % 2 == 0) {
            out += t;
        } else {
            out -= t;
        }
    }
    return out;
}

} // namespace

PolyDiffOperator gerstenhaber(const PolyDiffOperator& psi1, const PolyDiffOperator& psi2)
{
    if (psi1.dim() != psi2.dim()) {
        throw DimensionError("gerstenhaber: dimension mismatch");
    }
    if (psi1.arity() + psi2.arity() == 0) {
        return PolyDiffOperator(psi1.dim(), 0);
    }
    PolyDiffOperator out = compose(psi1, psi2);
    PolyDiffOperator back = compose(psi2, psi1);
    if (((psi1.arity() - 1) * (psi2.arity() - 1)) % 2 == 0) {
        out -= back;
    } else {
        out += back;
    }
    return out;
}

std::string render(const PolyDiffOperator& psi)
{
    if (psi.is_zero()) {
        return "0";
    }
    std::ostringstream out;
    bool first = true;
    for (const auto& [key, coeff] : psi.terms()) {
        if (!first) {
            out << " + ";
        }
        first = false;
        out << "(" << render(coeff) << ")";
        for (std::size_t j = 0; j < key.size(); ++j) {
            out << "*";
            bool any = false;
            for (std::size_t a = 0; a < key[j].size(); ++a) {
                if (key[j][a] == 0) {
                    continue;
                }
                any = true;
                out << "d" << a + 1;
                if (key[j][a] > 1) {
                    out << "^" << key[j][a];
                }
            }
            if (any) {
                out << "(f" << j + 1 << ")";
            } else {
                out << "f" << j + 1;
            }
        }
    }
    return out.str();
}

} // namespace cstar
