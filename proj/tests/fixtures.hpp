#pragma once

#include <random>
#include <vector>

#include "cstar/dpoly.hpp"
#include "cstar/poly.hpp"
#include "cstar/tpoly.hpp"

namespace cstar::testing {

inline Polynomial random_poly(std::mt19937_64& rng, int dim, int max_degree, int max_terms = 3)
{
    std::uniform_int_distribution<int> coeff(-4, 4), terms(0, max_terms), deg(0, max_degree),
        axis(0, dim - 1);
    Polynomial p(dim);
    int count = terms(rng);
    for (int t = 0; t < count; ++t) {
        Exponent e(dim, 0);
        int d = deg(rng);
        for (int i = 0; i < d; ++i) {
            ++e[axis(rng)];
        }
        p.add_term(e, Rational(coeff(rng), 1 + static_cast<int>(rng() % 3)));
    }
    return p;
}

inline PolyVector random_polyvector(std::mt19937_64& rng, int dim, int arity, int max_degree)
{
    PolyVector v(dim, arity);
    if (arity > dim) {
        return v;
    }
    // Random subset of components.
    std::vector<int> axes(dim);
    for (int rounds = 0; rounds < 3; ++rounds) {
        for (int i = 0; i < dim; ++i) {
            axes[i] = i;
        }
        std::shuffle(axes.begin(), axes.end(), rng);
        v.add(std::vector<int>(axes.begin(), axes.begin() + arity), random_poly(rng, dim, max_degree));
    }
    return v;
}

inline MultiIndex random_index(std::mt19937_64& rng, int dim, int max_order)
{
    MultiIndex idx(dim, 0);
    int order = static_cast<int>(rng() % (max_order + 1));
    for (int i = 0; i < order; ++i) {
        ++idx[rng() % dim];
    }
    return idx;
}

inline PolyDiffOperator random_operator(std::mt19937_64& rng, int dim, int arity, int max_order = 2,
                                        int max_degree = 2, int terms = 3)
{
    PolyDiffOperator op(dim, arity);
    for (int t = 0; t < terms; ++t) {
        PolyDiffOperator::Key key;
        for (int j = 0; j < arity; ++j) {
            key.push_back(random_index(rng, dim, max_order));
        }
        op.add_term(key, random_poly(rng, dim, max_degree, 2));
    }
    return op;
}

inline Polynomial x(int dim, int axis)
{
    return Polynomial::variable(dim, axis);
}

inline Polynomial P(const char* text, int dim)
{
    return parse_polynomial(text, dim);
}

/// so(3)-type bivector x3 ∂1∧∂2 + x1 ∂2∧∂3 + x2 ∂3∧∂1.
inline PolyVector so3()
{
    PolyVector pi(3, 2);
    pi.add({0, 1}, x(3, 2));
    pi.add({1, 2}, x(3, 0));
    pi.add({2, 0}, x(3, 1));
    return pi;
}

inline PolyVector moyal()
{
    return PolyVector::basis(2, {0, 1}, Polynomial::constant(2, 1));
}

/// x1 ∂1∧∂2: Poisson in d = 2 but not divergence free.
inline PolyVector nondiv()
{
    return PolyVector::basis(2, {0, 1}, x(2, 0));
}

} // namespace cstar::testing
