#include <gtest/gtest.h>

#include <random>

#include "cstar/dpoly.hpp"
#include "fixtures.hpp"

using namespace cstar;
using namespace cstar::testing;

namespace {

MultiIndex d(int dim, std::initializer_list<int> axes)
{
    MultiIndex m(dim, 0);
    for (int a : axes) {
        ++m[a];
    }
    return m;
}

Polynomial one(int dim)
{
    return Polynomial::constant(dim, 1);
}

PolyDiffOperator vector_field_operator(const PolyVector& xi)
{
    PolyDiffOperator op(xi.dim(), 1);
    for (int i = 0; i < xi.dim(); ++i) {
        op.add_term({d(xi.dim(), {i})}, xi.tensor({i}));
    }
    return op;
}

// ∫ x^n e^{-x²} dx / √π = (n-1)!! / 2^{n/2} for even n, 0 for odd n.
Rational gaussian_moment(int n)
{
    if (n % 2) {
        return 0;
    }
    Rational r = 1;
    for (int k = n - 1; k > 0; k -= 2) {
        r *= k;
    }
    return r / Rational(mpz_class(1) << (n / 2));
}

// ∫ p e^{-|x|²} dx / π^{d/2}: exact, and every polynomial is integrable.
Rational gaussian_integral(const Polynomial& p)
{
    Rational total = 0;
    for (const auto& [e, c] : p.terms()) {
        Rational t = c;
        for (int n : e) {
            t *= gaussian_moment(n);
        }
        total += t;
    }
    return total;
}

VolumeForm gaussian(int dim)
{
    Polynomial rho(dim);
    for (int i = 0; i < dim; ++i) {
        rho -= x(dim, i) * x(dim, i);
    }
    return VolumeForm{rho};
}

std::vector<Polynomial> random_args(std::mt19937_64& rng, int dim, int count)
{
    std::vector<Polynomial> out;
    for (int i = 0; i < count; ++i) {
        out.push_back(random_poly(rng, dim, 3, 4));
    }
    return out;
}

} // namespace

TEST(PolyDiffOperator, ApplyAndArithmetic)
{
    const int dim = 2;
    // x1·∂1 f · ∂2² g + 3 f g
    PolyDiffOperator op(dim, 2);
    op.add_term({d(dim, {0}), d(dim, {1, 1})}, x(dim, 0));
    op.add_term({d(dim, {}), d(dim, {})}, Polynomial::constant(dim, 3));
    Polynomial f = P("x1^2*x2", dim), g = P("x2^3 + x1", dim);
    EXPECT_EQ(cstar::apply(op, {f, g}), P("12*x1^2*x2^2", dim) + Polynomial::constant(dim, 3) * f * g);
    EXPECT_EQ(op.order(), 3);
    EXPECT_THROW(cstar::apply(op, {f}), std::invalid_argument);
    PolyDiffOperator zero = op - op;
    EXPECT_TRUE(zero.is_zero());
    EXPECT_EQ(cstar::apply(op * Rational(2), {f, g}), cstar::apply(op, {f, g}) * Rational(2));
    PolyDiffOperator scaled = op;
    scaled *= x(dim, 1);
    EXPECT_EQ(cstar::apply(scaled, {f, g}), x(dim, 1) * cstar::apply(op, {f, g}));
    EXPECT_THROW(PolyDiffOperator(2, 1) + PolyDiffOperator(2, 2), std::invalid_argument);
    EXPECT_THROW(op.add_term({d(dim, {0})}, one(dim)), std::invalid_argument);
}

TEST(PolyDiffOperator, Render)
{
    PolyDiffOperator op(2, 2);
    op.add_term({d(2, {0, 0}), d(2, {})}, Polynomial::constant(2, Rational(1, 2)));
    EXPECT_EQ(render(op), "(1/2)*d1^2(f1)*f2");
    EXPECT_EQ(render(PolyDiffOperator(2, 2)), "0");
    EXPECT_EQ(render(PolyDiffOperator::multiplication(2)), "(1)*f1*f2");
}

TEST(PolyDiffOperator, DifferentiateIsLeibniz)
{
    std::mt19937_64 rng(40);
    for (int t = 0; t < 30; ++t) {
        PolyDiffOperator op = random_operator(rng, 3, 2);
        auto args = random_args(rng, 3, 2);
        for (int a = 0; a < 3; ++a) {
            EXPECT_EQ(cstar::apply(differentiate(op, a), args), partial(cstar::apply(op, args), a));
        }
    }
}

TEST(PolyDiffOperator, InsertMatchesDirectEvaluation)
{
    std::mt19937_64 rng(41);
    for (int t = 0; t < 30; ++t) {
        PolyDiffOperator a = random_operator(rng, 2, 2), b = random_operator(rng, 2, 2);
        auto args = random_args(rng, 2, 3);
        EXPECT_EQ(cstar::apply(insert(a, 0, b), args), cstar::apply(a, {cstar::apply(b, {args[0], args[1]}), args[2]}));
        EXPECT_EQ(cstar::apply(insert(a, 1, b), args), cstar::apply(a, {args[0], cstar::apply(b, {args[1], args[2]})}));
    }
    EXPECT_THROW(insert(PolyDiffOperator(2, 2), 2, PolyDiffOperator(2, 1)), std::invalid_argument);
}

TEST(CyclicShift, Examples)
{
    const int dim = 2;
    VolumeForm flat = VolumeForm::constant(dim);
    PolyDiffOperator d1 = PolyDiffOperator::term(dim, {d(dim, {0})}, one(dim));
    EXPECT_EQ(cyclic_shift(d1, flat), d1);
    PolyDiffOperator euler = PolyDiffOperator::term(dim, {d(dim, {0})}, x(dim, 0));
    PolyDiffOperator expected = euler + PolyDiffOperator::identity(dim);
    EXPECT_EQ(cyclic_shift(euler, flat), expected);
    EXPECT_EQ(cyclic_shift(PolyDiffOperator::multiplication(dim), flat), PolyDiffOperator::multiplication(dim));
    EXPECT_TRUE(is_cyclic(PolyDiffOperator::multiplication(dim), flat));
    EXPECT_FALSE(is_cyclic(euler, flat));
    // With Ω = e^{x1}dx, ∫ ∂1 f g Ω = -∫ f (∂1 g + g) Ω.
    EXPECT_EQ(cyclic_shift(d1, VolumeForm{x(dim, 0)}), d1 + PolyDiffOperator::identity(dim));
}

TEST(CyclicShift, NormalFormMatchesGaussianIntegrals)
{
    std::mt19937_64 rng(42);
    for (int dim = 1; dim <= 2; ++dim) {
        VolumeForm vol = gaussian(dim);
        for (int arity = 1; arity <= 3; ++arity) {
            for (int t = 0; t < 8; ++t) {
                PolyDiffOperator op = random_operator(rng, dim, arity);
                auto args = random_args(rng, dim, arity);
                PolyDiffOperator nf = ibp_normal_form(op, vol);
                ASSERT_EQ(nf.arity(), arity - 1);
                std::vector<Polynomial> rest(args.begin() + 1, args.end());
                EXPECT_EQ(gaussian_integral(cstar::apply(op, args)), gaussian_integral(args[0] * cstar::apply(nf, rest)));

                // ∫ ψ(f1..fk) f_{k+1} Ω = (-1)^k ∫ C(ψ)(f2..f_{k+1}) f1 Ω
                args.push_back(random_poly(rng, dim, 3, 4));
                std::vector<Polynomial> shifted(args.begin() + 1, args.end());
                PolyDiffOperator c = cyclic_shift(op, vol);
                Rational lhs = gaussian_integral(cstar::apply(op, std::span(args).first(arity)) * args.back());
                Rational rhs = gaussian_integral(cstar::apply(c, shifted) * args[0]);
                EXPECT_EQ(lhs, arity % 2 ? -rhs : rhs);
            }
        }
    }
}

TEST(CyclicShift, OrderDividesArityPlusOne)
{
    std::mt19937_64 rng(43);
    for (const VolumeForm& vol : {VolumeForm::constant(2), VolumeForm{P("x1*x2 - x2", 2)}}) {
        for (int arity = 1; arity <= 3; ++arity) {
            for (int t = 0; t < 5; ++t) {
                PolyDiffOperator op = random_operator(rng, 2, arity);
                PolyDiffOperator c = op;
                for (int i = 0; i <= arity; ++i) {
                    c = cyclic_shift(c, vol);
                }
                EXPECT_EQ(c, op);
            }
        }
    }
}

TEST(CyclicShift, Projector)
{
    std::mt19937_64 rng(44);
    VolumeForm vol{x(2, 1)};
    for (int arity = 1; arity <= 3; ++arity) {
        PolyDiffOperator op = random_operator(rng, 2, arity);
        PolyDiffOperator p = cyclic_projector(op, vol);
        EXPECT_TRUE(is_cyclic(p, vol));
        EXPECT_EQ(cyclic_projector(p, vol), p);
    }
}

TEST(Hochschild, Examples)
{
    const int dim = 2;
    EXPECT_EQ(hochschild_differential(PolyDiffOperator::identity(dim)), PolyDiffOperator::multiplication(dim));
    EXPECT_TRUE(hochschild_differential(PolyDiffOperator::multiplication(dim)).is_zero());
    // Vector fields are derivations, so they are cocycles.
    PolyVector xi = random_polyvector(*std::make_unique<std::mt19937_64>(45), dim, 1, 2);
    EXPECT_TRUE(hochschild_differential(vector_field_operator(xi)).is_zero());
}

TEST(Hochschild, MatchesDirectFormulaAndSquaresToZero)
{
    std::mt19937_64 rng(46);
    for (int arity = 0; arity <= 2; ++arity) {
        for (int t = 0; t < 10; ++t) {
            PolyDiffOperator op = random_operator(rng, 2, arity);
            PolyDiffOperator dop = hochschild_differential(op);
            auto f = random_args(rng, 2, arity + 1);
            Polynomial expected = f[0] * cstar::apply(op, std::span(f).subspan(1));
            for (int i = 1; i <= arity; ++i) {
                std::vector<Polynomial> merged;
                for (int j = 0; j < arity + 1; ++j) {
                    if (j == i - 1) {
                        merged.push_back(f[j] * f[j + 1]);
                        ++j;
                    } else {
                        merged.push_back(f[j]);
                    }
                }
                expected += i % 2 ? -cstar::apply(op, merged) : cstar::apply(op, merged);
            }
            Polynomial last = cstar::apply(op, std::span(f).first(arity)) * f.back();
            expected += (arity + 1) % 2 ? -last : last;
            EXPECT_EQ(cstar::apply(dop, f), expected);
            EXPECT_TRUE(hochschild_differential(dop).is_zero());
        }
    }
}

TEST(Gerstenhaber, DifferentialIsBracketWithMultiplication)
{
    std::mt19937_64 rng(47);
    auto m = PolyDiffOperator::multiplication(2);
    for (int arity = 1; arity <= 3; ++arity) {
        PolyDiffOperator op = random_operator(rng, 2, arity);
        PolyDiffOperator br = gerstenhaber(m, op);
        EXPECT_EQ(hochschild_differential(op), (arity - 1) % 2 ? -br : br);
    }
}

TEST(Gerstenhaber, GradedAntisymmetryAndJacobi)
{
    std::mt19937_64 rng(48);
    for (int t = 0; t < 6; ++t) {
        int ka = 1 + t % 3, kb = 1 + (t / 3) % 2, kc = 1 + (t * 7) % 2;
        PolyDiffOperator a = random_operator(rng, 2, ka, 2, 1, 2);
        PolyDiffOperator b = random_operator(rng, 2, kb, 2, 1, 2);
        PolyDiffOperator c = random_operator(rng, 2, kc, 1, 1, 2);
        int da = ka - 1, db = kb - 1;
        int s = (da * db) % 2 ? -1 : 1;
        EXPECT_EQ(gerstenhaber(a, b), gerstenhaber(b, a) * Rational(-s));
        EXPECT_EQ(gerstenhaber(a, gerstenhaber(b, c)),
                  gerstenhaber(gerstenhaber(a, b), c) + gerstenhaber(b, gerstenhaber(a, c)) * Rational(s));
    }
}

TEST(Gerstenhaber, RestrictsToLieBracketOfVectorFields)
{
    std::mt19937_64 rng(49);
    for (int t = 0; t < 10; ++t) {
        PolyVector xi = random_polyvector(rng, 3, 1, 2), eta = random_polyvector(rng, 3, 1, 2);
        EXPECT_EQ(gerstenhaber(vector_field_operator(xi), vector_field_operator(eta)),
                  vector_field_operator(schouten(xi, eta)));
    }
}

TEST(Cyclic, ClosedUnderDifferentialAndBracket)
{
    std::mt19937_64 rng(50);
    for (const VolumeForm& vol : {VolumeForm::constant(2), VolumeForm{x(2, 0)}}) {
        for (int t = 0; t < 4; ++t) {
            PolyDiffOperator a = cyclic_projector(random_operator(rng, 2, 1 + t % 2, 2, 1, 2), vol);
            PolyDiffOperator b = cyclic_projector(random_operator(rng, 2, 1 + (t / 2) % 2, 2, 1, 2), vol);
            ASSERT_TRUE(is_cyclic(a, vol));
            EXPECT_TRUE(is_cyclic(hochschild_differential(a), vol));
            EXPECT_TRUE(is_cyclic(gerstenhaber(a, b), vol));
        }
    }
}
