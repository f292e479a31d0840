#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace cstar {

using Rational = mpq_class;

/// Exponent vector of a monomial x_1^{e_1} ... x_d^{e_d}. Also used as the
/// multi-index of a partial derivative ∂^I.
using Exponent = std::vector<int>;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)),
          position_(position)
    {
    }
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Multivariate polynomial in x_1 ... x_d with exact rational coefficients.
///
/// Terms are kept in a sorted map keyed by exponent vector; zero coefficients
/// are never stored, so structural equality is mathematical equality.
/// Axis indices in the C++ API are zero-based (axis 0 is x_1); the text
/// format uses the one-based names x1 ... xd.
class Polynomial {
public:
    using TermMap = std::map<Exponent, Rational>;

    explicit Polynomial(int dim);

    static Polynomial constant(int dim, const Rational& c);
    static Polynomial variable(int dim, int axis);
    static Polynomial monomial(int dim, Exponent exponent, const Rational& c);

    int dim() const noexcept { return dim_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    /// Total degree; -1 for the zero polynomial.
    int degree() const;
    /// Coefficient of the constant term.
    Rational constant_term() const;

    void add_term(const Exponent& exponent, const Rational& c);

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator-=(const Polynomial& other);
    Polynomial& operator*=(const Polynomial& other);
    Polynomial& operator*=(const Rational& c);

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
    Polynomial operator-() const;

    friend bool operator==(const Polynomial& a, const Polynomial& b)
    {
        return a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }

    double evaluate(const std::vector<double>& point) const;

private:
    void check_dim(const Polynomial& other) const;

    int dim_;
    TermMap terms_;
};

Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial mul(const Polynomial& p, const Polynomial& q);

/// ∂p/∂x_{axis+1}.
Polynomial partial(const Polynomial& p, int axis);
/// ∂^I p for a multi-index I of length dim.
Polynomial partial(const Polynomial& p, const Exponent& multi_index);

/// Parses `1/3*x1^2*x2 - x3` style text. Throws ParseError on bad syntax or
/// on a variable outside x1 ... x_dim.
Polynomial parse_polynomial(std::string_view text, int dim);
/// Canonical text form; parse_polynomial(render(p), p.dim()) == p.
std::string render(const Polynomial& p);

std::string render(const Rational& r);

} // namespace cstar
