#include "cstar/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace cstar {

Polynomial::Polynomial(int dim) : dim_(dim)
{
    if (dim <= 0) {
        throw DimensionError("polynomial dimension must be positive");
    }
}

Polynomial Polynomial::constant(int dim, const Rational& c)
{
    Polynomial p(dim);
    p.add_term(Exponent(dim, 0), c);
    return p;
}

Polynomial Polynomial::variable(int dim, int axis)
{
    if (axis < 0 || axis >= dim) {
        throw DimensionError("variable axis out of range");
    }
    Exponent e(dim, 0);
    e[axis] = 1;
    return monomial(dim, std::move(e), 1);
}

Polynomial Polynomial::monomial(int dim, Exponent exponent, const Rational& c)
{
    Polynomial p(dim);
    p.add_term(exponent, c);
    return p;
}

int Polynomial::degree() const
{
    int d = -1;
    for (const auto& [e, c] : terms_) {
        d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
    }
    return d;
}

Rational Polynomial::constant_term() const
{
    auto it = terms_.find(Exponent(dim_, 0));
    return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Exponent& exponent, const Rational& c)
{
    if (static_cast<int>(exponent.size()) != dim_) {
        throw DimensionError("exponent length does not match dimension");
    }
    if (c == 0) {
        return;
    }
    // Callers may hand in an unreduced p/q.
    Rational reduced = c;
    reduced.canonicalize();
    auto [it, inserted] = terms_.try_emplace(exponent, reduced);
    if (!inserted) {
        it->second += reduced;
        if (it->second == 0) {
            terms_.erase(it);
        }
    }
}

void Polynomial::check_dim(const Polynomial& other) const
{
    if (dim_ != other.dim_) {
        throw DimensionError("polynomial dimension mismatch: " + std::to_string(dim_) + " vs " +
                             std::to_string(other.dim_));
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& other)
{
    check_dim(other);
    for (const auto& [e, c] : other.terms_) {
        add_term(e, c);
    }
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other)
{
    check_dim(other);
    for (const auto& [e, c] : other.terms_) {
        add_term(e, -c);
    }
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
    a.check_dim(b);
    Polynomial r(a.dim_);
    Exponent e(a.dim_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            for (int i = 0; i < a.dim_; ++i) {
                e[i] = ea[i] + eb[i];
            }
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

Polynomial& Polynomial::operator*=(const Polynomial& other)
{
    *this = *this * other;
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, v] : terms_) {
        v *= c;
    }
    return *this;
}

Polynomial Polynomial::operator-() const
{
    Polynomial r = *this;
    for (auto& [e, v] : r.terms_) {
        v = -v;
    }
    return r;
}

double Polynomial::evaluate(const std::vector<double>& point) const
{
    if (static_cast<int>(point.size()) != dim_) {
        throw DimensionError("evaluation point has wrong dimension");
    }
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
        double t = c.get_d();
        for (int i = 0; i < dim_; ++i) {
            t *= std::pow(point[i], e[i]);
        }
        s += t;
    }
    return s;
}

Polynomial add(const Polynomial& p, const Polynomial& q) { return p + q; }
Polynomial mul(const Polynomial& p, const Polynomial& q) { return p * q; }

Polynomial partial(const Polynomial& p, int axis)
{
    if (axis < 0 || axis >= p.dim()) {
        throw DimensionError("partial derivative axis out of range");
    }
    Polynomial r(p.dim());
    for (const auto& [e, c] : p.terms()) {
        if (e[axis] == 0) {
            continue;
        }
        Exponent f = e;
        f[axis] -= 1;
        r.add_term(f, c * e[axis]);
    }
    return r;
}

Polynomial partial(const Polynomial& p, const Exponent& multi_index)
{
    if (static_cast<int>(multi_index.size()) != p.dim()) {
        throw DimensionError("multi-index length does not match dimension");
    }
    Polynomial r(p.dim());
    for (const auto& [e, c] : p.terms()) {
        Exponent f = e;
        Rational factor = c;
        bool vanishes = false;
        for (int i = 0; i < p.dim() && !vanishes; ++i) {
            if (multi_index[i] > e[i]) {
                vanishes = true;
                break;
            }
            for (int k = 0; k < multi_index[i]; ++k) {
                factor *= e[i] - k;
            }
            f[i] -= multi_index[i];
        }
        if (!vanishes) {
            r.add_term(f, factor);
        }
    }
    return r;
}

namespace {

class PolyParser {
public:
    PolyParser(std::string_view text, int dim) : text_(text), dim_(dim) {}

    Polynomial parse()
    {
        Polynomial result(dim_);
        skip_ws();
        if (pos_ == text_.size()) {
            throw ParseError("empty polynomial", pos_);
        }
        bool first = true;
        while (true) {
            skip_ws();
            if (pos_ == text_.size()) {
                break;
            }
            int sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = peek() == '-' ? -1 : 1;
                ++pos_;
                skip_ws();
            } else if (!first) {
                throw ParseError("expected '+' or '-'", pos_);
            }
            Polynomial term = parse_term();
            if (sign < 0) {
                term = -term;
            }
            result += term;
            first = false;
        }
        return result;
    }

private:
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    std::string digits()
    {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (start == pos_) {
            throw ParseError("expected digits", pos_);
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    Polynomial parse_term()
    {
        Rational coeff = 1;
        Exponent exponent(dim_, 0);
        bool any = false;
        while (true) {
            skip_ws();
            char c = peek();
            if (std::isdigit(static_cast<unsigned char>(c))) {
                Rational num{mpz_class(digits())};
                skip_ws();
                if (peek() == '/') {
                    ++pos_;
                    std::size_t at = pos_;
                    mpz_class den(digits());
                    if (den == 0) {
                        throw ParseError("zero denominator", at);
                    }
                    num /= Rational(den);
                }
                coeff *= num;
            } else if (c == 'x') {
                std::size_t at = pos_;
                ++pos_;
                int index = std::stoi(digits());
                if (index < 1 || index > dim_) {
                    throw ParseError("unknown variable x" + std::to_string(index) +
                                         " for dimension " + std::to_string(dim_),
                                     at);
                }
                int power = 1;
                skip_ws();
                if (peek() == '^') {
                    ++pos_;
                    power = std::stoi(digits());
                }
                exponent[index - 1] += power;
            } else {
                throw ParseError(c == '\0' ? std::string("unexpected end of input")
                                           : std::string("unexpected character '") + c + "'",
                                 pos_);
            }
            any = true;
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                continue;
            }
            break;
        }
        if (!any) {
            throw ParseError("empty term", pos_);
        }
        return Polynomial::monomial(dim_, exponent, coeff);
    }

    std::string_view text_;
    int dim_;
    std::size_t pos_ = 0;
};

} // namespace

Polynomial parse_polynomial(std::string_view text, int dim)
{
    return PolyParser(text, dim).parse();
}

std::string render(const Rational& r)
{
    return r.get_str();
}

std::string render(const Polynomial& p)
{
    if (p.is_zero()) {
        return "0";
    }
    std::vector<std::pair<Exponent, Rational>> terms(p.terms().begin(), p.terms().end());
    auto deg = [](const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); };
    std::stable_sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) {
        int da = deg(a.first), db = deg(b.first);
        if (da != db) {
            return da > db;
        }
        return a.first > b.first;
    });
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms) {
        if (first) {
            if (c < 0) {
                out << "-";
            }
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        first = false;
        Rational mag = abs(c);
        std::string vars;
        for (int i = 0; i < p.dim(); ++i) {
            if (e[i] == 0) {
                continue;
            }
            if (!vars.empty()) {
                vars += "*";
            }
            vars += "x" + std::to_string(i + 1);
            if (e[i] > 1) {
                vars += "^" + std::to_string(e[i]);
            }
        }
        if (vars.empty()) {
            out << mag.get_str();
        } else if (mag == 1) {
            out << vars;
        } else {
            out << mag.get_str() << "*" << vars;
        }
    }
    return out.str();
}

} // namespace cstar
