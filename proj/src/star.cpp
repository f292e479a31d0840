#include "cstar/star.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace cstar {

GraphOperator graph_to_operator(const AdmissibleGraph& g, const std::vector<PolyVector>& gammas)
{
    const int n = g.internal_count();
    const int m = g.boundary_count();
    if (static_cast<int>(gammas.size()) != n) {
        throw std::invalid_argument("graph_to_operator: need one polyvector per internal vertex");
    }
    if (n == 0) {
        throw std::invalid_argument("graph_to_operator: graph has no internal vertices");
    }
    const int dim = gammas[0].dim();
    for (int k = 0; k < n; ++k) {
        if (gammas[k].dim() != dim) {
            throw DimensionError("graph_to_operator: polyvector dimensions differ");
        }
        if (gammas[k].arity() != static_cast<int>(g.star(k).size())) {
            throw std::invalid_argument("graph_to_operator: vertex " + std::to_string(k + 1) + " has out-degree " +
                                        std::to_string(g.star(k).size()) + " but its polyvector has arity " +
                                        std::to_string(gammas[k].arity()));
        }
    }
    struct Edge {
        int source;
        Target target;
    };
    std::vector<Edge> edges;
    for (int k = 0; k < n; ++k) {
        for (const Target& t : g.star(k)) {
            edges.push_back({k, t});
        }
    }
    const int e_count = static_cast<int>(edges.size());
    PolyDiffOperator op(dim, m);
    std::vector<int> index(e_count, 0);
    while (true) {
        std::vector<std::vector<int>> labels(n);
        std::vector<MultiIndex> vertex_derivs(n, MultiIndex(dim, 0));
        PolyDiffOperator::Key slots(m, MultiIndex(dim, 0));
        for (int e = 0; e < e_count; ++e) {
            labels[edges[e].source].push_back(index[e]);
            const Target& t = edges[e].target;
            (t.is_internal() ? vertex_derivs[t.index] : slots[t.index])[index[e]] += 1;
        }
        Polynomial coeff = Polynomial::constant(dim, 1);
        for (int k = 0; k < n && !coeff.is_zero(); ++k) {
            coeff *= partial(gammas[k].tensor(labels[k]), vertex_derivs[k]);
        }
        op.add_term(slots, coeff);
        int e = 0;
        while (e < e_count && ++index[e] == dim) {
            index[e] = 0;
            ++e;
        }
        if (e == e_count) {
            break;
        }
    }
    return GraphOperator{g, std::move(op)};
}

namespace {

Rational factorial(int n)
{
    Rational r = 1;
    for (int i = 2; i <= n; ++i) {
        r *= i;
    }
    return r;
}

Rational weight_value(const WeightEntry& e)
{
    return e.exact ? *e.exact : Rational(e.value);
}

void require_poisson(const PolyVector& pi)
{
    if (pi.arity() != 2) {
        throw std::invalid_argument("expected a bivector field");
    }
    PolyVector jac = schouten(pi, pi);
    if (!jac.is_zero()) {
        const auto& [key, coeff] = *jac.components().begin();
        std::string label;
        for (int a : key) {
            label += (label.empty() ? "" : ",") + std::to_string(a + 1);
        }
        throw std::invalid_argument("bivector is not Poisson: [pi,pi] has component (" + label +
                                    ") = " + render(coeff));
    }
}

std::string alpha_label(const std::vector<double>& alphas)
{
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        out << (i ? "," : "") << alphas[i];
    }
    out << ")";
    return out.str();
}

} // namespace

StarProduct assemble_star(const PolyVector& pi, const WeightTable& table, int order)
{
    if (order < 0) {
        throw std::invalid_argument("order must be non-negative");
    }
    require_poisson(pi);
    StarProduct s{pi, order, {}, table.provenance(), true};
    s.levels.push_back(PolyDiffOperator::multiplication(pi.dim()));
    for (int n = 1; n <= order; ++n) {
        PolyDiffOperator level(pi.dim(), 2);
        Rational prefactor = 1 / (factorial(n) * Rational(1 << n));
        std::vector<PolyVector> gammas(n, pi);
        for (const auto& g : star_graphs(n, 2)) {
            std::string key = canonical_key(g);
            const WeightEntry* e = table.find(key, {});
            if (!e) {
                throw std::invalid_argument("weight table has no entry for graph " + key);
            }
            s.exact = s.exact && e->is_exact();
            Rational w = weight_value(*e);
            if (w == 0) {
                continue;
            }
            level += graph_to_operator(g, gammas).op * (prefactor * w);
        }
        s.levels.push_back(std::move(level));
    }
    return s;
}

std::vector<Polynomial> star_apply(const StarProduct& s, const Polynomial& f, const Polynomial& g)
{
    std::vector<Polynomial> out;
    for (const auto& level : s.levels) {
        out.push_back(apply(level, {f, g}));
    }
    return out;
}

namespace {

Polynomial random_polynomial(int dim, int max_degree, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> count(1, 4);
    std::uniform_int_distribution<int> degree(0, max_degree);
    std::uniform_int_distribution<int> axis(0, dim - 1);
    Polynomial p(dim);
    int terms = count(rng);
    for (int t = 0; t < terms; ++t) {
        Exponent e(dim, 0);
        int d = degree(rng);
        for (int i = 0; i < d; ++i) {
            ++e[axis(rng)];
        }
        int c = coeff(rng);
        p.add_term(e, c == 0 ? 1 : c);
    }
    return p;
}

} // namespace

CheckReport check_associative(const StarProduct& s, int trials, std::uint64_t seed, int max_degree)
{
    CheckReport report{"assoc", true, {}, {}};
    if (!s.exact) {
        report.notes.push_back("weights are not all exact; equality is tested on their binary values");
    }
    const int dim = s.pi.dim();
    std::mt19937_64 rng(seed);
    for (int n = 0; n <= s.order; ++n) {
        report.orders.push_back({n, true, "0", std::nullopt});
    }
    for (int t = 0; t < trials; ++t) {
        Polynomial f = random_polynomial(dim, max_degree, rng);
        Polynomial g = random_polynomial(dim, max_degree, rng);
        Polynomial h = random_polynomial(dim, max_degree, rng);
        auto fg = star_apply(s, f, g);
        auto gh = star_apply(s, g, h);
        for (int n = 0; n <= s.order; ++n) {
            Polynomial lhs(dim), rhs(dim);
            for (int a = 0; a <= n; ++a) {
                lhs += apply(s.levels[n - a], {fg[a], h});
                rhs += apply(s.levels[n - a], {f, gh[a]});
            }
            Polynomial diff = lhs - rhs;
            if (!diff.is_zero() && report.orders[n].pass) {
                report.orders[n].pass = false;
                report.orders[n].residual = "f = " + render(f) + "; g = " + render(g) + "; h = " + render(h) +
                                            "; (f*g)*h - f*(g*h) = " + render(diff);
            }
        }
    }
    for (const auto& o : report.orders) {
        report.pass = report.pass && o.pass;
    }
    report.notes.push_back(std::to_string(trials) + " random triples, degree <= " + std::to_string(max_degree));
    return report;
}

CheckReport check_cyclic(const StarProduct& s, const VolumeForm& vol)
{
    if (vol.dim() != s.pi.dim()) {
        throw DimensionError("check_cyclic: volume form dimension mismatch");
    }
    CheckReport report{"cyclic", true, {}, {}};
    for (int n = 1; n <= s.order; ++n) {
        const PolyDiffOperator& b = s.levels[n];
        PolyDiffOperator residual = ibp_normal_form(append_factor(b), vol) - b;
        OrderVerdict v{n, residual.is_zero(), render(residual), std::nullopt};
        if (!v.pass) {
            v.residual_operator = residual;
        }
        report.pass = report.pass && v.pass;
        report.orders.push_back(std::move(v));
    }
    return report;
}

CheckReport check_closed(const StarProduct& s, const VolumeForm& vol)
{
    if (vol.dim() != s.pi.dim()) {
        throw DimensionError("check_closed: volume form dimension mismatch");
    }
    CheckReport report{"closed", true, {}, {}};
    for (int n = 1; n <= s.order; ++n) {
        PolyDiffOperator e = ibp_normal_form(s.levels[n], vol);
        OrderVerdict v{n, e.is_zero(), render(e), std::nullopt};
        if (!v.pass) {
            v.residual_operator = e;
        }
        report.pass = report.pass && v.pass;
        report.orders.push_back(std::move(v));
    }
    return report;
}

CheckReport check_unital(const StarProduct& s)
{
    CheckReport report{"unital", true, {}, {}};
    const int dim = s.pi.dim();
    const MultiIndex none(dim, 0);
    for (int n = 1; n <= s.order; ++n) {
        // Terms that survive when one slot holds the constant 1.
        PolyDiffOperator right(dim, 1), left(dim, 1);
        for (const auto& [key, coeff] : s.levels[n].terms()) {
            if (key[1] == none) {
                right.add_term({key[0]}, coeff);
            }
            if (key[0] == none) {
                left.add_term({key[1]}, coeff);
            }
        }
        OrderVerdict v{n, right.is_zero() && left.is_zero(), "0", std::nullopt};
        if (!v.pass) {
            v.residual = "B(f,1) = " + render(right) + "; B(1,f) = " + render(left);
        }
        report.pass = report.pass && v.pass;
        report.orders.push_back(std::move(v));
    }
    return report;
}

namespace {

struct WeightedGraph {
    PolyDiffOperator unit; // prefactor · U_Γ(π, ..., π)
    const WeightEntry* entry;
};

std::vector<WeightedGraph> trilinear_terms(const PolyVector& pi, const std::vector<double>& alphas,
                                           const WeightTable& table, int n)
{
    if (n < 1) {
        throw std::invalid_argument("trilinear order must be >= 1");
    }
    if (alphas.size() != 3) {
        throw std::invalid_argument("trilinear functionals need three alphas");
    }
    if (pi.arity() != 2) {
        throw std::invalid_argument("expected a bivector field");
    }
    Rational prefactor = 1 / (factorial(n) * Rational(1 << n));
    std::vector<PolyVector> gammas(n, pi);
    std::vector<WeightedGraph> out;
    for (const auto& g : star_graphs(n, 3)) {
        std::string key = canonical_key(g);
        const WeightEntry* e = table.find(key, alphas);
        if (!e) {
            throw std::invalid_argument("weight table has no entry for graph " + key + " at alpha " +
                                        alpha_label(alphas));
        }
        out.push_back({graph_to_operator(g, gammas).op * prefactor, e});
    }
    return out;
}

struct Coefficient {
    double value = 0.0;
    double variance = 0.0;
};

using CoefficientKey = std::pair<PolyDiffOperator::Key, Exponent>;

std::map<CoefficientKey, Coefficient> normal_form_coefficients(const std::vector<WeightedGraph>& terms,
                                                               const VolumeForm& vol)
{
    std::map<CoefficientKey, Coefficient> out;
    for (const auto& t : terms) {
        double w = t.entry->value;
        double sigma = t.entry->is_exact() ? 0.0 : t.entry->std_error;
        PolyDiffOperator nf = ibp_normal_form(t.unit, vol);
        for (const auto& [key, poly] : nf.terms()) {
            for (const auto& [exp, c] : poly.terms()) {
                double cd = c.get_d();
                auto& slot = out[{key, exp}];
                slot.value += w * cd;
                slot.variance += (sigma * cd) * (sigma * cd);
            }
        }
    }
    return out;
}

std::string coefficient_label(const CoefficientKey& k, int dim)
{
    PolyDiffOperator unit = PolyDiffOperator::term(dim, k.first, Polynomial::monomial(dim, k.second, 1));
    return render(unit);
}

} // namespace

PolyDiffOperator assemble_trilinear(const PolyVector& pi, const std::vector<double>& alphas,
                                    const WeightTable& table, int n)
{
    PolyDiffOperator out(pi.dim(), 3);
    for (const auto& t : trilinear_terms(pi, alphas, table, n)) {
        Rational w = weight_value(*t.entry);
        if (w != 0) {
            out += t.unit * w;
        }
    }
    return out;
}

CheckReport check_alpha_independence(const PolyVector& pi, const std::vector<double>& alphas,
                                     const std::vector<double>& other_alphas, const WeightTable& table, int n,
                                     const VolumeForm& vol, double tolerance_floor)
{
    if (vol.dim() != pi.dim()) {
        throw DimensionError("check_alpha_independence: volume form dimension mismatch");
    }
    double sum = 0, other_sum = 0;
    for (double a : alphas) {
        sum += a;
    }
    for (double a : other_alphas) {
        other_sum += a;
    }
    if (std::abs(sum - other_sum) > 1e-12) {
        throw std::invalid_argument("alpha vectors " + alpha_label(alphas) + " and " + alpha_label(other_alphas) +
                                    " have different sums; the comparison is only meaningful for equal sums");
    }
    CheckReport report{"alpha", true, {}, {}};
    if (!divergence(pi, vol).is_zero()) {
        report.notes.push_back("div pi != 0: the bivector is outside the hypothesis of the alpha-independence "
                               "statement");
    }
    auto a = normal_form_coefficients(trilinear_terms(pi, alphas, table, n), vol);
    auto b = normal_form_coefficients(trilinear_terms(pi, other_alphas, table, n), vol);
    for (const auto& [k, c] : b) {
        a.try_emplace(k);
    }
    OrderVerdict v{n, true, "0", std::nullopt};
    std::ostringstream failures;
    double worst_ratio = 0.0;
    for (const auto& [k, ca] : a) {
        Coefficient cb;
        if (auto it = b.find(k); it != b.end()) {
            cb = it->second;
        }
        double delta = ca.value - cb.value;
        double tol = std::max(3.0 * std::sqrt(ca.variance + cb.variance), tolerance_floor);
        worst_ratio = std::max(worst_ratio, std::abs(delta) / tol);
        if (std::abs(delta) > tol) {
            if (!v.pass) {
                failures << "; ";
            }
            v.pass = false;
            char buf[96];
            std::snprintf(buf, sizeof buf, ": delta = %.6g, tolerance = %.3g", delta, tol);
            failures << coefficient_label(k, pi.dim()) << buf;
        }
    }
    if (!v.pass) {
        v.residual = failures.str();
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max |delta|/tolerance = %.4g", worst_ratio);
    report.notes.push_back(buf);
    report.pass = v.pass;
    report.orders.push_back(std::move(v));
    return report;
}

void complete_trilinear_table(WeightTable& table, const std::vector<double>& alphas, int n,
                              const SamplerOptions& opts)
{
    AngleContext ctx = AngleContext::standard(alphas);
    for (const auto& g : star_graphs(n, 3)) {
        if (!table.find(canonical_key(g), alphas)) {
            table.insert(weight(g, ctx, opts));
        }
    }
}

} // namespace cstar
