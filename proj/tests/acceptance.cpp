// End-to-end acceptance run: one [PASS]/[FAIL] line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "cstar/io.hpp"
#include "cstar/star.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cstar;
namespace ct = cstar::testing;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

int sign(int k)
{
    return k % 2 == 0 ? 1 : -1;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

SamplerOptions sampler(std::int64_t samples, std::uint64_t seed, int threads = 1)
{
    SamplerOptions o;
    o.samples = samples;
    o.seed = seed;
    o.threads = threads;
    return o;
}

// 1. Divergence/wedge/bracket identities and div∘div = 0.
Outcome exact_algebra()
{
    std::mt19937_64 rng(101);
    int pairs = 0;
    int failures = 0;
    double worst = 0;
    for (int rho_case = 0; rho_case < 2; ++rho_case) {
        auto t0 = std::chrono::steady_clock::now();
        for (int t = 0; t < 60; ++t) {
            int dim = 2 + t % 3;
            VolumeForm vol = rho_case ? VolumeForm{ct::x(dim, 0)} : VolumeForm::constant(dim);
            int ka = 1 + static_cast<int>(rng() % 3), kb = 1 + static_cast<int>(rng() % 3);
            ka = std::min(ka, dim);
            kb = std::min(kb, dim);
            PolyVector a = ct::random_polyvector(rng, dim, ka, 2);
            PolyVector b = ct::random_polyvector(rng, dim, kb, 2);
            int k1 = a.degree();
            ++pairs;
            if (ka + kb <= dim) {
                PolyVector lhs = divergence(wedge(a, b), vol) - wedge(divergence(a, vol), b) +
                                 wedge(a, divergence(b, vol)) * Rational(sign(k1));
                failures += !(lhs * Rational(sign(k1)) == schouten(a, b));
            }
            PolyVector br = schouten(a, b);
            if (br.arity() > 0) {
                PolyVector rhs = schouten(divergence(a, vol), b);
                if (b.arity() > 0) {
                    rhs += schouten(a, divergence(b, vol)) * Rational(sign(k1));
                }
                failures += !(divergence(br, vol) == rhs);
            }
            for (const PolyVector* v : {&a, &b}) {
                if (v->arity() >= 2) {
                    failures += !divergence(divergence(*v, vol), vol).is_zero();
                }
            }
        }
        worst = std::max(worst, seconds_since(t0));
    }
    return {failures == 0 && worst < 1.0,
            std::to_string(pairs) + " pairs, " + std::to_string(failures) + " failures, slowest corpus " +
                fmt("%.3f s", worst)};
}

// 2. Cyclic shift, projector and closure of cyclic cochains.
Outcome cyclic_complex()
{
    std::mt19937_64 rng(102);
    int failures = 0;
    int shifts = 0, closures = 0;
    const VolumeForm vols[] = {VolumeForm::constant(2), VolumeForm{ct::x(2, 0)}};
    for (int t = 0; t < 24; ++t) {
        const VolumeForm& vol = vols[t % 2];
        int k = 1 + t % 3;
        PolyDiffOperator psi = ct::random_operator(rng, 2, k);
        PolyDiffOperator c = psi;
        for (int i = 0; i <= k; ++i) {
            c = cyclic_shift(c, vol);
        }
        failures += !(c == psi);
        PolyDiffOperator p = cyclic_projector(psi, vol);
        failures += !(cyclic_shift(p, vol) == p);
        ++shifts;
    }
    for (int t = 0; t < 20; ++t) {
        const VolumeForm& vol = vols[t % 2];
        PolyDiffOperator a = cyclic_projector(ct::random_operator(rng, 2, 1 + t % 2, 2, 1, 2), vol);
        PolyDiffOperator b = cyclic_projector(ct::random_operator(rng, 2, 1 + (t / 2) % 2, 2, 1, 2), vol);
        failures += !is_cyclic(hochschild_differential(a), vol);
        failures += !is_cyclic(gerstenhaber(a, b), vol);
        ++closures;
    }
    return {failures == 0, std::to_string(shifts) + " shift/projector instances, " + std::to_string(closures) +
                               " d/bracket instances, " + std::to_string(failures) + " failures"};
}

// 3. Single wedge weight at 10^6 samples against 1/2.
Outcome order_one_weight()
{
    auto ctx = AngleContext::standard({0, 0, 1});
    auto t0 = std::chrono::steady_clock::now();
    AdmissibleGraph wedge(1, 3, {{Target::boundary(0), Target::boundary(1)}});
    WeightEntry e = weight(wedge, ctx, sampler(1'000'000, 2024));
    double elapsed = seconds_since(t0);
    double quad = ct::wedge_weight_quadrature();
    bool pass = std::abs(e.value - 0.5) <= 3 * e.std_error && elapsed <= 60;
    double worst_zero = 0;
    for (auto [a, b] : {std::pair{0, 2}, {2, 0}, {1, 2}, {2, 1}}) {
        AdmissibleGraph g(1, 3, {{Target::boundary(a), Target::boundary(b)}});
        WeightEntry z = weight(g, ctx, sampler(1'000'000, 2024));
        worst_zero = std::max(worst_zero, std::abs(z.value));
        pass = pass && std::abs(z.value) <= 3 * std::max(e.std_error, z.std_error);
    }
    return {pass, fmt("W = %.5f +- %.5f, ", e.value, e.std_error) + fmt("quadrature %.9f, ", quad) +
                      fmt("%.1f s; edges to xi3 max |W| = %.2g", elapsed, worst_zero)};
}

// 4. Moyal ℏ² coefficient and Monte Carlo agreement with the exact table.
Outcome order_two_star()
{
    WeightTable exact = builtin_exact_table();
    StarProduct moyal = assemble_star(ct::moyal(), exact, 2);
    bool pass = true;
    std::string detail;
    // B2 = (1/8) Σ π^{ij}π^{kl} ∂i∂k f ∂j∂l g for constant π.
    PolyDiffOperator expected(2, 2);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) {
                    MultiIndex a(2, 0), b(2, 0);
                    ++a[i];
                    ++a[k];
                    ++b[j];
                    ++b[l];
                    expected.add_term({a, b}, ct::moyal().tensor({i, j}) * ct::moyal().tensor({k, l}) *
                                                  Rational(1, 8));
                }
            }
        }
    }
    pass = pass && moyal.levels[2] == expected;
    auto c = star_apply(moyal, ct::P("x1^2", 2), ct::P("x2^2", 2));
    pass = pass && c[2] == ct::P("1/2", 2);
    detail += std::string("Moyal B2 ") + (pass ? "exact" : "WRONG") + "; ";

    auto t0 = std::chrono::steady_clock::now();
    int within = 0;
    double worst = 0;
    std::string worst_key;
    auto graphs = star_graphs(2, 2);
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        WeightEntry mc = star_weight(graphs[i], sampler(1'000'000, 4000 + i, 0));
        const WeightEntry* ref = exact.find(canonical_key(graphs[i]), {});
        double z = ref ? std::abs(mc.value - ref->value) / std::max(mc.std_error, 1e-300) : 1e300;
        if (mc.std_error == 0 && ref && mc.value == ref->value) {
            z = 0;
        }
        within += z <= 3;
        if (z > worst) {
            worst = z;
            worst_key = mc.graph_key;
        }
    }
    pass = pass && within == static_cast<int>(graphs.size());
    detail += std::to_string(within) + "/" + std::to_string(graphs.size()) + " MC weights within 3 sigma (worst " +
              fmt("%.2f sigma", worst) + " at " + worst_key + "), " + fmt("%.1f s", seconds_since(t0));
    return {pass, detail};
}

// 5. Associativity through ℏ² plus a corrupted-weight negative control.
Outcome associativity()
{
    WeightTable exact = builtin_exact_table();
    bool moyal = check_associative(assemble_star(ct::moyal(), exact, 2), 20, 5, 3).pass;
    bool so3 = check_associative(assemble_star(ct::so3(), exact, 2), 20, 5, 3).pass;
    WeightTable corrupted = exact;
    const WeightEntry* chain = exact.find("2;2;2,b1|b1,b2", {});
    corrupted.insert(WeightEntry::from_exact(chain->graph_key, {}, *chain->exact + Rational(1, 12)));
    bool control = check_associative(assemble_star(ct::so3(), corrupted, 2), 20, 5, 3).pass;
    return {moyal && so3 && !control, std::string("Moyal ") + (moyal ? "ok" : "FAILED") + ", so(3) " +
                                          (so3 ? "ok" : "FAILED") + ", corrupted table " +
                                          (control ? "wrongly passes" : "rejected")};
}

// 6. Cyclicity for so(3) and the ½·div residual for x1 ∂1∧∂2.
Outcome cyclicity()
{
    WeightTable exact = builtin_exact_table();
    CheckReport so3 = check_cyclic(assemble_star(ct::so3(), exact, 2), VolumeForm::constant(3));
    bool so3_ok = so3.pass && so3.orders.size() == 2;

    PolyVector pi = ct::nondiv();
    CheckReport bad = check_cyclic(assemble_star(pi, exact, 1), VolumeForm::constant(2));
    // Expected residual: -1/2 div(π)(f)·g, with div π computed by the tpoly module.
    PolyVector div = divergence(pi, VolumeForm::constant(2));
    PolyDiffOperator expected(2, 2);
    for (int i = 0; i < 2; ++i) {
        MultiIndex a(2, 0), none(2, 0);
        ++a[i];
        expected.add_term({a, none}, div.tensor({i}) * Rational(-1, 2));
    }
    bool residual_ok = !bad.pass && !bad.orders[0].pass && bad.orders[0].residual_operator &&
                       *bad.orders[0].residual_operator == expected;
    return {so3_ok && residual_ok, std::string("so(3) orders 1-2 ") + (so3_ok ? "cyclic" : "NOT cyclic") +
                                       "; x1 d1^d2 order-1 residual " + bad.orders[0].residual +
                                       (residual_ok ? " = -1/2 div(pi)(f) g" : " (unexpected)")};
}

// 7. Closedness and unitality.
Outcome closedness()
{
    WeightTable exact = builtin_exact_table();
    bool pass = true;
    std::string detail;
    std::mt19937_64 rng(107);
    for (const auto& [name, pi] : {std::pair{"Moyal", ct::moyal()}, std::pair{"so(3)", ct::so3()}}) {
        StarProduct s = assemble_star(pi, exact, 2);
        bool closed = check_closed(s, VolumeForm::constant(pi.dim())).pass;
        bool unital = check_unital(s).pass;
        Polynomial one = Polynomial::constant(pi.dim(), 1);
        for (int t = 0; t < 10; ++t) {
            Polynomial f = ct::random_poly(rng, pi.dim(), 3, 4);
            auto right = star_apply(s, f, one), left = star_apply(s, one, f);
            unital = unital && right[0] == f && left[0] == f;
            for (int n = 1; n <= 2; ++n) {
                unital = unital && right[n].is_zero() && left[n].is_zero();
            }
        }
        pass = pass && closed && unital;
        detail += (detail.empty() ? "" : "; ") + std::string(name) + ": closed " + (closed ? "yes" : "NO") +
                  ", unital " + (unital ? "yes" : "NO");
    }
    return {pass, detail};
}

// 8. Key lemma with analytic derivatives.
Outcome key_lemma()
{
    auto a = AngleContext::standard({0, 0, 1});
    auto b = AngleContext::standard({1, 0, 0});
    std::mt19937_64 rng(108);
    std::uniform_real_distribution<double> u(0, 1);
    auto point = [&] { return std::polar(0.98 * std::sqrt(u(rng)), 2 * std::numbers::pi * u(rng)); };
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
        Complex p = point(), q = point();
        if (std::abs(p - q) < 1e-6) {
            --t;
            continue;
        }
        std::vector<Complex> qs{q};
        worst = std::max(worst, key_lemma_residual(a, b, p, qs));
    }
    return {worst < 1e-8, fmt("max q-gradient %.3g over 100 configurations", worst)};
}

// 9. α-independence at order 1, with the non-divergence-free control.
Outcome alpha_independence()
{
    std::vector<double> a{0, 0, 1}, b{1, 0, 0};
    WeightTable table;
    complete_trilinear_table(table, a, 1, sampler(1'000'000, 9001, 0));
    complete_trilinear_table(table, b, 1, sampler(1'000'000, 9002, 0));
    CheckReport so3 = check_alpha_independence(ct::so3(), a, b, table, 1, VolumeForm::constant(3), 0.0);
    CheckReport bad = check_alpha_independence(ct::nondiv(), a, b, table, 1, VolumeForm::constant(2), 0.0);
    std::string detail = std::string("so(3) ") + (so3.pass ? "agrees" : "DISAGREES") + " within 3 sigma; x1 d1^d2 " +
                         (bad.pass ? "wrongly agrees" : "disagrees");
    if (!bad.pass && !bad.orders.empty()) {
        detail += " (" + bad.orders[0].residual + ")";
    }
    return {so3.pass && !bad.pass, detail};
}

// 10. Byte-identical tables across repeats and thread counts.
Outcome determinism()
{
    auto table_bytes = [](int threads) {
        WeightTable t;
        for (const auto& g : star_graphs(2, 2)) {
            if (t.entries().size() == 6) {
                break;
            }
            t.insert(star_weight(g, sampler(100'000, 77, threads)));
        }
        complete_trilinear_table(t, {0, 0, 1}, 1, sampler(100'000, 78, threads));
        return dump(to_json(t));
    };
    std::string one = table_bytes(1);
    bool pass = one == table_bytes(1);
    for (int threads : {2, 3, 8}) {
        pass = pass && one == table_bytes(threads);
    }
    return {pass, "12-entry table, threads 1/1/2/3/8, fnv1a " + fnv1a_hex(one)};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 exact algebra identities", exact_algebra},
        {"2 cyclic cochain complex", cyclic_complex},
        {"3 order-1 weight", order_one_weight},
        {"4 order-2 star product and weights", order_two_star},
        {"5 associativity through order 2", associativity},
        {"6 cyclicity of the star product", cyclicity},
        {"7 closedness and unitality", closedness},
        {"8 key lemma", key_lemma},
        {"9 alpha independence at order 1", alpha_independence},
        {"10 determinism across thread counts", determinism},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        auto t0 = std::chrono::steady_clock::now();
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail
                  << fmt(" [%.1f s]", seconds_since(t0)) << std::endl;
    }
    std::cout << (failed ? "[FAIL] " : "[PASS] ") << (10 - failed) << "/10 criteria" << std::endl;
    return failed ? 1 : 0;
}
