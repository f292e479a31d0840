#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cstar/dpoly.hpp"
#include "cstar/graph.hpp"
#include "cstar/tpoly.hpp"
#include "cstar/weight.hpp"

namespace cstar {

struct GraphOperator {
    AdmissibleGraph graph;
    /// Arity equals the graph's boundary count.
    PolyDiffOperator op;
};

/// Kontsevich contraction U_Γ(γ_1, ..., γ_n): vertex k carries the full skew
/// tensor of γ_k indexed by its ordered star, every edge k → v contracts one
/// index with a derivative on v's factor, boundary vertex j is slot j.
GraphOperator graph_to_operator(const AdmissibleGraph& g, const std::vector<PolyVector>& gammas);

/// Truncated star product f ⋆ g = Σ_{n ≤ order} ℏ^n B_n(f, g).
struct StarProduct {
    PolyVector pi;
    int order = 0;
    /// levels[n] = B_n; levels[0] is the multiplication.
    std::vector<PolyDiffOperator> levels;
    /// Provenance of the weight table used ("exact", "monte-carlo", "mixed").
    std::string weight_source;
    /// True when every weight used was an exact rational.
    bool exact = true;
};

/// B_n = (1/n!) Σ_{Γ ∈ star_graphs(n, 2)} 2^{-n} W_Γ U_Γ(π, ..., π).
/// Monte Carlo weights enter as the exact binary value of the double.
/// Throws on a non-Poisson π or when a graph has no table entry.
StarProduct assemble_star(const PolyVector& pi, const WeightTable& table, int order);

/// Coefficients of ℏ^0 ... ℏ^order in f ⋆ g.
std::vector<Polynomial> star_apply(const StarProduct& s, const Polynomial& f, const Polynomial& g);

/// Pass/fail for one order of a check, with the offending residual rendered.
struct OrderVerdict {
    int order = 0;
    bool pass = true;
    std::string residual = "0";
    std::optional<PolyDiffOperator> residual_operator;
};

struct CheckReport {
    std::string check;
    bool pass = true;
    std::vector<OrderVerdict> orders;
    std::vector<std::string> notes;
};

/// (f⋆g)⋆h = f⋆(g⋆h) order by order on random triples of degree ≤ max_degree.
CheckReport check_associative(const StarProduct& s, int trials, std::uint64_t seed, int max_degree = 3);

/// Compares the slot-1 normal forms of B_n(f,g)·h and B_n(g,h)·f for each
/// 1 ≤ n ≤ order. The residual is NF(B_n(f,g)·h) - B_n(g,h).
CheckReport check_cyclic(const StarProduct& s, const VolumeForm& vol);

/// For each 1 ≤ n ≤ order, the slot-1 normal form of (f,g) ↦ B_n(f,g) must vanish.
CheckReport check_closed(const StarProduct& s, const VolumeForm& vol);

/// B_n(f, 1) = B_n(1, f) = 0 for n ≥ 1, as operators.
CheckReport check_unital(const StarProduct& s);

/// (1/n!) Σ_{Γ ∈ star_graphs(n, 3)} 2^{-n} W_Γ^α U_Γ(π, ..., π), arity 3.
PolyDiffOperator assemble_trilinear(const PolyVector& pi, const std::vector<double>& alphas,
                                    const WeightTable& table, int n);

/// Compares the slot-1 normal forms of the trilinear functionals for two
/// α-vectors with equal sums, coefficient by coefficient, within
/// max(3σ, floor) where σ propagates the table's standard errors.
CheckReport check_alpha_independence(const PolyVector& pi, const std::vector<double>& alphas,
                                     const std::vector<double>& other_alphas, const WeightTable& table, int n,
                                     const VolumeForm& vol, double tolerance_floor = 1e-3);

/// Fills `table` with Monte Carlo entries for every star_graphs(n, 3) graph
/// at the given α that it does not already contain.
void complete_trilinear_table(WeightTable& table, const std::vector<double>& alphas, int n,
                              const SamplerOptions& opts);

} // namespace cstar
