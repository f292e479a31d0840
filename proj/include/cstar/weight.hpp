#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cstar/graph.hpp"
#include "cstar/poly.hpp"

namespace cstar {

using Complex = std::complex<double>;

/// Boundary data for the α-weighted angle function: the points
/// ξ_j = exp(i·boundary_angles[j]) on the unit circle, counterclockwise, and
/// one weight α_j per point.
struct AngleContext {
    std::vector<double> alphas;
    std::vector<double> boundary_angles;

    /// Validates lengths and strict counterclockwise order in [0, 2π).
    static AngleContext make(std::vector<double> alphas, std::vector<double> boundary_angles);
    /// Evenly spaced boundary points 2πj/m.
    static AngleContext standard(std::vector<double> alphas);

    int m() const { return static_cast<int>(boundary_angles.size()); }
};

/// Kontsevich's harmonic angle on the upper half-plane,
/// φ^h(z, w) = arg((z - w)(z - w̄)), in [0, 2π). `w` may be real.
double harmonic_angle(Complex z, Complex w);

/// Cayley map of the unit disk onto the upper half-plane sending exp(i·xi)
/// to infinity, and its complex derivative.
Complex disk_to_half_plane(Complex p, double xi);
Complex disk_to_half_plane_derivative(Complex p, double xi);
/// Inverse of disk_to_half_plane.
Complex half_plane_to_disk(Complex z, double xi);

/// Angle at p between the hyperbolic geodesics p→q and p→exp(i·xi), in [0, 2π).
double geodesic_angle(Complex p, Complex q, double xi);
/// Same with q replaced by the boundary point exp(i·target).
double geodesic_angle_to_boundary(Complex p, double target, double xi);

/// Partial derivatives of an angle function with respect to the real and
/// imaginary parts of p and q.
struct AngleGradient {
    double px = 0, py = 0, qx = 0, qy = 0;

    AngleGradient& operator+=(const AngleGradient& o);
    AngleGradient& operator*=(double s);
};

enum class DerivativeScheme { Analytic, CentralDifference };

AngleGradient geodesic_angle_gradient(Complex p, Complex q, double xi,
                                      DerivativeScheme scheme = DerivativeScheme::Analytic);
/// qx, qy are zero: the boundary target is fixed.
AngleGradient geodesic_angle_to_boundary_gradient(Complex p, double target, double xi,
                                                  DerivativeScheme scheme = DerivativeScheme::Analytic);

/// φ_α(p, q) = Σ_k α_k φ_k(p, q), reduced to [0, 2π).
double alpha_angle(const AngleContext& ctx, Complex p, Complex q);
double alpha_angle_to_boundary(const AngleContext& ctx, Complex p, int boundary_index);
AngleGradient alpha_angle_gradient(const AngleContext& ctx, Complex p, Complex q,
                                   DerivativeScheme scheme = DerivativeScheme::Analytic);

/// Max over `qs` of |∇_q (φ_α(p, q) - φ_α'(p, q))|. Vanishes when the
/// difference of the two angle functions does not depend on q.
double key_lemma_residual(const AngleContext& ctx, const AngleContext& other, Complex p,
                          std::span<const Complex> qs,
                          DerivativeScheme scheme = DerivativeScheme::Analytic);

struct WeightEntry {
    std::string graph_key;
    std::vector<double> alphas;
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
    /// Samples discarded because two points nearly coincided.
    std::int64_t rejected = 0;
    std::optional<Rational> exact;

    static WeightEntry from_exact(std::string graph_key, std::vector<double> alphas, Rational exact);
    bool is_exact() const { return exact.has_value(); }

    friend bool operator==(const WeightEntry&, const WeightEntry&) = default;
};

struct SamplerOptions {
    std::int64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    /// Worker threads; 0 means CSTAR_THREADS or the hardware concurrency.
    int threads = 0;
};

/// Monte Carlo estimate of
///   W_Γ^α = (2π)^{-|E_Γ|} ∫_{D⁺_{n,m}} ⋀_e dφ_{e;α}
/// for a graph with exactly 2n + m - 3 edges. The PSL₂(R) gauge is fixed by
/// pinning ξ_1, ξ_2, ξ_3 at ctx.boundary_angles; further boundary points are
/// integrated over the ordered arc from ξ_3 back to ξ_1. For m < 3 the
/// remaining gauge is fixed on interior data (see weight.cpp). The result is
/// a pure function of (graph, ctx, samples, seed), whatever the thread count.
WeightEntry weight(const AdmissibleGraph& g, const AngleContext& ctx, const SamplerOptions& opts);

/// Star-product weight of a graph with m = 2 and 2n edges: the weight of the
/// same graph with a third, edge-free boundary point and α = (0, 0, 1).
/// The entry is keyed by the m = 2 graph and carries an empty α-vector.
WeightEntry star_weight(const AdmissibleGraph& g, const SamplerOptions& opts);

/// Independent route for star-product weights: Kontsevich's half-plane
/// integral with the boundary points pinned at 0 and 1, sampled through the
/// Cayley map.
WeightEntry half_plane_weight(const AdmissibleGraph& g, const SamplerOptions& opts);

/// Weight lookup keyed by (canonical graph key, α-vector).
class WeightTable {
public:
    WeightTable() = default;
    explicit WeightTable(std::vector<WeightEntry> entries);

    /// Inserts or replaces the entry with the same key and α-vector.
    void insert(WeightEntry entry);
    const WeightEntry* find(const std::string& graph_key, const std::vector<double>& alphas) const;
    const std::vector<WeightEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    /// True when every entry carries an exact rational.
    bool all_exact() const;
    /// "exact", "monte-carlo", "mixed" or "empty".
    std::string provenance() const;

private:
    std::vector<WeightEntry> entries_;
};

/// Calibrated exact weights for star_graphs(1, 2) and star_graphs(2, 2).
WeightTable builtin_exact_table();

/// Default worker count: CSTAR_THREADS when set, else hardware concurrency.
int default_thread_count();

} // namespace cstar
