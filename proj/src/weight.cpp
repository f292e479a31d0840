#include "cstar/weight.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace cstar {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFiniteDifferenceStep = 1e-6;
constexpr double kCoincidenceRadius = 1e-9;
constexpr std::int64_t kChunkSize = 1 << 14;

// Orientation of each interior point's coordinate plane, fixed so that the
// wedge graph (b1, b2) with α = (0, 0, 1) has weight +1/2.
constexpr int kInteriorOrientation = 1;

const Complex kI{0.0, 1.0};

double wrap(double a)
{
    a = std::fmod(a, kTwoPi);
    return a < 0 ? a + kTwoPi : a;
}

double wrap_signed(double a)
{
    a = wrap(a);
    return a > kPi ? a - kTwoPi : a;
}

// Boundary point exp(i·target) seen from the chart sending exp(i·xi) to
// infinity; nullopt when the two points coincide.
std::optional<double> boundary_image(double target, double xi)
{
    double half = 0.5 * (target - xi);
    double s = std::sin(half);
    if (std::abs(s) < 1e-15) {
        return std::nullopt;
    }
    return -std::cos(half) / s;
}

AngleGradient analytic_gradient(Complex z, Complex w, Complex dz, Complex dw, bool w_fixed)
{
    Complex a1 = 1.0 / (z - w);
    Complex a2 = 1.0 / (z - std::conj(w));
    AngleGradient g;
    Complex s = dz * (a1 + a2);
    g.px = s.imag();
    g.py = s.real();
    if (!w_fixed) {
        g.qx = (-dw * a1 - std::conj(dw) * a2).imag();
        g.qy = (-dw * a1).real() + (std::conj(dw) * a2).real();
    }
    return g;
}

void check_interior(Complex p)
{
    if (!(std::abs(p) < 1.0)) {
        throw std::invalid_argument("point is not in the open unit disk");
    }
}

} // namespace

AngleContext AngleContext::make(std::vector<double> alphas, std::vector<double> boundary_angles)
{
    if (alphas.size() != boundary_angles.size()) {
        throw std::invalid_argument("need one alpha per boundary point");
    }
    for (std::size_t j = 0; j < boundary_angles.size(); ++j) {
        double t = boundary_angles[j];
        if (!(t >= 0.0 && t < kTwoPi)) {
            throw std::invalid_argument("boundary angles must lie in [0, 2pi)");
        }
        if (j > 0 && !(t > boundary_angles[j - 1])) {
            throw std::invalid_argument("boundary angles must be strictly increasing");
        }
    }
    return AngleContext{std::move(alphas), std::move(boundary_angles)};
}

AngleContext AngleContext::standard(std::vector<double> alphas)
{
    std::vector<double> angles(alphas.size());
    for (std::size_t j = 0; j < angles.size(); ++j) {
        angles[j] = kTwoPi * static_cast<double>(j) / static_cast<double>(angles.size());
    }
    return make(std::move(alphas), std::move(angles));
}

AngleGradient& AngleGradient::operator+=(const AngleGradient& o)
{
    px += o.px;
    py += o.py;
    qx += o.qx;
    qy += o.qy;
    return *this;
}

AngleGradient& AngleGradient::operator*=(double s)
{
    px *= s;
    py *= s;
    qx *= s;
    qy *= s;
    return *this;
}

double harmonic_angle(Complex z, Complex w)
{
    return wrap(std::arg(z - w) + std::arg(z - std::conj(w)));
}

Complex disk_to_half_plane(Complex p, double xi)
{
    Complex u = p * std::polar(1.0, -xi);
    return kI * (1.0 + u) / (1.0 - u);
}

Complex disk_to_half_plane_derivative(Complex p, double xi)
{
    Complex rot = std::polar(1.0, -xi);
    Complex u = p * rot;
    return rot * 2.0 * kI / ((1.0 - u) * (1.0 - u));
}

Complex half_plane_to_disk(Complex z, double xi)
{
    return (z - kI) / (z + kI) * std::polar(1.0, xi);
}

double geodesic_angle(Complex p, Complex q, double xi)
{
    check_interior(p);
    check_interior(q);
    if (p == q) {
        throw std::invalid_argument("geodesic_angle: p and q coincide");
    }
    return harmonic_angle(disk_to_half_plane(p, xi), disk_to_half_plane(q, xi));
}

double geodesic_angle_to_boundary(Complex p, double target, double xi)
{
    check_interior(p);
    auto w = boundary_image(target, xi);
    if (!w) {
        return 0.0;
    }
    return harmonic_angle(disk_to_half_plane(p, xi), Complex(*w, 0.0));
}

AngleGradient geodesic_angle_gradient(Complex p, Complex q, double xi, DerivativeScheme scheme)
{
    if (scheme == DerivativeScheme::CentralDifference) {
        const double h = kFiniteDifferenceStep;
        auto diff = [&](Complex dp, Complex dq) {
            return wrap_signed(geodesic_angle(p + dp, q + dq, xi) - geodesic_angle(p - dp, q - dq, xi)) /
                   (2 * h);
        };
        return AngleGradient{diff(h, 0), diff(Complex(0, h), 0), diff(0, h), diff(0, Complex(0, h))};
    }
    check_interior(p);
    check_interior(q);
    return analytic_gradient(disk_to_half_plane(p, xi), disk_to_half_plane(q, xi),
                             disk_to_half_plane_derivative(p, xi), disk_to_half_plane_derivative(q, xi),
                             false);
}

AngleGradient geodesic_angle_to_boundary_gradient(Complex p, double target, double xi,
                                                  DerivativeScheme scheme)
{
    auto w = boundary_image(target, xi);
    if (!w) {
        return {};
    }
    if (scheme == DerivativeScheme::CentralDifference) {
        const double h = kFiniteDifferenceStep;
        auto diff = [&](Complex dp) {
            return wrap_signed(geodesic_angle_to_boundary(p + dp, target, xi) -
                               geodesic_angle_to_boundary(p - dp, target, xi)) /
                   (2 * h);
        };
        return AngleGradient{diff(h), diff(Complex(0, h)), 0, 0};
    }
    check_interior(p);
    return analytic_gradient(disk_to_half_plane(p, xi), Complex(*w, 0.0),
                             disk_to_half_plane_derivative(p, xi), 0.0, true);
}

double alpha_angle(const AngleContext& ctx, Complex p, Complex q)
{
    double s = 0.0;
    for (int k = 0; k < ctx.m(); ++k) {
        if (ctx.alphas[k] != 0.0) {
            s += ctx.alphas[k] * geodesic_angle(p, q, ctx.boundary_angles[k]);
        }
    }
    return wrap(s);
}

double alpha_angle_to_boundary(const AngleContext& ctx, Complex p, int boundary_index)
{
    double s = 0.0;
    double target = ctx.boundary_angles.at(boundary_index);
    for (int k = 0; k < ctx.m(); ++k) {
        if (ctx.alphas[k] != 0.0) {
            s += ctx.alphas[k] * geodesic_angle_to_boundary(p, target, ctx.boundary_angles[k]);
        }
    }
    return wrap(s);
}

AngleGradient alpha_angle_gradient(const AngleContext& ctx, Complex p, Complex q, DerivativeScheme scheme)
{
    AngleGradient total;
    for (int k = 0; k < ctx.m(); ++k) {
        if (ctx.alphas[k] != 0.0) {
            AngleGradient g = geodesic_angle_gradient(p, q, ctx.boundary_angles[k], scheme);
            g *= ctx.alphas[k];
            total += g;
        }
    }
    return total;
}

double key_lemma_residual(const AngleContext& ctx, const AngleContext& other, Complex p,
                          std::span<const Complex> qs, DerivativeScheme scheme)
{
    if (ctx.m() != other.m() || ctx.boundary_angles != other.boundary_angles) {
        throw std::invalid_argument("key_lemma_residual: contexts must share boundary points");
    }
    if (qs.empty()) {
        throw std::invalid_argument("key_lemma_residual: empty q-grid");
    }
    double worst = 0.0;
    for (Complex q : qs) {
        if (q == p) {
            throw std::invalid_argument("key_lemma_residual: grid point coincides with p");
        }
        AngleGradient a = alpha_angle_gradient(ctx, p, q, scheme);
        AngleGradient b = alpha_angle_gradient(other, p, q, scheme);
        worst = std::max(worst, std::hypot(a.qx - b.qx, a.qy - b.qy));
    }
    return worst;
}

WeightEntry WeightEntry::from_exact(std::string graph_key, std::vector<double> alphas, Rational exact)
{
    WeightEntry e;
    e.graph_key = std::move(graph_key);
    e.alphas = std::move(alphas);
    e.value = exact.get_d();
    e.exact = std::move(exact);
    return e;
}

int default_thread_count()
{
    if (const char* env = std::getenv("CSTAR_THREADS")) {
        int t = std::atoi(env);
        if (t > 0) {
            return t;
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

double determinant(std::vector<double>& a, int size)
{
    double det = 1.0;
    for (int c = 0; c < size; ++c) {
        int pivot = c;
        for (int r = c + 1; r < size; ++r) {
            if (std::abs(a[r * size + c]) > std::abs(a[pivot * size + c])) {
                pivot = r;
            }
        }
        if (a[pivot * size + c] == 0.0) {
            return 0.0;
        }
        if (pivot != c) {
            for (int k = 0; k < size; ++k) {
                std::swap(a[c * size + k], a[pivot * size + k]);
            }
            det = -det;
        }
        double d = a[c * size + c];
        det *= d;
        for (int r = c + 1; r < size; ++r) {
            double f = a[r * size + c] / d;
            if (f == 0.0) {
                continue;
            }
            for (int k = c + 1; k < size; ++k) {
                a[r * size + k] -= f * a[c * size + k];
            }
        }
    }
    return det;
}

struct Rng {
    Rng(std::uint64_t seed, std::uint64_t stream)
    {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        engine.seed(seq);
    }

    // Uniform in [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

    Complex disk_point()
    {
        double r = std::sqrt(uniform());
        double t = kTwoPi * uniform();
        return std::polar(r, t);
    }

    std::mt19937_64 engine;
};

struct Moments {
    std::int64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;
    std::int64_t rejected = 0;

    void push(double x)
    {
        ++count;
        double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    void merge(const Moments& o)
    {
        if (o.count == 0) {
            return;
        }
        std::int64_t total = count + o.count;
        double delta = o.mean - mean;
        mean += delta * static_cast<double>(o.count) / static_cast<double>(total);
        m2 += o.m2 + delta * delta * static_cast<double>(count) * static_cast<double>(o.count) /
                         static_cast<double>(total);
        count = total;
        rejected += o.rejected;
    }
};

// Runs `sample(rng) -> optional<double>` over `samples` draws split into fixed
// chunks; each chunk has its own stream derived from (seed, chunk index) and
// chunk results are merged in chunk order.
template <typename Sampler>
Moments run_chunks(const Sampler& sample, const SamplerOptions& opts)
{
    if (opts.samples <= 0) {
        throw std::invalid_argument("sample count must be positive");
    }
    std::int64_t chunks = (opts.samples + kChunkSize - 1) / kChunkSize;
    std::vector<Moments> results(static_cast<std::size_t>(chunks));
    int threads = opts.threads > 0 ? opts.threads : default_thread_count();
    threads = static_cast<int>(std::min<std::int64_t>(threads, chunks));

    auto work = [&](int worker) {
        for (std::int64_t c = worker; c < chunks; c += threads) {
            Rng rng(opts.seed, static_cast<std::uint64_t>(c));
            std::int64_t begin = c * kChunkSize;
            std::int64_t end = std::min(opts.samples, begin + kChunkSize);
            Moments& m = results[static_cast<std::size_t>(c)];
            for (std::int64_t s = begin; s < end; ++s) {
                auto v = sample(rng);
                if (!v) {
                    ++m.rejected;
                    m.push(0.0);
                } else {
                    m.push(*v);
                }
            }
        }
    };
    if (threads <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back(work, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    Moments total;
    for (const auto& m : results) {
        total.merge(m);
    }
    return total;
}

enum class VertexPlacement { Free, Slice, Pinned };

// Gauge slice for the configuration space of a graph.
struct Layout {
    std::vector<VertexPlacement> placement;
    std::vector<Complex> slice_direction; // Slice vertices: p = t * direction
    std::vector<double> slice_lo, slice_hi;
    std::vector<int> column; // first column of each vertex, -1 when pinned
    std::vector<int> boundary_column; // -1 for pinned boundary points
    int free_boundary = 0;
    double arc_begin = 0.0, arc_length = 0.0;
    int columns = 0;
    double measure = 1.0;
    int orientation = 1;
};

Layout make_layout(int n, int m, const AngleContext& ctx)
{
    Layout l;
    l.placement.assign(n, VertexPlacement::Free);
    l.slice_direction.assign(n, Complex(0, 0));
    l.slice_lo.assign(n, 0.0);
    l.slice_hi.assign(n, 0.0);
    l.column.assign(n, -1);
    l.boundary_column.assign(m, -1);
    if (m == 2) {
        // The stabilizer of ξ1, ξ2 translates along their geodesic; the
        // diameter through the midpoint of the arc is a transversal.
        l.placement[0] = VertexPlacement::Slice;
        double mid = 0.5 * (ctx.boundary_angles[0] + ctx.boundary_angles[1]);
        l.slice_direction[0] = std::polar(1.0, mid);
        l.slice_lo[0] = -1.0;
        l.slice_hi[0] = 1.0;
    } else if (m == 1) {
        l.placement[0] = VertexPlacement::Pinned;
    } else if (m == 0) {
        // p1 at the origin; rotations about it are fixed by putting p2 on (0, 1).
        l.placement[0] = VertexPlacement::Pinned;
        l.placement[1] = VertexPlacement::Slice;
        l.slice_direction[1] = Complex(1, 0);
        l.slice_lo[1] = 0.0;
        l.slice_hi[1] = 1.0;
    }
    for (int k = 0; k < n; ++k) {
        switch (l.placement[k]) {
        case VertexPlacement::Free:
            l.column[k] = l.columns;
            l.columns += 2;
            l.measure *= kPi;
            l.orientation *= kInteriorOrientation;
            break;
        case VertexPlacement::Slice:
            l.column[k] = l.columns;
            l.columns += 1;
            l.measure *= l.slice_hi[k] - l.slice_lo[k];
            break;
        case VertexPlacement::Pinned:
            break;
        }
    }
    if (m > 3) {
        l.free_boundary = m - 3;
        l.arc_begin = ctx.boundary_angles[2];
        l.arc_length = ctx.boundary_angles[0] + kTwoPi - ctx.boundary_angles[2];
        double volume = 1.0;
        for (int j = 1; j <= l.free_boundary; ++j) {
            volume *= l.arc_length / j;
        }
        l.measure *= volume;
        for (int j = 3; j < m; ++j) {
            l.boundary_column[j] = l.columns++;
        }
    }
    return l;
}

class WeightIntegrand {
public:
    WeightIntegrand(const AdmissibleGraph& g, const AngleContext& ctx)
        : graph_(g), ctx_(ctx), layout_(make_layout(g.internal_count(), g.boundary_count(), ctx))
    {
        for (int k = 0; k < ctx.m(); ++k) {
            if (ctx.alphas[k] != 0.0) {
                references_.push_back(k);
            }
        }
    }

    const Layout& layout() const { return layout_; }

    std::optional<double> operator()(Rng& rng) const
    {
        const int n = graph_.internal_count();
        const int m = graph_.boundary_count();
        std::vector<Complex> p(n);
        for (int k = 0; k < n; ++k) {
            switch (layout_.placement[k]) {
            case VertexPlacement::Free:
                p[k] = rng.disk_point();
                break;
            case VertexPlacement::Slice: {
                double t = layout_.slice_lo[k] + (layout_.slice_hi[k] - layout_.slice_lo[k]) * rng.uniform();
                p[k] = t * layout_.slice_direction[k];
                break;
            }
            case VertexPlacement::Pinned:
                p[k] = Complex(0, 0);
                break;
            }
        }
        std::vector<double> theta = ctx_.boundary_angles;
        if (layout_.free_boundary > 0) {
            std::vector<double> extra(layout_.free_boundary);
            for (auto& t : extra) {
                t = layout_.arc_begin + layout_.arc_length * rng.uniform();
            }
            std::sort(extra.begin(), extra.end());
            for (int j = 0; j < layout_.free_boundary; ++j) {
                theta[3 + j] = wrap(extra[j]);
            }
        }
        for (int a = 0; a < n; ++a) {
            if (std::abs(p[a]) > 1.0 - kCoincidenceRadius) {
                return std::nullopt;
            }
            for (int b = 0; b < a; ++b) {
                if (std::abs(p[a] - p[b]) < kCoincidenceRadius) {
                    return std::nullopt;
                }
            }
        }
        return integrand(p, theta, m);
    }

    // Determinant of the edge-angle Jacobian at a configuration.
    double integrand(const std::vector<Complex>& p, const std::vector<double>& theta, int m) const
    {
        const int size = layout_.columns;
        std::vector<double> jac(static_cast<std::size_t>(size * size), 0.0);
        int row = 0;
        for (int k = 0; k < graph_.internal_count(); ++k) {
            for (const Target& t : graph_.star(k)) {
                double* r = &jac[static_cast<std::size_t>(row * size)];
                AngleGradient grad;
                for (int ref : references_) {
                    AngleGradient gi = t.is_internal()
                                           ? gradient_internal(p[k], p[t.index], theta[ref])
                                           : gradient_boundary(p[k], theta[t.index], theta[ref]);
                    gi *= ctx_.alphas[ref];
                    grad += gi;
                }
                scatter(r, k, grad.px, grad.py);
                if (t.is_internal()) {
                    scatter(r, t.index, grad.qx, grad.qy);
                }
                for (int j = 3; j < m; ++j) {
                    int col = layout_.boundary_column[j];
                    if (col >= 0) {
                        r[col] = boundary_derivative(p[k], t.is_internal() ? p[t.index] : Complex(),
                                                     t, theta, j);
                    }
                }
                ++row;
            }
        }
        return layout_.orientation * determinant(jac, size);
    }

private:
    static AngleGradient gradient_internal(Complex p, Complex q, double xi)
    {
        return analytic_gradient(disk_to_half_plane(p, xi), disk_to_half_plane(q, xi),
                                 disk_to_half_plane_derivative(p, xi), disk_to_half_plane_derivative(q, xi),
                                 false);
    }

    static AngleGradient gradient_boundary(Complex p, double target, double xi)
    {
        auto w = boundary_image(target, xi);
        if (!w) {
            return {};
        }
        return analytic_gradient(disk_to_half_plane(p, xi), Complex(*w, 0.0),
                                 disk_to_half_plane_derivative(p, xi), 0.0, true);
    }

    void scatter(double* row, int vertex, double dx, double dy) const
    {
        int col = layout_.column[vertex];
        switch (layout_.placement[vertex]) {
        case VertexPlacement::Free:
            row[col] += dx;
            row[col + 1] += dy;
            break;
        case VertexPlacement::Slice: {
            Complex d = layout_.slice_direction[vertex];
            row[col] += dx * d.real() + dy * d.imag();
            break;
        }
        case VertexPlacement::Pinned:
            break;
        }
    }

    double edge_angle(Complex p, Complex q, const Target& t, const std::vector<double>& theta) const
    {
        double s = 0.0;
        for (int ref : references_) {
            double v;
            if (t.is_internal()) {
                v = harmonic_angle(disk_to_half_plane(p, theta[ref]), disk_to_half_plane(q, theta[ref]));
            } else {
                auto w = boundary_image(theta[t.index], theta[ref]);
                v = w ? harmonic_angle(disk_to_half_plane(p, theta[ref]), Complex(*w, 0.0)) : 0.0;
            }
            s += ctx_.alphas[ref] * v;
        }
        return s;
    }

    double boundary_derivative(Complex p, Complex q, const Target& t, std::vector<double> theta, int j) const
    {
        const double h = kFiniteDifferenceStep;
        double base = theta[j];
        theta[j] = base + h;
        double plus = edge_angle(p, q, t, theta);
        theta[j] = base - h;
        double minus = edge_angle(p, q, t, theta);
        return wrap_signed(plus - minus) / (2 * h);
    }

    const AdmissibleGraph& graph_;
    AngleContext ctx_;
    Layout layout_;
    std::vector<int> references_;
};

WeightEntry finish(std::string key, std::vector<double> alphas, const Moments& mom, double scale,
                   const SamplerOptions& opts)
{
    WeightEntry e;
    e.graph_key = std::move(key);
    e.alphas = std::move(alphas);
    e.samples = mom.count;
    e.seed = opts.seed;
    e.rejected = mom.rejected;
    e.value = scale * mom.mean;
    double var = mom.count > 1 ? mom.m2 / static_cast<double>(mom.count - 1) : 0.0;
    e.std_error = std::abs(scale) * std::sqrt(var / static_cast<double>(mom.count));
    return e;
}

} // namespace

WeightEntry weight(const AdmissibleGraph& g, const AngleContext& ctx, const SamplerOptions& opts)
{
    const int n = g.internal_count();
    const int m = g.boundary_count();
    if (ctx.m() != m) {
        throw std::invalid_argument("weight: angle context has " + std::to_string(ctx.m()) +
                                    " boundary points, graph has " + std::to_string(m));
    }
    const int top = 2 * n + m - 3;
    if (g.edge_count() != top) {
        throw std::invalid_argument("weight: graph has " + std::to_string(g.edge_count()) +
                                    " edges, top degree needs " + std::to_string(top));
    }
    WeightIntegrand integrand(g, ctx);
    double scale = integrand.layout().measure / std::pow(kTwoPi, top);
    Moments mom = run_chunks(integrand, opts);
    return finish(canonical_key(g), ctx.alphas, mom, scale, opts);
}

namespace {

AdmissibleGraph with_observer(const AdmissibleGraph& g)
{
    if (g.boundary_count() != 2 || g.edge_count() != 2 * g.internal_count()) {
        throw std::invalid_argument("star weights need m = 2 and 2n edges");
    }
    return AdmissibleGraph(g.internal_count(), 3, g.stars());
}

} // namespace

WeightEntry star_weight(const AdmissibleGraph& g, const SamplerOptions& opts)
{
    AdmissibleGraph lifted = with_observer(g);
    WeightEntry e = weight(lifted, AngleContext::standard({0.0, 0.0, 1.0}), opts);
    e.graph_key = canonical_key(g);
    e.alphas.clear();
    return e;
}

WeightEntry half_plane_weight(const AdmissibleGraph& g, const SamplerOptions& opts)
{
    with_observer(g);
    const int n = g.internal_count();
    const int size = 2 * n;
    const double boundary[2] = {0.0, 1.0};
    auto sample = [&](Rng& rng) -> std::optional<double> {
        std::vector<Complex> z(n);
        double jacobian = 1.0;
        for (int k = 0; k < n; ++k) {
            Complex p = rng.disk_point();
            if (std::abs(p) > 1.0 - kCoincidenceRadius) {
                return std::nullopt;
            }
            z[k] = Complex(0, 1) * (1.0 + p) / (1.0 - p);
            jacobian *= std::norm(2.0 / ((1.0 - p) * (1.0 - p)));
        }
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < a; ++b) {
                if (std::abs(z[a] - z[b]) < kCoincidenceRadius * std::abs(z[a])) {
                    return std::nullopt;
                }
            }
        }
        std::vector<double> jac(static_cast<std::size_t>(size * size), 0.0);
        int row = 0;
        for (int k = 0; k < n; ++k) {
            for (const Target& t : g.star(k)) {
                double* r = &jac[static_cast<std::size_t>(row * size)];
                Complex w = t.is_internal() ? z[t.index] : Complex(boundary[t.index], 0.0);
                Complex a1 = 1.0 / (z[k] - w);
                Complex a2 = 1.0 / (z[k] - std::conj(w));
                r[2 * k] += (a1 + a2).imag();
                r[2 * k + 1] += (a1 + a2).real();
                if (t.is_internal()) {
                    r[2 * t.index] += (-a1 - a2).imag();
                    r[2 * t.index + 1] += (-a1 + a2).real();
                }
                ++row;
            }
        }
        int orientation = 1;
        for (int k = 0; k < n; ++k) {
            orientation *= kInteriorOrientation;
        }
        return orientation * determinant(jac, size) * jacobian;
    };
    double scale = std::pow(kPi, n) / std::pow(kTwoPi, size);
    Moments mom = run_chunks(sample, opts);
    return finish(canonical_key(g), {}, mom, scale, opts);
}

WeightTable::WeightTable(std::vector<WeightEntry> entries)
{
    for (auto& e : entries) {
        insert(std::move(e));
    }
}

void WeightTable::insert(WeightEntry entry)
{
    for (auto& e : entries_) {
        if (e.graph_key == entry.graph_key && e.alphas == entry.alphas) {
            e = std::move(entry);
            return;
        }
    }
    entries_.push_back(std::move(entry));
}

const WeightEntry* WeightTable::find(const std::string& graph_key, const std::vector<double>& alphas) const
{
    for (const auto& e : entries_) {
        if (e.graph_key == graph_key && e.alphas == alphas) {
            return &e;
        }
    }
    return nullptr;
}

bool WeightTable::all_exact() const
{
    return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.is_exact(); });
}

std::string WeightTable::provenance() const
{
    if (entries_.empty()) {
        return "empty";
    }
    bool any_exact = false, any_mc = false;
    for (const auto& e : entries_) {
        (e.is_exact() ? any_exact : any_mc) = true;
    }
    if (any_exact && any_mc) {
        return "mixed";
    }
    return any_exact ? "exact" : "monte-carlo";
}

WeightTable builtin_exact_table()
{
    // Order 1 is the calibration itself. Order 2 values are the Monte Carlo
    // estimates (2e5 samples per graph, both integration routes) rounded to
    // 1/24; associativity of the assembled product pins them independently
    // (see tests/test_star.cpp).
    static const std::pair<const char*, const char*> rows[] = {
        {"1;2;b1,b2", "1/2"},
        {"1;2;b2,b1", "-1/2"},
        {"2;2;2,b1|1,b1", "0"},
        {"2;2;2,b1|1,b2", "-1/24"},
        {"2;2;2,b1|b1,1", "0"},
        {"2;2;2,b1|b1,b2", "-1/12"},
        {"2;2;2,b1|b2,1", "1/24"},
        {"2;2;2,b1|b2,b1", "1/12"},
        {"2;2;2,b2|1,b1", "-1/24"},
        {"2;2;2,b2|1,b2", "0"},
        {"2;2;2,b2|b1,1", "1/24"},
        {"2;2;2,b2|b1,b2", "1/12"},
        {"2;2;2,b2|b2,1", "0"},
        {"2;2;2,b2|b2,b1", "-1/12"},
        {"2;2;b1,2|1,b1", "0"},
        {"2;2;b1,2|1,b2", "1/24"},
        {"2;2;b1,2|b1,1", "0"},
        {"2;2;b1,2|b1,b2", "1/12"},
        {"2;2;b1,2|b2,1", "-1/24"},
        {"2;2;b1,2|b2,b1", "-1/12"},
        {"2;2;b1,b2|1,b1", "-1/12"},
        {"2;2;b1,b2|1,b2", "1/12"},
        {"2;2;b1,b2|b1,1", "1/12"},
        {"2;2;b1,b2|b1,b2", "1/4"},
        {"2;2;b1,b2|b2,1", "-1/12"},
        {"2;2;b1,b2|b2,b1", "-1/4"},
        {"2;2;b2,2|1,b1", "1/24"},
        {"2;2;b2,2|1,b2", "0"},
        {"2;2;b2,2|b1,1", "-1/24"},
        {"2;2;b2,2|b1,b2", "-1/12"},
        {"2;2;b2,2|b2,1", "0"},
        {"2;2;b2,2|b2,b1", "1/12"},
        {"2;2;b2,b1|1,b1", "1/12"},
        {"2;2;b2,b1|1,b2", "-1/12"},
        {"2;2;b2,b1|b1,1", "-1/12"},
        {"2;2;b2,b1|b1,b2", "-1/4"},
        {"2;2;b2,b1|b2,1", "1/12"},
        {"2;2;b2,b1|b2,b1", "1/4"},
    };
    WeightTable table;
    for (const auto& [key, value] : rows) {
        table.insert(WeightEntry::from_exact(key, {}, Rational(value)));
    }
    return table;
}

} // namespace cstar
