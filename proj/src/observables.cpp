#include "nmq/observables.hpp"

#include <algorithm>
#include <cmath>

namespace nmq {

namespace {

constexpr double kCoherenceFloor = 1e-12;
constexpr double kAsymptoteFloor = 1e-10;

bool analytic(TraceMethod m) {
    return m == TraceMethod::AnalyticNonMarkov || m == TraceMethod::AnalyticZeroT || m == TraceMethod::Markov;
}

// Weights of the three-point derivative at x0 using samples at x0, x1, x2 (any order, distinct).
void lagrange_d1(double x0, double x1, double x2, double& w0, double& w1, double& w2) {
    w0 = (2 * x0 - x1 - x2) / ((x0 - x1) * (x0 - x2));
    w1 = (x0 - x2) / ((x1 - x0) * (x1 - x2));
    w2 = (x0 - x1) / ((x2 - x0) * (x2 - x1));
}

}  // namespace

std::vector<double> differentiate(const std::vector<double>& t, const std::vector<double>& f) {
    const std::size_t n = t.size();
    if (n < 3 || f.size() != n) throw InvalidParam("differentiation needs at least 3 matching samples");
    std::vector<double> d(n);
    double w0, w1, w2;
    lagrange_d1(t[0], t[1], t[2], w0, w1, w2);
    d[0] = w0 * f[0] + w1 * f[1] + w2 * f[2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        lagrange_d1(t[i], t[i - 1], t[i + 1], w0, w1, w2);
        d[i] = w0 * f[i] + w1 * f[i - 1] + w2 * f[i + 1];
    }
    lagrange_d1(t[n - 1], t[n - 2], t[n - 3], w0, w1, w2);
    d[n - 1] = w0 * f[n - 1] + w1 * f[n - 2] + w2 * f[n - 3];
    return d;
}

RateSeries decoherence_rate(const EvolutionTrace& trace) {
    const std::size_t n = trace.grid.size();
    if (n < 3) throw InvalidParam("decoherence rate needs at least 3 grid points");
    std::vector<double> lg(n);
    std::vector<bool> bad(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = std::abs(trace.states[i].rho10());
        bad[i] = !(a > kCoherenceFloor);
        lg[i] = bad[i] ? 0.0 : std::log(a);
    }
    const auto d = differentiate(trace.grid.times(), lg);
    RateSeries out{trace.grid, std::vector<std::optional<double>>(n), RateKind::Decoherence};
    for (std::size_t i = 0; i < n; ++i) {
        // the stencil touches i-1..i+1 (or the end triples); any degenerate sample poisons it
        const std::size_t lo = i == 0 ? 0 : (i + 1 == n ? n - 3 : i - 1);
        const bool ok = !bad[lo] && !bad[lo + 1] && !bad[lo + 2];
        if (ok) out.values[i] = -d[i];
    }
    return out;
}

RateSeries relaxation_rate(const EvolutionTrace& trace, const Asymptote& rho_inf) {
    if (analytic(trace.method) && trace_method(rho_inf.method) != trace.method)
        throw InvalidParam("asymptote method " + to_string(rho_inf.method) + " does not match trace method " +
                           to_string(trace.method));
    const std::size_t n = trace.grid.size();
    if (n < 3) throw InvalidParam("relaxation rate needs at least 3 grid points");
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = trace.states[i].rho11();
    const auto d = differentiate(trace.grid.times(), p);
    const double pinf = rho_inf.rho.rho11();
    RateSeries out{trace.grid, std::vector<std::optional<double>>(n), RateKind::Relaxation};
    for (std::size_t i = 0; i < n; ++i) {
        const double gap = p[i] - pinf;
        if (std::abs(gap) > kAsymptoteFloor) out.values[i] = -d[i] / gap;
    }
    return out;
}

RateSeries rate_ratio(const RateSeries& dec, const RateSeries& rel) {
    if (!(dec.grid == rel.grid)) throw GridMismatch("rate series are on different grids");
    RateSeries out{dec.grid, std::vector<std::optional<double>>(dec.values.size()), RateKind::Ratio};
    for (std::size_t i = 0; i < dec.values.size(); ++i)
        if (dec.values[i] && rel.values[i] && *rel.values[i] != 0.0) out.values[i] = *dec.values[i] / *rel.values[i];
    return out;
}

double nonmarkov_decoherence_rate(const ModelParams& params, double t) {
    const double x = params.x();
    const double xE = x * std::exp(-params.gamma0 * t);
    return 0.5 * params.gamma0 + params.gamma0 * xE / (1.0 - xE);
}

double nonmarkov_relaxation_rate(const ModelParams& params, double t) {
    // rho11(0)=1: rho11 - x = (1-x) E (1 - 2x + x^2 E) / D^2 with D = 1 - xE; minus its log-derivative
    const double x = params.x();
    const double g = params.gamma0;
    const double E = std::exp(-g * t);
    const double D = 1.0 - x * E;
    return g * (1.0 - 2.0 * x + x * E) / (D * (1.0 - 2.0 * x + x * x * E));
}

RateSeries nonmarkov_decoherence_series(const ModelParams& params, const TimeGrid& grid) {
    RateSeries out{grid, {}, RateKind::Decoherence};
    for (double t : grid.times()) out.values.emplace_back(nonmarkov_decoherence_rate(params, t));
    return out;
}

RateSeries nonmarkov_relaxation_series(const ModelParams& params, const TimeGrid& grid) {
    RateSeries out{grid, {}, RateKind::Relaxation};
    for (double t : grid.times()) out.values.emplace_back(nonmarkov_relaxation_rate(params, t));
    return out;
}

double markov_decoherence_rate(const ModelParams& params) { return 0.5 * params.gamma0 * params.coth_half(); }
double markov_relaxation_rate(const ModelParams& params) { return params.gamma0 * params.coth_half(); }

std::vector<double> fidelity_vs_free(const EvolutionTrace& trace, const QubitDensityMatrix& rho0) {
    std::vector<double> f(trace.grid.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double t = trace.grid[i];
        const auto& r = trace.states[i];
        const cplx s10 = rho0.rho10() * std::exp(cplx(0.0, -trace.params.omega0 * t));
        // Tr[r s] = r00 s00 + r11 s11 + r01 s10 + r10 s01
        f[i] = r.rho00() * rho0.rho00() + r.rho11() * rho0.rho11() + 2.0 * std::real(r.rho01() * s10);
    }
    return f;
}

double binary_entropy(double p) {
    auto term = [](double q) { return q > 0.0 ? -q * std::log(q) : 0.0; };
    p = std::clamp(p, 0.0, 1.0);
    return term(p) + term(1.0 - p);
}

double von_neumann_entropy(const QubitDensityMatrix& rho) {
    const double dz = rho.rho11() - rho.rho00();
    const double r = std::sqrt(dz * dz + 4.0 * std::norm(rho.rho10()));
    double lp = 0.5 * (1.0 + r);
    if (lp > 1.0 && lp < 1.0 + 1e-10) lp = 1.0;
    return binary_entropy(lp);
}

}  // namespace nmq
