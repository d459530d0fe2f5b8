#include "nmq/analytic.hpp"

#include <cmath>
#include <sstream>

namespace nmq {

namespace {

const cplx I{0.0, 1.0};

// Gamma0 t -> E = exp(-Gamma0 t)
double decay(const ModelParams& p, double t) { return std::exp(-p.gamma0 * t); }

EvolutionTrace build(TraceMethod label, const ModelParams& params, const QubitDensityMatrix& rho0,
                     const TimeGrid& grid, QubitMapSample (*map)(const ModelParams&, double)) {
    EvolutionTrace tr;
    tr.method = label;
    tr.params = params;
    tr.grid = grid;
    tr.states.reserve(grid.size());
    for (double t : grid.times()) tr.states.push_back(validate_density_matrix(map(params, t).apply(rho0)));
    return tr;
}

}  // namespace

std::string to_string(MethodLabel m) { return to_string(trace_method(m)); }

TraceMethod trace_method(MethodLabel m) {
    switch (m) {
        case MethodLabel::NonMarkovLowT: return TraceMethod::AnalyticNonMarkov;
        case MethodLabel::ZeroT: return TraceMethod::AnalyticZeroT;
        case MethodLabel::Markov: return TraceMethod::Markov;
    }
    return TraceMethod::AnalyticNonMarkov;
}

double upsilon(const ModelParams& params, double t) {
    if (t < 0.0) throw InvalidParam("upsilon needs t >= 0");
    const double x = params.x();
    return (1.0 - x) / (1.0 - x * decay(params, t));
}

QubitMapSample nonmarkov_map(const ModelParams& params, double t) {
    const double x = params.x();
    const double E = decay(params, t);
    const double U = upsilon(params, t);
    const double k = (1.0 - E) / (1.0 - x * E);

    QubitMapSample m;
    m.p11_from0 = 1.0 - U;
    m.p11_from1 = 1.0 - k * U;
    // lower population from its own formula, not from 1 - rho11
    m.p00_from0 = U;
    m.p00_from1 = k * U;
    const double drift = std::abs(m.p11_from1 + m.p00_from1 - 1.0) + std::abs(m.p11_from0 + m.p00_from0 - 1.0);
    if (drift > 1e-12) {
        std::ostringstream os;
        os << "upper and lower population formulas disagree by " << drift;
        throw std::logic_error(os.str());
    }
    m.coherence = std::exp(-0.5 * params.gamma0 * t - I * params.omega0 * t) * U;
    return m;
}

QubitMapSample zero_temperature_map(const ModelParams& params, double t) {
    const double E = decay(params, t);
    QubitMapSample m;
    m.p11_from1 = E;
    m.p11_from0 = 0.0;
    m.p00_from1 = 1.0 - E;
    m.p00_from0 = 1.0;
    m.coherence = std::exp(-0.5 * params.gamma0 * t - I * params.omega0 * t);
    return m;
}

QubitMapSample markov_map(const ModelParams& params, double t) {
    const double x = params.x();
    const double c = params.coth_half();
    const double R = std::exp(-params.gamma0 * c * t);
    const double peq = x / (1.0 + x);
    QubitMapSample m;
    m.p11_from1 = R + peq * (1.0 - R);
    m.p11_from0 = peq * (1.0 - R);
    m.p00_from1 = 1.0 - m.p11_from1;
    m.p00_from0 = 1.0 - m.p11_from0;
    m.coherence = std::exp(-I * params.omega0 * t - 0.5 * params.gamma0 * t * c);
    return m;
}

EvolutionTrace evolve_nonmarkov(const ModelParams& params, const QubitDensityMatrix& rho0,
                                const TimeGrid& grid) {
    return build(TraceMethod::AnalyticNonMarkov, params, rho0, grid, nonmarkov_map);
}

EvolutionTrace evolve_zero_temperature(const ModelParams& params, const QubitDensityMatrix& rho0,
                                       const TimeGrid& grid) {
    return build(TraceMethod::AnalyticZeroT, params, rho0, grid, zero_temperature_map);
}

EvolutionTrace evolve_markov(const ModelParams& params, const QubitDensityMatrix& rho0,
                             const TimeGrid& grid) {
    return build(TraceMethod::Markov, params, rho0, grid, markov_map);
}

EvolutionTrace evolve_analytic(MethodLabel method, const ModelParams& params,
                               const QubitDensityMatrix& rho0, const TimeGrid& grid) {
    switch (method) {
        case MethodLabel::NonMarkovLowT: return evolve_nonmarkov(params, rho0, grid);
        case MethodLabel::ZeroT: return evolve_zero_temperature(params, rho0, grid);
        case MethodLabel::Markov: return evolve_markov(params, rho0, grid);
    }
    throw InvalidParam("unknown analytic method");
}

Asymptote asymptotic_state(const ModelParams& params, MethodLabel method) {
    const double x = params.x();
    switch (method) {
        case MethodLabel::NonMarkovLowT: return {method, QubitDensityMatrix::diagonal(x)};
        case MethodLabel::Markov: return {method, QubitDensityMatrix::diagonal(x / (1.0 + x))};
        case MethodLabel::ZeroT: return {method, QubitDensityMatrix::ground()};
    }
    throw InvalidParam("unknown analytic method");
}

}  // namespace nmq
