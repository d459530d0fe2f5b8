// observables.hpp - decoherence/relaxation rates, fidelity against free evolution, entropy

#pragma once

#include <optional>
#include <vector>

#include "nmq/analytic.hpp"
#include "nmq/core.hpp"

namespace nmq {

enum class RateKind { Decoherence, Relaxation, Ratio };

// Rates in 1/time (absolute). Absent entries mark points where the defining quotient is degenerate.
struct RateSeries {
    TimeGrid grid;
    std::vector<std::optional<double>> values;
    RateKind definition{RateKind::Decoherence};
};

// d/dt on a (possibly non-uniform) grid: central three-point in the interior, one-sided
// second-order stencils at the ends. Needs at least 3 points.
std::vector<double> differentiate(const std::vector<double>& t, const std::vector<double>& f);

// Re[-rho10'/rho10] taken as -d ln|rho10| / dt.
RateSeries decoherence_rate(const EvolutionTrace& trace);
// -rho11' / (rho11 - rho11(inf)). Analytic traces must be paired with their own asymptote.
RateSeries relaxation_rate(const EvolutionTrace& trace, const Asymptote& rho_inf);
RateSeries rate_ratio(const RateSeries& dec, const RateSeries& rel);

// Closed forms for the low-temperature non-Markovian dynamics, absolute time.
double nonmarkov_decoherence_rate(const ModelParams& params, double t);
double nonmarkov_relaxation_rate(const ModelParams& params, double t);
RateSeries nonmarkov_decoherence_series(const ModelParams& params, const TimeGrid& grid);
RateSeries nonmarkov_relaxation_series(const ModelParams& params, const TimeGrid& grid);
// Closed forms for the other analytic families (constant in time).
double markov_decoherence_rate(const ModelParams& params);
double markov_relaxation_rate(const ModelParams& params);

// Tr[rho(t) U0 rho0 U0^dagger] with U0 = exp(-i omega0 t |1><1|). Not the Uhlmann fidelity.
std::vector<double> fidelity_vs_free(const EvolutionTrace& trace, const QubitDensityMatrix& rho0);

double von_neumann_entropy(const QubitDensityMatrix& rho);  // nats
double binary_entropy(double p);                            // nats

}  // namespace nmq
