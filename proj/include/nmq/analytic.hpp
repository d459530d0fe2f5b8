// analytic.hpp - closed-form reduced dynamics: low-temperature non-Markovian, zero temperature, Markov

#pragma once

#include "nmq/core.hpp"

namespace nmq {

enum class MethodLabel { NonMarkovLowT, ZeroT, Markov };

std::string to_string(MethodLabel m);
TraceMethod trace_method(MethodLabel m);

// (1 - x) / (1 - x exp(-Gamma0 t)); t is absolute time
double upsilon(const ModelParams& params, double t);

// Qubit maps at a single absolute time. The trace evolutions below are built from these.
QubitMapSample nonmarkov_map(const ModelParams& params, double t);
QubitMapSample zero_temperature_map(const ModelParams& params, double t);
QubitMapSample markov_map(const ModelParams& params, double t);

EvolutionTrace evolve_nonmarkov(const ModelParams& params, const QubitDensityMatrix& rho0,
                                const TimeGrid& grid);
EvolutionTrace evolve_zero_temperature(const ModelParams& params, const QubitDensityMatrix& rho0,
                                       const TimeGrid& grid);
// At beta = +inf this is the zero-temperature result (coth -> 1), labelled Markov.
EvolutionTrace evolve_markov(const ModelParams& params, const QubitDensityMatrix& rho0,
                             const TimeGrid& grid);

EvolutionTrace evolve_analytic(MethodLabel method, const ModelParams& params,
                               const QubitDensityMatrix& rho0, const TimeGrid& grid);

struct Asymptote {
    MethodLabel method{MethodLabel::NonMarkovLowT};
    QubitDensityMatrix rho;
};

Asymptote asymptotic_state(const ModelParams& params, MethodLabel method);

}  // namespace nmq
