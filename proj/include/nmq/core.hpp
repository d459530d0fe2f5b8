// core.hpp - qubit state, model parameters, bath description, time grids and traces

#pragma once

#include <complex>
#include <cstdint>
#include <cstddef>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace nmq {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Errors. Every engine failure derives from Error so the CLI can map it to an exit code.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotAState : Error { using Error::Error; };
struct InvalidParam : Error { using Error::Error; };
struct TruncationTooLossy : Error { using Error::Error; };
struct SectorTooLarge : Error { using Error::Error; };
struct StepTooCoarse : Error { using Error::Error; };
struct CutoffInsufficient : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };

// Unvalidated 2x2 entries, row/column index = qubit level (0 ground, 1 excited).
struct RawQubitMatrix {
    cplx rho00{1.0};
    cplx rho01{0.0};
    cplx rho10{0.0};
    cplx rho11{0.0};
};

class QubitDensityMatrix {
public:
    // ground state
    QubitDensityMatrix() = default;

    double rho00() const { return p00_; }
    double rho11() const { return p11_; }
    cplx rho10() const { return c10_; }
    cplx rho01() const { return std::conj(c10_); }
    double trace() const { return p00_ + p11_; }

    RawQubitMatrix raw() const { return {p00_, rho01(), c10_, p11_}; }

    static QubitDensityMatrix excited();
    static QubitDensityMatrix ground();
    static QubitDensityMatrix sigmax_plus();  // (|0> + |1>)/sqrt2
    static QubitDensityMatrix maximally_mixed();
    static QubitDensityMatrix diagonal(double p11);

private:
    friend QubitDensityMatrix validate_density_matrix(const RawQubitMatrix&);
    double p00_{1.0};
    double p11_{0.0};
    cplx c10_{0.0};
};

// Hermitizes, checks trace and positivity, renormalizes a trace off by at most 1e-8.
QubitDensityMatrix validate_density_matrix(const RawQubitMatrix& raw);
inline QubitDensityMatrix validate_density_matrix(const QubitDensityMatrix& rho) {
    return validate_density_matrix(rho.raw());
}

double derive_x(double omega0, double beta);

struct ModelParams {
    double omega0{1.0};
    double gamma0{0.01};
    double beta{kInf};  // +inf means zero temperature

    double x() const { return derive_x(omega0, beta); }
    // coth(beta*omega0/2), written through x so large beta cannot overflow
    double coth_half() const;

    static ModelParams make(double omega0, double gamma0, double beta);
    static ModelParams from_x(double omega0, double gamma0, double x);
    // Soft validity warnings (low temperature, weak coupling). Empty when inside the window.
    std::vector<std::string> validity_warnings() const;
};

struct BathMode {
    double omega{0.0};
    double lambda{0.0};
};

struct BathSpec {
    std::vector<BathMode> modes;  // ascending in omega
    double beta{kInf};

    std::size_t size() const { return modes.size(); }
    double omega_max() const { return modes.empty() ? 0.0 : modes.back().omega; }
    // x_k = exp(-beta*omega_k)
    double boltzmann(std::size_t k) const;
    void validate() const;
    // FNV-1a over the mode table and beta; keys checkpoints
    std::uint64_t hash() const;
};

// Sparse occupation numbers keyed by mode index. Zero entries are never stored.
class FockConfig {
public:
    FockConfig() = default;
    explicit FockConfig(std::map<std::size_t, unsigned> occ);

    unsigned operator[](std::size_t mode) const;
    void set(std::size_t mode, unsigned n);
    FockConfig shifted(std::size_t mode, int delta) const;

    unsigned total() const;
    double energy(const BathSpec& bath) const;  // sum m_q omega_q
    const std::map<std::size_t, unsigned>& occupations() const { return occ_; }
    std::string str() const;

    friend bool operator==(const FockConfig&, const FockConfig&) = default;
    friend bool operator<(const FockConfig& a, const FockConfig& b) { return a.occ_ < b.occ_; }

private:
    std::map<std::size_t, unsigned> occ_;
};

// Times are stored absolute; Gamma0*t is what users see.
class TimeGrid {
public:
    TimeGrid() = default;
    explicit TimeGrid(std::vector<double> absolute_times);

    static TimeGrid from_gamma_t(const std::vector<double>& gamma_t, double gamma0);
    // 0, dt, 2dt, ... up to tmax inclusive (within 1e-9 dt), all in Gamma0 t units
    static TimeGrid uniform_gamma_t(double tmax, double dt, double gamma0);

    std::size_t size() const { return t_.size(); }
    double operator[](std::size_t i) const { return t_[i]; }
    const std::vector<double>& times() const { return t_; }
    std::vector<double> gamma_t(double gamma0) const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    std::vector<double> t_;
};

enum class TraceMethod { AnalyticNonMarkov, AnalyticZeroT, Markov, Oracle, Functional };

std::string to_string(TraceMethod m);
TraceMethod trace_method_from_string(const std::string& s);

struct EvolutionTrace {
    TraceMethod method{TraceMethod::AnalyticNonMarkov};
    ModelParams params;
    TimeGrid grid;
    std::vector<QubitDensityMatrix> states;
};

// Linear map on the qubit implied by an RWA dynamics: populations mix among themselves,
// the coherence is only rescaled.
struct QubitMapSample {
    double p11_from1{1.0};
    double p11_from0{0.0};
    double p00_from1{0.0};
    double p00_from0{1.0};
    cplx coherence{1.0};

    RawQubitMatrix apply(const QubitDensityMatrix& rho0) const;
};

}  // namespace nmq
