#include "nmq/core.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <sstream>

namespace nmq {

namespace {

constexpr double kHardTol = 1e-8;

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

QubitDensityMatrix QubitDensityMatrix::excited() { return diagonal(1.0); }
QubitDensityMatrix QubitDensityMatrix::ground() { return diagonal(0.0); }
QubitDensityMatrix QubitDensityMatrix::maximally_mixed() { return diagonal(0.5); }

QubitDensityMatrix QubitDensityMatrix::sigmax_plus() {
    return validate_density_matrix(RawQubitMatrix{0.5, 0.5, 0.5, 0.5});
}

QubitDensityMatrix QubitDensityMatrix::diagonal(double p11) {
    return validate_density_matrix(RawQubitMatrix{1.0 - p11, 0.0, 0.0, p11});
}

QubitDensityMatrix validate_density_matrix(const RawQubitMatrix& raw) {
    if (!finite(raw.rho00) || !finite(raw.rho01) || !finite(raw.rho10) || !finite(raw.rho11))
        throw NotAState("density matrix has non-finite entries");
    if (std::abs(raw.rho00.imag()) > kHardTol || std::abs(raw.rho11.imag()) > kHardTol)
        throw NotAState("diagonal entries are not real");
    if (std::abs(raw.rho01 - std::conj(raw.rho10)) > kHardTol)
        throw NotAState("rho01 is not the conjugate of rho10");

    double p00 = raw.rho00.real();
    double p11 = raw.rho11.real();
    cplx c10 = 0.5 * (raw.rho10 + std::conj(raw.rho01));
    const double tr = p00 + p11;
    if (std::abs(tr - 1.0) > kHardTol) {
        std::ostringstream os;
        os << "trace " << tr << " deviates from 1";
        throw NotAState(os.str());
    }
    if (p00 < -kHardTol || p11 < -kHardTol || std::norm(c10) > p00 * p11 + kHardTol) {
        std::ostringstream os;
        os << "not positive semidefinite (rho00=" << p00 << ", rho11=" << p11
           << ", |rho10|^2=" << std::norm(c10) << ")";
        throw NotAState(os.str());
    }
    if (tr != 1.0) {
        p00 /= tr;
        p11 /= tr;
        c10 /= tr;
    }
    QubitDensityMatrix out;
    out.p00_ = p00;
    out.p11_ = p11;
    out.c10_ = c10;
    return out;
}

double derive_x(double omega0, double beta) {
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw InvalidParam("omega0 must be positive");
    if (std::isnan(beta) || beta <= 0.0) throw InvalidParam("beta must be positive or +inf");
    if (std::isinf(beta)) return 0.0;
    return std::exp(-beta * omega0);
}

double ModelParams::coth_half() const {
    const double xx = x();
    return (1.0 + xx) / (1.0 - xx);
}

ModelParams ModelParams::make(double omega0, double gamma0, double beta) {
    if (!(gamma0 > 0.0) || !std::isfinite(gamma0)) throw InvalidParam("gamma0 must be positive");
    (void)derive_x(omega0, beta);
    return {omega0, gamma0, beta};
}

ModelParams ModelParams::from_x(double omega0, double gamma0, double x) {
    if (!(x >= 0.0 && x < 1.0)) throw InvalidParam("x must lie in [0, 1)");
    const double beta = x == 0.0 ? kInf : -std::log(x) / omega0;
    return make(omega0, gamma0, beta);
}

std::vector<std::string> ModelParams::validity_warnings() const {
    std::vector<std::string> w;
    const double xx = x();
    if (xx >= 0.2) {
        std::ostringstream os;
        os << "x = " << xx << " >= 0.2: low-temperature closed forms outside their validity window";
        w.push_back(os.str());
    }
    if (gamma0 / omega0 >= 0.1) {
        std::ostringstream os;
        os << "gamma0/omega0 = " << gamma0 / omega0 << " >= 0.1: coupling is not weak";
        w.push_back(os.str());
    }
    return w;
}

double BathSpec::boltzmann(std::size_t k) const {
    if (std::isinf(beta)) return 0.0;
    return std::exp(-beta * modes.at(k).omega);
}

void BathSpec::validate() const {
    if (std::isnan(beta) || beta <= 0.0) throw InvalidParam("bath beta must be positive or +inf");
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const auto& m = modes[k];
        if (!(m.omega > 0.0) || !std::isfinite(m.omega)) throw InvalidParam("mode frequency must be positive");
        if (!(m.lambda >= 0.0) || !std::isfinite(m.lambda)) throw InvalidParam("coupling must be non-negative");
        if (k > 0 && !(modes[k - 1].omega < m.omega))
            throw InvalidParam("mode frequencies must be strictly ascending");
    }
}

std::uint64_t BathSpec::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](double v) {
        unsigned char bytes[sizeof(double)];
        std::memcpy(bytes, &v, sizeof v);
        for (unsigned char b : bytes) {
            h ^= b;
            h *= 1099511628211ull;
        }
    };
    for (const auto& m : modes) {
        mix(m.omega);
        mix(m.lambda);
    }
    mix(beta);
    return h;
}

FockConfig::FockConfig(std::map<std::size_t, unsigned> occ) {
    for (auto [k, n] : occ)
        if (n > 0) occ_[k] = n;
}

unsigned FockConfig::operator[](std::size_t mode) const {
    auto it = occ_.find(mode);
    return it == occ_.end() ? 0u : it->second;
}

void FockConfig::set(std::size_t mode, unsigned n) {
    if (n == 0)
        occ_.erase(mode);
    else
        occ_[mode] = n;
}

FockConfig FockConfig::shifted(std::size_t mode, int delta) const {
    const int n = static_cast<int>((*this)[mode]) + delta;
    if (n < 0) throw InvalidParam("negative occupation in shifted Fock configuration");
    FockConfig out = *this;
    out.set(mode, static_cast<unsigned>(n));
    return out;
}

unsigned FockConfig::total() const {
    unsigned s = 0;
    for (auto [k, n] : occ_) s += n;
    return s;
}

double FockConfig::energy(const BathSpec& bath) const {
    double e = 0.0;
    for (auto [k, n] : occ_) e += n * bath.modes.at(k).omega;
    return e;
}

std::string FockConfig::str() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (auto [k, n] : occ_) {
        if (!first) os << ',';
        os << k << ':' << n;
        first = false;
    }
    os << '}';
    return os.str();
}

TimeGrid::TimeGrid(std::vector<double> absolute_times) : t_(std::move(absolute_times)) {
    for (std::size_t i = 0; i < t_.size(); ++i) {
        if (!std::isfinite(t_[i])) throw InvalidParam("time grid must be finite");
        if (i == 0 && t_[i] < 0.0) throw InvalidParam("time grid must start at t >= 0");
        if (i > 0 && !(t_[i] > t_[i - 1])) throw InvalidParam("time grid must be strictly increasing");
    }
}

TimeGrid TimeGrid::from_gamma_t(const std::vector<double>& gamma_t, double gamma0) {
    std::vector<double> t(gamma_t.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = gamma_t[i] / gamma0;
    return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::uniform_gamma_t(double tmax, double dt, double gamma0) {
    if (!(dt > 0.0) || !(tmax >= 0.0)) throw InvalidParam("grid needs dt > 0 and tmax >= 0");
    const auto n = static_cast<std::size_t>(std::floor(tmax / dt + 1e-9));
    std::vector<double> g(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g[i] = static_cast<double>(i) * dt;
    return from_gamma_t(g, gamma0);
}

std::vector<double> TimeGrid::gamma_t(double gamma0) const {
    std::vector<double> g(t_.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = t_[i] * gamma0;
    return g;
}

std::string to_string(TraceMethod m) {
    switch (m) {
        case TraceMethod::AnalyticNonMarkov: return "nm";
        case TraceMethod::AnalyticZeroT: return "zeroT";
        case TraceMethod::Markov: return "markov";
        case TraceMethod::Oracle: return "oracle";
        case TraceMethod::Functional: return "functional";
    }
    return "?";
}

TraceMethod trace_method_from_string(const std::string& s) {
    if (s == "nm") return TraceMethod::AnalyticNonMarkov;
    if (s == "zeroT") return TraceMethod::AnalyticZeroT;
    if (s == "markov") return TraceMethod::Markov;
    if (s == "oracle") return TraceMethod::Oracle;
    if (s == "functional") return TraceMethod::Functional;
    throw InvalidParam("unknown method '" + s + "' (expected nm|zeroT|markov|oracle|functional)");
}

RawQubitMatrix QubitMapSample::apply(const QubitDensityMatrix& rho0) const {
    RawQubitMatrix r;
    r.rho11 = p11_from1 * rho0.rho11() + p11_from0 * rho0.rho00();
    r.rho00 = p00_from1 * rho0.rho11() + p00_from0 * rho0.rho00();
    r.rho10 = coherence * rho0.rho10();
    r.rho01 = std::conj(r.rho10);
    return r;
}

}  // namespace nmq
