#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "nmq/cli.hpp"

namespace nmq::cli {

namespace {

const char* const kMethods[] = {"nm", "zeroT", "markov", "oracle", "functional"};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// shortest text that parses back to the same double
std::string exact(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

double to_double(const std::string& flag, const std::string& v) {
    double d = 0.0;
    const auto s = trim(v);
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec != std::errc{} || end != s.data() + s.size() || s.empty() || !std::isfinite(d))
        throw UsageError(flag, "expected a finite number, got '" + v + "'");
    return d;
}

unsigned long to_count(const std::string& flag, const std::string& v) {
    unsigned long n = 0;
    const auto s = trim(v);
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc{} || end != s.data() + s.size() || s.empty())
        throw UsageError(flag, "expected a non-negative integer, got '" + v + "'");
    return n;
}

bool to_bool(const std::string& flag, const std::string& v) {
    const auto s = trim(v);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw UsageError(flag, "expected true or false, got '" + v + "'");
}

}  // namespace

QubitDensityMatrix InitialSpec::state() const {
    if (kind == "excited") return QubitDensityMatrix::excited();
    if (kind == "ground") return QubitDensityMatrix::ground();
    if (kind == "sigmax") return QubitDensityMatrix::sigmax_plus();
    if (kind == "mixed") return QubitDensityMatrix::maximally_mixed();
    return validate_density_matrix(RawQubitMatrix{1.0 - rho11, std::conj(rho10), rho10, rho11});
}

std::string InitialSpec::str() const {
    if (kind != "custom") return kind;
    return "custom:" + exact(rho11) + "," + exact(rho10.real()) + "," + exact(rho10.imag());
}

InitialSpec InitialSpec::parse(const std::string& text, const std::string& flag) {
    const auto s = trim(text);
    InitialSpec spec;
    spec.kind = s;
    if (s == "excited" || s == "ground" || s == "sigmax" || s == "mixed") {
        const auto st = spec.state();
        spec.rho11 = st.rho11();
        spec.rho10 = st.rho10();
        return spec;
    }
    if (s.rfind("custom:", 0) != 0)
        throw UsageError(flag, "expected excited|ground|sigmax|mixed|custom:rho11,re_rho10,im_rho10, got '" + text + "'");
    std::vector<double> v;
    std::stringstream ss(s.substr(7));
    for (std::string part; std::getline(ss, part, ',');) v.push_back(to_double(flag, part));
    if (v.size() != 3) throw UsageError(flag, "custom state needs three numbers: rho11,re_rho10,im_rho10");
    spec.kind = "custom";
    spec.rho11 = v[0];
    spec.rho10 = {v[1], v[2]};
    try {
        (void)spec.state();
    } catch (const NotAState& e) {
        throw UsageError(flag, std::string("not a density matrix: ") + e.what());
    }
    return spec;
}

void RunConfig::set(const std::string& raw_key, const std::string& value) {
    const auto key = trim(raw_key);
    const std::string flag = "--" + key;
    if (key == "method") {
        methods.clear();
        std::stringstream ss(value);
        for (std::string m; std::getline(ss, m, ',');) {
            m = trim(m);
            bool known = false;
            for (const char* k : kMethods) known = known || m == k;
            if (!known) throw UsageError(flag, "unknown method '" + m + "' (nm|zeroT|markov|oracle|functional)");
            if (std::find(methods.begin(), methods.end(), m) == methods.end()) methods.push_back(m);
        }
        if (methods.empty()) throw UsageError(flag, "at least one method is required");
    } else if (key == "x") {
        x = to_double(flag, value);
    } else if (key == "beta-omega0") {
        const double b = to_double(flag, value);
        if (!(b > 0.0)) throw UsageError(flag, "must be positive");
        x = std::exp(-b);
    } else if (key == "gamma0-over-omega0") {
        gamma0_over_omega0 = to_double(flag, value);
    } else if (key == "tmax") {
        tmax = to_double(flag, value);
    } else if (key == "dt") {
        dt = to_double(flag, value);
    } else if (key == "initial") {
        initial = InitialSpec::parse(value, flag);
    } else if (key == "n-modes") {
        n_modes = to_count(flag, value);
    } else if (key == "band") {
        band = to_double(flag, value);
    } else if (key == "mmax") {
        mmax = static_cast<unsigned>(to_count(flag, value));
    } else if (key == "step") {
        step = to_double(flag, value);
    } else if (key == "absolute-time") {
        absolute_time = to_bool(flag, value);
    } else if (key == "oracle-ensemble") {
        try {
            oracle_ensemble = ensemble_choice_from_string(trim(value));
        } catch (const InvalidParam& e) {
            throw UsageError(flag, e.what());
        }
    } else if (key == "fidelity-initial") {
        fidelity_initial = InitialSpec::parse(value, flag);
    } else if (key == "entropy-initial") {
        entropy_initial = InitialSpec::parse(value, flag);
    } else if (key == "threads") {
        threads = static_cast<unsigned>(to_count(flag, value));
    } else {
        throw UsageError(flag, "unknown key");
    }
}

void RunConfig::validate() const {
    if (!(x >= 0.0 && x < 1.0)) throw UsageError("--x", "must lie in [0, 1)");
    if (!(gamma0_over_omega0 > 0.0)) throw UsageError("--gamma0-over-omega0", "must be positive");
    if (!(tmax > 0.0)) throw UsageError("--tmax", "must be positive");
    if (!(dt > 0.0)) throw UsageError("--dt", "must be positive");
    if (tmax / dt < 2.0) throw UsageError("--dt", "grid needs at least 3 points (dt <= tmax/2)");
    if (tmax / dt > 1e6) throw UsageError("--dt", "more than 1e6 grid points");
    if (n_modes < 3 || n_modes % 2 == 0) throw UsageError("--n-modes", "must be odd and at least 3");
    if (!(band > 0.0 && band < 2.0)) throw UsageError("--band", "must lie in (0, 2) (units of omega0)");
    if (!(step >= 0.0)) throw UsageError("--step", "must be non-negative (0 picks 0.1/omega_max)");
}

std::vector<std::string> RunConfig::serialize() const {
    std::string m;
    for (const auto& s : methods) m += (m.empty() ? "" : ",") + s;
    return {
        "method=" + m,
        "x=" + exact(x),
        "gamma0-over-omega0=" + exact(gamma0_over_omega0),
        "tmax=" + exact(tmax),
        "dt=" + exact(dt),
        "initial=" + initial.str(),
        "n-modes=" + std::to_string(n_modes),
        "band=" + exact(band),
        "mmax=" + std::to_string(mmax),
        "step=" + exact(step),
        std::string("absolute-time=") + (absolute_time ? "true" : "false"),
        "oracle-ensemble=" + to_string(oracle_ensemble),
        "fidelity-initial=" + fidelity_initial.str(),
        "entropy-initial=" + entropy_initial.str(),
        "threads=" + std::to_string(threads),
    };
}

void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin) {
    std::stringstream ss(text);
    std::size_t line_no = 0;
    for (std::string line; std::getline(ss, line);) {
        ++line_no;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("--config", origin + ":" + std::to_string(line_no) + ": expected key=value");
        cfg.set(line.substr(0, eq), line.substr(eq + 1));
    }
}

RunConfig parse_header(const std::string& csv_text) {
    RunConfig cfg;
    std::stringstream ss(csv_text);
    const std::string tag = "# config ";
    for (std::string line; std::getline(ss, line);) {
        if (line.rfind('#', 0) != 0) break;
        if (line.rfind(tag, 0) != 0) continue;
        const auto kv = line.substr(tag.size());
        const auto eq = kv.find('=');
        if (eq != std::string::npos) cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
}

}  // namespace nmq::cli
