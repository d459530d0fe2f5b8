// cli.hpp - run configuration and the subcommands behind the `nmq` tool

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nmq/core.hpp"
#include "nmq/oracle.hpp"

namespace nmq::cli {

inline constexpr const char* kVersion = "0.3.0";

// Bad flag or config value. `flag` is the offending option, e.g. "--dt".
struct UsageError : Error {
    UsageError(std::string flag_name, const std::string& what) : Error(flag_name + ": " + what), flag(std::move(flag_name)) {}
    std::string flag;
};

struct InitialSpec {
    std::string kind{"excited"};  // excited | sigmax | ground | mixed | custom
    double rho11{1.0};            // custom entries
    cplx rho10{0.0};

    QubitDensityMatrix state() const;
    std::string str() const;
    static InitialSpec parse(const std::string& s, const std::string& flag);
    friend bool operator==(const InitialSpec&, const InitialSpec&) = default;
};

struct RunConfig {
    std::vector<std::string> methods{"nm"};
    double x{0.05};
    double gamma0_over_omega0{0.01};
    double tmax{6.0};  // Gamma0 t
    double dt{0.05};
    InitialSpec initial{};
    std::size_t n_modes{81};
    double band{0.4};
    unsigned mmax{2};
    double step{0.0};  // RK4 step in 1/omega0; 0 = automatic
    bool absolute_time{false};
    EnsembleChoice oracle_ensemble{EnsembleChoice::Auto};
    InitialSpec fidelity_initial{"sigmax", 0.5, 0.5};
    InitialSpec entropy_initial{"excited", 1.0, 0.0};
    unsigned threads{0};

    ModelParams params() const { return ModelParams::from_x(1.0, gamma0_over_omega0, x); }
    TimeGrid grid() const { return TimeGrid::uniform_gamma_t(tmax, dt, gamma0_over_omega0); }

    // Sets one field from its key (long flag name without dashes). Throws UsageError naming the flag.
    void set(const std::string& key, const std::string& value);
    // Range checks across fields.
    void validate() const;
    // key=value lines, one per field, in a fixed order
    std::vector<std::string> serialize() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Flat key=value text, '#' starts a comment.
void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin);
// Recovers the configuration written into an output header.
RunConfig parse_header(const std::string& csv_text);

// Each command writes its result to `out`; returns the process exit code.
int cmd_evolve(const RunConfig& cfg, std::ostream& out);
int cmd_rates(const RunConfig& cfg, std::ostream& out);
int cmd_entanglement_proxies(const RunConfig& cfg, std::ostream& out);
int cmd_validate(const RunConfig& cfg, std::ostream& out);

// Full command-line entry: parses argv, dispatches, maps errors to exit codes (2 usage, 1 validation).
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace nmq::cli
