#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "nmq/analytic.hpp"
#include "nmq/cli.hpp"
#include "nmq/functional.hpp"
#include "nmq/observables.hpp"
#include "nmq/oracle.hpp"
#include "nmq/validation.hpp"

namespace nmq::cli {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

struct Notes {
    std::vector<std::string> lines;
    void add(std::string s) { lines.push_back(std::move(s)); }
};

void write_header(std::ostream& out, const std::string& command, const RunConfig& cfg, const Notes& notes) {
    out << "# nmq " << kVersion << " " << command << "\n";
    for (const auto& kv : cfg.serialize()) out << "# config " << kv << "\n";
    for (const auto& w : cfg.params().validity_warnings()) out << "# warning " << w << "\n";
    for (const auto& n : notes.lines) out << "# note " << n << "\n";
}

std::string time_label(const RunConfig& cfg) { return cfg.absolute_time ? "t" : "t_gamma"; }

double time_value(const RunConfig& cfg, double t) { return cfg.absolute_time ? t : t * cfg.gamma0_over_omega0; }

// Qubit maps of one method on the grid. Every method is linear in rho0, so one map serves all initial states.
std::vector<QubitMapSample> method_maps(const RunConfig& cfg, const std::string& method, const TimeGrid& grid,
                                        Notes& notes) {
    const auto p = cfg.params();
    std::vector<QubitMapSample> maps;
    if (method == "nm" || method == "zeroT" || method == "markov") {
        for (double t : grid.times())
            maps.push_back(method == "nm" ? nonmarkov_map(p, t)
                                          : method == "zeroT" ? zero_temperature_map(p, t) : markov_map(p, t));
        return maps;
    }
    const auto bath = discretize_bath(p, cfg.band, cfg.n_modes);
    if (method == "oracle") {
        std::string note;
        const auto members = thermal_members(bath, cfg.mmax, cfg.oracle_ensemble, &note);
        notes.add("oracle: " + note);
        OracleOptions opt;
        opt.threads = cfg.threads;
        return ensemble_map(p, bath, grid, members, QubitDensityMatrix::sigmax_plus(), opt);
    }
    // functional: at zero temperature only the vacuum carries weight, so no bath photons are needed
    const unsigned cutoff = std::isinf(p.beta) ? 0u : cfg.mmax;
    if (!std::isinf(p.beta)) {
        const double kept = truncated_weight(bath, cutoff);
        if (kept < 0.95) {
            std::ostringstream os;
            os << "--mmax: occupations up to " << cutoff << " keep only " << kept
               << " of the partition function (need 0.95); raise --mmax, lower --x or use fewer --n-modes";
            throw CutoffInsufficient(os.str());
        }
    }
    FunctionalOptions fo;
    fo.step = cfg.step;
    const auto states = integrate_functionals(bath, p.omega0, grid, cutoff, fo);
    notes.add("functional: occupation cutoff " + std::to_string(cutoff) + ", " +
              std::to_string(states.front().y.size()) + " functionals");
    for (const auto& s : states) maps.push_back(assemble_map(assembly_table(s, bath), bath));
    return maps;
}

EvolutionTrace to_trace(const RunConfig& cfg, const std::string& method, const TimeGrid& grid,
                        const std::vector<QubitMapSample>& maps, const QubitDensityMatrix& rho0) {
    EvolutionTrace tr;
    tr.method = trace_method_from_string(method);
    tr.params = cfg.params();
    tr.grid = grid;
    for (const auto& m : maps) tr.states.push_back(validate_density_matrix(m.apply(rho0)));
    return tr;
}

void write_output(const std::string& text, std::ostream& out, const std::string& path) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("--out", "cannot open '" + path + "' for writing");
    f << text;
}

}  // namespace

int cmd_evolve(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const auto grid = cfg.grid();
    const auto rho0 = cfg.initial.state();
    Notes notes;
    std::vector<EvolutionTrace> traces;
    for (const auto& m : cfg.methods) traces.push_back(to_trace(cfg, m, grid, method_maps(cfg, m, grid, notes), rho0));
    write_header(out, "evolve", cfg, notes);
    out << time_label(cfg) << ",method,rho11,rho00,re_rho10,im_rho10,abs_rho10\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t k = 0; k < traces.size(); ++k) {
            const auto& s = traces[k].states[i];
            out << num(time_value(cfg, grid[i])) << "," << cfg.methods[k] << "," << num(s.rho11()) << ","
                << num(s.rho00()) << "," << num(s.rho10().real()) << "," << num(s.rho10().imag()) << ","
                << num(std::abs(s.rho10())) << "\n";
        }
    return 0;
}

int cmd_rates(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    bool usable = false;
    for (const auto& m : cfg.methods) usable = usable || m == "nm" || m == "markov" || m == "oracle";
    if (!usable) throw UsageError("--method", "rates need at least one of nm, markov, oracle");
    const auto grid = cfg.grid();
    const auto p = cfg.params();
    Notes notes;
    struct Rows {
        std::vector<std::optional<double>> dec, rel;
    };
    std::vector<Rows> rows;
    for (const auto& m : cfg.methods) {
        Rows r;
        if (m == "nm") {
            for (double t : grid.times()) {
                r.dec.push_back(nonmarkov_decoherence_rate(p, t));
                r.rel.push_back(nonmarkov_relaxation_rate(p, t));
            }
        } else if (m == "markov" || m == "zeroT") {
            const auto q = m == "zeroT" ? ModelParams::make(p.omega0, p.gamma0, kInf) : p;
            r.dec.assign(grid.size(), markov_decoherence_rate(q));
            r.rel.assign(grid.size(), markov_relaxation_rate(q));
        } else {
            const auto maps = method_maps(cfg, m, grid, notes);
            const auto dec = decoherence_rate(to_trace(cfg, m, grid, maps, QubitDensityMatrix::sigmax_plus()));
            const auto rel = relaxation_rate(to_trace(cfg, m, grid, maps, QubitDensityMatrix::excited()),
                                             asymptotic_state(p, MethodLabel::Markov));
            r.dec = dec.values;
            r.rel = rel.values;
            notes.add(m + ": finite-difference rates; decoherence from sigmax, relaxation from excited toward the Gibbs state");
        }
        rows.push_back(std::move(r));
    }
    write_header(out, "rates", cfg, notes);
    out << time_label(cfg) << ",method,gamma_dec_over_half_gamma0,gamma_rel_over_gamma0,ratio\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const auto& d = rows[k].dec[i];
            const auto& r = rows[k].rel[i];
            std::optional<double> ratio;
            if (d && r && *r != 0.0) ratio = *d / *r;
            out << num(time_value(cfg, grid[i])) << "," << cfg.methods[k] << ","
                << opt_num(d ? std::optional<double>(*d / (0.5 * p.gamma0)) : std::nullopt) << ","
                << opt_num(r ? std::optional<double>(*r / p.gamma0) : std::nullopt) << "," << opt_num(ratio) << "\n";
        }
    return 0;
}

int cmd_entanglement_proxies(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const auto grid = cfg.grid();
    const auto rf = cfg.fidelity_initial.state();
    const auto re = cfg.entropy_initial.state();
    Notes notes;
    std::vector<std::vector<double>> fid, ent;
    std::map<std::string, std::size_t> idx;
    for (const auto& m : cfg.methods) {
        const auto maps = method_maps(cfg, m, grid, notes);
        fid.push_back(fidelity_vs_free(to_trace(cfg, m, grid, maps, rf), rf));
        std::vector<double> e;
        for (const auto& s : to_trace(cfg, m, grid, maps, re).states) e.push_back(von_neumann_entropy(s));
        ent.push_back(std::move(e));
        idx[m] = fid.size() - 1;
    }
    const bool diff = idx.count("nm") && idx.count("markov");
    if (!diff) notes.add("difference columns need both nm and markov in --method; left empty");
    write_header(out, "proxies", cfg, notes);
    out << time_label(cfg) << ",method,fidelity,entropy_nats,fidelity_nm_minus_markov,entropy_nm_minus_markov\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::string df, de;
        if (diff) {
            df = num(fid[idx["nm"]][i] - fid[idx["markov"]][i]);
            de = num(ent[idx["nm"]][i] - ent[idx["markov"]][i]);
        }
        for (std::size_t k = 0; k < fid.size(); ++k)
            out << num(time_value(cfg, grid[i])) << "," << cfg.methods[k] << "," << num(fid[k][i]) << ","
                << num(ent[k][i]) << "," << df << "," << de << "\n";
    }
    return 0;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    ValidationConfig vc;
    vc.x = cfg.x;
    vc.gamma0_over_omega0 = cfg.gamma0_over_omega0;
    vc.n_modes = cfg.n_modes;
    vc.band = cfg.band;
    vc.mmax = cfg.mmax;
    vc.threads = cfg.threads;
    std::vector<std::string> warnings;
    const auto checks = run_acceptance(vc, warnings);

    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["config"] = cfg.serialize();
    j["warnings"] = warnings;
    bool all = true;
    auto& arr = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : checks) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["criterion"] = c.criterion;
        e["expected"] = c.expected;
        e["actual"] = c.actual;
        e["tolerance"] = c.tolerance;
        e["pass"] = c.pass;
        e["skipped"] = c.skipped;
        e[c.skipped ? "reason" : "detail"] = c.detail;
        arr.push_back(std::move(e));
        all = all && c.pass;
    }
    j["pass"] = all;
    out << j.dump(2) << "\n";
    return all ? 0 : 1;
}

namespace {

// Hints which flag to change for each engine failure.
std::string flag_hint(const Error& e) {
    if (dynamic_cast<const TruncationTooLossy*>(&e)) return "--mmax / --oracle-ensemble";
    if (dynamic_cast<const CutoffInsufficient*>(&e)) return "--mmax";
    if (dynamic_cast<const SectorTooLarge*>(&e)) return "--n-modes";
    if (dynamic_cast<const StepTooCoarse*>(&e)) return "--step";
    if (dynamic_cast<const NotAState*>(&e)) return "--initial";
    return "";
}

const std::pair<const char*, const char*> kKeys[] = {
    {"method", "comma list of nm, markov, zeroT, oracle, functional (default nm)"},
    {"x", "Boltzmann factor exp(-beta omega0), 0 <= x < 1 (default 0.05)"},
    {"beta-omega0", "inverse temperature in units of 1/omega0; sets x (use --x 0 for zero temperature)"},
    {"gamma0-over-omega0", "Gamma0/omega0 (default 0.01)"},
    {"tmax", "last time, Gamma0 t (default 6)"},
    {"dt", "output spacing, Gamma0 t (default 0.05)"},
    {"initial", "excited | ground | sigmax | mixed | custom:rho11,re_rho10,im_rho10"},
    {"n-modes", "odd number of bath modes for oracle/functional (default 81)"},
    {"band", "bath bandwidth in units of omega0 (default 0.4)"},
    {"mmax", "photon-number cutoff per sector (default 2)"},
    {"step", "RK4 step for functional, 1/omega0; 0 picks 0.1/omega_max"},
    {"oracle-ensemble", "auto | truncated | cluster (default auto)"},
    {"fidelity-initial", "initial state for the fidelity columns (default sigmax)"},
    {"entropy-initial", "initial state for the entropy columns (default excited)"},
    {"threads", "worker threads, 0 = hardware (default 0)"},
};

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Qubit in a thermal bosonic bath: closed-form, exact and functional dynamics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    std::map<std::string, std::string> raw;
    std::string config_path, out_path;
    bool absolute = false;
    std::vector<CLI::App*> subs;
    for (auto [name, desc] : {std::pair{"evolve", "reduced density matrix vs time"},
                              std::pair{"rates", "decoherence and relaxation rates"},
                              std::pair{"proxies", "fidelity against free evolution and von Neumann entropy"},
                              std::pair{"validate", "run the acceptance checks, JSON report"}}) {
        auto* sub = app.add_subcommand(name, desc);
        if (std::string(name) == "proxies") sub->alias("entanglement-proxies");
        for (auto [k, help] : kKeys) sub->add_option(std::string("--") + k, raw[k], help);
        sub->add_option("--config", config_path, "flat key=value file; flags override it");
        sub->add_option("--out", out_path, "write here instead of stdout");
        sub->add_flag("--absolute-time", absolute, "time column in 1/omega0 instead of Gamma0 t");
        subs.push_back(sub);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n" << "run with --help for the option list\n";
        return 2;
    }

    CLI::App* sub = nullptr;
    for (auto* s : subs)
        if (s->parsed()) sub = s;
    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw UsageError("--config", "cannot read '" + config_path + "'");
            std::stringstream ss;
            ss << f.rdbuf();
            apply_config_text(cfg, ss.str(), config_path);
        }
        if (sub->count("--x") && sub->count("--beta-omega0"))
            throw UsageError("--beta-omega0", "give either --x or --beta-omega0, not both");
        for (auto [k, help] : kKeys)
            if (sub->count(std::string("--") + k)) cfg.set(k, raw[k]);
        if (absolute) cfg.absolute_time = true;
        cfg.validate();

        std::ostringstream buf;
        const std::string name = sub->get_name();
        int code = 0;
        if (name == "evolve")
            code = cmd_evolve(cfg, buf);
        else if (name == "rates")
            code = cmd_rates(cfg, buf);
        else if (name == "proxies")
            code = cmd_entanglement_proxies(cfg, buf);
        else
            code = cmd_validate(cfg, buf);
        write_output(buf.str(), out, out_path);
        return code;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        const auto hint = flag_hint(e);
        err << "error: " << e.what();
        if (!hint.empty()) err << " (adjust " << hint << ")";
        err << "\n";
        return 2;
    }
}

}  // namespace nmq::cli
