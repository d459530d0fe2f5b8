#include "nmq/validation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "nmq/analytic.hpp"
#include "nmq/functional.hpp"
#include "nmq/observables.hpp"
#include "nmq/oracle.hpp"

namespace nmq {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<double> range(double a, double b, double step) {
    std::vector<double> v;
    const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) v.push_back(a + step * static_cast<double>(i));
    return v;
}

struct Suite {
    const ValidationConfig& cfg;
    ModelParams params;
    bool low_t{true};
    std::vector<CheckResult> out;

    void add(int crit, std::string name, double expected, double actual, double tol, bool pass, std::string detail) {
        out.push_back({crit, std::move(name), expected, actual, tol, pass, false, std::move(detail)});
    }
    void skip(int crit, std::string name, std::string reason) {
        CheckResult r;
        r.criterion = crit;
        r.name = std::move(name);
        r.skipped = true;
        r.pass = true;
        r.detail = std::move(reason);
        out.push_back(std::move(r));
    }
    // |actual - expected| <= tol
    void near(int crit, std::string name, double expected, double actual, double tol, std::string detail = {}) {
        add(crit, std::move(name), expected, actual, tol, std::abs(actual - expected) <= tol, std::move(detail));
    }
    bool gated(int crit, const std::string& name) {
        if (low_t) return false;
        skip(crit, name, "needs the low-temperature regime x < 0.2; x = " + num(params.x()));
        return true;
    }
    OracleOptions oracle_options() const {
        OracleOptions o;
        o.threads = cfg.threads;
        return o;
    }
};

void thermal_asymptotes(Suite& s) {
    const auto& p = s.params;
    const double x = p.x();
    const auto grid = TimeGrid::from_gamma_t({0.0, 40.0}, p.gamma0);
    const auto rho0 = QubitDensityMatrix::excited();
    s.near(1, "nm_asymptote", x, evolve_nonmarkov(p, rho0, grid).states.back().rho11(), 1e-6,
           "rho11 at Gamma0 t = 40 from |1>, target x");
    s.near(1, "markov_asymptote", x / (1.0 + x), evolve_markov(p, rho0, grid).states.back().rho11(), 1e-6,
           "rho11 at Gamma0 t = 40 from |1>, target x/(1+x)");
}

void decoherence_crossover(Suite& s) {
    const auto& p = s.params;
    const double half = 0.5 * p.gamma0;
    s.near(2, "rate_at_zero", p.coth_half(), nonmarkov_decoherence_rate(p, 0.0) / half, 1e-9,
           "closed-form Gamma_dec(0) / (Gamma0/2) against coth(beta omega0/2) = (1+x)/(1-x)");
    s.near(2, "rate_at_8", 1.0, nonmarkov_decoherence_rate(p, 8.0 / p.gamma0) / half, 0.01,
           "Gamma_dec / (Gamma0/2) at Gamma0 t = 8, relative tolerance");
    const auto grid = TimeGrid::uniform_gamma_t(20.0, 0.05, p.gamma0);
    std::size_t violations = 0;
    double prev = kInf;
    for (double t : grid.times()) {
        const double r = nonmarkov_decoherence_rate(p, t);
        if (!(r < prev)) ++violations;
        prev = r;
    }
    s.add(2, "monotone_decreasing", 0.0, static_cast<double>(violations), 0.0, violations == 0,
          "count of non-decreasing steps on Gamma0 t in [0, 20], step 0.05");
}

void rate_ratio_window(Suite& s) {
    if (s.gated(3, "ratio_window")) return;
    const auto& p = s.params;
    const auto g = range(0.1, 5.0, 0.01);
    double lo = kInf, hi = -kInf;
    for (double gt : g) {
        const double t = gt / p.gamma0;
        const double r = nonmarkov_decoherence_rate(p, t) / nonmarkov_relaxation_rate(p, t);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    const double worst = std::abs(lo - 0.5) > std::abs(hi - 0.5) ? lo : hi;
    s.add(3, "ratio_window_closed_form", 0.5, worst, 0.06, lo >= 0.44 && hi <= 0.56,
          "closed-form Gamma_dec/Gamma_rel on Gamma0 t in [0.1, 5]; range [" + num(lo) + ", " + num(hi) + "]");

    // same from finite differences of the traces
    const auto grid = TimeGrid::uniform_gamma_t(5.05, 0.01, p.gamma0);
    const auto dec = decoherence_rate(evolve_nonmarkov(p, QubitDensityMatrix::sigmax_plus(), grid));
    const auto rel = relaxation_rate(evolve_nonmarkov(p, QubitDensityMatrix::excited(), grid),
                                     asymptotic_state(p, MethodLabel::NonMarkovLowT));
    const auto ratio = rate_ratio(dec, rel);
    lo = kInf;
    hi = -kInf;
    std::size_t absent = 0;
    const auto gt = grid.gamma_t(p.gamma0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (gt[i] < 0.1 - 1e-9 || gt[i] > 5.0 + 1e-9) continue;
        if (!ratio.values[i]) {
            ++absent;
            continue;
        }
        lo = std::min(lo, *ratio.values[i]);
        hi = std::max(hi, *ratio.values[i]);
    }
    const double worst_fd = std::abs(lo - 0.5) > std::abs(hi - 0.5) ? lo : hi;
    s.add(3, "ratio_window_finite_difference", 0.5, worst_fd, 0.06, absent == 0 && lo >= 0.44 && hi <= 0.56,
          "finite-difference ratio on the same window, step 0.01; range [" + num(lo) + ", " + num(hi) + "]");
}

void relaxation_ordering(Suite& s) {
    const auto& p = s.params;
    if (!s.gated(4, "ordering")) {
        const auto grid = TimeGrid::uniform_gamma_t(20.0, 0.01, p.gamma0);
        double worst = kInf;
        for (double t : grid.times())
            worst = std::min(worst, nonmarkov_map(p, t).p11_from1 - markov_map(p, t).p11_from1);
        s.add(4, "nm_above_markov", 0.0, worst, 0.0, worst >= 0.0,
              "min over Gamma0 t in [0, 20] (step 0.01) of rho11_nm - rho11_markov from |1>, must be >= 0");
    }
    s.near(4, "equal_at_zero", 0.0, nonmarkov_map(p, 0.0).p11_from1 - markov_map(p, 0.0).p11_from1, 1e-15);
    const double t1 = 1.0 / p.gamma0;
    const double d1 = nonmarkov_map(p, t1).p11_from1 - markov_map(p, t1).p11_from1;
    if (std::abs(p.x() - 0.05) < 1e-15)
        s.near(4, "difference_at_1", 0.013793958920530, d1, 1e-9,
               "reference from arbitrary-precision evaluation at x = 0.05");
    else
        s.skip(4, "difference_at_1", "reference value is tabulated for x = 0.05 only");
}

void fidelity_checks(Suite& s) {
    const auto& p = s.params;
    const auto rho0 = QubitDensityMatrix::sigmax_plus();
    const auto grid = TimeGrid::uniform_gamma_t(40.0, 0.01, p.gamma0);
    const auto fn = fidelity_vs_free(evolve_nonmarkov(p, rho0, grid), rho0);
    const auto fm = fidelity_vs_free(evolve_markov(p, rho0, grid), rho0);
    double err = 0.0, worst_diff = kInf;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid[i];
        const double f = 0.5 + 0.5 * std::exp(-0.5 * p.gamma0 * t) * upsilon(p, t);
        err = std::max(err, std::abs(fn[i] - f));
        worst_diff = std::min(worst_diff, fn[i] - fm[i]);
    }
    s.add(5, "nm_closed_form", 0.0, err, 1e-9, err <= 1e-9,
          "max |F_nm - (1/2 + e^{-Gamma0 t/2} Upsilon / 2)| on Gamma0 t in [0, 40]");
    if (!s.gated(5, "nm_above_markov"))
        s.add(5, "nm_above_markov", 0.0, worst_diff, 0.0, worst_diff >= 0.0, "min of F_nm - F_markov, must be >= 0");
    s.near(5, "nm_tail", 0.5, fn.back(), 1e-4, "fidelity at Gamma0 t = 40");
    s.near(5, "markov_tail", 0.5, fm.back(), 1e-4, "fidelity at Gamma0 t = 40");
}

void entropy_checks(Suite& s) {
    const auto& p = s.params;
    const auto rho0 = QubitDensityMatrix::excited();
    const auto grid = TimeGrid::uniform_gamma_t(40.0, 0.01, p.gamma0);
    const auto nm = evolve_nonmarkov(p, rho0, grid);
    const auto mk = evolve_markov(p, rho0, grid);
    std::vector<int> signs;
    double flip = -1.0;
    const auto gt = grid.gamma_t(p.gamma0);
    double last = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        last = von_neumann_entropy(nm.states[i]) - von_neumann_entropy(mk.states[i]);
        if (std::abs(last) <= 1e-12) continue;
        const int sg = last > 0 ? 1 : -1;
        if (signs.empty() || signs.back() != sg) {
            if (!signs.empty()) flip = gt[i];
            signs.push_back(sg);
        }
    }
    if (!s.gated(6, "sign_pattern")) {
        const bool ok = signs == std::vector<int>{-1, 1};
        std::string pat;
        for (int v : signs) pat += v < 0 ? "-" : "+";
        s.add(6, "sign_pattern", 0.0, static_cast<double>(signs.size()), 0.0, ok,
              "S_nm - S_markov sign sequence '" + pat + "' (want '-+'), last flip at Gamma0 t = " + num(flip));
        s.near(6, "difference_tail", 0.0, last, 1e-3, "S_nm - S_markov at Gamma0 t = 40");
    }
    s.near(6, "nm_tail_entropy", binary_entropy(p.x()), von_neumann_entropy(nm.states.back()), 1e-6,
           "NM entropy at Gamma0 t = 40 against the binary entropy of x");
}

// max |rho11 - exp(-Gamma0 t)| on [0.1, 3] for the zero-temperature oracle
double zero_t_oracle_error(const ModelParams& p, double band, std::size_t n, const OracleOptions& opt) {
    const auto bath = discretize_bath(p, band, n);
    const auto grid = TimeGrid::from_gamma_t(range(0.1, 3.0, 0.05), p.gamma0);
    const auto tr = evolve_exact(p, bath, QubitDensityMatrix::excited(), grid, enumerate_thermal_configs(bath, 0), opt);
    double e = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) e = std::max(e, std::abs(tr.states[i].rho11() - std::exp(-p.gamma0 * grid[i])));
    return e;
}

void oracle_zero_t(Suite& s) {
    const auto p = ModelParams::make(1.0, s.params.gamma0, kInf);
    const auto opt = s.oracle_options();
    const double err = zero_t_oracle_error(p, s.cfg.band, s.cfg.n_modes, opt);
    std::ostringstream det;
    det << "max |rho11 - e^{-Gamma0 t}| on Gamma0 t in [0.1, 3], band " << s.cfg.band << ", " << s.cfg.n_modes
        << " modes; same spacing with wider bands:";
    for (double f : {2.0, 4.0}) {
        const double band = s.cfg.band * f;
        if (band >= 2.0) continue;
        const std::size_t n = static_cast<std::size_t>(f) * (s.cfg.n_modes - 1) + 1;
        det << " band " << band << " -> " << num(zero_t_oracle_error(p, band, n, opt)) << ";";
    }
    s.add(7, "zero_t_decay", 0.0, err, 0.01, err <= 0.01, det.str());

    // quiet start: rho11'(0) from a one-sided stencil at Gamma0 t = 0, 1e-3, 2e-3
    const auto bath = discretize_bath(p, s.cfg.band, s.cfg.n_modes);
    const auto grid = TimeGrid::from_gamma_t({0.0, 1e-3, 2e-3}, p.gamma0);
    const auto tr = evolve_exact(p, bath, QubitDensityMatrix::excited(), grid, enumerate_thermal_configs(bath, 0), opt);
    std::vector<double> r;
    for (const auto& st : tr.states) r.push_back(st.rho11());
    const double d0 = differentiate(grid.times(), r)[0] / p.gamma0;
    s.add(7, "zero_t_initial_slope", 0.0, d0, 0.01, std::abs(d0) <= 0.01,
          "rho11'(0) / Gamma0 (Markov value is -1)");
}

void oracle_convergence(Suite& s) {
    const auto p = ModelParams::make(1.0, s.params.gamma0, kInf);
    const auto opt = s.oracle_options();
    const auto grid = TimeGrid::from_gamma_t(range(0.0, 3.0, 0.05), p.gamma0);
    auto run = [&](std::size_t n) {
        const auto bath = discretize_bath(p, s.cfg.band, n);
        const auto tr = evolve_exact(p, bath, QubitDensityMatrix::excited(), grid, enumerate_thermal_configs(bath, 0), opt);
        std::vector<double> r;
        for (const auto& st : tr.states) r.push_back(st.rho11());
        return r;
    };
    const std::size_t n0 = s.cfg.n_modes, n1 = 2 * n0 - 1, n2 = 2 * n1 - 1;
    const auto a = run(n0), b = run(n1), c = run(n2);
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d1 = std::max(d1, std::abs(b[i] - a[i]));
        d2 = std::max(d2, std::abs(c[i] - b[i]));
    }
    const double ratio = d2 > 0.0 ? d1 / d2 : kInf;
    std::ostringstream det;
    det << "zero-T rho11 on Gamma0 t in [0, 3]: change " << n0 << "->" << n1 << " modes = " << num(d1) << ", " << n1
        << "->" << n2 << " = " << num(d2) << ", ratio " << num(ratio)
        << "; converged if the first change is <= 0.005 and halving the spacing shrinks it by >= 1.85";
    s.add(0, "oracle_convergence", 0.0, d1, 0.005, d1 <= 0.005 && ratio >= 1.85, det.str());
}

struct OracleDeviation {
    double rho11{0.0}, coh{0.0};
    std::string note;
};

OracleDeviation oracle_vs_nm(const Suite& s, double band, std::size_t n) {
    const auto& p = s.params;
    const auto bath = discretize_bath(p, band, n);
    OracleDeviation d;
    const auto members = thermal_members(bath, s.cfg.mmax, EnsembleChoice::Auto, &d.note);
    const auto grid = TimeGrid::from_gamma_t(range(0.1, 3.0, 0.1), p.gamma0);
    // sigma_x touches every branch of the map, so one run gives both observables
    const auto maps = ensemble_map(p, bath, grid, members, QubitDensityMatrix::sigmax_plus(), s.oracle_options());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto ref = nonmarkov_map(p, grid[i]);
        d.rho11 = std::max(d.rho11, std::abs(maps[i].p11_from1 - ref.p11_from1));
        d.coh = std::max(d.coh, 0.5 * std::abs(std::abs(maps[i].coherence) - std::abs(ref.coherence)));
    }
    return d;
}

void oracle_thermal(Suite& s) {
    if (s.gated(8, "oracle_vs_nm")) return;
    const auto d = oracle_vs_nm(s, s.cfg.band, s.cfg.n_modes);
    const std::string where = " on Gamma0 t in [0.1, 3], " + std::to_string(s.cfg.n_modes) + " modes; " + d.note;
    s.add(8, "rho11_deviation", 0.0, d.rho11, 0.02, d.rho11 <= 0.02, "max |rho11 - rho11_nm| from |1>" + where);
    s.add(8, "abs_rho10_deviation", 0.0, d.coh, 0.02, d.coh <= 0.02, "max ||rho10| - |rho10_nm|| from sigma_x" + where);
    if (s.cfg.skip_doubling) {
        s.skip(8, "decreases_under_doubling", "doubling run disabled");
        return;
    }
    const std::size_t n2 = 2 * s.cfg.n_modes - 1;
    const auto d2 = oracle_vs_nm(s, s.cfg.band, n2);
    const double before = std::max(d.rho11, d.coh), after = std::max(d2.rho11, d2.coh);
    std::ostringstream det;
    det << "max deviation " << num(before) << " at " << s.cfg.n_modes << " modes, " << num(after) << " at " << n2
        << " (rho11 " << num(d2.rho11) << ", |rho10| " << num(d2.coh) << "); must decrease";
    if (2.0 * s.cfg.band < 2.0) {
        // same spacing, twice the band: isolates the finite-band error
        const auto wide = oracle_vs_nm(s, 2.0 * s.cfg.band, n2);
        det << "; band " << num(2.0 * s.cfg.band) << " with " << n2 << " modes gives rho11 " << num(wide.rho11)
            << ", |rho10| " << num(wide.coh);
    }
    s.add(8, "decreases_under_doubling", before, after, 0.0, after < before, det.str());
}

void engine_equivalence(Suite& s) {
    // exact agreement is only expected where the hierarchy closes on the ensemble: zero temperature
    const auto p = ModelParams::make(1.0, s.params.gamma0, kInf);
    const auto bath = discretize_bath(p, s.cfg.band, s.cfg.n_modes);
    const auto grid = TimeGrid::uniform_gamma_t(3.0, 0.05, p.gamma0);
    const auto rho0 = QubitDensityMatrix::excited();
    const auto oracle = evolve_exact(p, bath, rho0, grid, enumerate_thermal_configs(bath, 0), s.oracle_options());
    const auto fun = assemble_density_matrix(integrate_functionals(bath, p.omega0, grid, 0), bath, p, rho0);
    double e = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        e = std::max(e, std::abs(oracle.states[i].rho11() - fun.states[i].rho11()));
    s.add(9, "functional_vs_oracle", 0.0, e, 1e-3, e <= 1e-3,
          "max |rho11_functional - rho11_oracle| on Gamma0 t in [0, 3], beta = inf, " +
              std::to_string(s.cfg.n_modes) + " modes");
}

void closed_form_resummation(Suite& s) {
    if (s.gated(10, "closed_form_resummation")) return;
    const auto& p = s.params;
    const auto bath = discretize_bath(p, s.cfg.band, s.cfg.n_modes);
    constexpr unsigned cutoff = 12;
    double e_coh = 0.0, e_f = 0.0, e_pop = 0.0;
    for (double gt : range(0.0, 5.0, 0.25)) {
        const double t = gt / p.gamma0;
        const auto m = assemble_map(closed_form_table(p, bath, t, cutoff), bath);
        const auto ref = nonmarkov_map(p, t);
        e_coh = std::max(e_coh, std::abs(m.coherence - ref.coherence));
        e_f = std::max(e_f, std::abs(m.p00_from0 - ref.p00_from0));
        e_pop = std::max(e_pop, std::abs(m.p11_from1 - ref.p11_from1));
    }
    s.add(10, "rho10_identity", 0.0, e_coh, 1e-9, e_coh <= 1e-9,
          "max |sum w bracket F* / Z - e^{-Gamma0 t/2 - i omega0 t} Upsilon| on Gamma0 t in [0, 5], occupation cutoff 12");
    s.add(10, "ground_persistence", 0.0, e_f, 1e-9, e_f <= 1e-9,
          "max |sum w |F|^2 / Z - Upsilon|; for reference the literal rho11<-rho11 sum differs by " + num(e_pop));
}

void property_suite(Suite& s) {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::size_t bad_state = 0, bad_entropy = 0;
    const double ln2 = std::numbers::ln2;
    for (int i = 0; i < 10000; ++i) {
        // uniform in the Bloch ball
        double bx, by, bz;
        do {
            bx = 2 * u(rng) - 1;
            by = 2 * u(rng) - 1;
            bz = 2 * u(rng) - 1;
        } while (bx * bx + by * by + bz * bz > 1.0);
        const auto rho0 = validate_density_matrix(RawQubitMatrix{0.5 * (1 - bz), cplx(0.5 * bx, -0.5 * by),
                                                                 cplx(0.5 * bx, 0.5 * by), 0.5 * (1 + bz)});
        const auto p = ModelParams::from_x(1.0, s.params.gamma0, 0.2 * u(rng));
        const double t = 20.0 * u(rng) / p.gamma0;
        for (const auto& map : {nonmarkov_map(p, t), markov_map(p, t), zero_temperature_map(p, t)}) {
            const auto r = map.apply(rho0);
            const double tr = (r.rho00 + r.rho11).real();
            const double det = (r.rho00 * r.rho11 - r.rho01 * r.rho10).real();
            const bool ok = std::abs(tr - 1.0) <= 1e-12 && std::abs(r.rho00.imag()) <= 1e-12 &&
                            std::abs(r.rho11.imag()) <= 1e-12 && std::abs(r.rho01 - std::conj(r.rho10)) <= 1e-12 &&
                            r.rho00.real() >= -1e-12 && r.rho11.real() >= -1e-12 && det >= -1e-12;
            if (!ok) {
                ++bad_state;
                continue;
            }
            const double S = von_neumann_entropy(validate_density_matrix(r));
            if (!(S >= 0.0 && S <= ln2 + 1e-12)) ++bad_entropy;
        }
    }
    s.add(11, "state_invariants", 0.0, static_cast<double>(bad_state), 0.0, bad_state == 0,
          "trace, hermiticity, positivity violations (1e-12) over 10000 random (rho0, x, t) samples x 3 maps");
    s.add(11, "entropy_range", 0.0, static_cast<double>(bad_entropy), 0.0, bad_entropy == 0,
          "entropies outside [0, ln 2] over the same samples");

    // second-order finite differences: error ratio under halving the step
    const auto& p = s.params;
    auto fd_errors = [&](double h) {
        const auto grid = TimeGrid::uniform_gamma_t(5.0, h, p.gamma0);
        const auto dec = decoherence_rate(evolve_nonmarkov(p, QubitDensityMatrix::sigmax_plus(), grid));
        const auto rel = relaxation_rate(evolve_nonmarkov(p, QubitDensityMatrix::excited(), grid),
                                         asymptotic_state(p, MethodLabel::NonMarkovLowT));
        double ed = 0.0, er = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (dec.values[i]) ed = std::max(ed, std::abs(*dec.values[i] - nonmarkov_decoherence_rate(p, grid[i])));
            if (rel.values[i]) er = std::max(er, std::abs(*rel.values[i] - nonmarkov_relaxation_rate(p, grid[i])));
        }
        return std::pair{ed / p.gamma0, er / p.gamma0};
    };
    const auto [d1, r1] = fd_errors(0.02);
    const auto [d2, r2] = fd_errors(0.01);
    const double od = std::log2(d1 / d2), orl = std::log2(r1 / r2);
    s.add(11, "fd_order_decoherence", 2.0, od, 0.2, od >= 1.8,
          "observed order of the finite-difference Gamma_dec, steps 0.02 -> 0.01 (errors " + num(d1) + ", " + num(d2) + ")");
    s.add(11, "fd_order_relaxation", 2.0, orl, 0.2, orl >= 1.8,
          "observed order of the finite-difference Gamma_rel, steps 0.02 -> 0.01 (errors " + num(r1) + ", " + num(r2) + ")");
}

}  // namespace

std::string criterion_title(int c) {
    switch (c) {
        case 0: return "oracle discretization convergence";
        case 1: return "thermal asymptotes";
        case 2: return "decoherence-rate crossover";
        case 3: return "rate ratio";
        case 4: return "relaxation ordering";
        case 5: return "fidelity";
        case 6: return "entropy";
        case 7: return "oracle vs zero-T closed form";
        case 8: return "oracle vs NM closed form";
        case 9: return "engine equivalence";
        case 10: return "closed-form resummation";
        case 11: return "property suites";
    }
    return "?";
}

std::vector<CheckResult> run_acceptance(const ValidationConfig& cfg, std::vector<std::string>& warnings) {
    Suite s{cfg, ModelParams::from_x(1.0, cfg.gamma0_over_omega0, cfg.x), true, {}};
    for (auto& w : s.params.validity_warnings()) warnings.push_back(w);
    s.low_t = s.params.x() < 0.2;

    thermal_asymptotes(s);
    decoherence_crossover(s);
    rate_ratio_window(s);
    relaxation_ordering(s);
    fidelity_checks(s);
    entropy_checks(s);
    oracle_zero_t(s);
    oracle_convergence(s);
    oracle_thermal(s);
    engine_equivalence(s);
    closed_form_resummation(s);
    property_suite(s);
    for (auto& r : s.out) r.name = std::to_string(r.criterion) + "." + r.name;
    return s.out;
}

}  // namespace nmq
