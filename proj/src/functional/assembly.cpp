#include <cmath>
#include <sstream>

#include "nmq/functional.hpp"

namespace nmq {

namespace {

const cplx I{0.0, 1.0};

void occupations(const std::vector<std::size_t>& modes, std::size_t pos, unsigned left, FockConfig& cur,
                 std::vector<FockConfig>& out) {
    if (pos == modes.size()) {
        out.push_back(cur);
        return;
    }
    for (unsigned n = 0; n <= left; ++n) {
        cur.set(modes[pos], n);
        occupations(modes, pos + 1, left - n, cur, out);
    }
    cur.set(modes[pos], 0);
}

}  // namespace

std::vector<std::size_t> resonant_modes(const BathSpec& bath, double omega0) {
    std::vector<std::size_t> r;
    for (std::size_t k = 0; k < bath.size(); ++k)
        if (std::abs(bath.modes[k].omega - omega0) <= kResonanceTol * omega0) r.push_back(k);
    return r;
}

ClosedFormEntry closed_form_functionals(const ModelParams& params, const BathSpec& bath, const FockConfig& config,
                                        double t) {
    const std::size_t K = bath.size();
    const double w0 = params.omega0;
    const double g = params.gamma0;
    unsigned mo = 0;
    for (std::size_t k : resonant_modes(bath, w0)) mo += config[k];
    const double m_o = mo;
    const double Em = config.energy(bath);
    const cplx base = std::exp(-I * (w0 + Em) * t);  // exp(-i(omega0 + E_m) t)

    ClosedFormEntry e;
    e.m_o = mo;
    e.F = std::exp(-0.5 * g * m_o * t - I * Em * t);
    e.psi_f = std::exp(-0.5 * g * (m_o + 1.0) * t) * base;
    e.bracket = e.psi_f;
    e.G.assign(K, 0.0);
    e.psi_g.assign(K, 0.0);
    e.phi_f.assign(K, 0.0);
    e.phi_g = Eigen::MatrixXcd::Zero(K, K);

    for (std::size_t p = 0; p < K; ++p) {
        const double lp = bath.modes[p].lambda;
        const double dp = bath.modes[p].omega - w0;
        // Phi^f_p[m]
        e.phi_f[p] = lp * std::exp(-0.5 * g * m_o * t) * base / (dp - I * 0.5 * g) *
                     (std::exp(-0.5 * g * t) - std::exp(I * dp * t));
        if (config[p] == 0) continue;
        // entries at m - d_p: mode p occupied, so a resonant p has m_o >= 1 and no denominator vanishes
        const cplx pole = 0.5 * g * m_o + I * dp;
        e.G[p] = I * lp * (1.0 - std::exp(-pole * t)) / pole * std::exp(I * (dp - Em) * t);
        e.psi_g[p] = lp * std::exp(-0.5 * g * t) * base / (dp - I * 0.5 * g * m_o) *
                     (std::exp(I * dp * t) - std::exp(-0.5 * g * m_o * t));
        for (std::size_t l = 0; l < K; ++l) {
            const double ll = bath.modes[l].lambda;
            const double dl = bath.modes[l].omega - w0;
            const cplx ph = std::exp(-I * (w0 + bath.modes[l].omega - bath.modes[p].omega + Em) * t);
            e.phi_g(l, p) = ll * lp * ph * (std::exp(-0.5 * g * t + I * dl * t) - 1.0) *
                            (1.0 - std::exp(-0.5 * g * m_o * t - I * dp * t)) /
                            ((dl + I * 0.5 * g) * (dp - I * 0.5 * g * m_o));
        }
    }
    e.bracket_literal = e.psi_f;
    for (auto [l, m] : config.occupations()) e.bracket_literal += static_cast<double>(m) * e.phi_g(l, l);
    return e;
}

AssemblyTable assembly_table(const FunctionalState& s, const BathSpec& bath) {
    const auto& L = *s.layout;
    AssemblyTable tab;
    tab.t = s.t;
    for (std::size_t k = 0; k < bath.size(); ++k) tab.modes.push_back(k);
    tab.rows.reserve(L.n_f());
    for (std::size_t c = 0; c < L.n_f(); ++c) {
        AssemblyRow r;
        r.config = L.configs()[c];
        r.F = s.F(c);
        r.bracket = s.psi_f(c);
        for (const auto& d : L.down(c)) {
            r.bracket += static_cast<double>(d.count) * s.phi_g(d.idx, d.mode, d.mode);
            r.g_sum += d.count * std::norm(s.G(d.idx, d.mode));
        }
        for (std::size_t p = 0; p < L.modes(); ++p) r.phi_sum += (r.config[p] + 1.0) * std::norm(s.phi_f(c, p));
        tab.rows.push_back(std::move(r));
    }
    return tab;
}

AssemblyTable closed_form_table(const ModelParams& params, const BathSpec& bath, double t, unsigned cutoff) {
    AssemblyTable tab;
    tab.t = t;
    tab.modes = resonant_modes(bath, params.omega0);
    std::vector<FockConfig> cfgs;
    FockConfig cur;
    occupations(tab.modes, 0, cutoff, cur, cfgs);
    for (const auto& c : cfgs) {
        const auto e = closed_form_functionals(params, bath, c, t);
        AssemblyRow r;
        r.config = c;
        r.F = e.F;
        r.bracket = e.bracket;
        for (auto [l, m] : c.occupations()) r.g_sum += m * std::norm(e.G[l]);
        for (std::size_t p = 0; p < bath.size(); ++p) r.phi_sum += (c[p] + 1.0) * std::norm(e.phi_f[p]);
        tab.rows.push_back(std::move(r));
    }
    return tab;
}

QubitMapSample assemble_map(const AssemblyTable& table, const BathSpec& bath) {
    double z_full_log = 0.0;
    for (std::size_t k : table.modes) z_full_log -= std::log1p(-bath.boltzmann(k));
    double z = 0.0;
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    cplx coh = 0.0;
    for (const auto& r : table.rows) {
        const double w = std::exp(-bath.beta * r.config.energy(bath));
        const double ww = std::isinf(bath.beta) ? (r.config.total() == 0 ? 1.0 : 0.0) : w;
        z += ww;
        a += ww * r.g_sum;
        b += ww * std::norm(r.bracket);
        c += ww * r.phi_sum;
        d += ww * std::norm(r.F);
        coh += ww * r.bracket * std::conj(r.F);
    }
    const double kept = z / std::exp(z_full_log);
    if (kept < 0.95) {
        std::ostringstream os;
        os << "truncated partition sum keeps only " << kept << " of Z; raise the occupation cutoff";
        throw CutoffInsufficient(os.str());
    }
    QubitMapSample m;
    m.p11_from0 = a / z;
    m.p11_from1 = b / z;
    m.p00_from1 = c / z;
    m.p00_from0 = d / z;
    m.coherence = coh / z;
    return m;
}

EvolutionTrace assemble_density_matrix(const std::vector<AssemblyTable>& tables, const BathSpec& bath,
                                       const ModelParams& params, const QubitDensityMatrix& rho0) {
    EvolutionTrace tr;
    tr.method = TraceMethod::Functional;
    tr.params = params;
    std::vector<double> t;
    for (const auto& tab : tables) {
        t.push_back(tab.t);
        tr.states.push_back(validate_density_matrix(assemble_map(tab, bath).apply(rho0)));
    }
    tr.grid = TimeGrid(std::move(t));
    return tr;
}

EvolutionTrace assemble_density_matrix(const std::vector<FunctionalState>& functionals, const BathSpec& bath,
                                       const ModelParams& params, const QubitDensityMatrix& rho0) {
    std::vector<AssemblyTable> tabs;
    tabs.reserve(functionals.size());
    for (const auto& s : functionals) tabs.push_back(assembly_table(s, bath));
    return assemble_density_matrix(tabs, bath, params, rho0);
}

std::vector<AmplitudeCoefficients> amplitude_recursion(const BathSpec& bath, double omega0, std::size_t steps,
                                                       double epsilon, std::size_t sample_every,
                                                       const Eigen::VectorXcd& initial_field) {
    const double wmax = std::max(bath.omega_max(), omega0);
    if (!(epsilon > 0.0)) throw InvalidParam("recursion step must be positive");
    if (epsilon * wmax > 0.1) {
        std::ostringstream os;
        os << "recursion step " << epsilon << " times omega_max " << wmax << " exceeds 0.1";
        throw StepTooCoarse(os.str());
    }
    if (sample_every == 0) sample_every = 1;
    const auto K = static_cast<Eigen::Index>(bath.size());
    Eigen::VectorXd w(K), lam(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        w[k] = bath.modes[k].omega;
        lam[k] = bath.modes[k].lambda;
    }
    AmplitudeCoefficients cur;
    cur.psi = 1.0;
    cur.phi = Eigen::VectorXcd::Zero(K);
    cur.g = Eigen::VectorXcd::Zero(K);
    cur.f = initial_field.size() == K ? initial_field : Eigen::VectorXcd::Zero(K);
    std::vector<AmplitudeCoefficients> out{cur};
    const cplx a0 = 1.0 - I * omega0 * epsilon;
    const Eigen::VectorXcd ak = (Eigen::VectorXcd::Ones(K) - I * epsilon * w.cast<cplx>());
    const Eigen::VectorXcd il = I * epsilon * lam.cast<cplx>();
    for (std::size_t n = 1; n <= steps; ++n) {
        const cplx psi = a0 * cur.psi + il.cwiseProduct(cur.phi).sum();
        Eigen::VectorXcd phi = il * cur.psi + ak.cwiseProduct(cur.phi);
        const cplx gsum = cur.g.sum();
        Eigen::VectorXcd g = a0 * cur.g + il.cwiseProduct(cur.f);
        Eigen::VectorXcd f = il * gsum + ak.cwiseProduct(cur.f);
        cur.psi = psi;
        cur.phi = std::move(phi);
        cur.g = std::move(g);
        cur.f = std::move(f);
        cur.step = n;
        if (n % sample_every == 0 || n == steps) out.push_back(cur);
    }
    return out;
}

}  // namespace nmq
