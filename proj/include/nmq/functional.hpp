// functional.hpp - functional ODE hierarchy, its low-temperature closed forms, thermal assembly,
// and the discrete amplitude recursion

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "nmq/core.hpp"

namespace nmq {

// Index bookkeeping for the hierarchy. F, Psi_f, Phi_f live on configs of total <= M;
// G, Psi_g, Phi_g on configs of total <= M-1 (the first nG configs, since configs are ordered by level).
class FunctionalLayout {
public:
    FunctionalLayout(const BathSpec& bath, double omega0, unsigned cutoff);

    std::size_t modes() const { return K_; }
    unsigned cutoff() const { return M_; }
    std::size_t n_f() const { return configs_.size(); }
    std::size_t n_g() const { return n_g_; }
    std::size_t size() const { return off_phi_g_ + n_g_ * K_ * K_; }
    const std::vector<FockConfig>& configs() const { return configs_; }
    unsigned level(std::size_t c) const { return level_[c]; }
    std::optional<std::size_t> find(const FockConfig& c) const;

    // flat offsets into the state vector
    std::size_t F(std::size_t c) const { return c; }
    std::size_t psi_f(std::size_t c) const { return off_psi_f_ + c; }
    std::size_t phi_f(std::size_t c, std::size_t p) const { return off_phi_f_ + c * K_ + p; }
    std::size_t G(std::size_t c, std::size_t p) const { return off_g_ + c * K_ + p; }
    std::size_t psi_g(std::size_t c, std::size_t p) const { return off_psi_g_ + c * K_ + p; }
    std::size_t phi_g(std::size_t c, std::size_t l, std::size_t p) const { return off_phi_g_ + (c * K_ + l) * K_ + p; }

    struct Down {
        std::size_t mode;
        unsigned count;   // m_l of the parent config
        std::size_t idx;  // config index of parent - delta_l
    };
    const std::vector<Down>& down(std::size_t c) const { return down_[c]; }
    std::size_t up(std::size_t c, std::size_t p) const { return up_[c * K_ + p]; }  // c < n_g

    void rhs(const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) const;

private:
    std::size_t K_{0};
    unsigned M_{0};
    std::vector<FockConfig> configs_;
    std::vector<unsigned> level_;
    std::size_t n_g_{0};
    std::size_t off_psi_f_{0}, off_phi_f_{0}, off_g_{0}, off_psi_g_{0}, off_phi_g_{0};
    std::vector<std::vector<Down>> down_;
    std::vector<std::size_t> up_;
    std::vector<double> eps_;    // sum m_q omega_q - level * omega0
    std::vector<double> det_;    // omega_k - omega0
    std::vector<double> lam_;
};

// All functionals at one time, stored in the rotating frame. Accessors return lab-frame values.
struct FunctionalState {
    std::shared_ptr<const FunctionalLayout> layout;
    double t{0.0};
    double omega0{1.0};
    Eigen::VectorXcd y;

    cplx F(std::size_t c) const;
    cplx G(std::size_t c, std::size_t p) const;
    cplx psi_f(std::size_t c) const;
    cplx psi_g(std::size_t c, std::size_t p) const;
    cplx phi_f(std::size_t c, std::size_t p) const;
    cplx phi_g(std::size_t c, std::size_t l, std::size_t p) const;
};

struct FunctionalOptions {
    double step{0.0};  // absolute time; 0 picks 0.1 / omega_max
};

// Fixed-step RK4. StepTooCoarse if step * omega_max > 0.5.
std::vector<FunctionalState> integrate_functionals(const BathSpec& bath, double omega0, const TimeGrid& grid,
                                                   unsigned cutoff, const FunctionalOptions& opt = {});

// Low-temperature pole solutions for one configuration m. Shifted entries follow the closed forms:
// G[l] = G_l[m - d_l], psi_g[p] = Psi^g_p[m - d_p], phi_g(l, p) = Phi^g_lp[m - d_p]; they are zero where m_l (m_p) = 0.
struct ClosedFormEntry {
    cplx F;
    std::vector<cplx> G;
    cplx psi_f;
    std::vector<cplx> psi_g;
    std::vector<cplx> phi_f;
    Eigen::MatrixXcd phi_g;
    cplx bracket;          // reduced form exp(-Gamma0 (m_o+1) t/2 - i(omega0 + E_m) t)
    cplx bracket_literal;  // psi_f + sum_l m_l Phi^g_ll[m - d_l] from the entries above
    unsigned m_o{0};
};

// Modes within this relative distance of omega0 count as resonant.
inline constexpr double kResonanceTol = 1e-9;
std::vector<std::size_t> resonant_modes(const BathSpec& bath, double omega0);

ClosedFormEntry closed_form_functionals(const ModelParams& params, const BathSpec& bath, const FockConfig& config,
                                        double t);

// Per-time, per-config quantities the thermal sums need.
struct AssemblyRow {
    FockConfig config;
    cplx F;
    cplx bracket;       // Psi^f[m] + sum_l m_l Phi^g_ll[m - d_l]
    double g_sum{0.0};  // sum_l m_l |G_l[m - d_l]|^2
    double phi_sum{0.0};  // sum_l (m_l + 1) |Phi^f_l[m]|^2
};

struct AssemblyTable {
    double t{0.0};
    std::vector<AssemblyRow> rows;
    std::vector<std::size_t> modes;  // modes the configs range over; sets the partition function
};

AssemblyTable assembly_table(const FunctionalState& state, const BathSpec& bath);
// Closed-form table over occupations of the resonant modes only; the non-resonant sums factor out
// and cancel against the normalisation.
AssemblyTable closed_form_table(const ModelParams& params, const BathSpec& bath, double t, unsigned cutoff);

// Raw thermal sums divided by the truncated partition sum. CutoffInsufficient if that sum
// misses more than 5% of the full partition function of the covered modes.
QubitMapSample assemble_map(const AssemblyTable& table, const BathSpec& bath);

EvolutionTrace assemble_density_matrix(const std::vector<AssemblyTable>& tables, const BathSpec& bath,
                                       const ModelParams& params, const QubitDensityMatrix& rho0);
EvolutionTrace assemble_density_matrix(const std::vector<FunctionalState>& functionals, const BathSpec& bath,
                                       const ModelParams& params, const QubitDensityMatrix& rho0);

struct AmplitudeCoefficients {
    std::size_t step{0};
    cplx psi;
    Eigen::VectorXcd phi, g, f;
};

// Forward-difference recursion. Returns step 0 and every sample_every-th step (always the last one).
std::vector<AmplitudeCoefficients> amplitude_recursion(const BathSpec& bath, double omega0, std::size_t steps,
                                                       double epsilon, std::size_t sample_every = 1,
                                                       const Eigen::VectorXcd& initial_field = {});

}  // namespace nmq
