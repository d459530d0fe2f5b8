// oracle.hpp - exact dynamics of the discretized multimode Jaynes-Cummings model, sector by sector

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nmq/core.hpp"
#include "nmq/linalg.hpp"

namespace nmq {

// Uniform band centred on omega0 with flat couplings sqrt(Gamma0 dw / 2pi). n_modes odd puts one mode on resonance.
BathSpec discretize_bath(const ModelParams& params, double band_width, std::size_t n_modes);

struct WeightedConfig {
    FockConfig config;
    double weight{0.0};
};

struct ThermalEnsemble {
    std::vector<WeightedConfig> members;
    double truncation_loss{0.0};
};

// Boltzmann weights normalised by the full partition function. Loss above 5% is an error.
ThermalEnsemble enumerate_thermal_configs(const BathSpec& bath, unsigned cutoff, double weight_floor = 0.0);

// Partition-function mass that enumerate_thermal_configs would keep, without enumerating.
double truncated_weight(const BathSpec& bath, unsigned cutoff);

// Linked-cluster expansion of the thermal state: vacuum plus single-mode clusters.
// rho = rho_vac + sum_k sum_{j<=c} w_kj (rho_{j 1_k} - rho_vac), with w_kj the single-mode occupation
// probabilities, the top one adjusted so each mode keeps its exact mean occupation. Weights are signed
// (the vacuum entry carries 1 - sum w_kj) and sum to one.
struct ClusterEnsemble {
    std::vector<WeightedConfig> members;
    unsigned max_occupation{1};
};

ClusterEnsemble linked_cluster_ensemble(const BathSpec& bath, unsigned max_occupation = 1);

enum class EnsembleChoice { Auto, Truncated, Cluster };

std::string to_string(EnsembleChoice e);
EnsembleChoice ensemble_choice_from_string(const std::string& s);

// Members for an oracle run. Auto takes the truncated ensemble when it keeps at least 95% of Z
// and falls back to single-occupation clusters otherwise. `note` says which one was used.
std::vector<WeightedConfig> thermal_members(const BathSpec& bath, unsigned cutoff, EnsembleChoice choice,
                                            std::string* note = nullptr);

struct SectorState {
    unsigned qubit{0};
    std::vector<std::uint8_t> occ;  // dense, one entry per bath mode
};

// Basis of a fixed-excitation sector closed under H, in canonical order, with the
// rotating-frame Hamiltonian (omega0 * N removed from the diagonal).
class SectorBasis {
public:
    SectorBasis(const BathSpec& bath, double omega0, const std::vector<SectorState>& seeds,
                std::size_t max_dim);

    unsigned excitation() const { return excitation_; }
    std::size_t dim() const { return states_.size(); }
    const std::vector<SectorState>& states() const { return states_; }
    const linalg::SparseRowMatrix& hamiltonian() const { return h_; }
    double omega0() const { return omega0_; }

    std::optional<std::size_t> find(const SectorState& s) const;
    // rows with qubit excited / in the ground state, ascending
    const std::vector<std::size_t>& excited_rows() const { return excited_; }
    const std::vector<std::size_t>& ground_rows() const { return ground_; }

    Eigen::MatrixXd dense_hamiltonian() const { return Eigen::MatrixXd(h_); }

    static std::string key(const SectorState& s);

private:
    unsigned excitation_{0};
    double omega0_{0.0};
    std::vector<SectorState> states_;
    std::unordered_map<std::string, std::size_t> index_;
    linalg::SparseRowMatrix h_;
    std::vector<std::size_t> excited_, ground_;
};

SectorState sector_state(const BathSpec& bath, unsigned qubit, const FockConfig& config);

struct OracleOptions {
    std::size_t max_sector_dim{20000};
    std::size_t dense_limit{1000};  // above this, Lanczos propagation replaces the eigendecomposition
    unsigned threads{0};            // 0 = hardware concurrency
    linalg::KrylovOptions krylov{};
    std::string checkpoint_dir;     // empty disables eigendecomposition checkpoints
};

// Evolves a set of seed states of one sector; returns columns in the rotating frame at
// nondecreasing absolute times.
class SectorPropagator {
public:
    SectorPropagator(std::shared_ptr<const SectorBasis> sector, std::vector<std::size_t> seed_rows,
                     const BathSpec& bath, const OracleOptions& opt);

    const Eigen::MatrixXcd& at(double t);
    bool dense() const { return dense_; }
    const SectorBasis& sector() const { return *sector_; }

private:
    std::shared_ptr<const SectorBasis> sector_;
    std::vector<std::size_t> seeds_;
    bool dense_{true};
    linalg::SymmetricEigen eig_;
    Eigen::MatrixXd coeff_;  // V^T restricted to seed rows, dim x seeds
    Eigen::MatrixXcd states_;
    double t_{0.0};
    linalg::KrylovOptions krylov_;
};

// Per-time qubit map averaged over weighted members (weights may be signed), divided by their sum.
// Only the branches needed for rho0 are propagated; entries of the map that rho0 does not touch are left at identity.
std::vector<QubitMapSample> ensemble_map(const ModelParams& params, const BathSpec& bath, const TimeGrid& grid,
                                         const std::vector<WeightedConfig>& members, const QubitDensityMatrix& rho0,
                                         const OracleOptions& opt = {});

EvolutionTrace evolve_exact(const ModelParams& params, const BathSpec& bath, const QubitDensityMatrix& rho0,
                            const TimeGrid& grid, const ThermalEnsemble& ensemble, const OracleOptions& opt = {});

EvolutionTrace evolve_cluster(const ModelParams& params, const BathSpec& bath, const QubitDensityMatrix& rho0,
                              const TimeGrid& grid, const ClusterEnsemble& ensemble, const OracleOptions& opt = {});

// Versioned binary checkpoint of a dense sector eigendecomposition.
// Layout (little endian): "NMQSEIG" '\0', u32 version, u64 bath hash, f64 omega0, u64 dim, u64 modes,
// dim records of (u8 qubit, modes x u8 occupation), dim f64 eigenvalues, dim*dim f64 eigenvectors (column major).
inline constexpr std::uint32_t kCheckpointVersion = 1;
std::string checkpoint_path(const std::string& dir, const BathSpec& bath, const SectorBasis& sector);
void save_sector_checkpoint(const std::string& path, const BathSpec& bath, const SectorBasis& sector,
                            const linalg::SymmetricEigen& eig);
// Empty when the file is missing or was written for a different bath/sector/version.
std::optional<linalg::SymmetricEigen> load_sector_checkpoint(const std::string& path, const BathSpec& bath,
                                                             const SectorBasis& sector);

}  // namespace nmq
