#include <cmath>
#include <map>
#include <sstream>

#include "nmq/oracle.hpp"
#include "nmq/parallel.hpp"

namespace nmq {

SectorPropagator::SectorPropagator(std::shared_ptr<const SectorBasis> sector, std::vector<std::size_t> seed_rows,
                                   const BathSpec& bath, const OracleOptions& opt)
    : sector_(std::move(sector)), seeds_(std::move(seed_rows)), krylov_(opt.krylov) {
    const std::size_t D = sector_->dim();
    const std::size_t S = seeds_.size();
    dense_ = D <= opt.dense_limit;
    if (dense_) {
        std::optional<linalg::SymmetricEigen> cached;
        std::string path;
        if (!opt.checkpoint_dir.empty()) {
            path = checkpoint_path(opt.checkpoint_dir, bath, *sector_);
            cached = load_sector_checkpoint(path, bath, *sector_);
        }
        if (cached) {
            eig_ = std::move(*cached);
        } else {
            eig_ = linalg::eigh(sector_->dense_hamiltonian());
            if (!path.empty()) save_sector_checkpoint(path, bath, *sector_, eig_);
        }
        coeff_.resize(D, S);
        for (std::size_t s = 0; s < S; ++s) coeff_.col(s) = eig_.vectors.row(seeds_[s]).transpose();
        states_.resize(D, S);
    } else {
        states_ = Eigen::MatrixXcd::Zero(D, S);
        for (std::size_t s = 0; s < S; ++s) states_(seeds_[s], s) = 1.0;
    }
}

const Eigen::MatrixXcd& SectorPropagator::at(double t) {
    if (dense_) {
        const auto D = coeff_.rows();
        Eigen::MatrixXd cc(D, coeff_.cols()), cs(D, coeff_.cols());
        for (Eigen::Index j = 0; j < D; ++j) {
            const double ph = eig_.values[j] * t;
            cc.row(j) = std::cos(ph) * coeff_.row(j);
            cs.row(j) = std::sin(ph) * coeff_.row(j);
        }
        Eigen::MatrixXd re, im;
        linalg::gemm(eig_.vectors, cc, re);
        linalg::gemm(eig_.vectors, cs, im);
        states_.real() = re;
        states_.imag() = -im;
        return states_;
    }
    if (t < t_) throw InvalidParam("Krylov propagation requires nondecreasing times");
    if (t > t_) {
        for (Eigen::Index s = 0; s < states_.cols(); ++s) {
            Eigen::VectorXcd v = states_.col(s);
            linalg::krylov_propagate(sector_->hamiltonian(), v, t - t_, krylov_);
            states_.col(s) = v;
        }
        t_ = t;
    }
    return states_;
}

namespace {

struct SeedRef {
    std::size_t sector{0};
    std::size_t column{0};
    std::size_t row{0};
};

struct SectorWork {
    std::shared_ptr<SectorBasis> basis;
    std::vector<std::size_t> seed_rows;
    std::map<std::size_t, std::size_t> column_of_row;
};

}  // namespace

std::vector<QubitMapSample> ensemble_map(const ModelParams& params, const BathSpec& bath, const TimeGrid& grid,
                                         const std::vector<WeightedConfig>& members, const QubitDensityMatrix& rho0,
                                         const OracleOptions& opt) {
    bath.validate();
    if (members.empty()) throw InvalidParam("ensemble has no members");
    const bool need_coh = rho0.rho10() != cplx(0.0);
    const bool need1 = rho0.rho11() != 0.0 || need_coh;
    const bool need0 = rho0.rho00() != 0.0 || need_coh;

    // assign every seed to a sector, building sectors on demand
    std::vector<SectorWork> sectors;
    auto place = [&](unsigned q, const FockConfig& cfg) -> SeedRef {
        const SectorState s = sector_state(bath, q, cfg);
        for (std::size_t i = 0; i < sectors.size(); ++i) {
            if (auto row = sectors[i].basis->find(s)) {
                auto [it, inserted] = sectors[i].column_of_row.emplace(*row, sectors[i].seed_rows.size());
                if (inserted) sectors[i].seed_rows.push_back(*row);
                return {i, it->second, *row};
            }
        }
        SectorWork w;
        w.basis = std::make_shared<SectorBasis>(bath, params.omega0, std::vector<SectorState>{s}, opt.max_sector_dim);
        const std::size_t row = *w.basis->find(s);
        w.seed_rows.push_back(row);
        w.column_of_row.emplace(row, 0);
        sectors.push_back(std::move(w));
        return {sectors.size() - 1, 0, row};
    };
    std::vector<SeedRef> seed1(members.size()), seed0(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (need1) seed1[i] = place(1, members[i].config);
        if (need0) seed0[i] = place(0, members[i].config);
    }

    // (excited row in A, ground row in B) pairs sharing a bath configuration
    std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<std::size_t, std::size_t>>> pairs;
    if (need_coh) {
        for (std::size_t i = 0; i < members.size(); ++i) {
            const auto key = std::make_pair(seed1[i].sector, seed0[i].sector);
            if (pairs.count(key)) continue;
            const auto& A = *sectors[key.first].basis;
            const auto& B = *sectors[key.second].basis;
            auto& list = pairs[key];
            for (std::size_t ra : A.excited_rows()) {
                SectorState g = A.states()[ra];
                g.qubit = 0;
                if (auto rb = B.find(g)) list.emplace_back(ra, *rb);
            }
        }
    }

    std::vector<std::unique_ptr<SectorPropagator>> props(sectors.size());
    parallel_for(sectors.size(), opt.threads, [&](std::size_t i) {
        props[i] = std::make_unique<SectorPropagator>(sectors[i].basis, sectors[i].seed_rows, bath, opt);
    });

    double wsum = 0.0;
    for (const auto& m : members) wsum += m.weight;
    if (!(std::abs(wsum) > 0.0)) throw InvalidParam("ensemble weights sum to zero");

    std::vector<QubitMapSample> out(grid.size());
    std::vector<const Eigen::MatrixXcd*> psi(sectors.size());
    for (std::size_t ti = 0; ti < grid.size(); ++ti) {
        const double t = grid[ti];
        parallel_for(sectors.size(), opt.threads, [&](std::size_t i) { psi[i] = &props[i]->at(t); });
        const cplx frame = std::exp(cplx(0.0, -params.omega0 * t));

        QubitMapSample acc{0.0, 0.0, 0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < members.size(); ++i) {
            const double w = members[i].weight;
            QubitMapSample s;  // identity defaults for branches that rho0 does not need
            if (need1) {
                const auto& P = *psi[seed1[i].sector];
                const auto& basis = *sectors[seed1[i].sector].basis;
                double p1 = 0.0, p0 = 0.0;
                for (std::size_t r : basis.excited_rows()) p1 += std::norm(P(r, seed1[i].column));
                for (std::size_t r : basis.ground_rows()) p0 += std::norm(P(r, seed1[i].column));
                s.p11_from1 = p1;
                s.p00_from1 = p0;
            }
            if (need0) {
                const auto& P = *psi[seed0[i].sector];
                const auto& basis = *sectors[seed0[i].sector].basis;
                double p1 = 0.0, p0 = 0.0;
                for (std::size_t r : basis.excited_rows()) p1 += std::norm(P(r, seed0[i].column));
                for (std::size_t r : basis.ground_rows()) p0 += std::norm(P(r, seed0[i].column));
                s.p11_from0 = p1;
                s.p00_from0 = p0;
            }
            if (need_coh) {
                const auto& PA = *psi[seed1[i].sector];
                const auto& PB = *psi[seed0[i].sector];
                cplx c = 0.0;
                for (auto [ra, rb] : pairs.at({seed1[i].sector, seed0[i].sector}))
                    c += PA(ra, seed1[i].column) * std::conj(PB(rb, seed0[i].column));
                s.coherence = frame * c;
            }
            acc.p11_from1 += w * s.p11_from1;
            acc.p00_from1 += w * s.p00_from1;
            acc.p11_from0 += w * s.p11_from0;
            acc.p00_from0 += w * s.p00_from0;
            acc.coherence += w * s.coherence;
        }
        acc.p11_from1 /= wsum;
        acc.p00_from1 /= wsum;
        acc.p11_from0 /= wsum;
        acc.p00_from0 /= wsum;
        acc.coherence /= wsum;
        out[ti] = acc;
    }
    return out;
}

namespace {

EvolutionTrace to_trace(const ModelParams& params, const QubitDensityMatrix& rho0, const TimeGrid& grid,
                        const std::vector<QubitMapSample>& maps) {
    EvolutionTrace tr;
    tr.method = TraceMethod::Oracle;
    tr.params = params;
    tr.grid = grid;
    tr.states.reserve(grid.size());
    for (const auto& m : maps) tr.states.push_back(validate_density_matrix(m.apply(rho0)));
    return tr;
}

}  // namespace

EvolutionTrace evolve_exact(const ModelParams& params, const BathSpec& bath, const QubitDensityMatrix& rho0,
                            const TimeGrid& grid, const ThermalEnsemble& ensemble, const OracleOptions& opt) {
    return to_trace(params, rho0, grid, ensemble_map(params, bath, grid, ensemble.members, rho0, opt));
}

EvolutionTrace evolve_cluster(const ModelParams& params, const BathSpec& bath, const QubitDensityMatrix& rho0,
                              const TimeGrid& grid, const ClusterEnsemble& ensemble, const OracleOptions& opt) {
    return to_trace(params, rho0, grid, ensemble_map(params, bath, grid, ensemble.members, rho0, opt));
}

}  // namespace nmq
