#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nmq/oracle.hpp"

namespace nmq {

BathSpec discretize_bath(const ModelParams& params, double band_width, std::size_t n_modes) {
    if (n_modes < 3 || n_modes % 2 == 0) throw InvalidParam("n_modes must be odd and at least 3");
    if (!(band_width > 0.0) || !(band_width < 2.0 * params.omega0))
        throw InvalidParam("band width must lie in (0, 2 omega0)");
    const double dw = band_width / static_cast<double>(n_modes - 1);
    const double lambda = std::sqrt(params.gamma0 * dw / (2.0 * std::numbers::pi));
    BathSpec bath;
    bath.beta = params.beta;
    bath.modes.resize(n_modes);
    const auto half = static_cast<long>(n_modes / 2);
    for (std::size_t k = 0; k < n_modes; ++k) {
        // centre mode exactly at omega0
        bath.modes[k].omega = params.omega0 + static_cast<double>(static_cast<long>(k) - half) * dw;
        bath.modes[k].lambda = lambda;
    }
    bath.validate();
    return bath;
}

double truncated_weight(const BathSpec& bath, unsigned cutoff) {
    // coefficients of z^n, n <= cutoff, in prod_k (1 - x_k) / (1 - x_k z)
    std::vector<double> c(cutoff + 1, 0.0);
    c[0] = 1.0;
    for (std::size_t k = 0; k < bath.size(); ++k) {
        const double x = bath.boltzmann(k);
        for (unsigned n = 1; n <= cutoff; ++n) c[n] += x * c[n - 1];  // in place: sum_j x^j c[n-j]
        for (auto& v : c) v *= 1.0 - x;
    }
    double s = 0.0;
    for (double v : c) s += v;
    return s;
}

namespace {

void enumerate(const BathSpec& bath, std::size_t mode, unsigned left, double logw, FockConfig& cur,
               const std::vector<double>& logx, double log_norm, double floor, ThermalEnsemble& out,
               double& dropped) {
    if (mode == bath.size()) {
        const double w = std::exp(logw + log_norm);
        if (w >= floor && w > 0.0)
            out.members.push_back({cur, w});
        else
            dropped += w;
        return;
    }
    for (unsigned n = 0; n <= left; ++n) {
        if (n > 0 && std::isinf(logx[mode])) break;
        cur.set(mode, n);
        enumerate(bath, mode + 1, left - n, n == 0 ? logw : logw + n * logx[mode], cur, logx, log_norm, floor, out, dropped);
    }
    cur.set(mode, 0);
}

}  // namespace

ThermalEnsemble enumerate_thermal_configs(const BathSpec& bath, unsigned cutoff, double weight_floor) {
    bath.validate();
    if (!(weight_floor >= 0.0 && weight_floor < 1.0)) throw InvalidParam("weight_floor must lie in [0, 1)");
    const double kept = truncated_weight(bath, cutoff);
    if (1.0 - kept > 0.05) {
        std::ostringstream os;
        os << "thermal truncation at M_max = " << cutoff << " loses " << 1.0 - kept
           << " of the partition function (limit 0.05); raise the cutoff or lower the temperature";
        throw TruncationTooLossy(os.str());
    }
    std::vector<double> logx(bath.size());
    double log_norm = 0.0;
    for (std::size_t k = 0; k < bath.size(); ++k) {
        const double x = bath.boltzmann(k);
        logx[k] = x > 0.0 ? std::log(x) : -kInf;
        log_norm += std::log1p(-x);
    }
    ThermalEnsemble ens;
    FockConfig cur;
    double dropped = 0.0;
    enumerate(bath, 0, cutoff, 0.0, cur, logx, log_norm, weight_floor, ens, dropped);
    std::stable_sort(ens.members.begin(), ens.members.end(), [](const auto& a, const auto& b) {
        const unsigned ta = a.config.total(), tb = b.config.total();
        return ta != tb ? ta < tb : a.config < b.config;
    });
    double s = 0.0;
    for (const auto& m : ens.members) s += m.weight;
    ens.truncation_loss = 1.0 - s;
    if (ens.truncation_loss > 0.05) {
        std::ostringstream os;
        os << "thermal truncation loses " << ens.truncation_loss << " after the weight floor (limit 0.05)";
        throw TruncationTooLossy(os.str());
    }
    return ens;
}

ClusterEnsemble linked_cluster_ensemble(const BathSpec& bath, unsigned max_occupation) {
    bath.validate();
    if (max_occupation < 1) throw InvalidParam("cluster occupation must be at least 1");
    ClusterEnsemble ens;
    ens.max_occupation = max_occupation;
    ens.members.push_back({FockConfig{}, 1.0});
    for (std::size_t k = 0; k < bath.size(); ++k) {
        const double x = bath.boltzmann(k);
        if (x == 0.0) continue;
        const double nbar = x / (1.0 - x);
        double mean_so_far = 0.0;
        for (unsigned j = 1; j <= max_occupation; ++j) {
            double w = (1.0 - x) * std::pow(x, j);
            if (j == max_occupation) w = (nbar - mean_so_far) / j;
            mean_so_far += j * w;
            FockConfig c;
            c.set(k, j);
            ens.members.push_back({c, w});
            ens.members.front().weight -= w;
        }
    }
    return ens;
}

std::string to_string(EnsembleChoice e) {
    switch (e) {
        case EnsembleChoice::Auto: return "auto";
        case EnsembleChoice::Truncated: return "truncated";
        case EnsembleChoice::Cluster: return "cluster";
    }
    return "auto";
}

EnsembleChoice ensemble_choice_from_string(const std::string& s) {
    if (s == "auto") return EnsembleChoice::Auto;
    if (s == "truncated") return EnsembleChoice::Truncated;
    if (s == "cluster") return EnsembleChoice::Cluster;
    throw InvalidParam("unknown oracle ensemble '" + s + "' (auto|truncated|cluster)");
}

std::vector<WeightedConfig> thermal_members(const BathSpec& bath, unsigned cutoff, EnsembleChoice choice,
                                            std::string* note) {
    auto say = [&](const std::string& s) {
        if (note) *note = s;
    };
    if (choice == EnsembleChoice::Auto)
        choice = 1.0 - truncated_weight(bath, cutoff) <= 0.05 ? EnsembleChoice::Truncated : EnsembleChoice::Cluster;
    if (choice == EnsembleChoice::Truncated) {
        auto ens = enumerate_thermal_configs(bath, cutoff);
        std::ostringstream os;
        os << "truncated thermal ensemble, M_max " << cutoff << ", " << ens.members.size() << " configs, loss "
           << ens.truncation_loss;
        say(os.str());
        return std::move(ens.members);
    }
    auto ens = linked_cluster_ensemble(bath, 1);
    std::ostringstream os;
    os << "linked-cluster ensemble (vacuum + single photons), " << ens.members.size() << " members; truncation at M_max "
       << cutoff << " would keep " << truncated_weight(bath, cutoff) << " of Z";
    say(os.str());
    return std::move(ens.members);
}

}  // namespace nmq
