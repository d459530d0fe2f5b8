#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "nmq/functional.hpp"

namespace nmq {

namespace {

const cplx I{0.0, 1.0};

void combos(std::size_t K, unsigned n, std::size_t start, FockConfig& cur, std::vector<FockConfig>& out) {
    if (n == 0) {
        out.push_back(cur);
        return;
    }
    for (std::size_t k = start; k < K; ++k) {
        cur.set(k, cur[k] + 1);
        combos(K, n - 1, k, cur, out);
        cur.set(k, cur[k] - 1);
    }
}

}  // namespace

FunctionalLayout::FunctionalLayout(const BathSpec& bath, double omega0, unsigned cutoff) : K_(bath.size()), M_(cutoff) {
    bath.validate();
    if (!(omega0 > 0.0)) throw InvalidParam("omega0 must be positive");
    for (unsigned n = 0; n <= M_; ++n) {
        std::vector<FockConfig> lvl;
        FockConfig cur;
        combos(K_, n, 0, cur, lvl);
        std::sort(lvl.begin(), lvl.end());
        for (auto& c : lvl) {
            configs_.push_back(std::move(c));
            level_.push_back(n);
        }
    }
    for (unsigned lv : level_) n_g_ += lv + 1 <= M_ ? 1 : 0;
    std::map<FockConfig, std::size_t> index;
    for (std::size_t i = 0; i < configs_.size(); ++i) index.emplace(configs_[i], i);

    const std::size_t nF = configs_.size();
    off_psi_f_ = nF;
    off_phi_f_ = 2 * nF;
    off_g_ = off_phi_f_ + nF * K_;
    off_psi_g_ = off_g_ + n_g_ * K_;
    off_phi_g_ = off_psi_g_ + n_g_ * K_;

    det_.resize(K_);
    lam_.resize(K_);
    for (std::size_t k = 0; k < K_; ++k) {
        det_[k] = bath.modes[k].omega - omega0;
        lam_[k] = bath.modes[k].lambda;
    }
    eps_.resize(nF);
    down_.resize(nF);
    for (std::size_t c = 0; c < nF; ++c) {
        eps_[c] = configs_[c].energy(bath) - level_[c] * omega0;
        for (auto [l, m] : configs_[c].occupations()) down_[c].push_back({l, m, index.at(configs_[c].shifted(l, -1))});
    }
    up_.resize(n_g_ * K_);
    for (std::size_t c = 0; c < n_g_; ++c)
        for (std::size_t p = 0; p < K_; ++p) up_[c * K_ + p] = index.at(configs_[c].shifted(p, +1));
}

std::optional<std::size_t> FunctionalLayout::find(const FockConfig& c) const {
    auto it = std::lower_bound(configs_.begin(), configs_.end(), c, [&](const FockConfig& a, const FockConfig& b) {
        const unsigned ta = a.total(), tb = b.total();
        return ta != tb ? ta < tb : a < b;
    });
    if (it == configs_.end() || !(*it == c)) return std::nullopt;
    return static_cast<std::size_t>(it - configs_.begin());
}

// Rotating frame: every functional carries exp(-i N omega0 t) removed, N its excitation number.
void FunctionalLayout::rhs(const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) const {
    dy.resize(y.size());
    const std::size_t nF = n_f(), K = K_;

    // sums over the last index that several equations share
    std::vector<cplx> sum_g(n_g_), sum_psi_g(n_g_);
    std::vector<cplx> sum_phi_g(n_g_ * K);  // sum_l Phi^g_{p l}[c], indexed (c, p)
    for (std::size_t c = 0; c < n_g_; ++c) {
        cplx sg = 0.0, sp = 0.0;
        for (std::size_t p = 0; p < K; ++p) {
            sg += y[G(c, p)];
            sp += y[psi_g(c, p)];
            cplx s = 0.0;
            for (std::size_t l = 0; l < K; ++l) s += y[phi_g(c, p, l)];
            sum_phi_g[c * K + p] = s;
        }
        sum_g[c] = sg;
        sum_psi_g[c] = sp;
    }

    for (std::size_t c = 0; c < nF; ++c) {
        const double e = eps_[c];
        cplx dF = -I * e * y[F(c)];
        cplx dPsi = -I * e * y[psi_f(c)];
        for (std::size_t p = 0; p < K; ++p) dPsi += I * lam_[p] * y[phi_f(c, p)];
        for (const auto& d : down_[c]) {
            const double ml = d.count * lam_[d.mode];
            dF += I * ml * sum_g[d.idx];
            dPsi += I * ml * sum_psi_g[d.idx];
        }
        dy[F(c)] = dF;
        dy[psi_f(c)] = dPsi;
        for (std::size_t p = 0; p < K; ++p) {
            cplx v = -I * (det_[p] + e) * y[phi_f(c, p)] + I * lam_[p] * y[psi_f(c)];
            for (const auto& d : down_[c]) v += I * (d.count * lam_[d.mode]) * sum_phi_g[d.idx * K + p];
            dy[phi_f(c, p)] = v;
        }
    }
    for (std::size_t c = 0; c < n_g_; ++c) {
        const double e = eps_[c];
        for (std::size_t p = 0; p < K; ++p) {
            const std::size_t u = up(c, p);
            dy[G(c, p)] = -I * e * y[G(c, p)] + I * lam_[p] * y[F(u)];
            cplx s = 0.0;
            for (std::size_t l = 0; l < K; ++l) s += lam_[l] * y[phi_g(c, l, p)];
            dy[psi_g(c, p)] = -I * e * y[psi_g(c, p)] - I * s + I * lam_[p] * y[psi_f(u)];
            for (std::size_t l = 0; l < K; ++l)
                dy[phi_g(c, l, p)] = -I * (det_[l] + e) * y[phi_g(c, l, p)] - I * lam_[l] * y[psi_g(c, p)] +
                                     I * lam_[p] * y[phi_f(u, l)];
        }
    }
}

namespace {

cplx frame(const FunctionalState& s, unsigned n) { return std::exp(-I * (s.omega0 * n * s.t)); }

}  // namespace

cplx FunctionalState::F(std::size_t c) const { return y[layout->F(c)] * frame(*this, layout->level(c)); }
cplx FunctionalState::G(std::size_t c, std::size_t p) const {
    return y[layout->G(c, p)] * frame(*this, layout->level(c) + 1);
}
cplx FunctionalState::psi_f(std::size_t c) const { return y[layout->psi_f(c)] * frame(*this, layout->level(c) + 1); }
cplx FunctionalState::psi_g(std::size_t c, std::size_t p) const {
    return y[layout->psi_g(c, p)] * frame(*this, layout->level(c) + 2);
}
cplx FunctionalState::phi_f(std::size_t c, std::size_t p) const {
    return y[layout->phi_f(c, p)] * frame(*this, layout->level(c) + 1);
}
cplx FunctionalState::phi_g(std::size_t c, std::size_t l, std::size_t p) const {
    return y[layout->phi_g(c, l, p)] * frame(*this, layout->level(c) + 2);
}

std::vector<FunctionalState> integrate_functionals(const BathSpec& bath, double omega0, const TimeGrid& grid,
                                                   unsigned cutoff, const FunctionalOptions& opt) {
    const double wmax = std::max(bath.omega_max(), omega0);
    const double h = opt.step > 0.0 ? opt.step : 0.1 / wmax;
    if (h * wmax > 0.5) {
        std::ostringstream os;
        os << "RK4 step " << h << " times omega_max " << wmax << " exceeds 0.5";
        throw StepTooCoarse(os.str());
    }
    auto layout = std::make_shared<const FunctionalLayout>(bath, omega0, cutoff);
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout->size()));
    for (std::size_t c = 0; c < layout->n_f(); ++c) {
        y[layout->F(c)] = 1.0;
        y[layout->psi_f(c)] = 1.0;
    }
    Eigen::VectorXcd k1, k2, k3, k4, tmp;
    auto advance = [&](double span) {
        if (span <= 0.0) return;
        const auto n = static_cast<std::size_t>(std::ceil(span / h - 1e-12));
        const double dt = span / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            layout->rhs(y, k1);
            tmp = y + 0.5 * dt * k1;
            layout->rhs(tmp, k2);
            tmp = y + 0.5 * dt * k2;
            layout->rhs(tmp, k3);
            tmp = y + dt * k3;
            layout->rhs(tmp, k4);
            y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
    };
    std::vector<FunctionalState> out;
    out.reserve(grid.size());
    double t = 0.0;
    for (double target : grid.times()) {
        advance(target - t);
        t = target;
        if (!y.allFinite()) throw Error("functional integration produced non-finite values");
        out.push_back({layout, t, omega0, y});
    }
    return out;
}

}  // namespace nmq
