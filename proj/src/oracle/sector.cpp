#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "nmq/oracle.hpp"

namespace nmq {

namespace {

unsigned bath_total(const SectorState& s) {
    unsigned n = 0;
    for (auto m : s.occ) n += m;
    return n;
}

std::string describe(const SectorState& s) {
    std::ostringstream os;
    os << "|" << s.qubit << ",{";
    bool first = true;
    for (std::size_t k = 0; k < s.occ.size(); ++k)
        if (s.occ[k]) {
            os << (first ? "" : ",") << k << ':' << int(s.occ[k]);
            first = false;
        }
    os << "}>";
    return os.str();
}

}  // namespace

SectorState sector_state(const BathSpec& bath, unsigned qubit, const FockConfig& config) {
    if (qubit > 1) throw InvalidParam("qubit level must be 0 or 1");
    SectorState s;
    s.qubit = qubit;
    s.occ.assign(bath.size(), 0);
    for (auto [k, n] : config.occupations()) {
        if (k >= bath.size()) throw InvalidParam("Fock configuration refers to mode " + std::to_string(k) +
                                                 " outside the bath");
        if (n > 255) throw InvalidParam("per-mode occupation above 255 is not supported");
        s.occ[k] = static_cast<std::uint8_t>(n);
    }
    return s;
}

std::string SectorBasis::key(const SectorState& s) {
    std::string k(s.occ.size() + 1, '\0');
    k[0] = static_cast<char>(s.qubit);
    for (std::size_t i = 0; i < s.occ.size(); ++i) k[i + 1] = static_cast<char>(s.occ[i]);
    return k;
}

SectorBasis::SectorBasis(const BathSpec& bath, double omega0, const std::vector<SectorState>& seeds,
                         std::size_t max_dim)
    : omega0_(omega0) {
    if (seeds.empty()) throw InvalidParam("sector needs at least one seed");
    excitation_ = seeds.front().qubit + bath_total(seeds.front());
    const std::size_t K = bath.size();

    // breadth-first closure under the coupling terms
    std::unordered_map<std::string, std::size_t> seen;
    std::vector<SectorState> found;
    std::deque<std::size_t> queue;
    auto visit = [&](const SectorState& s) {
        auto [it, inserted] = seen.emplace(key(s), found.size());
        if (!inserted) return;
        found.push_back(s);
        queue.push_back(found.size() - 1);
        if (found.size() > max_dim) {
            std::ostringstream os;
            os << "sector N=" << excitation_ << " seeded by " << describe(seeds.front())
               << " exceeds the dimension budget " << max_dim;
            throw SectorTooLarge(os.str());
        }
    };
    for (const auto& s : seeds) {
        if (s.occ.size() != K) throw InvalidParam("seed does not match the bath size");
        if (s.qubit + bath_total(s) != excitation_) throw InvalidParam("sector seeds have different excitation");
        visit(s);
    }
    while (!queue.empty()) {
        const SectorState cur = found[queue.front()];
        queue.pop_front();
        for (std::size_t k = 0; k < K; ++k) {
            if (bath.modes[k].lambda == 0.0) continue;
            SectorState nb = cur;
            if (cur.qubit == 1) {
                if (cur.occ[k] == 255) throw InvalidParam("per-mode occupation above 255 is not supported");
                nb.qubit = 0;
                ++nb.occ[k];
            } else {
                if (cur.occ[k] == 0) continue;
                nb.qubit = 1;
                --nb.occ[k];
            }
            visit(nb);
        }
    }

    std::sort(found.begin(), found.end(), [](const SectorState& a, const SectorState& b) {
        const unsigned ta = bath_total(a), tb = bath_total(b);
        if (ta != tb) return ta < tb;
        if (a.occ != b.occ) return a.occ < b.occ;
        return a.qubit < b.qubit;
    });
    states_ = std::move(found);
    for (std::size_t i = 0; i < states_.size(); ++i) {
        index_.emplace(key(states_[i]), i);
        (states_[i].qubit ? excited_ : ground_).push_back(i);
    }

    // rotating frame: omega0 * N is removed from every diagonal element
    std::vector<Eigen::Triplet<double>> trip;
    const double shift = omega0 * excitation_;
    for (std::size_t i = 0; i < states_.size(); ++i) {
        const auto& s = states_[i];
        double e = omega0 * s.qubit - shift;
        for (std::size_t k = 0; k < K; ++k) e += s.occ[k] * bath.modes[k].omega;
        trip.emplace_back(i, i, e);
        if (s.qubit != 1) continue;
        for (std::size_t k = 0; k < K; ++k) {
            const double lam = bath.modes[k].lambda;
            if (lam == 0.0) continue;
            SectorState nb = s;
            nb.qubit = 0;
            ++nb.occ[k];
            const std::size_t j = index_.at(key(nb));
            const double v = lam * std::sqrt(static_cast<double>(nb.occ[k]));
            trip.emplace_back(i, j, v);
            trip.emplace_back(j, i, v);
        }
    }
    h_.resize(states_.size(), states_.size());
    h_.setFromTriplets(trip.begin(), trip.end());
    h_.makeCompressed();
}

std::optional<std::size_t> SectorBasis::find(const SectorState& s) const {
    auto it = index_.find(key(s));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

}  // namespace nmq
