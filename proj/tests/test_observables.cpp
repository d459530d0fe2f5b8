#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nmq/observables.hpp"

using namespace nmq;

namespace {
const ModelParams ref = ModelParams::from_x(1.0, 0.01, 0.05);
}

TEST_CASE("differentiate is exact on quadratics, non-uniform grid") {
    const std::vector<double> t{0.0, 0.1, 0.35, 0.4, 1.0};
    std::vector<double> f;
    for (double v : t) f.push_back(3 * v * v - 2 * v + 1);
    const auto d = differentiate(t, f);
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(d[i] == doctest::Approx(6 * t[i] - 2).epsilon(1e-12));
}

TEST_CASE("closed-form rates at t = 0 and their ratio") {
    CHECK(nonmarkov_decoherence_rate(ref, 0.0) / (0.5 * ref.gamma0) == doctest::Approx(21.0 / 19.0).epsilon(1e-14));
    CHECK(nonmarkov_relaxation_rate(ref, 0.0) == doctest::Approx(ref.gamma0 / (0.95 * 0.95)).epsilon(1e-14));
    CHECK(nonmarkov_decoherence_rate(ref, 0.0) / nonmarkov_relaxation_rate(ref, 0.0) == doctest::Approx(0.49875).epsilon(1e-14));
    CHECK(markov_decoherence_rate(ref) == doctest::Approx(0.5 * ref.gamma0 * 21.0 / 19.0));
    CHECK(markov_relaxation_rate(ref) == doctest::Approx(ref.gamma0 * 21.0 / 19.0));
}

TEST_CASE("relaxation closed form matches the log-derivative of rho11 - x") {
    const double x = ref.x();
    for (double gt : {0.2, 1.0, 3.0}) {
        const double h = 1e-4;
        auto g = [&](double s) {
            const double E = std::exp(-s), D = 1 - x * E;
            return std::log((1 - x) * E * (1 - 2 * x + x * x * E) / (D * D));
        };
        const double num = -(g(gt + h) - g(gt - h)) / (2 * h) * ref.gamma0;
        CHECK(nonmarkov_relaxation_rate(ref, gt / ref.gamma0) == doctest::Approx(num).epsilon(1e-7));
    }
}

TEST_CASE("finite-difference rates track the closed forms at second order") {
    auto err = [&](double h) {
        const auto g = TimeGrid::uniform_gamma_t(4.0, h, ref.gamma0);
        const auto dec = decoherence_rate(evolve_nonmarkov(ref, QubitDensityMatrix::sigmax_plus(), g));
        double e = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            e = std::max(e, std::abs(*dec.values[i] - nonmarkov_decoherence_rate(ref, g[i])));
        return e / ref.gamma0;
    };
    const double e1 = err(0.04), e2 = err(0.02), e3 = err(0.01);
    CHECK(e1 < 1e-4);
    CHECK(std::log2(e1 / e2) > 1.8);
    CHECK(std::log2(e2 / e3) > 1.8);
}

TEST_CASE("degenerate rate points are absent") {
    const auto g = TimeGrid::uniform_gamma_t(1.0, 0.1, ref.gamma0);
    // no coherence from |1>
    const auto dec = decoherence_rate(evolve_nonmarkov(ref, QubitDensityMatrix::excited(), g));
    for (const auto& v : dec.values) CHECK_FALSE(v.has_value());
    // zero temperature ground state sits on its asymptote
    const auto cold = ModelParams::from_x(1.0, 0.01, 0.0);
    const auto rel = relaxation_rate(evolve_zero_temperature(cold, QubitDensityMatrix::ground(), g),
                                     asymptotic_state(cold, MethodLabel::ZeroT));
    for (const auto& v : rel.values) CHECK_FALSE(v.has_value());
}

TEST_CASE("relaxation rate rejects a foreign asymptote for analytic traces") {
    const auto g = TimeGrid::uniform_gamma_t(1.0, 0.1, ref.gamma0);
    const auto tr = evolve_nonmarkov(ref, QubitDensityMatrix::excited(), g);
    CHECK_THROWS_AS(relaxation_rate(tr, asymptotic_state(ref, MethodLabel::Markov)), InvalidParam);
    CHECK_NOTHROW(relaxation_rate(tr, asymptotic_state(ref, MethodLabel::NonMarkovLowT)));
}

TEST_CASE("rate ratio needs matching grids") {
    const auto a = nonmarkov_decoherence_series(ref, TimeGrid::uniform_gamma_t(1.0, 0.1, ref.gamma0));
    const auto b = nonmarkov_relaxation_series(ref, TimeGrid::uniform_gamma_t(1.0, 0.2, ref.gamma0));
    CHECK_THROWS_AS(rate_ratio(a, b), GridMismatch);
    const auto r = rate_ratio(a, nonmarkov_relaxation_series(ref, a.grid));
    CHECK(*r.values[0] == doctest::Approx(0.49875));
}

TEST_CASE("fidelity reference value and free-evolution identity") {
    const auto rho0 = QubitDensityMatrix::sigmax_plus();
    const auto g = TimeGrid::from_gamma_t({0.0, 1.0}, ref.gamma0);
    const auto f = fidelity_vs_free(evolve_nonmarkov(ref, rho0, g), rho0);
    CHECK(f[0] == doctest::Approx(1.0));
    CHECK(f[1] == doctest::Approx(0.793500707170364).epsilon(1e-13));
}

TEST_CASE("entropy reference values") {
    CHECK(binary_entropy(0.05) == doctest::Approx(0.198515243345873).epsilon(1e-13));
    CHECK(binary_entropy(0.05 / 1.05) == doctest::Approx(0.191444081957717).epsilon(1e-13));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(von_neumann_entropy(QubitDensityMatrix::sigmax_plus()) == doctest::Approx(0.0));
    CHECK(von_neumann_entropy(QubitDensityMatrix::maximally_mixed()) == doctest::Approx(std::numbers::ln2));
}

TEST_CASE("entropy difference changes sign once") {
    const auto g = TimeGrid::uniform_gamma_t(10.0, 0.01, ref.gamma0);
    const auto nm = evolve_nonmarkov(ref, QubitDensityMatrix::excited(), g);
    const auto mk = evolve_markov(ref, QubitDensityMatrix::excited(), g);
    int flips = 0;
    double prev = 0.0;
    for (std::size_t i = 1; i < g.size(); ++i) {
        const double d = von_neumann_entropy(nm.states[i]) - von_neumann_entropy(mk.states[i]);
        if (i == 1) CHECK(d < 0.0);
        if (prev != 0.0 && (d > 0) != (prev > 0)) ++flips;
        prev = d;
    }
    CHECK(flips == 1);
    CHECK(prev > 0.0);
}
