#include <doctest.h>

#include <cmath>

#include "nmq/core.hpp"

using namespace nmq;

TEST_CASE("named states") {
    CHECK(QubitDensityMatrix::excited().rho11() == 1.0);
    CHECK(QubitDensityMatrix::ground().rho00() == 1.0);
    const auto sx = QubitDensityMatrix::sigmax_plus();
    CHECK(sx.rho11() == doctest::Approx(0.5));
    CHECK(sx.rho10().real() == doctest::Approx(0.5));
    CHECK(sx.rho01() == std::conj(sx.rho10()));
    CHECK(QubitDensityMatrix::maximally_mixed().trace() == doctest::Approx(1.0));
}

TEST_CASE("validate rejects non-states") {
    CHECK_THROWS_AS(validate_density_matrix(RawQubitMatrix{0.5, 0.0, 0.0, 0.6}), NotAState);        // trace
    CHECK_THROWS_AS(validate_density_matrix(RawQubitMatrix{1.1, 0.0, 0.0, -0.1}), NotAState);       // negative
    CHECK_THROWS_AS(validate_density_matrix(RawQubitMatrix{0.5, 0.6, 0.6, 0.5}), NotAState);        // not PSD
    CHECK_THROWS_AS(validate_density_matrix(RawQubitMatrix{0.5, 0.1, cplx(0.1, 0.2), 0.5}), NotAState);  // hermiticity
    CHECK_THROWS_AS(validate_density_matrix(RawQubitMatrix{cplx(0.5, 0.1), 0.0, 0.0, 0.5}), NotAState);
    CHECK_THROWS_AS(validate_density_matrix(RawQubitMatrix{NAN, 0.0, 0.0, 1.0}), NotAState);
}

TEST_CASE("validate renormalizes tiny trace drift") {
    const auto r = validate_density_matrix(RawQubitMatrix{0.5 + 4e-9, 0.1, 0.1, 0.5});
    CHECK(r.trace() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("x from beta") {
    CHECK(derive_x(1.0, 1.0) == doctest::Approx(0.367879441171442).epsilon(1e-14));
    CHECK(derive_x(1.0, kInf) == 0.0);
    CHECK(derive_x(2.0, 0.5) == doctest::Approx(std::exp(-1.0)));
    CHECK_THROWS_AS(derive_x(1.0, 0.0), InvalidParam);
    CHECK_THROWS_AS(derive_x(-1.0, 1.0), InvalidParam);
}

TEST_CASE("model params") {
    const auto p = ModelParams::from_x(1.0, 0.01, 0.05);
    CHECK(p.x() == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(p.coth_half() == doctest::Approx(21.0 / 19.0).epsilon(1e-14));
    CHECK(p.validity_warnings().empty());
    CHECK(ModelParams::from_x(1.0, 0.01, 0.5).validity_warnings().size() == 1);
    CHECK(ModelParams::from_x(1.0, 0.2, 0.0).validity_warnings().size() == 1);
    CHECK(std::isinf(ModelParams::from_x(1.0, 0.01, 0.0).beta));
    CHECK_THROWS_AS(ModelParams::from_x(1.0, 0.01, 1.0), InvalidParam);
    CHECK_THROWS_AS(ModelParams::make(1.0, 0.0, 1.0), InvalidParam);
}

TEST_CASE("fock configs") {
    FockConfig c;
    c.set(3, 2);
    c.set(1, 1);
    CHECK(c.total() == 3);
    CHECK(c[3] == 2);
    CHECK(c[0] == 0);
    const auto d = c.shifted(1, -1);
    CHECK(d.total() == 2);
    CHECK(d.occupations().count(1) == 0);  // zeros are not stored
    CHECK(d.shifted(1, +1) == c);
    BathSpec bath{{{0.5, 0.1}, {1.0, 0.1}, {1.5, 0.1}, {2.0, 0.1}}, 1.0};
    CHECK(c.energy(bath) == doctest::Approx(1.0 + 4.0));
}

TEST_CASE("bath spec") {
    BathSpec bath{{{0.9, 0.01}, {1.0, 0.01}, {1.1, 0.01}}, 2.0};
    CHECK_NOTHROW(bath.validate());
    CHECK(bath.boltzmann(1) == doctest::Approx(std::exp(-2.0)));
    const auto h = bath.hash();
    bath.modes[0].lambda = 0.02;
    CHECK(bath.hash() != h);
    bath.modes[0].omega = 1.2;
    CHECK_THROWS_AS(bath.validate(), InvalidParam);
    BathSpec cold{{{1.0, 0.01}}, kInf};
    CHECK(cold.boltzmann(0) == 0.0);
}

TEST_CASE("time grid") {
    const auto g = TimeGrid::uniform_gamma_t(1.0, 0.25, 0.01);
    REQUIRE(g.size() == 5);
    CHECK(g[4] == doctest::Approx(100.0));
    const auto gt = g.gamma_t(0.01);
    CHECK(gt[2] == doctest::Approx(0.5));
    CHECK(TimeGrid::from_gamma_t({0.0, 0.5}, 0.01)[1] == doctest::Approx(50.0));
    CHECK(TimeGrid::uniform_gamma_t(6.0, 0.05, 0.01).size() == 121);
}

TEST_CASE("trace method names round-trip") {
    for (auto m : {TraceMethod::AnalyticNonMarkov, TraceMethod::AnalyticZeroT, TraceMethod::Markov, TraceMethod::Oracle,
                   TraceMethod::Functional})
        CHECK(trace_method_from_string(to_string(m)) == m);
}

TEST_CASE("qubit map application") {
    QubitMapSample m;
    m.p11_from1 = 0.7;
    m.p00_from1 = 0.3;
    m.p11_from0 = 0.1;
    m.p00_from0 = 0.9;
    m.coherence = cplx(0.0, 0.5);
    const auto r = m.apply(QubitDensityMatrix::sigmax_plus());
    CHECK(r.rho11.real() == doctest::Approx(0.4));
    CHECK(r.rho00.real() == doctest::Approx(0.6));
    CHECK(r.rho10 == cplx(0.0, 0.25));
    CHECK(r.rho01 == std::conj(r.rho10));
}
