#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "spincool/constants.hpp"
#include "spincool/errors.hpp"
#include "spincool/model.hpp"

using namespace spincool;

namespace {

// the pulsed-ESR working point
PhysicalParams esr_params(std::int64_t n_spins = 100'000'000'000) {
    return params_from_linear(10e9, 10e9, 100e6, 1.0, 1e6, 0.0, n_spins);
}

} // namespace

TEST_CASE("thermal occupation: limits and oracle point") {
    const double omega = constants::two_pi * 10e9;
    CHECK(thermal_occupation(omega, 0.0) == 0.0);

    // hbar*omega/kB*T = ln 2  =>  nbar = 1
    const double t_ln2 = constants::hbar * omega / (constants::boltzmann * std::log(2.0));
    CHECK(thermal_occupation(omega, t_ln2) == doctest::Approx(1.0).epsilon(1e-12));

    // direct evaluation with CODATA constants (independent oracle value)
    CHECK(thermal_occupation(omega, 0.5) ==
          doctest::Approx(0.6206164582293086).epsilon(1e-12));

    CHECK_THROWS_AS(thermal_occupation(omega, -0.1), ValidationError);
    CHECK_THROWS_AS(thermal_occupation(0.0, 1.0), ValidationError);
}

TEST_CASE("cavity temperature: exact inverse of the occupation") {
    const double omega = constants::two_pi * 10e9;
    CHECK(cavity_temperature(omega, 1.0) ==
          doctest::Approx(constants::hbar * omega /
                          (constants::boltzmann * std::log(2.0)))
              .epsilon(1e-14));
    CHECK(cavity_temperature(omega, 0.6206164582293086) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(cavity_temperature(omega, 0.0), ValidationError);

    for (double nbar : {0.1, 1.0, 10.0})
        CHECK(thermal_occupation(omega, cavity_temperature(omega, nbar)) ==
              doctest::Approx(nbar).epsilon(1e-12));
}

TEST_CASE("round-trip nbar <-> temperature across twelve decades") {
    const double omega = constants::two_pi * 9.5e9;
    for (double exp10 = -6.0; exp10 <= 6.0; exp10 += 0.5) {
        const double nbar = std::pow(10.0, exp10);
        const double back = thermal_occupation(omega, cavity_temperature(omega, nbar));
        CHECK(back == doctest::Approx(nbar).epsilon(1e-12));
    }
}

TEST_CASE("derived rates: matched sideband") {
    PhysicalParams p = esr_params();
    const DerivedRates r = derived_rates(p);
    // cavity on resonance here, so delta_minus = -rabi; the matched case
    // needs omega_c - omega_s = rabi
    CHECK(r.detuning == 0.0);
    CHECK(r.delta_minus == -p.rabi);

    PhysicalParams matched = params_from_linear(10.1e9, 10e9, 100e6, 1.0, 1e6, 0.0, 1000);
    const DerivedRates m = derived_rates(matched);
    CHECK(m.delta_minus == doctest::Approx(0.0));
    // Gamma_s = g^2/kappa at Delta = 0; with g/2pi = 1 Hz, kappa/2pi = 1 MHz
    // this is 2pi * 1e-6 per second
    CHECK(m.gamma_s == doctest::Approx(constants::two_pi * 1e-6).epsilon(1e-12));
    CHECK(m.gamma_s == m.gamma_minus);
    CHECK(m.omega_s_eff == doctest::Approx(-m.omega_minus));

    // dominance ratios at the matched point, Omega_R >> kappa
    const double k2 = matched.kappa * matched.kappa;
    const double expected_plus = k2 / (k2 + 16.0 * matched.rabi * matched.rabi);
    CHECK(m.gamma_plus / m.gamma_minus ==
          doctest::Approx(expected_plus).epsilon(1e-9));
    CHECK(m.gamma_plus / m.gamma_minus < 1e-3);
    CHECK(m.gamma_0 / m.gamma_minus < 1e-3);
}

TEST_CASE("derived rates: large-detuning falloff") {
    PhysicalParams p = params_from_linear(11e9, 10e9, 1e6, 1.0, 1e6, 0.0, 1000);
    const DerivedRates r = derived_rates(p); // delta_minus ~ 1 GHz scale
    const DerivedRates matched =
        derived_rates(params_from_linear(10.001e9, 10e9, 1e6, 1.0, 1e6, 0.0, 1000));
    CHECK(r.gamma_s < 1e-5 * matched.gamma_s);
}

TEST_CASE("gamma_s is even in the sideband detuning and maximal at zero") {
    const double detuning_hz = 50e6;
    double best = -1.0, best_delta = 1.0;
    for (int i = -20; i <= 20; ++i) {
        const double delta_hz = 2e6 * i;
        const DerivedRates r = derived_rates(params_from_linear(
            10e9 + detuning_hz, 10e9, detuning_hz - delta_hz, 1.0, 1e6, 0.0, 1000));
        const DerivedRates rm = derived_rates(params_from_linear(
            10e9 + detuning_hz, 10e9, detuning_hz + delta_hz, 1.0, 1e6, 0.0, 1000));
        CHECK(r.gamma_s == doctest::Approx(rm.gamma_s).epsilon(1e-12));       // even
        CHECK(r.omega_s_eff == doctest::Approx(-rm.omega_s_eff).epsilon(1e-12)); // odd
        if (r.gamma_s > best) {
            best = r.gamma_s;
            best_delta = delta_hz;
        }
    }
    CHECK(best_delta == 0.0);
}

TEST_CASE("cooling sideband dominates whenever the drive beats the linewidth") {
    std::mt19937 rng(31415);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        // Delta = 0 (rabi matches the cavity detuning), Omega_R > kappa
        const double kappa_hz = 1e5 * std::pow(10.0, 2.0 * u(rng));
        const double rabi_hz = kappa_hz * (1.0 + 99.0 * u(rng));
        PhysicalParams p = params_from_linear(10e9 + rabi_hz, 10e9, rabi_hz, 1.0,
                                              kappa_hz, 0.0, 1000);
        const DerivedRates r = derived_rates(p);
        CHECK(r.gamma_plus / r.gamma_minus < 1.0);
        CHECK(r.gamma_0 / r.gamma_minus < 1.0);
    }
}

TEST_CASE("regime report: the ESR working point") {
    const RegimeReport rep = check_regime(esr_params());
    CHECK(rep.rwa1_ok);
    CHECK(rep.rwa2_ok);
    CHECK(rep.rwa1_vs_kappa.ratio == doctest::Approx(1e4));
    CHECK(rep.rwa1_vs_rabi.ratio == doctest::Approx(100.0));
    CHECK(rep.rwa1_vs_g.ratio == doctest::Approx(1e10));
    CHECK(rep.rwa2.ratio == doctest::Approx(100.0));

    // ensemble-size form: N_s = 1e11 sits exactly at the factor-10 boundary
    // of N_s << kappa^2/g^2 = 1e12
    CHECK(rep.n_spins_bound == doctest::Approx(1e12).epsilon(1e-9));
    CHECK(rep.size.margin == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.size_ok);
    CHECK(rep.all_ok());

    // the strict per-kappa form is sqrt(10) tighter and does not hold here
    CHECK(rep.markov.margin == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-9));
    CHECK_FALSE(rep.markov_ok);
}

TEST_CASE("regime report: too many spins breaks the Markov bound") {
    const RegimeReport rep = check_regime(esr_params(10'000'000'000'000));
    CHECK_FALSE(rep.size_ok);
    CHECK_FALSE(rep.markov_ok);
    CHECK_FALSE(rep.all_ok());
}

TEST_CASE("regime report: exact factor-10 boundary") {
    // kappa = 10 g sqrt(N_s): margin exactly 1, check passes
    const std::int64_t n = 10'000;
    PhysicalParams p = params_from_linear(10e9, 10e9, 100e6, 1.0,
                                          10.0 * std::sqrt(double(n)), 0.0, n);
    const RegimeReport rep = check_regime(p);
    CHECK(rep.markov.margin == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.markov_ok);
}

TEST_CASE("regime checks: ok iff margin >= 1 (randomized)") {
    std::mt19937 rng(20260810);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        PhysicalParams p = params_from_linear(
            10e9 * std::pow(10.0, u(rng)), 10e9, 100e6 * std::pow(10.0, u(rng)),
            std::pow(10.0, u(rng)), 1e6 * std::pow(10.0, 2.0 * u(rng)), 0.0,
            1 + std::int64_t(1e6 * std::pow(10.0, 5.0 * u(rng))));
        const RegimeReport rep = check_regime(p);
        for (const RegimeCheck* c :
             {&rep.rwa1_vs_kappa, &rep.rwa1_vs_rabi, &rep.rwa1_vs_g, &rep.rwa2,
              &rep.markov, &rep.size})
            CHECK(c->ok == (c->margin >= 1.0 - 8.0e-16));
        CHECK(rep.rwa1_ok == (rep.rwa1_vs_kappa.ok && rep.rwa1_vs_rabi.ok &&
                              rep.rwa1_vs_g.ok));
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(params_from_linear(0.0, 10e9, 1e6, 1.0, 1e6, 0.0, 10),
                    ValidationError);
    CHECK_THROWS_AS(params_from_linear(10e9, 10e9, 1e6, 1.0, 1e6, -0.5, 10),
                    ValidationError);
    CHECK_THROWS_AS(params_from_linear(10e9, 10e9, 1e6, 1.0, 1e6, 0.0, 0),
                    ValidationError);
    // j above N_s/2
    CHECK_THROWS_AS(params_from_linear(10e9, 10e9, 1e6, 1.0, 1e6, 0.0, 10, 6.0),
                    ValidationError);
    // non-half-integer j
    CHECK_THROWS_AS(params_from_linear(10e9, 10e9, 1e6, 1.0, 1e6, 0.0, 10, 1.2),
                    ValidationError);
    // any J <= N_s/2 is accepted, not just the Dicke value
    CHECK_NOTHROW(params_from_linear(10e9, 10e9, 1e6, 1.0, 1e6, 0.0, 10, 2.5));
}
