#include "spincool/model.hpp"

#include <cmath>
#include <string>

#include "spincool/constants.hpp"
#include "spincool/errors.hpp"

namespace spincool {

namespace {

bool is_half_integer(double x) {
    return std::abs(2.0 * x - std::round(2.0 * x)) < 1e-9;
}

// ratio >= factor passes; margin is normalized so 1 is the boundary. The
// few-ulp slack keeps exact-boundary inputs (kappa = 10 g sqrt(N_s)) from
// flipping on the rounding of the unit conversion.
RegimeCheck make_check(double ratio, double factor) {
    RegimeCheck c;
    c.ratio = ratio;
    c.margin = ratio / factor;
    c.ok = c.margin >= 1.0 - 8.0e-16;
    return c;
}

} // namespace

void PhysicalParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw ValidationError(std::string("PhysicalParams: ") + name +
                                  " must be strictly positive and finite");
    };
    positive(omega_c, "omega_c");
    positive(omega_s, "omega_s");
    positive(rabi, "rabi");
    positive(g, "g");
    positive(kappa, "kappa");
    if (!(nbar >= 0.0) || !std::isfinite(nbar))
        throw ValidationError("PhysicalParams: nbar must be >= 0");
    if (n_spins < 1)
        throw ValidationError("PhysicalParams: n_spins must be a positive integer");
    if (!is_half_integer(j_subspace) || j_subspace < 0.0)
        throw ValidationError("PhysicalParams: j_subspace must be a nonnegative half-integer");
    if (j_subspace > 0.5 * static_cast<double>(n_spins) + 1e-9)
        throw ValidationError("PhysicalParams: j_subspace exceeds N_s/2");
}

PhysicalParams params_from_linear(double omega_c_hz, double omega_s_hz,
                                  double rabi_hz, double g_hz, double kappa_hz,
                                  double nbar, std::int64_t n_spins,
                                  double j_subspace) {
    PhysicalParams p;
    p.omega_c = constants::two_pi * omega_c_hz;
    p.omega_s = constants::two_pi * omega_s_hz;
    p.rabi = constants::two_pi * rabi_hz;
    p.g = constants::two_pi * g_hz;
    p.kappa = constants::two_pi * kappa_hz;
    p.nbar = nbar;
    p.n_spins = n_spins;
    p.j_subspace = j_subspace < 0.0 ? 0.5 * static_cast<double>(n_spins) : j_subspace;
    p.validate();
    return p;
}

double thermal_occupation(double omega_c, double kelvin) {
    if (!(omega_c > 0.0))
        throw ValidationError("thermal_occupation: omega_c must be positive");
    if (kelvin < 0.0)
        throw ValidationError("thermal_occupation: temperature must be >= 0");
    if (kelvin == 0.0) return 0.0;
    const double x = constants::hbar * omega_c / (constants::boltzmann * kelvin);
    return 1.0 / std::expm1(x);
}

double cavity_temperature(double omega_c, double nbar) {
    if (!(omega_c > 0.0))
        throw ValidationError("cavity_temperature: omega_c must be positive");
    if (!(nbar > 0.0))
        throw ValidationError("cavity_temperature: nbar = 0 corresponds to zero "
                              "temperature; no finite inverse exists");
    return constants::hbar * omega_c /
           (constants::boltzmann * std::log1p(1.0 / nbar));
}

DerivedRates derived_rates(const PhysicalParams& params) {
    params.validate();
    const double g2 = params.g * params.g;
    const double k = params.kappa;
    const double k2 = k * k;

    DerivedRates r;
    r.detuning = params.omega_c - params.omega_s;
    r.delta_minus = r.detuning - params.rabi;
    r.delta_plus = r.detuning + params.rabi;

    const double dm2 = r.delta_minus * r.delta_minus;
    const double dp2 = r.delta_plus * r.delta_plus;
    const double d02 = r.detuning * r.detuning;

    r.gamma_minus = g2 * k / (k2 + 4.0 * dm2);
    r.gamma_plus = g2 * k / (k2 + 4.0 * dp2);
    r.gamma_0 = 4.0 * g2 * k / (k2 + 4.0 * d02);
    r.omega_minus = g2 * r.delta_minus / (k2 + 4.0 * dm2);
    r.omega_plus = g2 * r.delta_plus / (k2 + 4.0 * dp2);
    r.omega_0 = 4.0 * g2 * r.detuning / (k2 + 4.0 * d02);

    r.gamma_s = r.gamma_minus;
    r.omega_s_eff = -r.omega_minus;
    return r;
}

RegimeReport check_regime(const PhysicalParams& params) {
    params.validate();
    const DerivedRates rates = derived_rates(params);
    const double ns = static_cast<double>(params.n_spins);

    RegimeReport rep;
    rep.rwa1_vs_kappa = make_check(params.omega_c / params.kappa, 10.0);
    rep.rwa1_vs_rabi = make_check(params.omega_c / params.rabi, 10.0);
    rep.rwa1_vs_g = make_check(params.omega_c / params.g, 10.0);
    rep.rwa1_ok = rep.rwa1_vs_kappa.ok && rep.rwa1_vs_rabi.ok && rep.rwa1_vs_g.ok;

    rep.rwa2 = make_check(params.rabi / params.kappa, 10.0);
    rep.rwa2_ok = rep.rwa2.ok;

    rep.markov = make_check(params.kappa / (params.g * std::sqrt(ns)), 10.0);
    rep.markov_ok = rep.markov.ok;

    rep.n_spins_bound = (params.kappa / params.g) * (params.kappa / params.g);
    rep.size = make_check(rep.n_spins_bound / ns, 10.0);
    rep.size_ok = rep.size.ok;

    rep.dominance_plus = rates.gamma_plus / rates.gamma_minus;
    rep.dominance_zero = rates.gamma_0 / rates.gamma_minus;
    return rep;
}

} // namespace spincool
