#pragma once

#include <cstdint>

namespace spincool {

/// Experimental inputs for one cavity-cooling configuration.
///
/// All frequencies and rates are angular (rad/s). Config files take linear
/// frequencies in Hz; the conversion happens at the parsing boundary, never
/// inside the physics.
struct PhysicalParams {
    double omega_c = 0.0;     // cavity resonance, rad/s
    double omega_s = 0.0;     // spin Larmor frequency, rad/s
    double rabi = 0.0;        // drive strength Omega_R, rad/s
    double g = 0.0;           // single-spin coupling, rad/s
    double kappa = 0.0;       // cavity dissipation rate, rad/s
    double nbar = 0.0;        // mean thermal photon number, >= 0
    std::int64_t n_spins = 0; // ensemble size N_s
    double j_subspace = 0.0;  // total spin J of the subspace, half-integer

    // Throws ValidationError on any violated invariant.
    void validate() const;
};

// Convenience constructor: all rates given as linear frequencies in Hz,
// j defaults to the Dicke subspace N_s/2.
PhysicalParams params_from_linear(double omega_c_hz, double omega_s_hz,
                                  double rabi_hz, double g_hz, double kappa_hz,
                                  double nbar, std::int64_t n_spins,
                                  double j_subspace = -1.0);

/// Closed-form rates of the effective spin master equation.
///
/// gamma_s / omega_s_eff are the dissipation rate and frequency of the
/// effective spin generator; the 0/-/+ family are the per-frequency-component
/// rates of the three interaction terms, of which the "-" one must dominate
/// for cooling.
struct DerivedRates {
    double detuning = 0.0;     // omega_c - omega_s, rad/s
    double delta_minus = 0.0;  // detuning - rabi, rad/s (the matched sideband)
    double delta_plus = 0.0;   // detuning + rabi, rad/s
    double gamma_s = 0.0;      // g^2 kappa / (kappa^2 + 4 delta_minus^2), 1/s
    double omega_s_eff = 0.0;  // -g^2 delta_minus / (kappa^2 + 4 delta_minus^2), rad/s
    double gamma_0 = 0.0;      // 4 g^2 kappa / (kappa^2 + 4 detuning^2)
    double gamma_minus = 0.0;  // == gamma_s by definition
    double gamma_plus = 0.0;   // g^2 kappa / (kappa^2 + 4 delta_plus^2)
    double omega_0 = 0.0;      // 4 g^2 detuning / (kappa^2 + 4 detuning^2)
    double omega_minus = 0.0;  // g^2 delta_minus / (kappa^2 + 4 delta_minus^2)
    double omega_plus = 0.0;   // g^2 delta_plus / (kappa^2 + 4 delta_plus^2)
};

/// One inequality of the approximation chain: the raw ratio, the margin
/// normalized so that margin >= 1 means the check passes, and the verdict.
struct RegimeCheck {
    double ratio = 0.0;   // raw frequency ratio
    double margin = 0.0;  // ratio / required factor
    bool ok = false;      // margin >= 1
};

/// Where the parameter set sits relative to the approximations.
///
/// "Much greater than" is operationalized as a factor of 10 throughout,
/// consistent with the Markov criterion kappa >= 10 g sqrt(N_s).
struct RegimeReport {
    // First rotating-wave approximation: omega_c large vs kappa, rabi, g.
    RegimeCheck rwa1_vs_kappa;
    RegimeCheck rwa1_vs_rabi;
    RegimeCheck rwa1_vs_g;
    bool rwa1_ok = false;

    // Second RWA: rabi >> kappa.
    RegimeCheck rwa2;
    bool rwa2_ok = false;

    // Markov condition, strict form: kappa >= 10 g sqrt(N_s).
    RegimeCheck markov;
    bool markov_ok = false;

    // Ensemble-size bound N_s << kappa^2/g^2, again at factor 10. This is
    // the form the headline ESR example satisfies; the strict markov check
    // above is sqrt(10) tighter in kappa.
    double n_spins_bound = 0.0; // kappa^2 / g^2
    RegimeCheck size;
    bool size_ok = false;

    // Dominance of the cooling sideband.
    double dominance_plus = 0.0; // Gamma_+ / Gamma_-
    double dominance_zero = 0.0; // Gamma_0 / Gamma_-

    bool all_ok() const { return rwa1_ok && rwa2_ok && size_ok; }
};

// Mean thermal photon number of a mode at angular frequency omega_c in a
// bath at temperature kelvin. Zero temperature gives exactly 0; negative
// temperature throws ValidationError.
double thermal_occupation(double omega_c, double kelvin);

// Exact inverse of thermal_occupation. nbar == 0 has no finite preimage and
// throws ValidationError.
double cavity_temperature(double omega_c, double nbar);

DerivedRates derived_rates(const PhysicalParams& params);

RegimeReport check_regime(const PhysicalParams& params);

} // namespace spincool
