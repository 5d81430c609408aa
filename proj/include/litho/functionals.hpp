#pragma once

#include "litho/forward_model.hpp"
#include "litho/target.hpp"

namespace litho {

// Profile of the threshold-stability barrier. In normalized units (I/h,
// per-pixel gradients) the barrier argument is g = |grad I|^2 - phi(I) with
// phi(s) = -phi_a*(s-1)^2 + phi_b. The band constructor picks
//   phi_a = 1, phi_b = d_hard^2, delta0 = d_soft^2 - d_hard^2,
// so that g = d^2 - d_hard^2 with d the distance of (I, dI/dx1, dI/dx2) from
// the critical point (1, 0, 0): the barrier is infinite exactly on
// {d <= d_hard} and vanishes exactly on {d >= d_soft}.
struct RegProfile {
    double delta0 = 0.0;
    double alpha = 1.0;
    double phi_a = 1.0, phi_b = 0.0;
    double d_hard = 0.05, d_soft = 0.07;

    static RegProfile from_band(double d_hard, double d_soft, double alpha = 1.0);

    double phi(double s) const { return -phi_a * (s - 1.0) * (s - 1.0) + phi_b; }
    double phi_prime(double s) const { return -2.0 * phi_a * (s - 1.0); }
    void validate() const;
};

// diagnostic: min of phi on [1-delta, 1+delta] (attained at the endpoints)
double profile_c1(const RegProfile& profile, double delta);

// Barrier f: +inf on (-inf,0], exp(-delta0^2/(delta0^2-s^2)) * s^(-2/alpha)
// on (0, delta0), identically 0 on [delta0, +inf).
double reg_barrier_f(double s, const RegProfile& profile);

// derivative of the uncapped barrier on its finite range (0 elsewhere)
double reg_barrier_f_prime(double s, const RegProfile& profile);

// Capped barrier f_gamma = f/(1 + gamma f), real-valued everywhere with
// saturation value 1/gamma where f = +inf; nonincreasing in s and in gamma,
// converging to f pointwise as gamma -> 0+.
double reg_barrier_f_gamma(double s, double gamma, const RegProfile& profile);
double reg_barrier_f_gamma_prime(double s, double gamma, const RegProfile& profile);

enum class DoubleWell { smooth_ramp }; // W(s) = s(1-s)

struct FunctionalConfig {
    double weight_perim_diff = 0.0; // a
    double weight_mm = 2e-4;        // b
    double weight_reg = 0.0;        // c
    double threshold = 1.0;         // h in raw intensity units; consumers normalize I/h
    int misfit_exponent = 2;        // p of the misfit distance
    double mm_exponent = 2.0;       // p of the perimeter approximation
    DoubleWell dw = DoubleWell::smooth_ramp;
    double eps = 0.002;
    double eta = 0.2;
    double gamma = 0.03;
    RegProfile reg = RegProfile::from_band(0.05, 0.07);
    double smooth_abs_mu_rel = 1e-6; // mu = rel * P(target)
    bool drop_cp = true;            // omit c_p (then weight_mm means b/c_p)

    void validate() const;
};

// smooth threshold step: fixed symmetric quintic profile, 0 below h-eta/2,
// 1 above h+eta/2, 1/2 at h
double smooth_step(double t, double h, double eta);
double smooth_step_prime(double t, double h, double eta);

double smooth_abs(double x, double mu);
double smooth_abs_prime(double x, double mu);

// c_p = (int_0^1 W(s)^(1/p') ds)^(-1) for W(s) = s(1-s); 8/pi at p = 2
double modica_mortola_cp(double p);

RealField smoothed_pattern(const IntensityBundle& bundle, const FunctionalConfig& cfg);

// mu-smoothed total variation of a field with the shared central-difference
// stencil: sum of sqrt(|grad|^2 + mu^2) - mu, pixel units
double smoothed_tv(const RealField& f, double mu);

struct MisfitParts {
    double lp = 0.0;         // sum |Phi - chi0|^p
    double perim_diff = 0.0; // a * smooth_abs(TV(Phi) - TV(chi0)), already weighted
    double total() const { return lp + perim_diff; }
};

MisfitParts misfit_parts(const RealField& smoothed, const TargetPattern& target, const FunctionalConfig& cfg);
double misfit(const RealField& smoothed, const TargetPattern& target, const FunctionalConfig& cfg);

double modica_mortola(const PhaseField& u, const FunctionalConfig& cfg);

// sum over pixels of f_gamma(|grad I|^2 - phi(I)) in normalized units; uses
// the uncapped barrier when gamma == 0, where +inf is a legal result
double regularizer(const IntensityBundle& bundle, const FunctionalConfig& cfg);

// variant adding the reciprocal measure of the band {h-delta <= I <= h+delta}
// (delta in normalized units); +inf on an empty band
double regularizer_band_variant(const IntensityBundle& bundle, const FunctionalConfig& cfg, double delta);

struct ObjectiveBreakdown {
    double misfit_lp = 0.0;
    double perim_diff = 0.0; // a-weighted
    double mm = 0.0;         // unweighted
    double reg = 0.0;        // unweighted
    double total = 0.0;      // misfit_lp + perim_diff + b*mm + c*reg
};

ObjectiveBreakdown objective_from_bundle(const PhaseField& u, const IntensityBundle& bundle,
                                         const TargetPattern& target, const FunctionalConfig& cfg);
ObjectiveBreakdown total_objective(const PhaseField& u, const ForwardEngine& engine, const TargetPattern& target,
                                   const FunctionalConfig& cfg);

} // namespace litho
