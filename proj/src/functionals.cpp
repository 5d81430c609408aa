#include "litho/functionals.hpp"

#include <cmath>
#include <limits>

namespace litho {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RegProfile RegProfile::from_band(double d_hard, double d_soft, double alpha) {
    if (!(0.0 < d_hard && d_hard < d_soft))
        fail(ErrorCode::invalid_config, "RegProfile: need 0 < d_hard < d_soft");
    RegProfile p;
    p.d_hard = d_hard;
    p.d_soft = d_soft;
    p.alpha = alpha;
    p.phi_a = 1.0;
    p.phi_b = d_hard * d_hard;
    p.delta0 = d_soft * d_soft - d_hard * d_hard;
    p.validate();
    return p;
}

void RegProfile::validate() const {
    if (!(delta0 > 0.0)) fail(ErrorCode::invalid_config, "RegProfile: delta0 must be > 0");
    if (!(alpha > 0.0 && alpha <= 1.0)) fail(ErrorCode::invalid_config, "RegProfile: alpha must be in (0,1]");
    if (!(phi_a > 0.0 && phi_b > 0.0)) fail(ErrorCode::invalid_config, "RegProfile: phi coefficients must be > 0");
    // structural condition phi(0) < -delta0 (h normalized to 1)
    if (!(phi(0.0) < -delta0)) fail(ErrorCode::invalid_config, "RegProfile: phi(0) < -delta0 violated");
}

double profile_c1(const RegProfile& profile, double delta) {
    if (!(delta >= 0.0)) fail(ErrorCode::invalid_config, "profile_c1: delta must be >= 0");
    return std::min(profile.phi(1.0 - delta), profile.phi(1.0 + delta));
}

double reg_barrier_f(double s, const RegProfile& profile) {
    if (s <= 0.0) return kInf;
    if (s >= profile.delta0) return 0.0;
    const double d2 = profile.delta0 * profile.delta0;
    const double t = d2 / (d2 - s * s);
    const double log_f = -t - (2.0 / profile.alpha) * std::log(s);
    return std::exp(log_f); // overflows to +inf only where f is astronomically large
}

double reg_barrier_f_prime(double s, const RegProfile& profile) {
    if (s <= 0.0 || s >= profile.delta0) return 0.0;
    const double d2 = profile.delta0 * profile.delta0;
    const double den = d2 - s * s;
    const double t = d2 / den;
    const double log_f = -t - (2.0 / profile.alpha) * std::log(s);
    const double dlog_f = -2.0 * s * d2 / (den * den) - (2.0 / profile.alpha) / s;
    return std::exp(log_f) * dlog_f;
}

double reg_barrier_f_gamma(double s, double gamma, const RegProfile& profile) {
    if (!(gamma > 0.0)) fail(ErrorCode::invalid_config, "reg_barrier_f_gamma: gamma must be > 0");
    if (s <= 0.0) return 1.0 / gamma;
    if (s >= profile.delta0) return 0.0;
    const double d2 = profile.delta0 * profile.delta0;
    const double t = d2 / (d2 - s * s);
    const double log_f = -t - (2.0 / profile.alpha) * std::log(s);
    if (log_f > 700.0) return 1.0 / gamma; // f/(1+gamma f) to within < 1e-300
    const double f = std::exp(log_f);
    return f / (1.0 + gamma * f);
}

double reg_barrier_f_gamma_prime(double s, double gamma, const RegProfile& profile) {
    if (!(gamma > 0.0)) fail(ErrorCode::invalid_config, "reg_barrier_f_gamma_prime: gamma must be > 0");
    if (s <= 0.0 || s >= profile.delta0) return 0.0;
    const double d2 = profile.delta0 * profile.delta0;
    const double den = d2 - s * s;
    const double t = d2 / den;
    const double log_f = -t - (2.0 / profile.alpha) * std::log(s);
    // f' = f * dlog_f with dlog_f = -t'(s) - (2/alpha)/s
    const double dlog_f = -2.0 * s * d2 / (den * den) - (2.0 / profile.alpha) / s;
    if (log_f > 60.0) {
        // saturated: f'/(1+gamma f)^2 ~ dlog_f * exp(-log_f)/gamma^2
        return dlog_f * std::exp(-log_f) / (gamma * gamma);
    }
    const double f = std::exp(log_f);
    const double denom = 1.0 + gamma * f;
    return f * dlog_f / (denom * denom);
}

void FunctionalConfig::validate() const {
    if (!(weight_perim_diff >= 0.0 && weight_mm >= 0.0 && weight_reg >= 0.0))
        fail(ErrorCode::invalid_config, "FunctionalConfig: weights must be >= 0");
    if (!(threshold > 0.0)) fail(ErrorCode::invalid_config, "FunctionalConfig: threshold must be > 0");
    if (misfit_exponent < 1) fail(ErrorCode::invalid_config, "FunctionalConfig: misfit exponent must be >= 1");
    if (!(mm_exponent > 1.0)) fail(ErrorCode::invalid_config, "FunctionalConfig: mm exponent must be > 1");
    if (!(eps > 0.0 && eta > 0.0)) fail(ErrorCode::invalid_config, "FunctionalConfig: eps and eta must be > 0");
    if (!(gamma >= 0.0)) fail(ErrorCode::invalid_config, "FunctionalConfig: gamma must be >= 0");
    if (!(smooth_abs_mu_rel > 0.0)) fail(ErrorCode::invalid_config, "FunctionalConfig: mu must be > 0");
    reg.validate();
}

namespace {

// symmetric quintic ramp on [0,1]
double smoothstep01(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return ((6.0 * s - 15.0) * s + 10.0) * s * s * s;
}

double smoothstep01_prime(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double q = s * (1.0 - s);
    return 30.0 * q * q;
}

} // namespace

double smooth_step(double t, double h, double eta) {
    return smoothstep01((t - h) / eta + 0.5);
}

double smooth_step_prime(double t, double h, double eta) {
    return smoothstep01_prime((t - h) / eta + 0.5) / eta;
}

double smooth_abs(double x, double mu) { return std::sqrt(x * x + mu * mu) - mu; }

double smooth_abs_prime(double x, double mu) { return x / std::sqrt(x * x + mu * mu); }

double modica_mortola_cp(double p) {
    const double pc = p / (p - 1.0); // conjugate exponent
    const double a = 1.0 + 1.0 / pc;
    return 1.0 / std::beta(a, a);
}

RealField smoothed_pattern(const IntensityBundle& bundle, const FunctionalConfig& cfg) {
    RealField out(bundle.grid.n, bundle.grid.n);
    const double h = cfg.threshold;
    for (size_t i = 0; i < out.size(); ++i) out[i] = smooth_step(bundle.intensity[i] / h, 1.0, cfg.eta);
    return out;
}

double smoothed_tv(const RealField& f, double mu) {
    RealField d1 = diff_axis1(f), d2 = diff_axis2(f);
    double tv = 0.0;
    for (size_t i = 0; i < f.size(); ++i) tv += std::sqrt(d1[i] * d1[i] + d2[i] * d2[i] + mu * mu) - mu;
    return tv;
}

MisfitParts misfit_parts(const RealField& smoothed, const TargetPattern& target, const FunctionalConfig& cfg) {
    if (!smoothed.same_shape(target.indicator)) fail(ErrorCode::grid_mismatch, "misfit: shape mismatch");
    MisfitParts parts;
    const int p = cfg.misfit_exponent;
    for (size_t i = 0; i < smoothed.size(); ++i) {
        const double d = std::abs(smoothed[i] - target.indicator[i]);
        parts.lp += p == 1 ? d : p == 2 ? d * d : std::pow(d, p);
    }
    if (cfg.weight_perim_diff > 0.0) {
        const double mu = cfg.smooth_abs_mu_rel * target.perimeter;
        const double tv_ref = smoothed_tv(target.indicator, mu);
        parts.perim_diff = cfg.weight_perim_diff * smooth_abs(smoothed_tv(smoothed, mu) - tv_ref, mu);
    }
    return parts;
}

double misfit(const RealField& smoothed, const TargetPattern& target, const FunctionalConfig& cfg) {
    return misfit_parts(smoothed, target, cfg).total();
}

double modica_mortola(const PhaseField& u, const FunctionalConfig& cfg) {
    const double p = cfg.mm_exponent;
    const double pc = p / (p - 1.0);
    const double cp = cfg.drop_cp ? 1.0 : modica_mortola_cp(p);
    double well = 0.0;
    for (size_t i = 0; i < u.values.size(); ++i) well += u.values[i] * (1.0 - u.values[i]);
    RealField d1 = diff_axis1(u.values), d2 = diff_axis2(u.values);
    double grad = 0.0;
    if (p == 2.0) {
        for (size_t i = 0; i < d1.size(); ++i) grad += d1[i] * d1[i] + d2[i] * d2[i];
    } else {
        for (size_t i = 0; i < d1.size(); ++i) grad += std::pow(std::hypot(d1[i], d2[i]), p);
    }
    return cp / (pc * cfg.eps) * well + cp * std::pow(cfg.eps, p - 1.0) / p * grad;
}

double regularizer(const IntensityBundle& bundle, const FunctionalConfig& cfg) {
    const double h = cfg.threshold;
    double acc = 0.0;
    for (size_t i = 0; i < bundle.intensity.size(); ++i) {
        const double it = bundle.intensity[i] / h;
        const double gn = (bundle.grad1[i] * bundle.grad1[i] + bundle.grad2[i] * bundle.grad2[i]) / (h * h);
        const double g = gn - cfg.reg.phi(it);
        acc += cfg.gamma > 0.0 ? reg_barrier_f_gamma(g, cfg.gamma, cfg.reg) : reg_barrier_f(g, cfg.reg);
        if (acc == kInf) return kInf;
    }
    return acc;
}

double regularizer_band_variant(const IntensityBundle& bundle, const FunctionalConfig& cfg, double delta) {
    if (!(delta > 0.0)) fail(ErrorCode::invalid_config, "regularizer_band_variant: delta must be > 0");
    const double h = cfg.threshold;
    size_t count = 0;
    for (size_t i = 0; i < bundle.intensity.size(); ++i) {
        const double it = bundle.intensity[i] / h;
        if (it >= 1.0 - delta && it <= 1.0 + delta) ++count;
    }
    if (count == 0) return kInf;
    return regularizer(bundle, cfg) + 1.0 / double(count);
}

ObjectiveBreakdown objective_from_bundle(const PhaseField& u, const IntensityBundle& bundle,
                                         const TargetPattern& target, const FunctionalConfig& cfg) {
    require_same_grid(u.grid, bundle.grid, "objective");
    require_same_grid(u.grid, target.grid, "objective");
    ObjectiveBreakdown out;
    MisfitParts parts = misfit_parts(smoothed_pattern(bundle, cfg), target, cfg);
    out.misfit_lp = parts.lp;
    out.perim_diff = parts.perim_diff;
    out.mm = modica_mortola(u, cfg);
    out.reg = cfg.weight_reg > 0.0 ? regularizer(bundle, cfg) : 0.0;
    out.total = out.misfit_lp + out.perim_diff + cfg.weight_mm * out.mm + cfg.weight_reg * out.reg;
    return out;
}

ObjectiveBreakdown total_objective(const PhaseField& u, const ForwardEngine& engine, const TargetPattern& target,
                                   const FunctionalConfig& cfg) {
    return objective_from_bundle(u, engine.intensity(u), target, cfg);
}

} // namespace litho
