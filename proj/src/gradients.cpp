#include "litho/gradients.hpp"

namespace litho {

namespace {

// accumulate coeff * kernel_spec * FFT(integrand) into acc
void accumulate_term(const ConvEngine& eng, ComplexField& acc, double coeff, const ComplexField& kernel_spec,
                     const ComplexField& integrand) {
    ComplexField s = eng.spectrum(integrand);
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += coeff * kernel_spec[i] * s[i];
}

// kernel applications on the adjoint side use the mirrored extraction window
RealField twice_real_adjoint(const ConvEngine& eng, const ComplexField& acc, double scale) {
    ComplexField field = eng.inverse_same_adjoint(acc);
    RealField out(field.rows(), field.cols());
    for (size_t i = 0; i < out.size(); ++i) out[i] = scale * 2.0 * field[i].real();
    return out;
}

} // namespace

RealField grad_pointwise_of_intensity(const ForwardEngine& engine, const IntensityBundle& bundle,
                                      const RealField& fprime) {
    const SocsModel& model = engine.model();
    require_same_grid(model.grid, bundle.grid, "grad_pointwise_of_intensity");
    if (fprime.rows() != model.grid.n || fprime.cols() != model.grid.n)
        fail(ErrorCode::grid_mismatch, "grad_pointwise_of_intensity: fprime shape");

    const ConvEngine& eng = engine.conv();
    ComplexField acc(eng.pad(), eng.pad());
    ComplexField integrand(model.grid.n, model.grid.n);
    for (int m = 0; m < model.n0; ++m) {
        const ComplexField& cm = bundle.mode_convs[m];
        for (size_t i = 0; i < integrand.size(); ++i) integrand[i] = fprime[i] * cm[i];
        accumulate_term(eng, acc, model.modes[m].sigma, engine.w_spectrum(m), integrand);
    }
    return twice_real_adjoint(eng, acc, model.quadrature_weight);
}

RealField grad_gradient_composite(const ForwardEngine& engine, const IntensityBundle& bundle, const RealField& g1,
                                  const RealField& g2) {
    const SocsModel& model = engine.model();
    require_same_grid(model.grid, bundle.grid, "grad_gradient_composite");
    if (!g1.same_shape(bundle.intensity) || !g2.same_shape(bundle.intensity))
        fail(ErrorCode::grid_mismatch, "grad_gradient_composite: partials shape");

    const ConvEngine& eng = engine.conv();
    const RealField& p1 = bundle.grad1;
    const RealField& p2 = bundle.grad2;
    ComplexField acc(eng.pad(), eng.pad());
    ComplexField integrand(model.grid.n, model.grid.n);
    for (int m = 0; m < model.n0; ++m) {
        const double s = model.modes[m].sigma;
        const ComplexField& cm = bundle.mode_convs[m];
        const ComplexField& gm1 = bundle.mode_dconvs[m][0];
        const ComplexField& gm2 = bundle.mode_dconvs[m][1];
        // W-part: 2 g1 (p_l * (d_l V * u)) summed over l, plus g2 (V * u)
        for (size_t i = 0; i < integrand.size(); ++i)
            integrand[i] = 2.0 * g1[i] * (p1[i] * gm1[i] + p2[i] * gm2[i]) + g2[i] * cm[i];
        accumulate_term(eng, acc, s, engine.w_spectrum(m), integrand);
        // Z-parts: 2 g1 p_l conj(V * u)
        for (size_t i = 0; i < integrand.size(); ++i) integrand[i] = 2.0 * g1[i] * p1[i] * std::conj(cm[i]);
        accumulate_term(eng, acc, s, engine.z_spectrum(m, 0), integrand);
        for (size_t i = 0; i < integrand.size(); ++i) integrand[i] = 2.0 * g1[i] * p2[i] * std::conj(cm[i]);
        accumulate_term(eng, acc, s, engine.z_spectrum(m, 1), integrand);
    }
    return twice_real_adjoint(eng, acc, model.quadrature_weight);
}

RealField grad_misfit(const ForwardEngine& engine, const IntensityBundle& bundle, const TargetPattern& target,
                      const FunctionalConfig& cfg) {
    require_same_grid(bundle.grid, target.grid, "grad_misfit");
    const int n = bundle.grid.n;
    const double h = cfg.threshold;
    const int p = cfg.misfit_exponent;

    RealField phi(n, n), dphi_dI(n, n);
    for (size_t i = 0; i < phi.size(); ++i) {
        const double it = bundle.intensity[i] / h;
        phi[i] = smooth_step(it, 1.0, cfg.eta);
        dphi_dI[i] = smooth_step_prime(it, 1.0, cfg.eta) / h;
    }

    RealField fprime(n, n, 0.0);
    for (size_t i = 0; i < fprime.size(); ++i) {
        const double diff = phi[i] - target.indicator[i];
        double dlp;
        if (p == 2)
            dlp = 2.0 * diff;
        else if (p == 1)
            dlp = diff > 0.0 ? 1.0 : diff < 0.0 ? -1.0 : 0.0;
        else
            dlp = p * std::pow(std::abs(diff), p - 1) * (diff > 0.0 ? 1.0 : diff < 0.0 ? -1.0 : 0.0);
        fprime[i] = dlp * dphi_dI[i];
    }

    if (cfg.weight_perim_diff > 0.0) {
        const double mu = cfg.smooth_abs_mu_rel * target.perimeter;
        const double tv_ref = smoothed_tv(target.indicator, mu);
        RealField d1 = diff_axis1(phi), d2 = diff_axis2(phi);
        double tv = 0.0;
        RealField q1(n, n), q2(n, n);
        for (size_t i = 0; i < d1.size(); ++i) {
            const double rho = std::sqrt(d1[i] * d1[i] + d2[i] * d2[i] + mu * mu);
            tv += rho - mu;
            q1[i] = d1[i] / rho;
            q2[i] = d2[i] / rho;
        }
        const double outer = cfg.weight_perim_diff * smooth_abs_prime(tv - tv_ref, mu);
        // divergence form of the TV chain rule (the stencil is skew-adjoint)
        RealField div1 = diff_axis1(q1), div2 = diff_axis2(q2);
        for (size_t i = 0; i < fprime.size(); ++i) fprime[i] -= outer * (div1[i] + div2[i]) * dphi_dI[i];
    }

    return grad_pointwise_of_intensity(engine, bundle, fprime);
}

RealField grad_modica_mortola(const PhaseField& u, const FunctionalConfig& cfg) {
    if (cfg.mm_exponent != 2.0)
        fail(ErrorCode::invalid_config, "grad_modica_mortola: implemented for mm exponent p = 2 only");
    const double cp = cfg.drop_cp ? 1.0 : modica_mortola_cp(2.0);
    const int n = u.grid.n;
    RealField out(n, n);
    RealField d1 = diff_axis1(u.values), d2 = diff_axis2(u.values);
    RealField lap1 = diff_axis1(d1), lap2 = diff_axis2(d2);
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = cp * ((1.0 - 2.0 * u.values[i]) / (2.0 * cfg.eps) - cfg.eps * (lap1[i] + lap2[i]));
    return out;
}

RealField grad_regularizer(const ForwardEngine& engine, const IntensityBundle& bundle, const FunctionalConfig& cfg) {
    const int n = bundle.grid.n;
    const double h = cfg.threshold;
    RealField g1(n, n), g2(n, n);
    for (size_t i = 0; i < g1.size(); ++i) {
        const double it = bundle.intensity[i] / h;
        const double gn = (bundle.grad1[i] * bundle.grad1[i] + bundle.grad2[i] * bundle.grad2[i]) / (h * h);
        const double arg = gn - cfg.reg.phi(it);
        const double fp = cfg.gamma > 0.0 ? reg_barrier_f_gamma_prime(arg, cfg.gamma, cfg.reg)
                                          : reg_barrier_f_prime(arg, cfg.reg);
        // g(a,b) = f_gamma(a/h^2 - phi(b/h)) in raw intensity variables
        g1[i] = fp / (h * h);
        g2[i] = -fp * cfg.reg.phi_prime(it) / h;
    }
    return grad_gradient_composite(engine, bundle, g1, g2);
}

RealField grad_total(const PhaseField& u, const ForwardEngine& engine, const IntensityBundle& bundle,
                     const TargetPattern& target, const FunctionalConfig& cfg) {
    RealField grad = grad_misfit(engine, bundle, target, cfg);
    RealField mm = grad_modica_mortola(u, cfg);
    for (size_t i = 0; i < grad.size(); ++i) grad[i] += cfg.weight_mm * mm[i];
    if (cfg.weight_reg > 0.0) {
        RealField rg = grad_regularizer(engine, bundle, cfg);
        for (size_t i = 0; i < grad.size(); ++i) grad[i] += cfg.weight_reg * rg[i];
    }
    return grad;
}

RealField fd_oracle(const std::function<double(const PhaseField&)>& objective, const PhaseField& u, double step) {
    if (!(step > 0.0)) fail(ErrorCode::invalid_config, "fd_oracle: step must be > 0");
    PhaseField probe = u;
    RealField out(u.grid.n, u.grid.n);
    for (size_t i = 0; i < out.size(); ++i) {
        const double saved = probe.values[i];
        probe.values[i] = saved + step;
        const double fp = objective(probe);
        probe.values[i] = saved - step;
        const double fm = objective(probe);
        probe.values[i] = saved;
        out[i] = (fp - fm) / (2.0 * step);
    }
    return out;
}

} // namespace litho
