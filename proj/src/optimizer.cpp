#include "litho/optimizer.hpp"

#include <cmath>

#include "litho/gradients.hpp"

namespace litho {

void Schedule::validate() const {
    if (!(eps0 > 0.0 && eta0 > 0.0 && gamma0 >= 0.0))
        fail(ErrorCode::invalid_config, "schedule: eps0, eta0 must be > 0 and gamma0 >= 0");
    if (!(rate_eps >= 1.0 && rate_eta >= 1.0 && rate_gamma >= 1.0))
        fail(ErrorCode::invalid_config, "schedule: decrease rates must be >= 1");
    if (iters_per_stage < 1) fail(ErrorCode::invalid_config, "schedule: iters_per_stage must be >= 1");
    if (total_iters < 1 || total_iters % iters_per_stage != 0)
        fail(ErrorCode::invalid_config, "schedule: total_iters must be a positive multiple of iters_per_stage");
}

PhaseField project(const GridSpec& grid, const RealField& u, const RealField* support_mask) {
    if (u.rows() != grid.n || u.cols() != grid.n) fail(ErrorCode::grid_mismatch, "project: field shape");
    if (support_mask && !support_mask->same_shape(u)) fail(ErrorCode::grid_mismatch, "project: mask shape");
    RealField out(grid.n, grid.n);
    for (size_t i = 0; i < u.size(); ++i) {
        double v = std::min(1.0, std::max(0.0, u[i]));
        if (support_mask && (*support_mask)[i] <= 0.5) v = 0.0;
        out[i] = v;
    }
    return PhaseField(grid, std::move(out));
}

PhaseField make_initial_guess(InitialGuessKind kind, const TargetPattern& target, const InitialGuessParams& params) {
    const int n = target.grid.n;
    switch (kind) {
    case InitialGuessKind::perturbed_target: {
        if (params.blur_px <= 0.0) return PhaseField(target.grid, target.indicator);
        const int c = n / 2;
        ComplexField kernel(n, n);
        double norm = 0.0;
        const double s2 = 2.0 * params.blur_px * params.blur_px;
        for (int r = 0; r < n; ++r)
            for (int cc = 0; cc < n; ++cc) {
                double d2 = double(r - c) * (r - c) + double(cc - c) * (cc - c);
                double g = std::exp(-d2 / s2);
                kernel(r, cc) = g;
                norm += g;
            }
        for (size_t i = 0; i < kernel.size(); ++i) kernel[i] /= norm;
        ComplexField blurred = conv_same(kernel, to_complex(target.indicator));
        RealField u(n, n);
        for (size_t i = 0; i < u.size(); ++i) u[i] = std::min(1.0, std::max(0.0, blurred[i].real()));
        return PhaseField(target.grid, std::move(u));
    }
    case InitialGuessKind::diffuse: {
        // low-contrast lattice of blobs with a 2-px zero rim; the interior
        // level is raised to keep the window mean at params.level
        const int rim = 2;
        const double interior = double(n) * n / (double(n - 2 * rim) * (n - 2 * rim));
        const double base = params.level * interior;
        const double period = n / 6.0;
        RealField u(n, n, 0.0);
        for (int r = rim; r < n - rim; ++r)
            for (int c = rim; c < n - rim; ++c) {
                double v = base * (1.0 + 0.75 * std::cos(2.0 * M_PI * r / period) * std::cos(2.0 * M_PI * c / period));
                u(r, c) = std::min(1.0, std::max(0.0, v));
            }
        return PhaseField(target.grid, std::move(u));
    }
    }
    fail(ErrorCode::invalid_config, "make_initial_guess: unknown kind");
}

namespace {

int count_nonbinary(const RealField& u, double tol = 1e-3) {
    int count = 0;
    for (size_t i = 0; i < u.size(); ++i)
        if (std::min(u[i], 1.0 - u[i]) > tol) ++count;
    return count;
}

double sq_norm_diff(const RealField& a, const RealField& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

IterationRecord make_record(int iter, int stage, const FunctionalConfig& cfg, const ObjectiveBreakdown& obj,
                            double step, const IntensityBundle& bundle, const PhaseField& u,
                            const TargetPattern& target) {
    IterationRecord rec;
    rec.iter = iter;
    rec.stage = stage;
    rec.eps = cfg.eps;
    rec.eta = cfg.eta;
    rec.gamma = cfg.gamma;
    rec.objective = obj;
    rec.step = step;
    rec.pixel_err = pixel_error(expose(bundle, cfg.threshold), target.indicator);
    rec.d_min_pct = stability_metric(bundle, cfg.threshold).d_min_pct;
    rec.nonbinary_px = count_nonbinary(u.values);
    return rec;
}

} // namespace

RunTrace run(const PhaseField& u_init, const ForwardEngine& engine, const TargetPattern& target,
             FunctionalConfig cfg, const Schedule& schedule, const RunOptions& options) {
    schedule.validate();
    require_same_grid(u_init.grid, target.grid, "run");
    require_same_grid(u_init.grid, engine.model().grid, "run");
    const RealField* mask = options.support_mask ? &*options.support_mask : nullptr;

    RunTrace trace;
    PhaseField u = project(u_init.grid, u_init.values, mask);

    cfg.eps = schedule.eps_at(0);
    cfg.eta = schedule.eta_at(0);
    cfg.gamma = schedule.gamma_at(0);
    cfg.validate();

    IntensityBundle bundle = engine.intensity(u);
    ObjectiveBreakdown obj = objective_from_bundle(u, bundle, target, cfg);
    if (!std::isfinite(obj.total))
        fail(ErrorCode::non_finite_objective,
             "run: objective is not finite at the initial guess (gamma > 0 or a feasible start required)");
    trace.records.push_back(make_record(0, 0, cfg, obj, 0.0, bundle, u, target));

    double trial_step = options.initial_step;
    int iter = 0;
    for (int stage = 0; stage < schedule.stages(); ++stage) {
        cfg.eps = schedule.eps_at(stage);
        cfg.eta = schedule.eta_at(stage);
        cfg.gamma = schedule.gamma_at(stage);
        // re-evaluate under the stage parameters (warm start keeps u)
        obj = objective_from_bundle(u, bundle, target, cfg);

        for (int k = 0; k < schedule.iters_per_stage; ++k) {
            RealField grad = grad_total(u, engine, bundle, target, cfg);

            double step = 0.0;
            double t = trial_step;
            PhaseField u_next = u;
            IntensityBundle bundle_next;
            ObjectiveBreakdown obj_next = obj;
            while (t > 1e-20) {
                RealField cand(u.grid.n, u.grid.n);
                for (size_t i = 0; i < cand.size(); ++i) cand[i] = u.values[i] - t * grad[i];
                PhaseField u_cand = project(u.grid, cand, mask);
                IntensityBundle b_cand = engine.intensity(u_cand);
                ObjectiveBreakdown o_cand = objective_from_bundle(u_cand, b_cand, target, cfg);
                const double decrease = options.armijo_sigma / t * sq_norm_diff(u_cand.values, u.values);
                if (std::isfinite(o_cand.total) && o_cand.total <= obj.total - decrease) {
                    step = t;
                    u_next = std::move(u_cand);
                    bundle_next = std::move(b_cand);
                    obj_next = o_cand;
                    break;
                }
                t *= 0.5;
            }

            ++iter;
            if (step > 0.0) {
                u = std::move(u_next);
                bundle = std::move(bundle_next);
                obj = obj_next;
                trial_step = std::min(step * 2.0, 1e8);
            }
            // step == 0 leaves the iterate (and objective) unchanged
            trace.records.push_back(make_record(iter, stage, cfg, obj, step, bundle, u, target));
        }
        if (options.on_stage_end) options.on_stage_end(stage, u);
    }

    trace.final_u = u;
    trace.final_mask = RealField(u.grid.n, u.grid.n);
    for (size_t i = 0; i < trace.final_mask.size(); ++i) trace.final_mask[i] = u.values[i] > 0.5 ? 1.0 : 0.0;
    return trace;
}

} // namespace litho
