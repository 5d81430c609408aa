#pragma once

#include <functional>
#include <optional>

#include "litho/analysis.hpp"
#include "litho/functionals.hpp"

namespace litho {

// Continuation schedule over (eps, eta, gamma): the parameter value at stage
// s (0-based) is value0 * rate^(-s); every stage runs iters_per_stage
// projected-descent steps warm-started from the previous minimizer.
struct Schedule {
    double eps0 = 0.002, eta0 = 0.2, gamma0 = 0.03;
    double rate_eps = 1.2, rate_eta = 1.2, rate_gamma = 1.05;
    int iters_per_stage = 60;
    int total_iters = 1080;

    void validate() const;
    int stages() const { return total_iters / iters_per_stage; }
    double eps_at(int stage) const { return eps0 * std::pow(rate_eps, -double(stage)); }
    double eta_at(int stage) const { return eta0 * std::pow(rate_eta, -double(stage)); }
    double gamma_at(int stage) const { return gamma0 * std::pow(rate_gamma, -double(stage)); }
};

struct IterationRecord {
    int iter = 0;
    int stage = 0;
    double eps = 0.0, eta = 0.0, gamma = 0.0;
    ObjectiveBreakdown objective;
    double step = 0.0;
    int pixel_err = 0;
    double d_min_pct = 0.0;
    int nonbinary_px = 0;
};

struct RunTrace {
    std::vector<IterationRecord> records; // record 0 is the initial state
    PhaseField final_u;
    RealField final_mask; // {u > 1/2}
};

struct RunOptions {
    std::optional<RealField> support_mask;   // u forced to zero outside when set
    double armijo_sigma = 1e-4;
    double initial_step = 1.0;
    std::function<void(int stage, const PhaseField&)> on_stage_end; // checkpointing hook
};

// clamp to [0,1] and zero outside the optional support mask
PhaseField project(const GridSpec& grid, const RealField& u, const RealField* support_mask = nullptr);

enum class InitialGuessKind { perturbed_target, diffuse };

struct InitialGuessParams {
    double blur_px = 2.0; // perturbed_target: Gaussian blur radius
    double level = 0.5;   // diffuse: mean fill level
};

PhaseField make_initial_guess(InitialGuessKind kind, const TargetPattern& target, const InitialGuessParams& params);

// Projected steepest descent with Armijo backtracking under the continuation
// schedule. cfg's (eps, eta, gamma) fields are driven by the schedule; all
// other weights are taken as configured. NonFiniteObjective if the objective
// is +inf at the initial guess.
RunTrace run(const PhaseField& u_init, const ForwardEngine& engine, const TargetPattern& target,
             FunctionalConfig cfg, const Schedule& schedule, const RunOptions& options = {});

} // namespace litho
