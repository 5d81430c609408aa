#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "litho/functionals.hpp"
#include "litho/optics.hpp"
#include "litho/optimizer.hpp"
#include "litho/target.hpp"

namespace litho {

// Threshold rule: either a fixed raw intensity value or a fraction of the
// peak intensity obtained when the mask equals the target (the default 40%).
struct ThresholdRule {
    enum class Kind { fraction_of_peak, fixed } kind = Kind::fraction_of_peak;
    double fraction = 0.4;
    double value = 1.0;
};

struct TargetSpec {
    TargetKind kind = TargetKind::target1_like;
    std::vector<RectSpec> rects; // custom_rects only
};

struct InitialGuessSpec {
    InitialGuessKind kind = InitialGuessKind::diffuse;
    InitialGuessParams params;
};

struct SupportSpec {
    bool enabled = false;
    int dilate_px = 8;
};

// Complete, serializable description of one experiment. Defaults reproduce
// the common setup: lambda = 193 nm, NA = 1, sigma_c = 0.067, 128 x 128 cells
// of 12.5 nm, 10 retained SOCS modes, threshold at 40% of the target's peak
// intensity. Parsing is strict: unknown keys are rejected.
struct ExperimentConfig {
    OpticalSystem optics;
    GridSpec grid{128, 12.5};
    int socs_n0 = 10;
    std::string socs_cache_dir; // empty = no cache

    double weight_perim_diff = 0.0; // a
    double weight_mm = 2e-4;        // b
    double weight_reg = 0.0;        // c
    int misfit_exponent = 2;
    double mm_exponent = 2.0;
    bool drop_cp = true;
    ThresholdRule threshold_rule;
    double reg_d_hard = 0.05, reg_d_soft = 0.07, reg_alpha = 1.0;
    double smooth_abs_mu_rel = 1e-6;

    Schedule schedule;

    TargetSpec target;
    InitialGuessSpec initial_guess;
    SupportSpec support;
    std::vector<double> hvar_list{-0.5, 0.0, 2.5};
    std::uint64_t seed = 1;
    std::string out_dir = "out";

    static ExperimentConfig from_json_text(const std::string& text);
    std::string to_json_text() const;
    void validate() const;

    // functional config without the resolved threshold (set once I0 is known)
    FunctionalConfig functional_template() const;
};

} // namespace litho
