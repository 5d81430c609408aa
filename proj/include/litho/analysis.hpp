#pragma once

#include <utility>
#include <vector>

#include "litho/forward_model.hpp"
#include "litho/target.hpp"

namespace litho {

// indicator of {I > (1 + hvar_percent/100) * h}, strict inequality
RealField expose(const IntensityBundle& bundle, double h, double hvar_percent = 0.0);

// h = 40% of the peak intensity obtained when the mask equals the target
// pattern itself; DegenerateTarget if that intensity vanishes
double default_threshold(const ForwardEngine& engine, const TargetPattern& target);

// count of symmetric-difference pixels
int pixel_error(const RealField& exposed, const RealField& target_indicator);

// Threshold-stability distance per pixel, in normalized units (h = 1,
// per-pixel gradients): d = sqrt((I/h - level)^2 + (dI1/h)^2 + (dI2/h)^2)
// with level = 1 + hvar/100. d_min is returned as a percentage.
struct StabilityMetric {
    RealField d_field;
    double d_min_pct = 0.0;
};
StabilityMetric stability_metric(const IntensityBundle& bundle, double h, double level = 1.0);

// foreground connected components (8-connectivity) and background holes
// (4-connectivity, excluding the border-connected background)
std::pair<int, int> topology_summary(const RealField& pattern);

// Chebyshev (square) morphological dilation by the given radius
RealField dilate(const RealField& indicator, int radius);

struct ExposureReport {
    double hvar_percent = 0.0;
    RealField exposed;
    int pixel_err = 0;
    RealField d_field;
    double d_min_pct = 0.0;
    int components = 0;
    int holes = 0;
};

ExposureReport exposure_report(const IntensityBundle& bundle, double h, double hvar_percent,
                               const TargetPattern& target);

std::vector<ExposureReport> threshold_sweep(const IntensityBundle& bundle, double h,
                                            const std::vector<double>& hvar_list, const TargetPattern& target);

} // namespace litho
