#include "litho/analysis.hpp"

#include <cmath>

namespace litho {

RealField expose(const IntensityBundle& bundle, double h, double hvar_percent) {
    if (!(h > 0.0)) fail(ErrorCode::invalid_config, "expose: threshold must be > 0");
    const double level = (1.0 + hvar_percent / 100.0) * h;
    RealField out(bundle.grid.n, bundle.grid.n);
    for (size_t i = 0; i < out.size(); ++i) out[i] = bundle.intensity[i] > level ? 1.0 : 0.0;
    return out;
}

double default_threshold(const ForwardEngine& engine, const TargetPattern& target) {
    require_same_grid(engine.model().grid, target.grid, "default_threshold");
    PhaseField chi(target.grid, target.indicator);
    IntensityBundle b = engine.intensity(chi);
    const double peak = max_value(b.intensity);
    if (!(peak > 0.0)) fail(ErrorCode::degenerate_target, "default_threshold: target produces zero intensity");
    return 0.4 * peak;
}

int pixel_error(const RealField& exposed, const RealField& target_indicator) {
    if (!exposed.same_shape(target_indicator)) fail(ErrorCode::grid_mismatch, "pixel_error: shape mismatch");
    int count = 0;
    for (size_t i = 0; i < exposed.size(); ++i)
        count += (exposed[i] > 0.5) != (target_indicator[i] > 0.5) ? 1 : 0;
    return count;
}

StabilityMetric stability_metric(const IntensityBundle& bundle, double h, double level) {
    if (!(h > 0.0)) fail(ErrorCode::invalid_config, "stability_metric: threshold must be > 0");
    StabilityMetric out;
    out.d_field = RealField(bundle.grid.n, bundle.grid.n);
    double dmin = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < out.d_field.size(); ++i) {
        const double it = bundle.intensity[i] / h - level;
        const double g1 = bundle.grad1[i] / h;
        const double g2 = bundle.grad2[i] / h;
        const double d = std::sqrt(it * it + g1 * g1 + g2 * g2);
        out.d_field[i] = d;
        dmin = std::min(dmin, d);
    }
    out.d_min_pct = 100.0 * dmin;
    return out;
}

namespace {

// BFS flood fill labelling; conn8 toggles 8- vs 4-connectivity
int count_components(const RealField& f, bool foreground, bool conn8, bool exclude_border_touching) {
    const int rows = f.rows(), cols = f.cols();
    std::vector<int> label(size_t(rows) * cols, 0);
    auto inside = [&](size_t i) { return (f[i] > 0.5) == foreground; };
    int next = 0;
    std::vector<size_t> stack;
    int counted = 0;
    for (size_t s = 0; s < label.size(); ++s) {
        if (label[s] || !inside(s)) continue;
        ++next;
        bool touches_border = false;
        stack.assign(1, s);
        label[s] = next;
        while (!stack.empty()) {
            size_t cur = stack.back();
            stack.pop_back();
            int r = int(cur / cols), c = int(cur % cols);
            if (r == 0 || r == rows - 1 || c == 0 || c == cols - 1) touches_border = true;
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    if (!conn8 && dr != 0 && dc != 0) continue;
                    int rr = r + dr, cc = c + dc;
                    if (rr < 0 || rr >= rows || cc < 0 || cc >= cols) continue;
                    size_t ni = size_t(rr) * cols + cc;
                    if (!label[ni] && inside(ni)) {
                        label[ni] = next;
                        stack.push_back(ni);
                    }
                }
        }
        if (!(exclude_border_touching && touches_border)) ++counted;
    }
    return counted;
}

} // namespace

std::pair<int, int> topology_summary(const RealField& pattern) {
    int components = count_components(pattern, true, true, false);
    int holes = count_components(pattern, false, false, true);
    return {components, holes};
}

RealField dilate(const RealField& indicator, int radius) {
    if (radius <= 0) return indicator;
    const int rows = indicator.rows(), cols = indicator.cols();
    RealField out(rows, cols, 0.0);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (indicator(r, c) <= 0.5) continue;
            for (int dr = -radius; dr <= radius; ++dr)
                for (int dc = -radius; dc <= radius; ++dc) {
                    int rr = r + dr, cc = c + dc;
                    if (rr >= 0 && rr < rows && cc >= 0 && cc < cols) out(rr, cc) = 1.0;
                }
        }
    return out;
}

ExposureReport exposure_report(const IntensityBundle& bundle, double h, double hvar_percent,
                               const TargetPattern& target) {
    ExposureReport rep;
    rep.hvar_percent = hvar_percent;
    rep.exposed = expose(bundle, h, hvar_percent);
    rep.pixel_err = pixel_error(rep.exposed, target.indicator);
    StabilityMetric sm = stability_metric(bundle, h, 1.0 + hvar_percent / 100.0);
    rep.d_field = std::move(sm.d_field);
    rep.d_min_pct = sm.d_min_pct;
    auto topo = topology_summary(rep.exposed);
    rep.components = topo.first;
    rep.holes = topo.second;
    return rep;
}

std::vector<ExposureReport> threshold_sweep(const IntensityBundle& bundle, double h,
                                            const std::vector<double>& hvar_list, const TargetPattern& target) {
    std::vector<ExposureReport> out;
    out.reserve(hvar_list.size());
    for (double hv : hvar_list) out.push_back(exposure_report(bundle, h, hv, target));
    return out;
}

} // namespace litho
