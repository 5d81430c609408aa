#include "litho/target.hpp"

#include <cmath>

#include "litho/fft.hpp"

namespace litho {

TargetPattern make_target_pattern(const GridSpec& grid, RealField indicator) {
    if (indicator.rows() != grid.n || indicator.cols() != grid.n)
        fail(ErrorCode::grid_mismatch, "make_target_pattern: indicator must be n x n");
    for (size_t i = 0; i < indicator.size(); ++i)
        if (indicator[i] != 0.0 && indicator[i] != 1.0)
            fail(ErrorCode::invalid_config, "make_target_pattern: indicator must be exactly binary");
    for (int i = 0; i < grid.n; ++i)
        if (indicator(0, i) != 0.0 || indicator(grid.n - 1, i) != 0.0 || indicator(i, 0) != 0.0 ||
            indicator(i, grid.n - 1) != 0.0)
            fail(ErrorCode::geometry_overflow, "make_target_pattern: indicator touches the boundary rim");

    TargetPattern t;
    t.grid = grid;
    RealField d1 = diff_axis1(indicator), d2 = diff_axis2(indicator);
    double tv = 0.0;
    for (size_t i = 0; i < indicator.size(); ++i) tv += std::hypot(d1[i], d2[i]);
    t.perimeter = tv;
    t.indicator = std::move(indicator);
    return t;
}

namespace {

void paint(RealField& f, const RectSpec& r) {
    for (int rr = r.r0; rr < r.r0 + r.rows; ++rr)
        for (int cc = r.c0; cc < r.c0 + r.cols; ++cc) f(rr, cc) = 1.0;
}

void check_fits(const GridSpec& grid, const RectSpec& r) {
    if (r.rows <= 0 || r.cols <= 0) fail(ErrorCode::invalid_config, "generate_target: empty rectangle");
    if (r.r0 < 1 || r.c0 < 1 || r.r0 + r.rows > grid.n - 1 || r.c0 + r.cols > grid.n - 1)
        fail(ErrorCode::geometry_overflow, "generate_target: feature exceeds the window (1-px rim required)");
}

TargetPattern from_rects(const GridSpec& grid, const std::vector<RectSpec>& rects) {
    RealField ind(grid.n, grid.n, 0.0);
    for (const auto& r : rects) {
        check_fits(grid, r);
        paint(ind, r);
    }
    return make_target_pattern(grid, std::move(ind));
}

} // namespace

TargetPattern generate_target(TargetKind kind, const GridSpec& grid, const std::vector<RectSpec>& rects) {
    const int box = 60;
    const int L = (grid.n - box) / 2;

    switch (kind) {
    case TargetKind::target1_like: {
        // closed frame, stroke 10; bar 13 wide x 16 tall centered in the
        // 40 x 40 hole (gaps 12 / 13 / 14 px, all >= 12)
        std::vector<RectSpec> parts = {
            {L, L, 10, box},               // top stroke
            {L + box - 10, L, 10, box},    // bottom stroke
            {L + 10, L, 40, 10},           // left stroke
            {L + 10, L + box - 10, 40, 10},// right stroke
            {L + 22, L + 23, 16, 13},      // inner vertical bar
        };
        return from_rects(grid, parts);
    }
    case TargetKind::target2_like: {
        // four features: one dominant block, two 8-px bars, one small square;
        // minimal inter-feature gap 6 px
        std::vector<RectSpec> parts = {
            {L, L, 26, 26},                // A: largest feature
            {L, L + 32, 40, 8},            // B: vertical bar
            {L + 32, L, 8, 26},            // C: horizontal bar
            {L + 46, L + 46, 10, 10},      // D: small square
        };
        return from_rects(grid, parts);
    }
    case TargetKind::custom_rects:
        if (rects.empty()) fail(ErrorCode::invalid_config, "generate_target: custom_rects needs rectangles");
        return from_rects(grid, rects);
    }
    fail(ErrorCode::invalid_config, "generate_target: unknown kind");
}

} // namespace litho
