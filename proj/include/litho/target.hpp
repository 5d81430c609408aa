#pragma once

#include <vector>

#include "litho/field.hpp"
#include "litho/grid.hpp"

namespace litho {

// Desired exposed pattern: exact binary indicator, compactly supported (zero
// on the boundary rim). perimeter is the plain central-difference total
// variation of the indicator, in pixel units.
struct TargetPattern {
    GridSpec grid;
    RealField indicator;
    double perimeter = 0.0;
};

TargetPattern make_target_pattern(const GridSpec& grid, RealField indicator);

enum class TargetKind { target1_like, target2_like, custom_rects };

// axis-aligned rectangle in pixel coordinates, [r0, r0+rows) x [c0, c0+cols)
struct RectSpec {
    int r0 = 0, c0 = 0, rows = 0, cols = 0;
};

// Built-in rectilinear test patterns, centered in the window.
// target1_like: a closed square frame (outer 60 px, stroke 10 px) around a
//   13 x 16 vertical bar, gaps between the two features >= 12 px.
// target2_like: four features with strokes as small as 8 px and gaps as small
//   as 6 px, dominated by one large 26 x 26 block.
// custom_rects: union of explicit rectangles.
// GeometryOverflow if the geometry does not fit the window with a 1-px rim.
TargetPattern generate_target(TargetKind kind, const GridSpec& grid, const std::vector<RectSpec>& rects = {});

} // namespace litho
