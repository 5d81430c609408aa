#pragma once

#include "litho/errors.hpp"

namespace litho {

// Square computational window subdivided into n x n cells of side dx_nm.
// Kernels are sampled at (i - n/2) * dx_nm per axis (0-based i), so the origin
// is a sample point. Kernel reflection x -> -x is realized as the array flip
// i -> n-1-i (see reflect() in fft.hpp), whose pairing with the two
// same-window extractions makes convolution adjoints exact.
struct GridSpec {
    int n = 0;
    double dx_nm = 0.0;

    GridSpec() = default;
    GridSpec(int n_, double dx) : n(n_), dx_nm(dx) {
        if (n < 4) fail(ErrorCode::invalid_config, "grid: n must be >= 4");
        if (!(dx_nm > 0.0)) fail(ErrorCode::invalid_config, "grid: dx_nm must be > 0");
    }

    double extent_nm() const { return n * dx_nm; }
    int center() const { return n / 2; }
    // physical coordinate of cell center along one axis
    double coord(int i) const { return (i - center()) * dx_nm; }

    bool operator==(const GridSpec& o) const { return n == o.n && dx_nm == o.dx_nm; }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (a != b) fail(ErrorCode::grid_mismatch, std::string(where) + ": grid mismatch");
}

} // namespace litho
