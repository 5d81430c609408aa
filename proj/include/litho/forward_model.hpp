#pragma once

#include <array>

#include "litho/fft.hpp"
#include "litho/optics.hpp"

namespace litho {

// Mask variable on the computational window, values in [0,1] (the box
// constraint is maintained by the optimizer's projection, not enforced here:
// finite-difference probes and algebraic identity tests evaluate the forward
// model slightly outside the box).
struct PhaseField {
    GridSpec grid;
    RealField values;

    PhaseField() = default;
    PhaseField(const GridSpec& g, RealField v) : grid(g), values(std::move(v)) {
        if (values.rows() != grid.n || values.cols() != grid.n)
            fail(ErrorCode::grid_mismatch, "PhaseField: values must be n x n");
    }
    static PhaseField zeros(const GridSpec& g) { return PhaseField(g, RealField(g.n, g.n, 0.0)); }
};

// Aerial intensity I(u) = dx^2*dy^2 * sum_n sigma_n |(V_n * u)|^2 together
// with its two spatial derivative fields and the per-mode convolutions every
// gradient formula reuses. grad1/grad2 are assembled from the derivative
// kernels: d_l I = dx^2*dy^2 * 2 Re sum_n sigma_n (d_l V_n * u) conj(V_n * u),
// in raw intensity units per pixel.
struct IntensityBundle {
    GridSpec grid;
    RealField intensity;
    RealField grad1, grad2;
    std::vector<ComplexField> mode_convs;                  // V_n * u
    std::vector<std::array<ComplexField, 2>> mode_dconvs;  // d_l V_n * u
};

// Evaluation engine bound to one SocsModel: precomputes the padded spectra of
// all mode kernels so a full intensity evaluation costs one forward FFT of u
// plus 3 inverse FFTs per mode. The model must outlive the engine. All
// methods are const and the engine itself holds no evaluation state, but the
// underlying FFT scratch buffers make concurrent calls on one instance
// unsafe; use one engine per thread.
class ForwardEngine {
public:
    explicit ForwardEngine(const SocsModel& model, int pad = 0);

    const SocsModel& model() const { return *model_; }
    const ConvEngine& conv() const { return eng_; }

    IntensityBundle intensity(const PhaseField& u) const;

    // Gateaux derivative field of I at u in direction v:
    // dx^2*dy^2 * 2 Re sum_n sigma_n (V_n * u) conj(V_n * v)
    RealField directional_derivative(const IntensityBundle& at_u, const RealField& v) const;

    const ComplexField& v_spectrum(int m) const { return v_spec_[m]; }
    const ComplexField& w_spectrum(int m) const { return w_spec_[m]; }
    const ComplexField& dv_spectrum(int m, int axis) const { return dv_spec_[m][axis]; }
    const ComplexField& z_spectrum(int m, int axis) const { return z_spec_[m][axis]; }

private:
    const SocsModel* model_;
    ConvEngine eng_;
    std::vector<ComplexField> v_spec_, w_spec_;
    std::vector<std::array<ComplexField, 2>> dv_spec_, z_spec_;
};

// Derivative fields recomputed from the cached per-mode convolutions of a
// bundle (pure pointwise assembly; no transforms).
std::pair<RealField, RealField> intensity_gradient_fields(const SocsModel& model, const IntensityBundle& bundle);

} // namespace litho
