#pragma once

#include <memory>

#include "litho/field.hpp"
#include "litho/grid.hpp"

namespace litho {

// Stencil operators used across the whole code base: central differences with
// zero extension, in units of 1/pixel. Their l2 adjoints are their negatives
// (skew-adjoint), which the gradient assemblies rely on.
template <typename T>
Field<T> diff_axis1(const Field<T>& f) {
    Field<T> out(f.rows(), f.cols());
    for (int r = 0; r < f.rows(); ++r)
        for (int c = 0; c < f.cols(); ++c) out(r, c) = (f.at0(r + 1, c) - f.at0(r - 1, c)) * 0.5;
    return out;
}

template <typename T>
Field<T> diff_axis2(const Field<T>& f) {
    Field<T> out(f.rows(), f.cols());
    for (int r = 0; r < f.rows(); ++r)
        for (int c = 0; c < f.cols(); ++c) out(r, c) = (f.at0(r, c + 1) - f.at0(r, c - 1)) * 0.5;
    return out;
}

// Index reflection i -> n-1-i per axis: the array realization of x -> -x on
// the window (cell centers sit symmetrically around the reflection point),
// identical to flipping both axes. Maps the window onto itself for any n.
template <typename T>
Field<T> reflect(const Field<T>& f) {
    Field<T> out(f.rows(), f.cols());
    for (int r = 0; r < f.rows(); ++r)
        for (int c = 0; c < f.cols(); ++c) out(r, c) = f(f.rows() - 1 - r, f.cols() - 1 - c);
    return out;
}

inline ComplexField conj_reflect(const ComplexField& f) {
    ComplexField out = reflect(f);
    for (size_t i = 0; i < out.size(); ++i) out[i] = std::conj(out[i]);
    return out;
}

// FFT convolution engine for one window size n. All convolutions are linear
// (zero-padded to pad >= 2n-1, default 2n), never circular. Two same-window
// extractions of the full (2n-1)-sized result exist:
//   forward  conv_same          rows/cols [n/2, n/2 + n)
//   adjoint  conv_same_adjoint  rows/cols [(n-1)/2, (n-1)/2 + n)
// They coincide for odd n. The pair makes the l2 adjoint exact to rounding:
//   <conv_same(v, x), y> == <x, conv_same_adjoint(conj_reflect(v), y)>
// which is what every gradient assembly relies on.
class ConvEngine {
public:
    explicit ConvEngine(int n, int pad = 0);
    ~ConvEngine();
    ConvEngine(const ConvEngine&) = delete;
    ConvEngine& operator=(const ConvEngine&) = delete;

    int n() const { return n_; }
    int pad() const { return pad_; }

    // forward transform of an n x n field zero-padded to pad x pad
    ComplexField spectrum(const ComplexField& a) const;
    ComplexField spectrum(const RealField& a) const;

    // forward transform of an already pad x pad array (no padding, no scaling)
    ComplexField dft_pad(const ComplexField& a) const;

    // inverse transform of a pad x pad spectrum; extraction windows of the
    // linear convolution result
    ComplexField inverse_same(const ComplexField& spec) const;          // n x n at offset n/2
    ComplexField inverse_same_adjoint(const ComplexField& spec) const;  // n x n at offset (n-1)/2
    ComplexField inverse_full(const ComplexField& spec) const;          // (2n-1) x (2n-1)

    ComplexField conv_same(const ComplexField& kernel_spec, const ComplexField& x_spec) const;
    ComplexField conv_same_adjoint(const ComplexField& kernel_spec, const ComplexField& x_spec) const;

private:
    int n_ = 0, pad_ = 0;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// One-shot helpers (create a throwaway engine); fine for tests and setup code.
ComplexField conv_full(const ComplexField& a, const ComplexField& b);
ComplexField conv_same(const ComplexField& kernel, const ComplexField& x);
ComplexField conv_same_adjoint(const ComplexField& kernel, const ComplexField& x);

} // namespace litho
