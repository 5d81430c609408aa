#include "litho/fft.hpp"

#include <fftw3.h>

#include <cstring>

namespace litho {

struct ConvEngine::Impl {
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    int pad = 0;

    explicit Impl(int pad_) : pad(pad_) {
        buf = fftw_alloc_complex(size_t(pad) * pad);
        // FFTW_ESTIMATE keeps plan selection deterministic across runs
        fwd = fftw_plan_dft_2d(pad, pad, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_2d(pad, pad, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Impl() {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }
};

ConvEngine::ConvEngine(int n, int pad) : n_(n), pad_(pad > 0 ? pad : 2 * n) {
    if (pad_ < 2 * n - 1) fail(ErrorCode::invalid_config, "ConvEngine: pad must be >= 2n-1");
    impl_ = std::make_unique<Impl>(pad_);
}

ConvEngine::~ConvEngine() = default;

namespace {

void load_padded(fftw_complex* dst, int pad, const complexd* src, int rows, int cols) {
    std::memset(dst, 0, sizeof(fftw_complex) * size_t(pad) * pad);
    for (int r = 0; r < rows; ++r)
        std::memcpy(dst + size_t(r) * pad, src + size_t(r) * cols, sizeof(fftw_complex) * cols);
}

} // namespace

ComplexField ConvEngine::spectrum(const ComplexField& a) const {
    if (a.rows() != n_ || a.cols() != n_) fail(ErrorCode::grid_mismatch, "spectrum: field is not n x n");
    load_padded(impl_->buf, pad_, a.data(), a.rows(), a.cols());
    fftw_execute(impl_->fwd);
    ComplexField out(pad_, pad_);
    std::memcpy(static_cast<void*>(out.data()), impl_->buf, sizeof(fftw_complex) * out.size()); // layout-compatible
    return out;
}

ComplexField ConvEngine::spectrum(const RealField& a) const {
    return spectrum(to_complex(a));
}

ComplexField ConvEngine::dft_pad(const ComplexField& a) const {
    if (a.rows() != pad_ || a.cols() != pad_) fail(ErrorCode::grid_mismatch, "dft_pad: array is not pad x pad");
    std::memcpy(impl_->buf, a.data(), sizeof(fftw_complex) * a.size());
    fftw_execute(impl_->fwd);
    ComplexField out(pad_, pad_);
    std::memcpy(static_cast<void*>(out.data()), impl_->buf, sizeof(fftw_complex) * out.size()); // layout-compatible
    return out;
}

namespace {
constexpr const char* kBadSpectrum = "inverse transform: bad spectrum shape";
}

ComplexField ConvEngine::inverse_same(const ComplexField& spec) const {
    if (spec.rows() != pad_ || spec.cols() != pad_) fail(ErrorCode::grid_mismatch, kBadSpectrum);
    std::memcpy(impl_->buf, spec.data(), sizeof(fftw_complex) * spec.size());
    fftw_execute(impl_->bwd);
    const double scale = 1.0 / (double(pad_) * pad_);
    const int off = n_ / 2;
    ComplexField out(n_, n_);
    for (int r = 0; r < n_; ++r)
        for (int c = 0; c < n_; ++c) {
            const fftw_complex& v = impl_->buf[size_t(r + off) * pad_ + (c + off)];
            out(r, c) = complexd(v[0] * scale, v[1] * scale);
        }
    return out;
}

ComplexField ConvEngine::inverse_same_adjoint(const ComplexField& spec) const {
    if (spec.rows() != pad_ || spec.cols() != pad_) fail(ErrorCode::grid_mismatch, kBadSpectrum);
    std::memcpy(impl_->buf, spec.data(), sizeof(fftw_complex) * spec.size());
    fftw_execute(impl_->bwd);
    const double scale = 1.0 / (double(pad_) * pad_);
    const int off = (n_ - 1) / 2;
    ComplexField out(n_, n_);
    for (int r = 0; r < n_; ++r)
        for (int c = 0; c < n_; ++c) {
            const fftw_complex& v = impl_->buf[size_t(r + off) * pad_ + (c + off)];
            out(r, c) = complexd(v[0] * scale, v[1] * scale);
        }
    return out;
}

ComplexField ConvEngine::inverse_full(const ComplexField& spec) const {
    if (spec.rows() != pad_ || spec.cols() != pad_) fail(ErrorCode::grid_mismatch, kBadSpectrum);
    std::memcpy(impl_->buf, spec.data(), sizeof(fftw_complex) * spec.size());
    fftw_execute(impl_->bwd);
    const double scale = 1.0 / (double(pad_) * pad_);
    const int m = 2 * n_ - 1;
    ComplexField out(m, m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
            const fftw_complex& v = impl_->buf[size_t(r) * pad_ + c];
            out(r, c) = complexd(v[0] * scale, v[1] * scale);
        }
    return out;
}

ComplexField ConvEngine::conv_same(const ComplexField& kernel_spec, const ComplexField& x_spec) const {
    ComplexField prod(pad_, pad_);
    for (size_t i = 0; i < prod.size(); ++i) prod[i] = kernel_spec[i] * x_spec[i];
    return inverse_same(prod);
}

ComplexField ConvEngine::conv_same_adjoint(const ComplexField& kernel_spec, const ComplexField& x_spec) const {
    ComplexField prod(pad_, pad_);
    for (size_t i = 0; i < prod.size(); ++i) prod[i] = kernel_spec[i] * x_spec[i];
    return inverse_same_adjoint(prod);
}

ComplexField conv_full(const ComplexField& a, const ComplexField& b) {
    if (!a.same_shape(b)) fail(ErrorCode::grid_mismatch, "conv_full: shape mismatch");
    ConvEngine eng(a.rows());
    ComplexField sa = eng.spectrum(a), sb = eng.spectrum(b);
    for (size_t i = 0; i < sa.size(); ++i) sa[i] *= sb[i];
    return eng.inverse_full(sa);
}

ComplexField conv_same(const ComplexField& kernel, const ComplexField& x) {
    if (!kernel.same_shape(x)) fail(ErrorCode::grid_mismatch, "conv_same: shape mismatch");
    ConvEngine eng(kernel.rows());
    return eng.conv_same(eng.spectrum(kernel), eng.spectrum(x));
}

ComplexField conv_same_adjoint(const ComplexField& kernel, const ComplexField& x) {
    if (!kernel.same_shape(x)) fail(ErrorCode::grid_mismatch, "conv_same_adjoint: shape mismatch");
    ConvEngine eng(kernel.rows());
    return eng.conv_same_adjoint(eng.spectrum(kernel), eng.spectrum(x));
}

} // namespace litho
