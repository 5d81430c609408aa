#include "litho/forward_model.hpp"

namespace litho {

ForwardEngine::ForwardEngine(const SocsModel& model, int pad) : model_(&model), eng_(model.grid.n, pad) {
    const int n0 = model.n0;
    v_spec_.reserve(n0);
    w_spec_.reserve(n0);
    dv_spec_.reserve(n0);
    z_spec_.reserve(n0);
    for (const auto& m : model.modes) {
        v_spec_.push_back(eng_.spectrum(m.v));
        w_spec_.push_back(eng_.spectrum(m.w));
        dv_spec_.push_back({eng_.spectrum(m.dv1), eng_.spectrum(m.dv2)});
        z_spec_.push_back({eng_.spectrum(m.dz1), eng_.spectrum(m.dz2)});
    }
}

IntensityBundle ForwardEngine::intensity(const PhaseField& u) const {
    require_same_grid(u.grid, model_->grid, "intensity");
    const int n = model_->grid.n;
    const double area_w = model_->quadrature_weight;

    IntensityBundle b;
    b.grid = model_->grid;
    b.intensity = RealField(n, n, 0.0);
    b.mode_convs.reserve(model_->n0);
    b.mode_dconvs.reserve(model_->n0);

    ComplexField uhat = eng_.spectrum(u.values);
    for (int m = 0; m < model_->n0; ++m) {
        ComplexField cm = eng_.conv_same(v_spec_[m], uhat);
        ComplexField g1 = eng_.conv_same(dv_spec_[m][0], uhat);
        ComplexField g2 = eng_.conv_same(dv_spec_[m][1], uhat);
        const double s = model_->modes[m].sigma;
        for (size_t i = 0; i < cm.size(); ++i) b.intensity[i] += area_w * s * std::norm(cm[i]);
        b.mode_convs.push_back(std::move(cm));
        b.mode_dconvs.push_back({std::move(g1), std::move(g2)});
    }
    auto grads = intensity_gradient_fields(*model_, b);
    b.grad1 = std::move(grads.first);
    b.grad2 = std::move(grads.second);
    return b;
}

std::pair<RealField, RealField> intensity_gradient_fields(const SocsModel& model, const IntensityBundle& bundle) {
    require_same_grid(model.grid, bundle.grid, "intensity_gradient_fields");
    const int n = model.grid.n;
    const double area_w = model.quadrature_weight;
    RealField g1(n, n, 0.0), g2(n, n, 0.0);
    for (int m = 0; m < model.n0; ++m) {
        const double s = model.modes[m].sigma;
        const ComplexField& cm = bundle.mode_convs[m];
        const ComplexField& d1 = bundle.mode_dconvs[m][0];
        const ComplexField& d2 = bundle.mode_dconvs[m][1];
        for (size_t i = 0; i < cm.size(); ++i) {
            const complexd cc = std::conj(cm[i]);
            g1[i] += area_w * s * 2.0 * (d1[i] * cc).real();
            g2[i] += area_w * s * 2.0 * (d2[i] * cc).real();
        }
    }
    return {std::move(g1), std::move(g2)};
}

RealField ForwardEngine::directional_derivative(const IntensityBundle& at_u, const RealField& v) const {
    require_same_grid(at_u.grid, model_->grid, "directional_derivative");
    if (v.rows() != model_->grid.n || v.cols() != model_->grid.n)
        fail(ErrorCode::grid_mismatch, "directional_derivative: direction field shape");
    const int n = model_->grid.n;
    const double area_w = model_->quadrature_weight;
    RealField out(n, n, 0.0);
    ComplexField vhat = eng_.spectrum(v);
    for (int m = 0; m < model_->n0; ++m) {
        ComplexField cv = eng_.conv_same(v_spec_[m], vhat);
        const double s = model_->modes[m].sigma;
        const ComplexField& cu = at_u.mode_convs[m];
        for (size_t i = 0; i < out.size(); ++i) out[i] += area_w * s * 2.0 * (cu[i] * std::conj(cv[i])).real();
    }
    return out;
}

} // namespace litho
