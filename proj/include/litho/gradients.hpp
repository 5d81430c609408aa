#pragma once

#include <functional>

#include "litho/functionals.hpp"

namespace litho {

// All objective gradients route through two primitive adjoint assemblies,
// one per formula shape:
//   pointwise composite   sum_i f(I(u)(i))
//   gradient composite    sum_i g(|grad I(u)|^2(i), I(u)(i))
// Both produce the exact gradient of the discrete objective as implemented
// (verified against the central-difference oracle), using the adjoint kernels
// w_n and z_n of the SOCS model.

// gradient of sum_i f(I(u)(i)); fprime(i) = f'(I(u)(i)), pixel-dependent f allowed
RealField grad_pointwise_of_intensity(const ForwardEngine& engine, const IntensityBundle& bundle,
                                      const RealField& fprime);

// gradient of sum_i g(|grad I|^2, I); g1, g2 are the partials of g evaluated
// pointwise on the bundle
RealField grad_gradient_composite(const ForwardEngine& engine, const IntensityBundle& bundle, const RealField& g1,
                                  const RealField& g2);

// gradient of the full misfit distance (L^p part plus the a-weighted smoothed
// TV-difference part, chain-ruled through smooth_abs); exact for the discrete
// TV stencil via its skew-adjoint divergence form
RealField grad_misfit(const ForwardEngine& engine, const IntensityBundle& bundle, const TargetPattern& target,
                      const FunctionalConfig& cfg);

// gradient of the phase-field perimeter term (p = 2 only):
// c_p [ (1/(2 eps)) W'(u) - eps * (D1^2 + D2^2) u ]
RealField grad_modica_mortola(const PhaseField& u, const FunctionalConfig& cfg);

// gradient of the threshold-stability regularizer (requires gamma > 0)
RealField grad_regularizer(const ForwardEngine& engine, const IntensityBundle& bundle, const FunctionalConfig& cfg);

// weighted total, sharing one bundle across all terms
RealField grad_total(const PhaseField& u, const ForwardEngine& engine, const IntensityBundle& bundle,
                     const TargetPattern& target, const FunctionalConfig& cfg);

// Independent verification oracle: central differences
// (F(u + t e_i) - F(u - t e_i)) / (2t) per pixel. O(n^2) objective
// evaluations; desk scale only.
RealField fd_oracle(const std::function<double(const PhaseField&)>& objective, const PhaseField& u, double step);

} // namespace litho
