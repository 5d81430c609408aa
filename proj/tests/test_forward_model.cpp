#include "doctest.h"

#include <map>

#include "litho/forward_model.hpp"
#include "oracle_helpers.hpp"

using namespace litho;

namespace {

const SocsModel& paper_model(int n, int n0 = 10) {
    static std::map<std::pair<int, int>, SocsModel> cache;
    auto key = std::make_pair(n, n0);
    auto it = cache.find(key);
    if (it == cache.end()) {
        OpticalSystem sys(193.0, 1.0, 0.067);
        TccOperator tcc = build_tcc(sys, GridSpec(n, 12.5));
        it = cache.emplace(key, decompose_socs(tcc, n0)).first;
    }
    return it->second;
}

} // namespace

TEST_CASE("zero mask gives zero intensity and zero derivative fields") {
    const SocsModel& model = paper_model(8);
    ForwardEngine eng(model);
    IntensityBundle b = eng.intensity(PhaseField::zeros(model.grid));
    CHECK(max_abs(b.intensity) == 0.0);
    CHECK(max_abs(b.grad1) == 0.0);
    CHECK(max_abs(b.grad2) == 0.0);
}

TEST_CASE("intensity is quadratic: I(c u) = c^2 I(u)") {
    const SocsModel& model = paper_model(8);
    ForwardEngine eng(model);
    PhaseField u(model.grid, oracle::random_field(8, 61));
    IntensityBundle b1 = eng.intensity(u);
    for (double c : {0.25, 0.5, 0.9}) {
        PhaseField cu = u;
        for (size_t i = 0; i < cu.values.size(); ++i) cu.values[i] *= c;
        IntensityBundle bc = eng.intensity(cu);
        RealField want = b1.intensity;
        for (size_t i = 0; i < want.size(); ++i) want[i] *= c * c;
        CHECK(rel_l2_error(bc.intensity, want) < 1e-12);
    }
}

TEST_CASE("fft-path intensity equals the quadruple sum over the truncated operator") {
    const SocsModel& model = paper_model(8);
    ForwardEngine eng(model);
    auto H_trunc = [&](int a, int b) {
        complexd acc(0.0, 0.0);
        for (const auto& m : model.modes) acc += m.sigma * m.v[a] * std::conj(m.v[b]);
        return acc;
    };
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        PhaseField u(model.grid, oracle::random_binary_field(8, seed));
        IntensityBundle b = eng.intensity(u);
        RealField want = oracle::quadruple_sum_intensity(H_trunc, u.values, model.quadrature_weight);
        CHECK(rel_l2_error(b.intensity, want) < 1e-10);
    }
}

TEST_CASE("intensity is nonnegative up to rounding") {
    const SocsModel& model = paper_model(16);
    ForwardEngine eng(model);
    PhaseField u(model.grid, oracle::random_field(16, 77));
    IntensityBundle b = eng.intensity(u);
    CHECK(min_value(b.intensity) >= -1e-12 * max_value(b.intensity));
}

TEST_CASE("bilinearity: I(u+v) + I(u-v) = 2I(u) + 2I(v)") {
    const SocsModel& model = paper_model(8);
    ForwardEngine eng(model);
    PhaseField u(model.grid, oracle::random_field(8, 5)), v(model.grid, oracle::random_field(8, 6));
    PhaseField up = u, um = u;
    for (size_t i = 0; i < u.values.size(); ++i) {
        up.values[i] += v.values[i];
        um.values[i] -= v.values[i];
    }
    RealField lhs = eng.intensity(up).intensity;
    RealField rhs = eng.intensity(u).intensity;
    {
        RealField iv = eng.intensity(v).intensity, ium = eng.intensity(um).intensity;
        for (size_t i = 0; i < lhs.size(); ++i) {
            lhs[i] += ium[i];
            rhs[i] = 2.0 * rhs[i] + 2.0 * iv[i];
        }
    }
    CHECK(rel_l2_error(lhs, rhs) < 1e-10);
}

TEST_CASE("doubling the engine padding changes no value") {
    const SocsModel& model = paper_model(8);
    ForwardEngine e2(model), e4(model, 4 * 8);
    PhaseField u(model.grid, oracle::random_field(8, 91));
    CHECK(rel_l2_error(e4.intensity(u).intensity, e2.intensity(u).intensity) < 1e-12);
}

TEST_CASE("intensity decays toward the padded border") {
    // evaluate the full linear convolution: the outer 2-cell rim of the
    // padded domain must stay below the window maximum
    const SocsModel& model = paper_model(16);
    PhaseField u(model.grid, oracle::random_field(16, 33, 0.3, 1.0));
    const int m = 2 * 16 - 1;
    RealField ipad(m, m, 0.0);
    for (const auto& mode : model.modes) {
        ComplexField cm = conv_full(mode.v, to_complex(u.values));
        for (size_t i = 0; i < ipad.size(); ++i) ipad[i] += model.quadrature_weight * mode.sigma * std::norm(cm[i]);
    }
    double rim_max = 0.0, all_max = 0.0;
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
            all_max = std::max(all_max, ipad(r, c));
            if (r < 2 || r >= m - 2 || c < 2 || c >= m - 2) rim_max = std::max(rim_max, ipad(r, c));
        }
    CHECK(rim_max < all_max);
}

TEST_CASE("derivative fields: translation equivariance away from the border") {
    const SocsModel& model = paper_model(16);
    ForwardEngine eng(model);
    PhaseField u = PhaseField::zeros(model.grid);
    for (int r = 4; r < 10; ++r)
        for (int c = 4; c < 10; ++c) u.values(r, c) = 1.0;
    PhaseField us = PhaseField::zeros(model.grid);
    for (int r = 4; r < 10; ++r)
        for (int c = 4; c < 10; ++c) us.values(r + 1, c + 1) = 1.0;
    IntensityBundle b = eng.intensity(u), bs = eng.intensity(us);
    double scale = max_abs(b.grad1);
    for (int r = 3; r < 13; ++r)
        for (int c = 3; c < 13; ++c)
            CHECK(bs.grad1(r + 1, c + 1) == doctest::Approx(b.grad1(r, c)).epsilon(1e-9).scale(scale));
}

TEST_CASE("derivative fields match the stencil-on-convolution route exactly for interior-supported kernels") {
    // single synthetic mode whose kernel (and its stencil image) stays away
    // from the kernel window edge: the two algebraic routes (stencil on the
    // kernel vs stencil on the mode convolution) coincide in the interior
    const int n = 16;
    GridSpec grid(n, 12.5);
    SocsModel model;
    model.grid = grid;
    model.n0 = 1;
    model.quadrature_weight = 1.0;
    SocsMode mode;
    mode.sigma = 1.0;
    mode.v = ComplexField(n, n);
    for (int r = n / 4; r < 3 * n / 4; ++r)
        for (int c = n / 4; c < 3 * n / 4; ++c)
            mode.v(r, c) = complexd(std::sin(0.9 * r + 0.3 * c), std::cos(1.1 * c - 0.2 * r));
    populate_mode_kernels(mode);
    model.modes.push_back(std::move(mode));
    ForwardEngine eng(model);

    PhaseField u(grid, oracle::random_field(n, 12));
    IntensityBundle b = eng.intensity(u);
    ComplexField dc = diff_axis1(b.mode_convs[0]);
    const ComplexField& kernel_route = b.mode_dconvs[0][0];
    double scale = max_abs(dc);
    for (int r = 1; r < n - 1; ++r)
        for (int c = 0; c < n; ++c) CHECK(std::abs(kernel_route(r, c) - dc(r, c)) < 1e-12 * scale);
}

TEST_CASE("derivative fields track the stencil applied to assembled intensity") {
    // The mode-formula fields and the stencil applied to I(u) are different
    // discretizations: they differ by the discrete Leibniz defect and by the
    // kernel-window truncation of d*V_n. The measured agreement levels on
    // paper optics are pinned here; they tighten with the window size.
    {
        const SocsModel& model = paper_model(16);
        ForwardEngine eng(model);
        PhaseField u(model.grid, oracle::random_field(16, 7));
        IntensityBundle b = eng.intensity(u);
        CHECK(rel_l2_error(b.grad1, diff_axis1(b.intensity)) < 0.5);
        CHECK(rel_l2_error(b.grad2, diff_axis2(b.intensity)) < 0.5);
    }
    {
        const SocsModel& model = paper_model(32);
        ForwardEngine eng(model);
        PhaseField u(model.grid, oracle::random_field(32, 7));
        IntensityBundle b = eng.intensity(u);
        RealField s1 = diff_axis1(b.intensity);
        double num = 0.0, den = 0.0;
        for (int r = 4; r < 28; ++r)
            for (int c = 4; c < 28; ++c) {
                double d = b.grad1(r, c) - s1(r, c);
                num += d * d;
                den += s1(r, c) * s1(r, c);
            }
        CHECK(std::sqrt(num / den) < 0.15);
    }
}

TEST_CASE("gradient fields recomputable from the cached mode convolutions") {
    const SocsModel& model = paper_model(8);
    ForwardEngine eng(model);
    PhaseField u(model.grid, oracle::random_field(8, 21));
    IntensityBundle b = eng.intensity(u);
    auto grads = intensity_gradient_fields(model, b);
    CHECK(rel_l2_error(grads.first, b.grad1) == 0.0);
    CHECK(rel_l2_error(grads.second, b.grad2) == 0.0);
    // intensity itself recomputable from the cache
    RealField recomputed(8, 8, 0.0);
    for (int m = 0; m < model.n0; ++m)
        for (size_t i = 0; i < recomputed.size(); ++i)
            recomputed[i] += model.quadrature_weight * model.modes[m].sigma * std::norm(b.mode_convs[m][i]);
    CHECK(rel_l2_error(recomputed, b.intensity) < 1e-13);
}

TEST_CASE("directional derivative") {
    const SocsModel& model = paper_model(8);
    ForwardEngine eng(model);
    PhaseField u(model.grid, oracle::random_field(8, 41));
    IntensityBundle b = eng.intensity(u);

    SUBCASE("direction zero gives the zero field") {
        RealField d = eng.directional_derivative(b, RealField(8, 8, 0.0));
        CHECK(max_abs(d) == 0.0);
    }
    SUBCASE("Euler identity: DI(u)[u] = 2 I(u)") {
        RealField d = eng.directional_derivative(b, u.values);
        RealField want = b.intensity;
        for (size_t i = 0; i < want.size(); ++i) want[i] *= 2.0;
        CHECK(rel_l2_error(d, want) < 1e-12);
    }
    SUBCASE("matches the central-difference oracle") {
        RealField v = oracle::random_field(8, 42, -1.0, 1.0);
        RealField d = eng.directional_derivative(b, v);
        const double t = 1e-6;
        PhaseField up = u, um = u;
        for (size_t i = 0; i < v.size(); ++i) {
            up.values[i] += t * v[i];
            um.values[i] -= t * v[i];
        }
        RealField ip = eng.intensity(up).intensity, im = eng.intensity(um).intensity;
        RealField fd(8, 8);
        for (size_t i = 0; i < fd.size(); ++i) fd[i] = (ip[i] - im[i]) / (2.0 * t);
        CHECK(rel_l2_error(d, fd) < 1e-5);
    }
}

TEST_CASE("grid mismatch is rejected") {
    const SocsModel& model = paper_model(8);
    ForwardEngine eng(model);
    PhaseField wrong(GridSpec(16, 12.5), RealField(16, 16, 0.0));
    CHECK_THROWS_AS(eng.intensity(wrong), Error);
}
