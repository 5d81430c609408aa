#include "doctest.h"

#include <map>

#include "litho/analysis.hpp"
#include "oracle_helpers.hpp"

using namespace litho;

namespace {

IntensityBundle synthetic_bundle(const GridSpec& grid, double intensity) {
    IntensityBundle b;
    b.grid = grid;
    b.intensity = RealField(grid.n, grid.n, intensity);
    b.grad1 = RealField(grid.n, grid.n, 0.0);
    b.grad2 = RealField(grid.n, grid.n, 0.0);
    return b;
}

const SocsModel& paper_model(int n) {
    static std::map<int, SocsModel> cache;
    auto it = cache.find(n);
    if (it == cache.end()) {
        OpticalSystem sys(193.0, 1.0, 0.067);
        TccOperator tcc = build_tcc(sys, GridSpec(n, 12.5));
        it = cache.emplace(n, decompose_socs(tcc, 10)).first;
    }
    return it->second;
}

} // namespace

TEST_CASE("exposure thresholding") {
    GridSpec grid(8, 12.5);

    SUBCASE("zero intensity exposes nothing") {
        RealField e = expose(synthetic_bundle(grid, 0.0), 1.0);
        CHECK(sum(e) == 0.0);
    }
    SUBCASE("hvar = 0.5 shifts the threshold to exactly 1.005 h") {
        IntensityBundle b = synthetic_bundle(grid, 0.0);
        b.intensity(2, 2) = 1.0049;
        b.intensity(3, 3) = 1.0051;
        RealField e = expose(b, 1.0, 0.5);
        CHECK(e(2, 2) == 0.0);
        CHECK(e(3, 3) == 1.0);
        // strict inequality at the exact level
        IntensityBundle c = synthetic_bundle(grid, 0.0);
        c.intensity(4, 4) = 1.005;
        CHECK(expose(c, 1.0, 0.5)(4, 4) == 0.0);
    }
    SUBCASE("suplevel sets are nested in hvar") {
        GridSpec g32(32, 12.5);
        IntensityBundle b = synthetic_bundle(g32, 0.0);
        for (int r = 0; r < 32; ++r)
            for (int c = 0; c < 32; ++c)
                b.intensity(r, c) = 2.0 * std::exp(-0.02 * ((r - 16.0) * (r - 16.0) + (c - 16.0) * (c - 16.0)));
        RealField e0 = expose(b, 1.0, 0.0), e25 = expose(b, 1.0, 2.5);
        for (size_t i = 0; i < e0.size(); ++i)
            if (e25[i] > 0.5) CHECK(e0[i] > 0.5);
        CHECK(sum(e25) < sum(e0));
    }
}

TEST_CASE("default threshold") {
    const SocsModel& model = paper_model(16);
    ForwardEngine engine(model);

    SUBCASE("degenerate target is rejected") {
        TargetPattern empty = make_target_pattern(model.grid, RealField(16, 16, 0.0));
        CHECK_THROWS_AS(default_threshold(engine, empty), Error);
    }
    SUBCASE("matches 40% of the quadruple-sum peak") {
        TargetPattern target = generate_target(TargetKind::custom_rects, model.grid, {{5, 5, 6, 6}});
        auto H_trunc = [&](int a, int b) {
            complexd acc(0.0, 0.0);
            for (const auto& m : model.modes) acc += m.sigma * m.v[a] * std::conj(m.v[b]);
            return acc;
        };
        RealField i0 = oracle::quadruple_sum_intensity(H_trunc, target.indicator, model.quadrature_weight);
        CHECK(default_threshold(engine, target) == doctest::Approx(0.4 * max_value(i0)).epsilon(1e-10));
    }
    SUBCASE("doubling the eigenvalues doubles the threshold") {
        TargetPattern target = generate_target(TargetKind::custom_rects, model.grid, {{5, 5, 6, 6}});
        SocsModel doubled = model;
        for (auto& m : doubled.modes) m.sigma *= 2.0;
        ForwardEngine e2(doubled);
        CHECK(default_threshold(e2, target) == doctest::Approx(2.0 * default_threshold(engine, target)).epsilon(1e-12));
    }
}

TEST_CASE("stability metric") {
    GridSpec grid(8, 12.5);

    SUBCASE("critical pixel has d = 0") {
        IntensityBundle b = synthetic_bundle(grid, 0.0);
        b.intensity(4, 4) = 1.0;
        StabilityMetric sm = stability_metric(b, 1.0);
        CHECK(sm.d_field(4, 4) == 0.0);
        CHECK(sm.d_min_pct == 0.0);
    }
    SUBCASE("I = 2h with zero gradient gives d = 1 everywhere") {
        IntensityBundle b = synthetic_bundle(grid, 2.0);
        StabilityMetric sm = stability_metric(b, 1.0);
        for (size_t i = 0; i < sm.d_field.size(); ++i) CHECK(sm.d_field[i] == 1.0);
        CHECK(sm.d_min_pct == 100.0);
    }
    SUBCASE("d_min is 1-Lipschitz in the normalized threshold shift") {
        GridSpec g32(32, 12.5);
        IntensityBundle b = synthetic_bundle(g32, 0.0);
        for (int r = 0; r < 32; ++r)
            for (int c = 0; c < 32; ++c)
                b.intensity(r, c) = 1.6 * std::exp(-0.01 * ((r - 16.0) * (r - 16.0) + (c - 16.0) * (c - 16.0)));
        b.grad1 = diff_axis1(b.intensity);
        b.grad2 = diff_axis2(b.intensity);
        std::vector<double> hvars = {-2.0, -0.5, 0.0, 0.5, 2.5, 3.5};
        std::vector<double> dmins;
        for (double hv : hvars) dmins.push_back(stability_metric(b, 1.0, 1.0 + hv / 100.0).d_min_pct);
        for (size_t i = 0; i + 1 < hvars.size(); ++i)
            for (size_t j = i + 1; j < hvars.size(); ++j)
                CHECK(std::abs(dmins[i] - dmins[j]) <= std::abs(hvars[i] - hvars[j]) + 1e-9);
    }
}

TEST_CASE("topology summary") {
    SUBCASE("full foreground") {
        RealField full(8, 8, 1.0);
        auto t = topology_summary(full);
        CHECK(t.first == 1);
        CHECK(t.second == 0);
    }
    SUBCASE("square with an interior hole") {
        RealField f(10, 10, 0.0);
        for (int r = 2; r < 8; ++r)
            for (int c = 2; c < 8; ++c) f(r, c) = 1.0;
        f(5, 5) = 0.0;
        auto t = topology_summary(f);
        CHECK(t.first == 1);
        CHECK(t.second == 1);
    }
    SUBCASE("two disjoint squares") {
        RealField f(12, 12, 0.0);
        for (int r = 1; r < 4; ++r)
            for (int c = 1; c < 4; ++c) f(r, c) = 1.0;
        for (int r = 7; r < 10; ++r)
            for (int c = 7; c < 10; ++c) f(r, c) = 1.0;
        auto t = topology_summary(f);
        CHECK(t.first == 2);
        CHECK(t.second == 0);
    }
    SUBCASE("diagonal touch is one component (8-connectivity)") {
        RealField f(6, 6, 0.0);
        f(1, 1) = f(2, 2) = 1.0;
        CHECK(topology_summary(f).first == 1);
    }
    SUBCASE("hole count is translation invariant in the interior") {
        RealField f(16, 16, 0.0);
        for (int r = 2; r < 9; ++r)
            for (int c = 2; c < 9; ++c) f(r, c) = 1.0;
        f(5, 5) = f(5, 6) = 0.0;
        auto t0 = topology_summary(f);
        RealField g(16, 16, 0.0);
        for (int r = 0; r < 16; ++r)
            for (int c = 0; c < 16; ++c)
                if (f(r, c) > 0.5 && r + 3 < 16 && c + 4 < 16) g(r + 3, c + 4) = 1.0;
        auto t1 = topology_summary(g);
        CHECK(t0.first == t1.first);
        CHECK(t0.second == t1.second);
    }
}

TEST_CASE("pixel error") {
    GridSpec grid(16, 12.5);
    TargetPattern target = generate_target(TargetKind::custom_rects, grid, {{5, 5, 6, 6}});
    CHECK(pixel_error(target.indicator, target.indicator) == 0);
    RealField shifted(16, 16, 0.0);
    for (int r = 5; r < 11; ++r)
        for (int c = 6; c < 12; ++c) shifted(r, c) = 1.0;
    CHECK(pixel_error(shifted, target.indicator) == 12); // one-column shift of a 6x6 square
}

TEST_CASE("threshold sweep") {
    GridSpec grid(32, 12.5);
    TargetPattern target = generate_target(TargetKind::custom_rects, grid, {{10, 10, 12, 12}});
    IntensityBundle b = synthetic_bundle(grid, 0.0);
    for (int r = 0; r < 32; ++r)
        for (int c = 0; c < 32; ++c)
            b.intensity(r, c) = 1.6 * std::exp(-0.01 * ((r - 16.0) * (r - 16.0) + (c - 16.0) * (c - 16.0)));
    b.grad1 = diff_axis1(b.intensity);
    b.grad2 = diff_axis2(b.intensity);

    auto reports = threshold_sweep(b, 1.0, {-0.5, 0.0, 3.5}, target);
    REQUIRE(reports.size() == 3);
    CHECK(reports[0].hvar_percent == -0.5);
    CHECK(reports[2].hvar_percent == 3.5);
    // nesting: higher threshold exposes less
    CHECK(sum(reports[2].exposed) <= sum(reports[1].exposed));
    CHECK(sum(reports[1].exposed) <= sum(reports[0].exposed));

    // a single-entry sweep is the plain report
    auto single = threshold_sweep(b, 1.0, {0.0}, target);
    ExposureReport direct = exposure_report(b, 1.0, 0.0, target);
    CHECK(single[0].pixel_err == direct.pixel_err);
    CHECK(single[0].d_min_pct == direct.d_min_pct);
    CHECK(single[0].components == direct.components);
    CHECK(single[0].holes == direct.holes);
}

TEST_CASE("dilation") {
    RealField f(8, 8, 0.0);
    f(4, 4) = 1.0;
    RealField d = dilate(f, 1);
    int count = 0;
    for (size_t i = 0; i < d.size(); ++i) count += d[i] > 0.5 ? 1 : 0;
    CHECK(count == 9);
    RealField d0 = dilate(f, 0);
    CHECK(sum(d0) == 1.0);
}
