#include "doctest.h"

#include <Eigen/Dense>
#include <filesystem>

#include "litho/optics.hpp"
#include "oracle_helpers.hpp"

using namespace litho;

namespace {

OpticalSystem paper_optics() { return OpticalSystem(193.0, 1.0, 0.067); }

Eigen::MatrixXcd materialize(const TccOperator& tcc) {
    const int dim = tcc.grid().n * tcc.grid().n;
    Eigen::MatrixXcd H(dim, dim);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) H(a, b) = tcc.entry(a, b);
    return H;
}

} // namespace

TEST_CASE("derived optical constants") {
    OpticalSystem sys = paper_optics();
    CHECK(sys.k() * sys.lambda_nm == doctest::Approx(2.0 * M_PI).epsilon(1e-15));
    const double q = sys.k() * sys.sigma_c * sys.na;
    CHECK(sys.beta() * q * q == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    // beta for lambda=193, NA=1, sigma=0.067
    CHECK(sys.beta() == doctest::Approx(1.457e5).epsilon(1e-3));
    CHECK_THROWS_AS(OpticalSystem(-1.0, 1.0, 0.1), Error);
}

TEST_CASE("psf center value and decay") {
    // k*NA = 1: lambda = 2*pi, NA = 1
    OpticalSystem unit(2.0 * M_PI, 1.0, 0.5);
    CHECK(unit.k() * unit.na == doctest::Approx(1.0));
    CHECK(eval_psf(unit, 0.0, 0.0) == doctest::Approx(1.0 / (4.0 * M_PI)).epsilon(1e-12));
    // continuity across the series/Bessel switch
    CHECK(eval_psf(unit, 1e-4, 0.0) == doctest::Approx(eval_psf(unit, 1.01e-4, 0.0)).epsilon(1e-6));

    OpticalSystem sys = paper_optics();
    const double kna = sys.k() * sys.na;
    const double far = 1e3 / kna;
    CHECK(std::abs(eval_psf(sys, far, 0.0)) < 1e-2 * eval_psf(sys, 0.0, 0.0));
}

TEST_CASE("psf transform approximates the band-limit disk indicator") {
    OpticalSystem sys = paper_optics();
    const double kna = sys.k() * sys.na;
    const int N = 512; // window large enough that truncation ringing sits below the bound
    const double dx = 12.5;
    GridSpec grid(N, dx);

    ComplexField samples(N, N);
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) samples(r, c) = eval_psf(sys, grid.coord(r), grid.coord(c));

    ConvEngine eng(N / 2, N); // pad == N: plain N-point DFT via dft_pad
    ComplexField spec = eng.dft_pad(samples);

    // continuous transform: dx^2 * e^{i w . x0} * DFT, with x0 = -c*dx
    const int c0 = N / 2;
    const double dw = 2.0 * M_PI / (N * dx);
    double max_dev = 0.0;
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N; ++c) {
            const int m1 = r < N / 2 ? r : r - N; // centered frequency index
            const int m2 = c < N / 2 ? c : c - N;
            const double w = std::hypot(m1 * dw, m2 * dw);
            // skip a 2-bin rim around the circle |w| = k*NA
            if (std::abs(w - kna) < 2.0 * dw) continue;
            const double phase = 2.0 * M_PI * (double(m1) + double(m2)) * c0 / N;
            const complexd val = dx * dx * std::polar(1.0, phase) * spec(r, c);
            const double want = w < kna ? 1.0 : 0.0;
            max_dev = std::max(max_dev, std::abs(val.real() - want));
        }
    CHECK(max_dev < 0.05);
}

TEST_CASE("mutual intensity closed form") {
    OpticalSystem sys = paper_optics();
    CHECK(eval_mutual_intensity_approx(sys, 0.0, 0.0) == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-12));

    // quadrature oracle for the defining transform integral
    const double q = sys.k() * sys.sigma_c * sys.na;
    const double beta = sys.beta();
    auto quadrature = [&](double x1, double x2) {
        const double L = 6.5 / std::sqrt(beta);
        const int m = 400;
        const double hstep = 2.0 * L / m;
        double acc = 0.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                const double xi1 = -L + (i + 0.5) * hstep;
                const double xi2 = -L + (j + 0.5) * hstep;
                acc += std::exp(-beta * (xi1 * xi1 + xi2 * xi2)) * std::cos(xi1 * x1 + xi2 * x2);
            }
        return acc * hstep * hstep / (M_PI * q * q);
    };
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> pos(-300.0, 300.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double x1 = pos(rng), x2 = pos(rng);
        const double closed = eval_mutual_intensity_approx(sys, x1, x2);
        CHECK(quadrature(x1, x2) == doctest::Approx(closed).epsilon(1e-6));
    }
}

TEST_CASE("coherent limit: J flattens as sigma_c -> 0") {
    OpticalSystem nearly(193.0, 1.0, 1e-3);
    const double at0 = eval_mutual_intensity_approx(nearly, 0.0, 0.0);
    for (double r : {25.0, 50.0, 100.0}) {
        CHECK(std::abs(eval_mutual_intensity_approx(nearly, r, 0.0) - at0) < 0.01 * at0);
        CHECK(std::abs(eval_mutual_intensity_approx(nearly, 0.0, r) - at0) < 0.01 * at0);
    }
}

TEST_CASE("tcc is hermitian and positive semi-definite (n=8)") {
    GridSpec grid(8, 12.5);
    TccOperator tcc = build_tcc(paper_optics(), grid);
    Eigen::MatrixXcd H = materialize(tcc);
    double max_h = 0.0, max_asym = 0.0;
    for (int a = 0; a < H.rows(); ++a)
        for (int b = 0; b < H.cols(); ++b) {
            max_h = std::max(max_h, std::abs(H(a, b)));
            max_asym = std::max(max_asym, std::abs(H(a, b) - std::conj(H(b, a))));
        }
    CHECK(max_asym < 1e-12 * max_h);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    const double sigma1 = es.eigenvalues().maxCoeff();
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * sigma1);
}

TEST_CASE("dense materialization refuses large grids") {
    CHECK_THROWS_AS(build_tcc(paper_optics(), GridSpec(64, 12.5), TccForm::dense), Error);
}

TEST_CASE("fully coherent limit gives a rank-1 operator with v1 ~ K") {
    GridSpec grid(8, 12.5);
    OpticalSystem sys = paper_optics();
    TccOperator tcc = build_tcc(sys, grid, TccForm::dense, /*unit_mutual_intensity=*/true);
    SocsModel model = decompose_socs(tcc, 2);

    double k_sq = 0.0;
    RealField K(8, 8);
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) {
            K(r, c) = eval_psf(sys, grid.coord(r), grid.coord(c));
            k_sq += K(r, c) * K(r, c);
        }
    const double w = std::pow(grid.dx_nm, 4);
    CHECK(model.modes[0].sigma == doctest::Approx(k_sq * w).epsilon(1e-10));
    CHECK(model.modes[1].sigma <= 1e-12 * model.modes[0].sigma);

    // v1 proportional to K: normalized overlap has unit modulus
    complexd overlap(0.0, 0.0);
    for (size_t i = 0; i < K.size(); ++i) overlap += K[i] * std::conj(model.modes[0].v[i]);
    CHECK(std::abs(overlap) / std::sqrt(k_sq) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("full-rank reassembly reproduces H entrywise (n=8)") {
    GridSpec grid(8, 12.5);
    TccOperator tcc = build_tcc(paper_optics(), grid);
    SocsModel model = decompose_socs(tcc, 64);

    double max_h = 0.0, max_err = 0.0;
    for (int a = 0; a < 64; ++a)
        for (int b = 0; b < 64; ++b) {
            complexd acc(0.0, 0.0);
            for (const auto& m : model.modes) acc += m.sigma * m.v[a] * std::conj(m.v[b]);
            max_h = std::max(max_h, std::abs(tcc.entry(a, b)));
            max_err = std::max(max_err, std::abs(acc - tcc.entry(a, b)));
        }
    CHECK(max_err < 1e-8 * max_h);
}

TEST_CASE("truncation error equals the tail eigenvalue ratio (n=8, n0=10)") {
    GridSpec grid(8, 12.5);
    TccOperator tcc = build_tcc(paper_optics(), grid);
    Eigen::MatrixXcd H = materialize(tcc);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H); // dense spectrum oracle
    Eigen::VectorXd lam = es.eigenvalues();

    SocsModel model = decompose_socs(tcc, 10);
    Eigen::MatrixXcd Ht = Eigen::MatrixXcd::Zero(64, 64);
    for (const auto& m : model.modes) {
        Eigen::VectorXcd v(64);
        for (int i = 0; i < 64; ++i) v[i] = m.v[i];
        Ht += m.sigma * v * v.adjoint();
    }
    const double fro_err = (H - Ht).norm() / H.norm();
    double tail = 0.0, all = 0.0;
    for (int i = 0; i < 64; ++i) {
        all += lam[i] * lam[i];
        if (i < 64 - 10) tail += lam[i] * lam[i]; // eigenvalues ascending
    }
    CHECK(fro_err == doctest::Approx(std::sqrt(tail / all)).epsilon(1e-6));
}

TEST_CASE("mode kernels satisfy the reflection identities exactly") {
    GridSpec grid(8, 12.5);
    SocsModel model = decompose_socs(build_tcc(paper_optics(), grid), 4);
    for (const auto& m : model.modes) {
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                CHECK(m.w(i, j) == std::conj(m.v(7 - i, 7 - j)));
                CHECK(m.dz1(i, j) == m.dv1(7 - i, 7 - j));
                CHECK(m.dz2(i, j) == m.dv2(7 - i, 7 - j));
            }
        // derivative kernels use the shared stencil
        ComplexField d1 = diff_axis1(m.v);
        for (size_t i = 0; i < d1.size(); ++i) CHECK(m.dv1[i] == d1[i]);
    }
}

TEST_CASE("modes are l2-orthonormal and sorted") {
    GridSpec grid(8, 12.5);
    SocsModel model = decompose_socs(build_tcc(paper_optics(), grid), 6);
    for (int a = 0; a < 6; ++a) {
        if (a > 0) CHECK(model.modes[a].sigma <= model.modes[a - 1].sigma);
        for (int b = 0; b <= a; ++b) {
            complexd dot = oracle::inner(model.modes[a].v, model.modes[b].v);
            CHECK(std::abs(dot - (a == b ? 1.0 : 0.0)) < 1e-10);
        }
    }
}

TEST_CASE("subspace iteration agrees with the dense path") {
    GridSpec grid(12, 12.5);
    OpticalSystem sys = paper_optics();
    TccOperator dense = build_tcc(sys, grid, TccForm::dense);
    TccOperator implicit = build_tcc(sys, grid, TccForm::implicit_factors);

    // the implicit matvec itself matches the dense operator
    std::vector<complexd> x(144);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (auto& v : x) v = complexd(gauss(rng), gauss(rng));
    auto yi = implicit.apply(x);
    Eigen::MatrixXcd H = materialize(dense);
    Eigen::VectorXcd xe(144);
    for (int i = 0; i < 144; ++i) xe[i] = x[i];
    Eigen::VectorXcd yd = H * xe;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 144; ++i) {
        num += std::norm(yi[i] - yd[i]);
        den += std::norm(yd[i]);
    }
    CHECK(std::sqrt(num / den) < 1e-12);

    SocsModel md = decompose_socs(dense, 6);
    SocsModel mi = decompose_socs(implicit, 6);
    for (int m = 0; m < 6; ++m)
        CHECK(mi.modes[m].sigma == doctest::Approx(md.modes[m].sigma).epsilon(1e-7));

    // compare truncated operators (eigenvector bases may rotate inside
    // near-degenerate clusters)
    Eigen::MatrixXcd Hd = Eigen::MatrixXcd::Zero(144, 144), Hi = Eigen::MatrixXcd::Zero(144, 144);
    for (int m = 0; m < 6; ++m) {
        Eigen::VectorXcd vd(144), vi(144);
        for (int i = 0; i < 144; ++i) {
            vd[i] = md.modes[m].v[i];
            vi[i] = mi.modes[m].v[i];
        }
        Hd += md.modes[m].sigma * vd * vd.adjoint();
        Hi += mi.modes[m].sigma * vi * vi.adjoint();
    }
    CHECK((Hd - Hi).norm() / Hd.norm() < 1e-6);
}

TEST_CASE("socs cache round trip and key mismatch") {
    namespace fs = std::filesystem;
    GridSpec grid(8, 12.5);
    OpticalSystem sys = paper_optics();
    SocsModel model = decompose_socs(build_tcc(sys, grid), 4);

    fs::path dir = fs::temp_directory_path() / "litho_socs_cache_test";
    fs::remove_all(dir);
    save_socs_cache(dir.string(), sys, model);

    auto loaded = load_socs_cache(dir.string(), sys, grid, 4);
    REQUIRE(loaded.has_value());
    for (int m = 0; m < 4; ++m) {
        CHECK(loaded->modes[m].sigma == model.modes[m].sigma);
        for (size_t i = 0; i < model.modes[m].v.size(); ++i)
            CHECK(loaded->modes[m].v[i] == model.modes[m].v[i]); // bitwise round trip
    }
    // cache can serve a smaller n0 by truncation
    auto truncated = load_socs_cache(dir.string(), sys, grid, 2);
    REQUIRE(truncated.has_value());
    CHECK(truncated->n0 == 2);

    // any key mismatch misses
    CHECK(!load_socs_cache(dir.string(), OpticalSystem(193.0, 1.0, 0.068), grid, 4).has_value());
    CHECK(!load_socs_cache(dir.string(), sys, GridSpec(8, 12.0), 4).has_value());
    CHECK(!load_socs_cache(dir.string(), sys, grid, 8).has_value());
    fs::remove_all(dir);
}

TEST_CASE("decompose_socs validates n0") {
    GridSpec grid(8, 12.5);
    TccOperator tcc = build_tcc(paper_optics(), grid);
    CHECK_THROWS_AS(decompose_socs(tcc, 0), Error);
    CHECK_THROWS_AS(decompose_socs(tcc, 65), Error);
}
