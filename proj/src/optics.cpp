#include "litho/optics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace litho {

double eval_psf(const OpticalSystem& sys, double x1_nm, double x2_nm) {
    const double kna = sys.k() * sys.na;
    const double r = std::hypot(x1_nm, x2_nm);
    const double z = kna * r;
    if (z < 1e-4) {
        // J1(z)/z = 1/2 - z^2/16 + O(z^4)
        return kna * kna / (2.0 * M_PI) * (0.5 - z * z / 16.0);
    }
    return kna / (2.0 * M_PI) * std::cyl_bessel_j(1.0, z) / r;
}

double eval_mutual_intensity_approx(const OpticalSystem& sys, double x1_nm, double x2_nm) {
    const double q = sys.k() * sys.sigma_c * sys.na;
    const double beta = sys.beta();
    const double r2 = x1_nm * x1_nm + x2_nm * x2_nm;
    return std::exp(-r2 / (4.0 * beta)) / (beta * q * q);
}

TccOperator build_tcc(const OpticalSystem& sys, const GridSpec& grid, TccForm form, bool unit_mutual_intensity) {
    bool dense = (form == TccForm::dense) || (form == TccForm::automatic && grid.n <= TccOperator::kDenseLimit);
    if (form == TccForm::dense && grid.n > TccOperator::kDenseLimit)
        fail(ErrorCode::capacity_exceeded,
             "build_tcc: dense materialization limited to n <= " + std::to_string(TccOperator::kDenseLimit));

    TccOperator op;
    op.grid_ = grid;
    op.dense_ = dense;
    op.unit_j_ = unit_mutual_intensity;
    const double w = grid.dx_nm * grid.dx_nm * grid.dx_nm * grid.dx_nm; // dx^2 * dy^2, square cells
    op.weight_ = w;

    const int n = grid.n;
    op.k_samples_ = RealField(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) op.k_samples_(r, c) = eval_psf(sys, grid.coord(r), grid.coord(c));

    op.j_offsets_ = RealField(2 * n - 1, 2 * n - 1);
    for (int a = 0; a < 2 * n - 1; ++a)
        for (int b = 0; b < 2 * n - 1; ++b) {
            const double d1 = (a - (n - 1)) * grid.dx_nm;
            const double d2 = (b - (n - 1)) * grid.dx_nm;
            op.j_offsets_(a, b) = unit_mutual_intensity ? 1.0 : eval_mutual_intensity_approx(sys, d1, d2);
        }

    if (!dense) {
        // circular embedding of the offset kernel for the implicit matvec:
        // offsets in (-n, n) wrap uniquely since pad >= 2n-1
        op.engine_ = std::make_unique<ConvEngine>(n);
        const int pad = op.engine_->pad();
        ComplexField jpad(pad, pad);
        for (int a = 0; a < 2 * n - 1; ++a)
            for (int b = 0; b < 2 * n - 1; ++b) {
                const int d1 = a - (n - 1), d2 = b - (n - 1);
                jpad((d1 + pad) % pad, (d2 + pad) % pad) = op.j_offsets_(a, b);
            }
        op.j_spectrum_ = op.engine_->dft_pad(jpad);
    }
    return op;
}

complexd TccOperator::entry(int a, int b) const {
    const int n = grid_.n;
    const int r1 = a / n, c1 = a % n, r2 = b / n, c2 = b % n;
    const double j = j_offsets_((r2 - r1) + (n - 1), (c2 - c1) + (n - 1));
    return complexd(weight_ * k_samples_(r1, c1) * j * k_samples_(r2, c2), 0.0);
}

std::vector<complexd> TccOperator::apply(const std::vector<complexd>& x) const {
    const int n = grid_.n;
    if ((int)x.size() != n * n) fail(ErrorCode::grid_mismatch, "TccOperator::apply: bad vector length");
    std::vector<complexd> y(x.size());
    if (dense_ || !engine_) {
        // quadratic fallback via the factored entries is O(n^4); only the
        // implicit FFT path is used for large grids
        ComplexField kx(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) kx(r, c) = k_samples_(r, c) * x[size_t(r) * n + c];
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                complexd acc(0.0, 0.0);
                for (int rr = 0; rr < n; ++rr)
                    for (int cc = 0; cc < n; ++cc)
                        acc += j_offsets_((rr - r) + (n - 1), (cc - c) + (n - 1)) * kx(rr, cc);
                y[size_t(r) * n + c] = weight_ * k_samples_(r, c) * acc;
            }
        return y;
    }
    // FFT path: y = w * K .* (J (*) (K .* x))
    ComplexField kx(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) kx(r, c) = k_samples_(r, c) * x[size_t(r) * n + c];
    ComplexField sx = engine_->spectrum(kx);
    for (size_t i = 0; i < sx.size(); ++i) sx[i] *= j_spectrum_[i];
    // circular inverse without window extraction: values at [0, n) x [0, n)
    ComplexField fullpad = engine_->inverse_full(sx); // (2n-1)^2 slice of the circular result
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) y[size_t(r) * n + c] = weight_ * k_samples_(r, c) * fullpad(r, c);
    return y;
}

void populate_mode_kernels(SocsMode& mode) {
    mode.w = conj_reflect(mode.v);
    mode.dv1 = diff_axis1(mode.v);
    mode.dv2 = diff_axis2(mode.v);
    mode.dz1 = reflect(mode.dv1);
    mode.dz2 = reflect(mode.dv2);
}

namespace {

void canonicalize_phase(ComplexField& v) {
    size_t imax = 0;
    double best = -1.0;
    for (size_t i = 0; i < v.size(); ++i) {
        double a = std::abs(v[i]);
        if (a > best) {
            best = a;
            imax = i;
        }
    }
    if (best <= 0.0) return;
    complexd ph = v[imax] / best;
    for (size_t i = 0; i < v.size(); ++i) v[i] /= ph;
}

SocsModel finalize_model(const GridSpec& grid, int n0, double weight,
                         const std::vector<std::pair<double, Eigen::VectorXcd>>& pairs) {
    SocsModel model;
    model.grid = grid;
    model.n0 = n0;
    model.quadrature_weight = weight;
    const int n = grid.n;
    for (int m = 0; m < n0; ++m) {
        SocsMode mode;
        mode.sigma = std::max(0.0, pairs[m].first);
        mode.v = ComplexField(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) mode.v(r, c) = pairs[m].second[size_t(r) * n + c];
        canonicalize_phase(mode.v);
        populate_mode_kernels(mode);
        model.modes.push_back(std::move(mode));
    }
    return model;
}

} // namespace

SocsModel decompose_socs(const TccOperator& tcc, int n0) {
    const int n = tcc.grid().n;
    const int dim = n * n;
    if (n0 < 1) fail(ErrorCode::invalid_config, "decompose_socs: n0 must be >= 1");
    if (n0 > dim) fail(ErrorCode::invalid_config, "decompose_socs: n0 exceeds operator rank bound");

    std::vector<std::pair<double, Eigen::VectorXcd>> pairs;

    if (tcc.is_dense()) {
        Eigen::MatrixXcd H(dim, dim);
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b) H(a, b) = tcc.entry(a, b);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
        if (es.info() != Eigen::Success) fail(ErrorCode::convergence_failure, "decompose_socs: dense eigensolve failed");
        for (int m = 0; m < n0; ++m) {
            const int idx = dim - 1 - m; // eigenvalues come back ascending
            pairs.emplace_back(es.eigenvalues()[idx], es.eigenvectors().col(idx));
        }
    } else {
        // blocked subspace iteration with Rayleigh-Ritz extraction
        const int block = std::min(dim, n0 + std::max(10, n0));
        std::mt19937_64 rng(0x5eedULL);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Eigen::MatrixXcd Q(dim, block);
        for (int c = 0; c < block; ++c)
            for (int r = 0; r < dim; ++r) Q(r, c) = complexd(gauss(rng), gauss(rng));
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr0(Q);
        Q = qr0.householderQ() * Eigen::MatrixXcd::Identity(dim, block);

        const double tol = 1e-8;
        const int max_sweeps = 2000;
        std::vector<complexd> xcol(dim), ycol(dim);
        Eigen::MatrixXcd Z(dim, block);
        bool converged = false;
        for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
            for (int c = 0; c < block; ++c) {
                for (int r = 0; r < dim; ++r) xcol[r] = Q(r, c);
                ycol = tcc.apply(xcol);
                for (int r = 0; r < dim; ++r) Z(r, c) = ycol[r];
            }
            Eigen::MatrixXcd B = Q.adjoint() * Z;
            B = (B + B.adjoint()) * 0.5;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(B);
            // descending Ritz order
            Eigen::VectorXd lam(block);
            Eigen::MatrixXcd S(block, block);
            for (int m = 0; m < block; ++m) {
                lam[m] = es.eigenvalues()[block - 1 - m];
                S.col(m) = es.eigenvectors().col(block - 1 - m);
            }
            Eigen::MatrixXcd X = Q * S;  // Ritz vectors
            Eigen::MatrixXcd HX = Z * S; // H * Ritz vectors
            const double sigma1 = std::max(lam[0], 0.0);
            converged = true;
            for (int m = 0; m < n0; ++m) {
                double res = (HX.col(m) - lam[m] * X.col(m)).norm();
                if (res > tol * std::max(sigma1, 1e-300)) {
                    converged = false;
                    break;
                }
            }
            if (converged) {
                for (int m = 0; m < n0; ++m) pairs.emplace_back(lam[m], X.col(m));
                break;
            }
            Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Z);
            Q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, block);
        }
        if (!converged)
            fail(ErrorCode::convergence_failure,
                 "decompose_socs: subspace iteration did not reach residual tolerance");
    }

    return finalize_model(tcc.grid(), n0, tcc.quadrature_weight(), pairs);
}

} // namespace litho
