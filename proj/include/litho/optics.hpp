#pragma once

#include <optional>
#include <string>
#include <vector>

#include "litho/fft.hpp"
#include "litho/field.hpp"
#include "litho/grid.hpp"

namespace litho {

// Optical system parameters and derived quantities. k and beta are always
// recomputed from the primary fields, so k*lambda = 2*pi and
// beta*(k*sigma_c*na)^2 = log 2 hold to machine precision by construction.
struct OpticalSystem {
    double lambda_nm = 193.0;
    double na = 1.0;
    double sigma_c = 0.067;

    OpticalSystem() = default;
    OpticalSystem(double lambda, double na_, double sigma) : lambda_nm(lambda), na(na_), sigma_c(sigma) {
        if (!(lambda_nm > 0 && na > 0 && sigma_c > 0))
            fail(ErrorCode::invalid_config, "optics: lambda, NA, sigma_c must be > 0");
    }

    double k() const { return 2.0 * M_PI / lambda_nm; }
    double beta() const {
        const double q = k() * sigma_c * na;
        return std::log(2.0) / (q * q);
    }
};

// Coherent point spread function: (k*NA/2pi) * J1(k*NA*|x|)/|x|, with the
// removable singularity filled by its series limit (k*NA)^2/(4pi).
double eval_psf(const OpticalSystem& sys, double x1_nm, double x2_nm);

// Closed-form inverse transform of the Gaussian mutual-intensity model:
// exp(-|x|^2/(4 beta)) / (beta * (k*sigma*NA)^2); equals 1/log 2 at x = 0.
double eval_mutual_intensity_approx(const OpticalSystem& sys, double x1_nm, double x2_nm);

enum class TccForm { automatic, dense, implicit_factors };

// Hopkins transmission cross coefficients H(k,j) = K(k) J(j-k) conj(K(j))
// sampled at cell centers and scaled by the quadrature weight dx^2*dy^2.
// Dense materialization is limited to n <= 48 (the operator has n^4 entries);
// larger grids keep the factored form and expose the operator through
// apply(), one mutual-intensity convolution per product.
class TccOperator {
public:
    static constexpr int kDenseLimit = 48;

    const GridSpec& grid() const { return grid_; }
    bool is_dense() const { return dense_; }
    double quadrature_weight() const { return weight_; }

    // entry for flattened indices a, b in [0, n^2); available for both forms
    complexd entry(int a, int b) const;
    // y = H x on flattened n^2 vectors
    std::vector<complexd> apply(const std::vector<complexd>& x) const;

    friend TccOperator build_tcc(const OpticalSystem&, const GridSpec&, TccForm, bool);

private:
    GridSpec grid_;
    bool dense_ = false;
    double weight_ = 0.0;
    RealField k_samples_;                   // K at cell centers
    RealField j_offsets_;                   // J at offsets, (2n-1)^2, centered at (n-1, n-1)
    bool unit_j_ = false;
    // implicit apply machinery
    std::unique_ptr<ConvEngine> engine_;
    ComplexField j_spectrum_;               // FFT of wrapped J offsets (pad x pad)
};

TccOperator build_tcc(const OpticalSystem& sys, const GridSpec& grid, TccForm form = TccForm::automatic,
                      bool unit_mutual_intensity = false);

// One retained coherent system: eigenvalue, eigenmode kernel and the derived
// adjoint/derivative kernels. w = conj(v(-x)) and dz_l(x) = (d_l v)(-x),
// realized as array flips (reflect() / conj_reflect()); the derivative d_l is
// the shared central-difference stencil. Applied with the adjoint-side
// extraction window, w is the exact l2 adjoint kernel of v.
struct SocsMode {
    double sigma = 0.0;
    ComplexField v, w, dv1, dv2, dz1, dz2;
};

struct SocsModel {
    GridSpec grid;
    int n0 = 0;
    std::vector<SocsMode> modes;
    double quadrature_weight = 0.0;
};

// Top-n0 eigenpairs of the TCC, sorted by descending eigenvalue, eigenvectors
// orthonormal in the discrete l2 inner product. Dense operators use a direct
// Hermitian eigensolve; implicit ones a blocked subspace iteration with
// Rayleigh-Ritz extraction (residual tolerance 1e-8 * sigma_1, else
// ConvergenceFailure).
SocsModel decompose_socs(const TccOperator& tcc, int n0);

// fills the derived kernels (w, dv, dz) of a mode whose sigma/v are set
void populate_mode_kernels(SocsMode& mode);

// SOCS cache: a directory holding manifest.json plus one field file per mode.
// The cache is keyed by (lambda, NA, sigma_c, n, dx, n0); load returns nullopt
// on any mismatch or missing/corrupt file. A cache built with a larger n0 can
// serve a smaller request by truncation.
void save_socs_cache(const std::string& dir, const OpticalSystem& sys, const SocsModel& model);
std::optional<SocsModel> load_socs_cache(const std::string& dir, const OpticalSystem& sys, const GridSpec& grid,
                                         int n0);

} // namespace litho
