#pragma once

#include <iosfwd>
#include <vector>

#include "lightmass/common.hpp"
#include "lightmass/plant.hpp"
#include "lightmass/spectra.hpp"
#include "lightmass/squeeze.hpp"

namespace lightmass {

// Box windows f_k = tau^{-1/2} on [-k tau, -(k-1) tau), k = 1..N.
struct TemporalModeBasis {
    int N = 128;
    double tau = 1.0;

    void validate() const;
    double span() const { return N * tau; }
};

// Rate the basis is built around: the force-noise corner (or w_m), raised
// to the geometric mean with the coupling and filter rates when those are
// faster. The sensing corner is left out so that every point on an W_S ray
// shares one basis.
double characteristic_rate(const PlantParams& p, const NoiseModel& noise,
                           const InputFieldState& s);
// 1/tau = 4 * characteristic_rate.
TemporalModeBasis auto_basis(const PlantParams& p, const NoiseModel& noise,
                             const InputFieldState& s, int N = 128);

Complex window_fourier(int k, Real omega, const TemporalModeBasis& basis);

struct RefinementWindow {
    double center;
    double width;
};

struct QuadratureSettings {
    double omega_max = 0.0;          // 0: derive from the model
    double points_per_decade = 40;   // panel edges per decade of the log grid
    int nodes_per_panel = 20;        // Gauss-Legendre: 15, 20 or 30
    int tail_order = 6;              // terms of the 1/W expansion past omega_max
    std::vector<RefinementWindow> refinements;  // added to the automatic ones
};

enum class CovarianceMethod { state_space, quadrature };

struct CovarianceOptions {
    CovarianceMethod method = CovarianceMethod::state_space;
    QuadratureSettings quad;
    double eps_phys = 1e-6;
    bool check_physicality = true;
};

// Ordering (b1, b2, mode-1 amplitude, mode-1 phase, ...).
class CovarianceMatrix {
  public:
    explicit CovarianceMatrix(MatrixR v);

    const MatrixR& V() const { return v_; }
    Eigen::Index size() const { return v_.rows(); }
    int modes() const { return static_cast<int>(v_.rows() / 2 - 1); }
    MatrixR K() const { return symplectic_form(size()); }

    MatrixR bb() const { return v_.topLeftCorner(2, 2); }
    MatrixR bv() const { return v_.topRightCorner(2, size() - 2); }
    MatrixR vv() const { return v_.bottomRightCorner(size() - 2, size() - 2); }

    static MatrixR symplectic_form(Eigen::Index size);

  private:
    MatrixR v_;
};

struct PhysicalityReport {
    bool psd_ok;        // V + iK >= -eps ||V||
    bool symplectic_ok; // every symplectic eigenvalue >= 1 - eps
    Real norm;
};

// Both tests are Cholesky attempts, so no eigensolver is needed.
PhysicalityReport check_physicality(const CovarianceMatrix& v, double eps);

CovarianceMatrix build_covariance(const PlantParams& p, const NoiseModel& noise,
                                  const InputFieldState& s, const TemporalModeBasis& basis,
                                  const CovarianceOptions& options = {});

// Frequency-domain route (quadrature.cpp).
QuadratureSettings default_quadrature(const PlantParams& p, const NoiseModel& noise,
                                      const InputFieldState& s, const TemporalModeBasis& basis);
MatrixR quadrature_covariance(const PlantParams& p, const NoiseModel& noise,
                              const InputFieldState& s, const TemporalModeBasis& basis,
                              const QuadratureSettings& settings);

// Text format: a header line "# lightmass-covariance size=<n> modes=<N>",
// a line "# order b1 b2 v1[1] v2[1] ...", then n rows of n numbers.
void write_covariance(std::ostream& os, const CovarianceMatrix& v);
CovarianceMatrix read_covariance(std::istream& is);

}  // namespace lightmass
