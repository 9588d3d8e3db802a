#pragma once

#include <Eigen/Core>

#include "lightmass/common.hpp"
#include "lightmass/spectra.hpp"

namespace lightmass {

struct InputFieldState;

struct PlantParams {
    double omega_m = 1.0;
    double gamma_m = 1e-3;
    double omega_q = 1.0;
    double eta = 1.0;

    void validate() const;
    // Coupling of b1 into the output phase quadrature, W_q / sqrt(w_m).
    double coupling() const;
};

// chi(W) = w_m / (w_m^2 - W^2 - i g_m W), with x(W) = int x(t) e^{iWt} dt.
Complex susceptibility(Real omega, const PlantParams& p);

// Input columns.
enum Port : int { u1 = 0, u2 = 1, force = 2, sensing = 3, loss1 = 4, loss2 = 5 };
constexpr int port_count = 6;

using TransferRows = Eigen::Matrix<Complex, 2, port_count>;

struct TransferMatrices {
    TransferRows oscillator;  // (b1, b2)
    TransferRows output;      // (v1, v2)
    bool has_loss;            // loss columns are zero when false
};

TransferMatrices transfer(Real omega, const PlantParams& p);

// Symmetrized spectral density of (b1, b2, v1, v2). Hermitian, and real
// only on the diagonal: the b-v cross spectra carry imaginary parts odd in W.
Eigen::Matrix<Complex, 4, 4> spectral_density(Real omega, const PlantParams& p,
                                              const NoiseModel& noise,
                                              const InputFieldState& input);

}  // namespace lightmass
