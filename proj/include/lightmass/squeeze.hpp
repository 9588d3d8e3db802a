#pragma once

#include <string>

#include <Eigen/Core>

#include "lightmass/common.hpp"
#include "lightmass/plant.hpp"

namespace lightmass {

enum class SqueezeKind { vacuum, fis, fds };

std::string to_string(SqueezeKind kind);
SqueezeKind parse_squeeze_kind(const std::string& name);

struct FilterCavity {
    double gamma_f = 1.0;  // full linewidth; the reflection pole sits at delta - i gamma_f/2
    double delta = 0.0;
};

struct InputFieldState {
    SqueezeKind kind = SqueezeKind::vacuum;
    double r = 0.0;
    double theta = 0.0;
    FilterCavity filter;

    static InputFieldState vacuum();
    static InputFieldState frequency_independent(double r, double theta);
    static InputFieldState frequency_dependent(double r, double theta, double gamma_f,
                                               double delta);
    void validate() const;
};

using Matrix2R = Eigen::Matrix<Real, 2, 2>;
using Matrix2C = Eigen::Matrix<Complex, 2, 2>;

// R(theta) diag(e^{-r}, e^{r}): the squeezer acting on unit white noise.
Matrix2R squeezer_matrix(double r, double theta);

Matrix2R input_spectrum(Real omega, const InputFieldState& s);

// Two-photon transfer matrix of a lossless detuned cavity in reflection.
Matrix2C filter_transfer(Real omega, double gamma_f, double delta);

// Quantum-noise-only output phase-quadrature spectrum (n_F = n_S = 0),
// including the detection loss. Tends to 1 at high frequency for vacuum.
Real squeezed_quantum_noise_spectrum(const PlantParams& p, const InputFieldState& s, Real omega);

struct TuneBand {
    double lo;
    double hi;
    int points = 64;
};

// Mean of ln(S_fds / S_vacuum) over a log grid on the band.
double squeezing_figure_of_merit(const PlantParams& p, const InputFieldState& s,
                                 const TuneBand& band);

// Filter tuning for fds with squeeze angle pi/2 (phase quadrature squeezed
// out of band). Golden-section on log|delta| for both detuning signs with
// gamma_f = 2|delta|, then golden-section on log gamma_f.
InputFieldState autotune_filter(const PlantParams& p, double r, const TuneBand& band);

}  // namespace lightmass
