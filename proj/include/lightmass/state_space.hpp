#pragma once

#include "lightmass/common.hpp"
#include "lightmass/plant.hpp"
#include "lightmass/spectra.hpp"
#include "lightmass/squeeze.hpp"

namespace lightmass {

// dx/dt = A x + B w,  y = C x + D w, driven by unit-intensity white noise w.
// In the frequency domain (d/dt -> -iW) the transfer is C (-iW - A)^{-1} B + D.
struct LtiSystem {
    MatrixR A;
    MatrixR B;
    MatrixR C;
    MatrixR D;

    static LtiSystem static_gain(const MatrixR& D);

    Eigen::Index states() const { return A.rows(); }
    Eigen::Index inputs() const { return D.cols(); }
    Eigen::Index outputs() const { return D.rows(); }

    MatrixC transfer(Real omega) const;
};

// y = second(first(w)).
LtiSystem series(const LtiSystem& first, const LtiSystem& second);

// Causal, stable factor H with |H(W)|^2 = S(W): one input, one output.
// Realized as a cascade of first- and second-order sections.
LtiSystem spectral_factor(const RationalSpectrum& s);

// Input light quadratures (u1, u2) from two unit white noises.
LtiSystem input_field_system(const InputFieldState& s);

// Full model driven by (w_u1, w_u2, w_F, w_S, w_loss1, w_loss2). The first
// two states are (b1, b2); the outputs are the detected (v1, v2).
LtiSystem joint_system(const PlantParams& p, const NoiseModel& noise, const InputFieldState& s);

// Solves A P + P A^T + Q = 0 for stable A.
MatrixR lyapunov(const MatrixR& A, const MatrixR& Q);

// Exact sampling of the state and of the output integrated over one window
// of length tau (Van Loan):
//   x_{j+1} = phi x_j + e_x,   Y_j = int_window y dt = gamma x_j + e_y,
// with cov(e_x) = qxx, cov(e_x, e_y) = qxy, cov(e_y) = qyy.
struct Discretized {
    MatrixR phi;
    MatrixR gamma;
    MatrixR qxx;
    MatrixR qxy;
    MatrixR qyy;
};

Discretized discretize(const LtiSystem& sys, Real tau);

}  // namespace lightmass
