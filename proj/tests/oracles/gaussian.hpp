// Closed-form Gaussian states and random symplectic maps, built without the
// library's own routines.
#pragma once

#include <cmath>
#include <random>

#include "lightmass/common.hpp"

namespace oracle {

using lightmass::MatrixR;
using lightmass::Real;

// Two-mode squeezed vacuum in standard form; PPT minimum e^{-2r}, E_N = 2r.
inline MatrixR two_mode_squeezed(Real r) {
    const Real c = std::cosh(2 * r), s = std::sinh(2 * r);
    MatrixR v = MatrixR::Zero(4, 4);
    v(0, 0) = v(1, 1) = v(2, 2) = v(3, 3) = c;
    v(0, 2) = v(2, 0) = s;
    v(1, 3) = v(3, 1) = -s;
    return v;
}

inline MatrixR form(int modes) {
    MatrixR k = MatrixR::Zero(2 * modes, 2 * modes);
    for (int i = 0; i < modes; ++i) {
        k(2 * i, 2 * i + 1) = 1;
        k(2 * i + 1, 2 * i) = -1;
    }
    return k;
}

// Product of random single-mode squeezers, phase rotations and two-mode
// beam splitters.
inline MatrixR random_symplectic(int modes, std::mt19937_64& rng, Real max_squeeze = 0.8) {
    std::uniform_real_distribution<double> angle(0, 2 * M_PI), sq(-max_squeeze, max_squeeze);
    MatrixR s = MatrixR::Identity(2 * modes, 2 * modes);
    for (int layer = 0; layer < 3; ++layer) {
        for (int m = 0; m < modes; ++m) {
            MatrixR g = MatrixR::Identity(2 * modes, 2 * modes);
            const Real a = angle(rng), z = sq(rng);
            const Real c = std::cos(a), sn = std::sin(a);
            // rotation then squeeze
            g(2 * m, 2 * m) = c * std::exp(z);
            g(2 * m, 2 * m + 1) = -sn * std::exp(z);
            g(2 * m + 1, 2 * m) = sn * std::exp(-z);
            g(2 * m + 1, 2 * m + 1) = c * std::exp(-z);
            s = g * s;
        }
        for (int m = 0; m + 1 < modes; ++m) {
            MatrixR g = MatrixR::Identity(2 * modes, 2 * modes);
            const Real t = angle(rng), c = std::cos(t), sn = std::sin(t);
            for (int q = 0; q < 2; ++q) {
                g(2 * m + q, 2 * m + q) = c;
                g(2 * m + q, 2 * m + 2 + q) = sn;
                g(2 * m + 2 + q, 2 * m + q) = -sn;
                g(2 * m + 2 + q, 2 * m + 2 + q) = c;
            }
            s = g * s;
        }
    }
    return s;
}

// S diag(nu_1, nu_1, nu_2, nu_2, ...) S^T.
inline MatrixR williamson_state(const MatrixR& s, const std::vector<Real>& nu) {
    MatrixR d = MatrixR::Zero(s.rows(), s.cols());
    for (std::size_t i = 0; i < nu.size(); ++i) d(2 * i, 2 * i) = d(2 * i + 1, 2 * i + 1) = nu[i];
    return s * d * s.transpose();
}

}  // namespace oracle
