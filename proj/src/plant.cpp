#include "lightmass/plant.hpp"

#include <cmath>

#include "lightmass/squeeze.hpp"

namespace lightmass {

void PlantParams::validate() const {
    if (!(omega_m > 0) || !std::isfinite(omega_m))
        throw InvalidInput("plant: omega_m must be positive and finite");
    if (!(gamma_m >= 0) || !std::isfinite(gamma_m))
        throw InvalidInput("plant: gamma_m must be >= 0");
    if (!(omega_q >= 0) || !std::isfinite(omega_q))
        throw InvalidInput("plant: omega_q must be >= 0");
    if (!(eta > 0 && eta <= 1)) throw InvalidInput("plant: eta must lie in (0, 1]");
}

double PlantParams::coupling() const { return omega_q / std::sqrt(omega_m); }

Complex susceptibility(Real omega, const PlantParams& p) {
    const Real wm = p.omega_m;
    const Complex den(wm * wm - omega * omega, -static_cast<Real>(p.gamma_m) * omega);
    if (den == Complex(0))
        throw InvalidInput("susceptibility: pole on the real axis (gamma_m = 0 at resonance)");
    return wm / den;
}

TransferMatrices transfer(Real omega, const PlantParams& p) {
    const Complex chi = susceptibility(omega, p);
    const Real g = p.coupling();
    const Real se = std::sqrt(static_cast<Real>(p.eta));
    const Real sl = std::sqrt(1 - static_cast<Real>(p.eta));

    TransferMatrices t;
    t.has_loss = p.eta < 1;
    t.oscillator.setZero();
    t.output.setZero();

    t.oscillator(0, u1) = chi * g;
    t.oscillator(0, force) = chi;
    t.oscillator.row(1) = Complex(0, -omega / static_cast<Real>(p.omega_m)) * t.oscillator.row(0);

    t.output(0, u1) = se;
    t.output(1, u2) = se;
    t.output.row(1) += se * g * t.oscillator.row(0);
    t.output(1, sensing) += se * g;
    t.output(0, loss1) = sl;
    t.output(1, loss2) = sl;
    return t;
}

Eigen::Matrix<Complex, 4, 4> spectral_density(Real omega, const PlantParams& p,
                                              const NoiseModel& noise,
                                              const InputFieldState& input) {
    const TransferMatrices t = transfer(omega, p);
    Eigen::Matrix<Complex, 4, port_count> T;
    T << t.oscillator, t.output;

    Eigen::Matrix<Real, port_count, port_count> D = Eigen::Matrix<Real, port_count, port_count>::Zero();
    D.topLeftCorner<2, 2>() = input_spectrum(omega, input);
    D(force, force) = noise.force(omega);
    D(sensing, sensing) = noise.sensing(omega);
    D(loss1, loss1) = 1;
    D(loss2, loss2) = 1;

    Eigen::Matrix<Complex, 4, 4> S = T * D.cast<Complex>() * T.adjoint();
    return (S + S.adjoint()) / Real(2);
}

}  // namespace lightmass
