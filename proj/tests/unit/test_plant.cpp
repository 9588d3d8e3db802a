#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "lightmass/plant.hpp"
#include "lightmass/squeeze.hpp"

using namespace lightmass;

namespace {

// Drives db1/dt = w b2, db2/dt = -w b1 - gamma b2 + cos(W t) with RK4 and
// returns the complex amplitude c of b1 = Re[c e^{-iWt}] after the transient.
std::complex<double> driven_response(double wm, double gamma, double W) {
    const double dt = 2 * M_PI / W / 400;
    double b1 = 0, b2 = 0, t = 0;
    auto f = [&](double tt, double x1, double x2, double& d1, double& d2) {
        d1 = wm * x2;
        d2 = -wm * x1 - gamma * x2 + std::cos(W * tt);
    };
    const int settle = static_cast<int>(std::ceil(40 / gamma / dt));
    const int measure = 400 * 50;  // 50 periods
    std::complex<double> acc = 0;
    for (int i = 0; i < settle + measure; ++i) {
        double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
        f(t, b1, b2, k1a, k1b);
        f(t + dt / 2, b1 + dt / 2 * k1a, b2 + dt / 2 * k1b, k2a, k2b);
        f(t + dt / 2, b1 + dt / 2 * k2a, b2 + dt / 2 * k2b, k3a, k3b);
        f(t + dt, b1 + dt * k3a, b2 + dt * k3b, k4a, k4b);
        if (i >= settle) acc += b1 * std::polar(1.0, W * t) * dt;  // left Riemann sum over whole periods
        b1 += dt / 6 * (k1a + 2 * k2a + 2 * k3a + k4a);
        b2 += dt / 6 * (k1b + 2 * k2b + 2 * k3b + k4b);
        t += dt;
    }
    return 2.0 * acc / (measure * dt);
}

std::complex<double> cd(Complex z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

}  // namespace

TEST_CASE("susceptibility values") {
    PlantParams p;
    p.gamma_m = 0.1;
    CHECK(static_cast<double>(susceptibility(0, p).real()) == doctest::Approx(1));
    const auto chi1 = cd(susceptibility(1, p));
    CHECK(chi1.real() == doctest::Approx(0).epsilon(1e-12));
    CHECK(chi1.imag() == doctest::Approx(10));
    CHECK(std::abs(cd(susceptibility(1e4, p))) == doctest::Approx(1e-8).epsilon(1e-6));
    PlantParams lossless;
    lossless.gamma_m = 0;
    CHECK_THROWS_AS(susceptibility(1, lossless), InvalidInput);
}

TEST_CASE("susceptibility sign matches the time-domain response") {
    PlantParams p;
    p.gamma_m = 0.1;
    for (double W : {0.5, 1.0, 2.0}) {
        const auto sim = driven_response(1, 0.1, W);
        const auto chi = cd(susceptibility(W, p));
        CHECK(std::abs(sim - chi) < 2e-3 * std::abs(chi));
    }
}

TEST_CASE("transfer rows") {
    PlantParams p;
    p.omega_q = 3;
    p.gamma_m = 0.01;
    const double g = p.coupling();
    for (double W : {0.1, 1.3, 40.0}) {
        const TransferMatrices t = transfer(W, p);
        const auto chi = cd(susceptibility(W, p));
        CHECK(std::abs(cd(t.oscillator(0, u1)) - g * chi) < 1e-12 * std::abs(chi) * g);
        CHECK(std::abs(cd(t.oscillator(0, force)) - chi) < 1e-12 * std::abs(chi));
        CHECK(cd(t.oscillator(0, u2)) == std::complex<double>(0));
        CHECK(cd(t.oscillator(0, sensing)) == std::complex<double>(0));
        CHECK(cd(t.oscillator(1, u2)) == std::complex<double>(0));
        const auto ratio = cd(t.oscillator(1, force) / t.oscillator(0, force));
        CHECK(ratio.imag() == doctest::Approx(-W));
        CHECK(cd(t.output(0, u1)) == std::complex<double>(1));
        for (int port : {u2, force, sensing, loss1, loss2}) CHECK(cd(t.output(0, port)) == std::complex<double>(0));
        CHECK(cd(t.output(1, sensing)).real() == doctest::Approx(g));
        CHECK(std::abs(cd(t.output(1, u1)) - g * g * chi) < 1e-12 * std::abs(g * g * chi));
        CHECK_FALSE(t.has_loss);
    }
    PlantParams off = p;
    off.omega_q = 0;
    const TransferMatrices t0 = transfer(2.0, off);
    CHECK(cd(t0.output(0, u1)) == std::complex<double>(1));
    CHECK(cd(t0.output(1, u2)) == std::complex<double>(1));
    CHECK(cd(t0.output(1, u1)) == std::complex<double>(0));
    CHECK(cd(t0.output(1, force)) == std::complex<double>(0));
}

TEST_CASE("output response to u1 against a driven simulation") {
    // v2 = g b1 when only u1 drives, so v2/u1 = g^2 chi.
    PlantParams p;
    p.gamma_m = 0.1;
    p.omega_q = 2;
    const double g = p.coupling();
    for (double W : {0.5, 1.0, 2.0}) {
        const auto sim = g * g * driven_response(1, 0.1, W);
        const auto tf = cd(transfer(W, p).output(1, u1));
        CHECK(std::abs(sim - tf) < 2e-3 * std::abs(tf));
    }
}

TEST_CASE("loss beamsplitter") {
    PlantParams p;
    p.eta = 0.64;
    const TransferMatrices t = transfer(0.7, p);
    CHECK(t.has_loss);
    CHECK(cd(t.output(0, u1)).real() == doctest::Approx(0.8));
    CHECK(cd(t.output(0, loss1)).real() == doctest::Approx(0.6));
    CHECK(cd(t.output(1, loss2)).real() == doctest::Approx(0.6));
    CHECK(cd(t.output(0, loss2)) == std::complex<double>(0));
    CHECK_THROWS_AS(PlantParams({1, 1e-3, 1, 0}).validate(), InvalidInput);
    CHECK_THROWS_AS(PlantParams({1, 1e-3, 1, 1.5}).validate(), InvalidInput);
    CHECK_THROWS_AS(PlantParams({0, 1e-3, 1, 1}).validate(), InvalidInput);
    CHECK_THROWS_AS(PlantParams({1, 1e-3, -1, 1}).validate(), InvalidInput);
}

TEST_CASE("spectral density") {
    PlantParams p;
    p.omega_q = 3;
    const NoiseModel n = NoiseModel::white(10, 20, 1);
    const InputFieldState fis = InputFieldState::frequency_independent(0.7, 0.3);
    const double g = p.coupling();
    for (double W : {0.2, 1.01, 7.0}) {
        const auto S = spectral_density(W, p, n, fis);
        CHECK(static_cast<double>((S - S.adjoint()).cwiseAbs().maxCoeff()) < 1e-9);
        // v1 sees only the input amplitude quadrature
        CHECK(static_cast<double>(S(2, 2).real()) ==
              doctest::Approx(static_cast<double>(input_spectrum(W, fis)(0, 0))).epsilon(1e-12));
        // reality: S(-W) = conj S(W), so the symmetrized part is even in W
        const auto Sm = spectral_density(-W, p, n, fis);
        CHECK(static_cast<double>((S.real() - Sm.real()).cwiseAbs().maxCoeff()) <
              1e-12 * static_cast<double>(S.cwiseAbs().maxCoeff()));
    }
    // far above resonance: S_v2v2 -> S_uu,22 + g^2 S_S
    const auto S = spectral_density(1e3, p, n, fis);
    const double expect = static_cast<double>(input_spectrum(1e3, fis)(1, 1)) + g * g * 2.0 / 400.0;
    CHECK(static_cast<double>(S(3, 3).real()) == doctest::Approx(expect).epsilon(1e-4));

    // decoupled: v-block identity, b-block from the force alone
    PlantParams off;
    off.omega_q = 0;
    const auto S0 = spectral_density(0.9, off, n, InputFieldState::vacuum());
    CHECK(static_cast<double>((S0.bottomRightCorner<2, 2>() - Eigen::Matrix<Complex, 2, 2>::Identity())
                                  .cwiseAbs()
                                  .maxCoeff()) < 1e-15);
    CHECK(static_cast<double>(S0.topRightCorner<2, 2>().cwiseAbs().maxCoeff()) == 0.0);
    const double chi2 = static_cast<double>(std::norm(susceptibility(0.9, off)));
    CHECK(static_cast<double>(S0(0, 0).real()) == doctest::Approx(chi2 * 200).epsilon(1e-12));
}

TEST_CASE("force response PSD matches |chi|^2 (stochastic)") {
    // White unit force on the oscillator; averaged periodograms of b1.
    const double wm = 1, gamma = 0.1, dt = 0.05, T = 400;
    const int per = static_cast<int>(T / dt), segments = 4000;
    PlantParams p;
    p.gamma_m = gamma;
    const double freqs[3] = {0.5, 1.0, 2.0};

    // exact drift propagator over dt by Taylor series
    double e[2][2] = {{1, 0}, {0, 1}}, term[2][2] = {{1, 0}, {0, 1}};
    const double a[2][2] = {{0, wm * dt}, {-wm * dt, -gamma * dt}};
    for (int n = 1; n < 30; ++n) {
        double nx[2][2];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) nx[i][j] = (term[i][0] * a[0][j] + term[i][1] * a[1][j]) / n;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) e[i][j] += (term[i][j] = nx[i][j]);
    }
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal(0, std::sqrt(dt));
    double b1 = 0, b2 = 0;
    for (int i = 0; i < static_cast<int>(200 / dt); ++i) {  // burn-in
        const double n2 = b2 + normal(rng);
        const double x = e[0][0] * b1 + e[0][1] * n2;
        b2 = e[1][0] * b1 + e[1][1] * n2;
        b1 = x;
    }
    double psd[3] = {0, 0, 0};
    for (int s = 0; s < segments; ++s) {
        std::complex<double> acc[3] = {0, 0, 0}, ph[3], step[3];
        for (int k = 0; k < 3; ++k) {
            ph[k] = 1;
            step[k] = std::polar(1.0, freqs[k] * dt);
        }
        for (int i = 0; i < per; ++i) {
            for (int k = 0; k < 3; ++k) {
                acc[k] += b1 * ph[k] * dt;
                ph[k] *= step[k];
            }
            const double n2 = b2 + normal(rng);
            const double x = e[0][0] * b1 + e[0][1] * n2;
            b2 = e[1][0] * b1 + e[1][1] * n2;
            b1 = x;
        }
        for (int k = 0; k < 3; ++k) psd[k] += std::norm(acc[k]) / T;
    }
    for (int k = 0; k < 3; ++k) {
        const double expect = static_cast<double>(std::norm(susceptibility(freqs[k], p)));
        CHECK(psd[k] / segments == doctest::Approx(expect).epsilon(0.05));
    }
}
