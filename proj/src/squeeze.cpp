#include "lightmass/squeeze.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "lightmass/optimize.hpp"

namespace lightmass {

std::string to_string(SqueezeKind kind) {
    switch (kind) {
        case SqueezeKind::vacuum: return "vacuum";
        case SqueezeKind::fis: return "fis";
        case SqueezeKind::fds: return "fds";
    }
    return "?";
}

SqueezeKind parse_squeeze_kind(const std::string& name) {
    if (name == "vacuum") return SqueezeKind::vacuum;
    if (name == "fis") return SqueezeKind::fis;
    if (name == "fds") return SqueezeKind::fds;
    throw InvalidInput("unknown squeeze kind '" + name + "' (vacuum, fis, fds)");
}

InputFieldState InputFieldState::vacuum() { return {}; }

InputFieldState InputFieldState::frequency_independent(double r, double theta) {
    InputFieldState s;
    s.kind = SqueezeKind::fis;
    s.r = r;
    s.theta = theta;
    s.validate();
    return s;
}

InputFieldState InputFieldState::frequency_dependent(double r, double theta, double gamma_f,
                                                     double delta) {
    InputFieldState s;
    s.kind = SqueezeKind::fds;
    s.r = r;
    s.theta = theta;
    s.filter = {gamma_f, delta};
    s.validate();
    return s;
}

void InputFieldState::validate() const {
    if (!(r >= 0) || !std::isfinite(r)) throw InvalidInput("squeeze: r must be >= 0");
    if (!std::isfinite(theta)) throw InvalidInput("squeeze: theta must be finite");
    if (kind == SqueezeKind::fds) {
        if (!(filter.gamma_f > 0) || !std::isfinite(filter.gamma_f))
            throw InvalidInput("squeeze: fds needs gamma_f > 0");
        if (!std::isfinite(filter.delta)) throw InvalidInput("squeeze: delta must be finite");
    }
}

Matrix2R squeezer_matrix(double r, double theta) {
    const Real c = std::cos(static_cast<Real>(theta)), s = std::sin(static_cast<Real>(theta));
    Matrix2R R;
    R << c, -s, s, c;
    return R * Eigen::Matrix<Real, 2, 1>(std::exp(-static_cast<Real>(r)),
                                         std::exp(static_cast<Real>(r)))
                   .asDiagonal();
}

Matrix2C filter_transfer(Real omega, double gamma_f, double delta) {
    if (!(gamma_f > 0)) throw InvalidInput("filter_transfer: gamma_f must be positive");
    // rho -> 1 far from resonance; pole at delta - i gamma_f / 2.
    const auto rho = [&](Real w) {
        const Complex x(w - static_cast<Real>(delta), 0);
        const Complex h(0, static_cast<Real>(gamma_f) / 2);
        return (x - h) / (x + h);
    };
    const Real s = 1 / std::sqrt(Real(2));
    Matrix2C T, Tinv;
    T << Complex(s), Complex(s), Complex(0, -s), Complex(0, s);
    Tinv << Complex(s), Complex(0, s), Complex(s), Complex(0, -s);
    Matrix2C diag = Matrix2C::Zero();
    diag(0, 0) = rho(omega);
    diag(1, 1) = std::conj(rho(-omega));
    return T * diag * Tinv;
}

Matrix2R input_spectrum(Real omega, const InputFieldState& s) {
    if (s.kind == SqueezeKind::vacuum || s.r == 0) return Matrix2R::Identity();
    const Matrix2R D = squeezer_matrix(s.r, s.theta);
    const Matrix2R fis = D * D.transpose();
    if (s.kind == SqueezeKind::fis) return fis;
    const Matrix2C A = filter_transfer(omega, s.filter.gamma_f, s.filter.delta);
    const Matrix2C out = A * fis.cast<Complex>() * A.adjoint();
    Matrix2R re = out.real();
    return (re + re.transpose()) / 2;
}

Real squeezed_quantum_noise_spectrum(const PlantParams& p, const InputFieldState& s, Real omega) {
    const TransferMatrices t = transfer(omega, p);
    const Eigen::Matrix<Complex, 1, 2> row = t.output.block<1, 2>(1, u1);
    const Complex quantum = (row * input_spectrum(omega, s).cast<Complex>() * row.adjoint())(0, 0);
    const Real loss = std::norm(t.output(1, loss2));
    return quantum.real() + loss;
}

double squeezing_figure_of_merit(const PlantParams& p, const InputFieldState& s,
                                 const TuneBand& band) {
    if (!(band.lo > 0) || !(band.hi > band.lo) || band.points < 2)
        throw InvalidInput("tune band: need 0 < lo < hi and at least 2 points");
    const InputFieldState vac = InputFieldState::vacuum();
    const double step = std::log(band.hi / band.lo) / (band.points - 1);
    double acc = 0;
    for (int i = 0; i < band.points; ++i) {
        const Real w = band.lo * std::exp(step * i);
        acc += static_cast<double>(std::log(squeezed_quantum_noise_spectrum(p, s, w) /
                                            squeezed_quantum_noise_spectrum(p, vac, w)));
    }
    return acc / band.points;
}

namespace {

// Coarse log scan followed by golden-section refinement around the best sample.
template <class F>
std::pair<double, double> scan_then_golden(F&& f, double a, double b, int samples = 24) {
    const double step = (b - a) / (samples - 1);
    int best = 0;
    double best_val = f(a);
    for (int i = 1; i < samples; ++i) {
        const double v = f(a + step * i);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    const double lo = a + step * std::max(best - 1, 0);
    const double hi = a + step * std::min(best + 1, samples - 1);
    return golden_section_minimize(f, lo, hi, 1e-6);
}

}  // namespace

InputFieldState autotune_filter(const PlantParams& p, double r, const TuneBand& band) {
    p.validate();
    const double theta = std::numbers::pi / 2;
    const auto merit = [&](double delta, double gamma_f) {
        return squeezing_figure_of_merit(
            p, InputFieldState::frequency_dependent(r, theta, gamma_f, delta), band);
    };
    const double a = std::log(band.lo / 10), b = std::log(band.hi * 10);

    double best_delta = 0, best_val = 0;
    bool first = true;
    for (double sign : {1.0, -1.0}) {
        const auto [x, v] = scan_then_golden(
            [&](double x) { return merit(sign * std::exp(x), 2 * std::exp(x)); }, a, b);
        if (first || v < best_val) {
            best_val = v;
            best_delta = sign * std::exp(x);
            first = false;
        }
    }
    const double g0 = 2 * std::abs(best_delta);
    const auto [lg, v] = scan_then_golden(
        [&](double lg) { return merit(best_delta, std::exp(lg)); }, std::log(g0 / 4),
        std::log(g0 * 4), 16);
    const double gamma_f = v < best_val ? std::exp(lg) : g0;
    return InputFieldState::frequency_dependent(r, theta, gamma_f, best_delta);
}

}  // namespace lightmass
