#include "lightmass/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/Polynomials>

namespace lightmass {

namespace {

void trim(std::vector<double>& c) {
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
}

bool all_zero(const std::vector<double>& c) {
    return std::all_of(c.begin(), c.end(), [](double x) { return x == 0.0; });
}

Real horner(const std::vector<double>& c, Real y) {
    Real acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * y + static_cast<Real>(*it);
    return acc;
}

std::vector<Real> widen(const std::vector<double>& c) { return {c.begin(), c.end()}; }

bool on_nonnegative_axis(const Complex& y) {
    const Real tol = RationalSpectrum::root_tolerance * std::max<Real>(1, std::abs(y));
    return std::abs(y.imag()) <= tol && y.real() >= -tol;
}

}  // namespace

std::vector<Complex> polynomial_roots(const std::vector<Real>& ascending) {
    std::vector<Real> c = ascending;
    while (c.size() > 1 && c.back() == 0) c.pop_back();
    if (c.size() < 2) return {};
    if (c.size() == 2) return {Complex(-c[0] / c[1], 0)};
    Eigen::Matrix<Real, Eigen::Dynamic, 1> coeffs(static_cast<Eigen::Index>(c.size()));
    for (std::size_t i = 0; i < c.size(); ++i) coeffs(static_cast<Eigen::Index>(i)) = c[i];
    Eigen::PolynomialSolver<Real, Eigen::Dynamic> solver(coeffs);
    const auto& r = solver.roots();
    return {r.data(), r.data() + r.size()};
}

RationalSpectrum::RationalSpectrum(std::vector<double> numerator, std::vector<double> denominator,
                                   double amplitude)
    : num_(std::move(numerator)), den_(std::move(denominator)), amplitude_(amplitude) {
    if (num_.empty() || den_.empty())
        throw InvalidInput("rational spectrum: empty coefficient list");
    for (double x : num_)
        if (!std::isfinite(x)) throw InvalidInput("rational spectrum: non-finite numerator");
    for (double x : den_)
        if (!std::isfinite(x)) throw InvalidInput("rational spectrum: non-finite denominator");
    if (!std::isfinite(amplitude_) || amplitude_ < 0)
        throw InvalidInput("rational spectrum: amplitude must be finite and >= 0");
    if (all_zero(den_)) throw InvalidInput("rational spectrum: zero denominator");
    trim(num_);
    trim(den_);
    if (all_zero(num_)) num_ = {0.0};

    const int deg_p = 2 * static_cast<int>(num_.size() - 1);
    const int deg_q = 2 * static_cast<int>(den_.size() - 1);
    if (deg_q > max_degree)
        throw InvalidInput("rational spectrum: degree " + std::to_string(deg_q) +
                           " exceeds cap " + std::to_string(max_degree));
    if (deg_p > deg_q)
        throw InvalidInput("rational spectrum: deg P > deg Q, spectrum would be unbounded");

    // Q(W) has a real root iff Q(y), y = W^2, has a root on y >= 0.
    for (const Complex& y : polynomial_roots(widen(den_)))
        if (on_nonnegative_axis(y))
            throw InvalidInput("rational spectrum: Q has a real root (pole on the real axis)");

    // On y >= 0 the sign of P/Q can only change at nonnegative roots of P.
    if (!is_zero()) {
        std::vector<Real> ys{0};
        for (const Complex& y : polynomial_roots(widen(num_)))
            if (on_nonnegative_axis(y) && y.real() > 0) ys.push_back(y.real());
        std::sort(ys.begin(), ys.end());
        std::vector<Real> probes{0};
        for (std::size_t i = 0; i + 1 < ys.size(); ++i) probes.push_back((ys[i] + ys[i + 1]) / 2);
        probes.push_back(2 * ys.back() + 1);
        std::vector<Real> values;
        Real biggest = 0;
        for (Real y : probes) {
            values.push_back(horner(num_, y) / horner(den_, y));
            biggest = std::max(biggest, std::abs(values.back()));
        }
        for (Real v : values)
            if (v < -1e-9L * biggest)
                throw InvalidInput("rational spectrum: negative somewhere on the real axis");
    }
}

RationalSpectrum RationalSpectrum::constant(double level) {
    if (!std::isfinite(level) || level < 0)
        throw InvalidInput("constant spectrum: level must be finite and >= 0");
    return RationalSpectrum({level}, {1.0}, 1.0);
}

bool RationalSpectrum::is_zero() const { return amplitude_ == 0.0 || all_zero(num_); }

Real RationalSpectrum::at_infinity() const {
    if (num_.size() < den_.size() || is_zero()) return 0;
    return static_cast<Real>(amplitude_) * num_.back() / den_.back();
}

Real RationalSpectrum::operator()(Real omega) const {
    if (is_zero()) return 0;
    const Real y = omega * omega;
    return static_cast<Real>(amplitude_) * horner(num_, y) / horner(den_, y);
}

double evaluate(const RationalSpectrum& s, double omega) {
    return static_cast<double>(s(static_cast<Real>(omega)));
}

RationalSpectrum white_force(double omega_F, double omega_m) {
    if (!(omega_F > 0) || !std::isfinite(omega_F))
        throw InvalidInput("white_force: omega_F must be positive and finite");
    if (!(omega_m > 0)) throw InvalidInput("white_force: omega_m must be positive");
    return RationalSpectrum::constant(2.0 * omega_F * omega_F / omega_m);
}

RationalSpectrum white_sensing(double omega_S, double omega_m) {
    if (!(omega_m > 0)) throw InvalidInput("white_sensing: omega_m must be positive");
    if (std::isinf(omega_S) && omega_S > 0) return RationalSpectrum::zero();
    if (!(omega_S > 0)) throw InvalidInput("white_sensing: omega_S must be positive or +inf");
    return RationalSpectrum::constant(2.0 * omega_m / (omega_S * omega_S));
}

RationalSpectrum scale(const RationalSpectrum& s, double factor) {
    if (!(factor >= 0) || !std::isfinite(factor))
        throw InvalidInput("scale: factor must be finite and >= 0");
    return RationalSpectrum(s.numerator(), s.denominator(), s.amplitude() * factor);
}

NoiseModel NoiseModel::white(double omega_F, double omega_S, double omega_m) {
    NoiseModel n;
    n.force = white_force(omega_F, omega_m);
    n.sensing = white_sensing(omega_S, omega_m);
    n.omega_F = omega_F;
    n.omega_S = omega_S;
    return n;
}

void SqlReference::validate() const {
    if (!(mass > 0) || !(hbar > 0) || !(omega_m > 0))
        throw InvalidInput("sql reference: mass, hbar and omega_m must be positive");
}

double sql_spectrum(const SqlReference& sql, double omega) {
    sql.validate();
    return 2.0 * sql.hbar / (sql.mass * omega * omega);
}

DisplacementTerms displacement_referred_terms(const NoiseModel& noise, const SqlReference& sql,
                                              double omega) {
    sql.validate();
    if (!noise.omega_F || !noise.omega_S)
        throw InvalidInput("displacement_referred_sum: needs white noises with recorded corners");
    if (!(omega > 0)) throw InvalidInput("displacement_referred_sum: omega must be positive");
    // x = sqrt(hbar / (2 M w_m)) b1; the factor 2 makes the spectrum single-sided
    // like the SQL. The force reaches b1 through the free-mass response w_m / W^2.
    const double to_x = sql.hbar / (sql.mass * sql.omega_m);
    const double w2 = omega * omega;
    const double chi_free2 = sql.omega_m * sql.omega_m / (w2 * w2);
    const double s_sql = sql_spectrum(sql, omega);
    return {to_x * chi_free2 * evaluate(noise.force, omega) / s_sql,
            to_x * evaluate(noise.sensing, omega) / s_sql};
}

double displacement_referred_sum(const NoiseModel& noise, const SqlReference& sql, double omega) {
    return displacement_referred_terms(noise, sql, omega).total();
}

}  // namespace lightmass
