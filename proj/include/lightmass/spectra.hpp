#pragma once

#include <optional>
#include <vector>

#include "lightmass/common.hpp"

namespace lightmass {

// Roots of sum_k c[k] x^k via the balanced companion matrix.
std::vector<Complex> polynomial_roots(const std::vector<Real>& ascending);

// S(W) = amplitude * P(W^2) / Q(W^2). Coefficients are ascending in powers
// of W^2, so evenness holds by construction. Immutable after construction.
class RationalSpectrum {
  public:
    static constexpr int max_degree = 16;  // in W
    static constexpr double root_tolerance = 1e-10;

    RationalSpectrum(std::vector<double> numerator, std::vector<double> denominator,
                     double amplitude = 1.0);

    static RationalSpectrum constant(double level);
    static RationalSpectrum zero() { return constant(0.0); }

    const std::vector<double>& numerator() const { return num_; }
    const std::vector<double>& denominator() const { return den_; }
    double amplitude() const { return amplitude_; }

    bool is_zero() const;
    // True when P and Q are both degree zero.
    bool is_white() const { return num_.size() == 1 && den_.size() == 1; }
    Real at_infinity() const;

    Real operator()(Real omega) const;

  private:
    std::vector<double> num_;
    std::vector<double> den_;
    double amplitude_;
};

double evaluate(const RationalSpectrum& s, double omega);

// 2 W_F^2 / w_m.
RationalSpectrum white_force(double omega_F, double omega_m);
// 2 w_m / W_S^2; W_S = +inf gives the zero spectrum.
RationalSpectrum white_sensing(double omega_S, double omega_m);
RationalSpectrum scale(const RationalSpectrum& s, double factor);

struct NoiseModel {
    RationalSpectrum force = RationalSpectrum::zero();
    RationalSpectrum sensing = RationalSpectrum::zero();
    std::optional<double> omega_F;
    std::optional<double> omega_S;

    static NoiseModel white(double omega_F, double omega_S, double omega_m);
};

struct SqlReference {
    double mass = 1.0;
    double hbar = 1.0;
    double omega_m = 1.0;

    void validate() const;
};

// Single-sided free-mass SQL, 2 hbar / (M W^2).
double sql_spectrum(const SqlReference& sql, double omega);

struct DisplacementTerms {
    double force;
    double sensing;
    double total() const { return force + sensing; }
};

// Force and sensing noise referred to displacement, as ratios to the SQL.
DisplacementTerms displacement_referred_terms(const NoiseModel& noise, const SqlReference& sql,
                                              double omega);
double displacement_referred_sum(const NoiseModel& noise, const SqlReference& sql, double omega);

}  // namespace lightmass
