#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lightmass/covariance.hpp"
#include "lightmass/entanglement.hpp"
#include "lightmass/plant.hpp"
#include "lightmass/spectra.hpp"
#include "lightmass/squeeze.hpp"

namespace lightmass {

// Which amplitude moves along a ray. omega_S: white sensing corner at a
// fixed force noise (entangled at the high end). beta_S: global amplitude of
// the base sensing spectrum (entangled at the low end).
enum class RayKind { omega_S, beta_S };

std::string to_string(RayKind kind);

struct SweepSpec {
    PlantParams plant;
    InputFieldState input;
    // fds only: retune the filter for each plant (band in units of W_q when
    // relative_band is set).
    std::optional<TuneBand> autotune;
    bool relative_band = true;
    NoiseModel noise;  // base model; the ray replaces or rescales the sensing part
    RayKind ray = RayKind::omega_S;
    // Bracket. On omega_S rays, multiples of the force corner (omega_F or its
    // white equivalent); on beta_S rays, absolute amplitudes.
    double lo = 0.5;
    double hi = 4.0;
    std::optional<TemporalModeBasis> basis;  // default: auto_basis with N below
    int N = 128;
    CovarianceOptions cov;
    PptTolerances tol;
    int coarse_points = 16;
    double rel_width = 1e-3;
    double delta_report = 1e-2;
    bool verify_doubled_n = true;
};

NoiseModel noise_on_ray(const SweepSpec& spec, double x);
// The input actually used: spec.input, or the retuned filter when autotune is set.
InputFieldState ray_input(const SweepSpec& spec);
TemporalModeBasis ray_basis(const SweepSpec& spec);
// Absolute bracket on the ray.
std::pair<double, double> ray_bracket(const SweepSpec& spec);

struct PointResult {
    double x;
    EntanglementVerdict verdict;
};

PointResult evaluate_on_ray(const SweepSpec& spec, const TemporalModeBasis& basis, double x);

struct CoarseScan {
    std::vector<double> x;
    std::vector<double> surrogate;  // nu_min - 1
    int sign_changes = 0;
};

CoarseScan coarse_scan(const SweepSpec& spec, const TemporalModeBasis& basis);

struct BoundaryPoint {
    double omega_F = 0.0;  // NaN when the force noise is not white
    double x_star = 0.0;   // W_S* or beta_S*
    RayKind ray = RayKind::omega_S;
    PlantParams plant;
    InputFieldState input;
    double lo = 0.0, hi = 0.0;      // final bracket
    double nu_lo = 0.0, nu_hi = 0.0;
    double nu_mid = 0.0;
    int iterations = 0;
    TemporalModeBasis basis;
    CoarseScan scan;
    // x* (1 -+ delta_report) on the working basis
    double nu_report_below = 0.0, nu_report_above = 0.0;
    bool report_verdicts_differ = false;
    // x* (1 -+ 0.01) at doubled N: opposite signs put the doubled-N boundary within 1%
    bool doubled_checked = false;
    double nu_doubled_below = 0.0, nu_doubled_above = 0.0;
    bool doubled_within_1pct = false;
};

BoundaryPoint find_transition(const SweepSpec& spec);

struct UniversalityResult {
    std::vector<BoundaryPoint> points;
    double spread = 0.0;  // max |x*_i - x*_j| / mean
};

double relative_spread(const std::vector<BoundaryPoint>& points);

UniversalityResult universality_study(const std::vector<double>& omega_q, const SweepSpec& spec,
                                      int threads = 1);

struct LossStudyResult {
    std::vector<double> eta;
    std::vector<UniversalityResult> studies;  // one per eta, over the same W_q list
};

LossStudyResult loss_study(const std::vector<double>& eta, const std::vector<double>& omega_q,
                           const SweepSpec& spec, int threads = 1);

struct SweepRecord {
    int run_id = 0;
    PlantParams plant;
    InputFieldState input;
    double omega_F = 0.0;
    double omega_S = 0.0;
    TemporalModeBasis basis;
    EntanglementVerdict verdict;
    std::string status;  // "ok", "indeterminate" or "error: ..."
};

// Row-major over omega_F (outer) and omega_S (inner); the ray kind of spec
// is ignored, both axes are white-noise corners.
std::vector<SweepRecord> sweep(const std::vector<double>& omega_F,
                               const std::vector<double>& omega_S, const SweepSpec& spec,
                               int threads = 1);

// Runs fn(i) for i in [0, n) on up to `threads` workers.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace lightmass
