#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lightmass/boundary.hpp"

namespace lightmass {

// Line-oriented "key = value" file; '#' starts a comment, lists are comma
// or space separated, numbers accept "inf". Unknown keys are errors.
//
//   plant.omega_m  plant.gamma_m  plant.omega_q  plant.eta
//   noise.force.kind = white | rational      noise.sensing.kind likewise
//   noise.force.omega_F                      noise.sensing.omega_S (may be inf)
//   noise.<part>.numerator / .denominator    ascending coefficients in W^2
//   noise.<part>.amplitude
//   squeeze.kind = vacuum | fis | fds   squeeze.r  squeeze.theta
//   squeeze.gamma_f  squeeze.delta  squeeze.autotune = true | false
//   squeeze.band = lo, hi   squeeze.band_relative = true | false
//   basis.N  basis.tau = <number> | auto
//   quad.method = state_space | quadrature  quad.omega_max  quad.points_per_decade
//   quad.nodes_per_panel  quad.tail_order
//   tol.eps_ppt  tol.eps_det  tol.eps_phys  tol.eps_imag  tol.rel_width  tol.delta_report
//   sweep.ray = omega_S | beta_S   sweep.bracket = lo, hi   sweep.coarse_points
//   sweep.verify_doubled_n   sweep.omega_F  sweep.omega_S  sweep.omega_q  sweep.eta
//   sweep.beta_S   sweep.omega_range = lo, hi   sweep.points
struct NoisePartConfig {
    std::string kind = "white";
    double corner = 100.0;  // omega_F or omega_S
    std::vector<double> numerator{1.0};
    std::vector<double> denominator{1.0};
    double amplitude = 1.0;
};

struct Config {
    PlantParams plant;
    NoisePartConfig force;
    NoisePartConfig sensing;
    InputFieldState input;
    bool autotune = false;
    TuneBand band{0.1, 10.0};
    bool band_relative = true;
    int N = 128;
    std::optional<double> tau;  // empty: auto
    CovarianceOptions cov;
    PptTolerances tol;
    double rel_width = 1e-3;
    double delta_report = 1e-2;
    RayKind ray = RayKind::omega_S;
    double bracket_lo = 0.5, bracket_hi = 4.0;
    int coarse_points = 16;
    bool verify_doubled_n = true;
    std::vector<double> omega_F_list;
    std::vector<double> omega_S_list;
    std::vector<double> omega_q_list;
    std::vector<double> eta_list;
    std::vector<double> beta_S_list;
    double range_lo = 0.1, range_hi = 1000.0;
    int points = 200;

    NoiseModel noise() const;
    // The input with the filter retuned when autotune is on.
    InputFieldState resolved_input() const;
    std::optional<TemporalModeBasis> basis() const;
    SweepSpec sweep_spec() const;
};

Config parse_config(std::istream& in);
Config load_config(const std::string& path);

}  // namespace lightmass
