#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lightmass/boundary.hpp"

namespace lightmass {

enum class OutputFormat { csv, records };

OutputFormat parse_output_format(const std::string& name);

inline constexpr const char* csv_header =
    "run_id,omega_m,gamma_m,omega_q,eta,squeeze_kind,r,theta,gamma_f,delta,omega_F,omega_S,"
    "N,tau,nu_min,log_negativity,schur_indicator,entangled,status";

// One evaluated point in the shared column layout.
struct Row {
    int run_id = 0;
    PlantParams plant;
    InputFieldState input;
    double omega_F = 0.0;
    double omega_S = 0.0;
    TemporalModeBasis basis;
    double nu_min = 0.0;
    double log_negativity = 0.0;
    double schur_indicator = 0.0;
    bool entangled = false;
    std::string status;
    // Written only in records format.
    std::vector<std::pair<std::string, std::string>> extra;
};

Row to_row(const SweepRecord& r);
// A boundary as a row: omega_S = W_S* (or the equivalent corner on a beta_S
// ray), nu_min at the midpoint, status "boundary".
Row to_row(const BoundaryPoint& b, int run_id);

std::string format_number(double x);

// csv: the header then one line per row; records: one line of key=value
// tokens per row.
void write_rows(std::ostream& os, const std::vector<Row>& rows, OutputFormat format);

}  // namespace lightmass
