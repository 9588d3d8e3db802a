#include "lightmass/records.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace lightmass {

OutputFormat parse_output_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "records") return OutputFormat::records;
    throw InvalidInput("unknown output format '" + name + "' (csv or records)");
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

Row to_row(const SweepRecord& r) {
    Row row;
    row.run_id = r.run_id;
    row.plant = r.plant;
    row.input = r.input;
    row.omega_F = r.omega_F;
    row.omega_S = r.omega_S;
    row.basis = r.basis;
    row.nu_min = r.verdict.nu_min;
    row.log_negativity = r.verdict.log_negativity;
    row.schur_indicator = r.verdict.schur_indicator;
    row.entangled = r.verdict.entangled();
    row.status = r.status;
    row.extra = {{"verdict", to_string(r.verdict.verdict)},
                 {"second_nu", format_number(r.verdict.diagnostics.second_nu)},
                 {"symplectic_method", r.verdict.diagnostics.symplectic_method}};
    return row;
}

Row to_row(const BoundaryPoint& b, int run_id) {
    Row row;
    row.run_id = run_id;
    row.plant = b.plant;
    row.input = b.input;
    row.omega_F = b.omega_F;
    row.omega_S = b.x_star;
    row.basis = b.basis;
    row.nu_min = b.nu_mid;
    row.log_negativity = b.nu_mid < 1 ? -std::log(b.nu_mid) : 0.0;
    row.schur_indicator = std::nan("");
    row.entangled = b.nu_mid < 1;
    row.status = "boundary";
    row.extra = {{"ray", to_string(b.ray)},
                 {"x_star", format_number(b.x_star)},
                 {"bracket_lo", format_number(b.lo)},
                 {"bracket_hi", format_number(b.hi)},
                 {"nu_lo", format_number(b.nu_lo)},
                 {"nu_hi", format_number(b.nu_hi)},
                 {"iterations", std::to_string(b.iterations)},
                 {"nu_report_below", format_number(b.nu_report_below)},
                 {"nu_report_above", format_number(b.nu_report_above)},
                 {"report_verdicts_differ", b.report_verdicts_differ ? "true" : "false"},
                 {"doubled_checked", b.doubled_checked ? "true" : "false"},
                 {"doubled_within_1pct", b.doubled_within_1pct ? "true" : "false"}};
    if (b.ray == RayKind::beta_S) row.omega_S = std::nan("");
    return row;
}

namespace {

std::vector<std::pair<std::string, std::string>> fields(const Row& r) {
    const auto& f = r.input.filter;
    const bool fds = r.input.kind == SqueezeKind::fds;
    return {{"run_id", std::to_string(r.run_id)},
            {"omega_m", format_number(r.plant.omega_m)},
            {"gamma_m", format_number(r.plant.gamma_m)},
            {"omega_q", format_number(r.plant.omega_q)},
            {"eta", format_number(r.plant.eta)},
            {"squeeze_kind", to_string(r.input.kind)},
            {"r", format_number(r.input.kind == SqueezeKind::vacuum ? 0.0 : r.input.r)},
            {"theta", format_number(r.input.kind == SqueezeKind::vacuum ? 0.0 : r.input.theta)},
            {"gamma_f", format_number(fds ? f.gamma_f : std::nan(""))},
            {"delta", format_number(fds ? f.delta : std::nan(""))},
            {"omega_F", format_number(r.omega_F)},
            {"omega_S", format_number(r.omega_S)},
            {"N", std::to_string(r.basis.N)},
            {"tau", format_number(r.basis.tau)},
            {"nu_min", format_number(r.nu_min)},
            {"log_negativity", format_number(r.log_negativity)},
            {"schur_indicator", format_number(r.schur_indicator)},
            {"entangled", r.entangled ? "true" : "false"},
            {"status", r.status}};
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

std::string record_escape(const std::string& s) {
    std::string out;
    for (char c : s) out += (c == ' ' || c == '\n') ? '_' : c;
    return out;
}

}  // namespace

void write_rows(std::ostream& os, const std::vector<Row>& rows, OutputFormat format) {
    if (format == OutputFormat::csv) os << csv_header << "\n";
    for (const Row& r : rows) {
        auto kv = fields(r);
        if (format == OutputFormat::csv) {
            for (std::size_t i = 0; i < kv.size(); ++i) os << (i ? "," : "") << csv_escape(kv[i].second);
        } else {
            kv.insert(kv.end(), r.extra.begin(), r.extra.end());
            for (std::size_t i = 0; i < kv.size(); ++i)
                os << (i ? " " : "") << kv[i].first << "=" << record_escape(kv[i].second);
        }
        os << "\n";
    }
}

}  // namespace lightmass
