// lightmass: optomechanical entanglement verdicts and transition maps.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lightmass/config.hpp"
#include "lightmass/records.hpp"

using namespace lightmass;

namespace {

struct Globals {
    std::string config;
    std::string out;
    std::string format = "csv";
    int threads = 1;
    unsigned long seed = 0;  // only the stochastic oracle tests consume a seed
};

Config load(const Globals& g) { return g.config.empty() ? Config{} : load_config(g.config); }

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty() || g.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out);
    if (!f) throw InvalidInput("cannot write '" + g.out + "'");
    f << text;
}

void emit_rows(const Globals& g, const std::vector<Row>& rows) {
    std::ostringstream os;
    write_rows(os, rows, parse_output_format(g.format));
    emit(g, os.str());
}

std::vector<double> required(const std::vector<double>& v, const char* key) {
    if (v.empty()) throw InvalidInput(std::string("config: ") + key + " is required here");
    return v;
}

void run_verdict(const Globals& g, const std::string& dump) {
    const Config c = load(g);
    const NoiseModel noise = c.noise();
    const InputFieldState input = c.resolved_input();
    const TemporalModeBasis basis = c.basis() ? *c.basis() : auto_basis(c.plant, noise, input, c.N);
    CovarianceOptions cov = c.cov;
    cov.eps_phys = c.tol.eps_phys;
    const CovarianceMatrix V = build_covariance(c.plant, noise, input, basis, cov);
    if (!dump.empty()) {
        std::ofstream f(dump);
        if (!f) throw InvalidInput("cannot write '" + dump + "'");
        write_covariance(f, V);
    }
    SweepRecord r;
    r.plant = c.plant;
    r.input = input;
    r.omega_F = noise.omega_F ? *noise.omega_F : std::nan("");
    r.omega_S = noise.omega_S ? *noise.omega_S : std::nan("");
    r.basis = basis;
    r.verdict = evaluate_entanglement(V, c.tol);
    r.status = r.verdict.verdict == Verdict::indeterminate ? "indeterminate" : "ok";
    emit_rows(g, {to_row(r)});
}

void run_transition(const Globals& g) {
    const Config c = load(g);
    emit_rows(g, {to_row(find_transition(c.sweep_spec()), 0)});
}

void run_sweep(const Globals& g) {
    const Config c = load(g);
    std::vector<double> omega_S = c.omega_S_list;
    for (double beta : c.beta_S_list) {
        if (!(beta >= 0)) throw InvalidInput("config: sweep.beta_S entries must be >= 0");
        omega_S.push_back(beta == 0 ? INFINITY : std::sqrt(2 * c.plant.omega_m / beta));
    }
    const auto records = sweep(required(c.omega_F_list, "sweep.omega_F"),
                               required(omega_S, "sweep.omega_S or sweep.beta_S"), c.sweep_spec(),
                               g.threads);
    std::vector<Row> rows;
    for (const auto& r : records) rows.push_back(to_row(r));
    emit_rows(g, rows);
}

void append_study(std::vector<Row>& rows, const UniversalityResult& u) {
    for (const auto& p : u.points) {
        rows.push_back(to_row(p, static_cast<int>(rows.size())));
        rows.back().extra.emplace_back("spread", format_number(u.spread));
    }
    std::cerr << "spread=" << format_number(u.spread) << "\n";
}

void run_universality(const Globals& g) {
    const Config c = load(g);
    std::vector<Row> rows;
    append_study(rows, universality_study(required(c.omega_q_list, "sweep.omega_q"), c.sweep_spec(),
                                          g.threads));
    emit_rows(g, rows);
}

void run_loss(const Globals& g) {
    const Config c = load(g);
    const auto res = loss_study(required(c.eta_list, "sweep.eta"),
                                required(c.omega_q_list, "sweep.omega_q"), c.sweep_spec(), g.threads);
    std::vector<Row> rows;
    for (const auto& u : res.studies) append_study(rows, u);
    emit_rows(g, rows);
}

// Output-referred amplitude spectra of the phase quadrature in shot-noise
// units: shot noise is 1 and the SQL is g sqrt(2 w_m) / W.
void run_spectra(const Globals& g) {
    const Config c = load(g);
    const NoiseModel noise = c.noise();
    const PlantParams& p = c.plant;
    const double gc = p.coupling();
    InputFieldState fis = c.input;
    fis.kind = SqueezeKind::fis;
    Config tuned = c;
    tuned.input.kind = SqueezeKind::fds;
    tuned.autotune = c.autotune || c.input.kind != SqueezeKind::fds;
    const InputFieldState fds = tuned.resolved_input();

    std::ostringstream os;
    os << "omega,force_noise,sensing_noise,quantum_vacuum,quantum_fis,quantum_fds,sql\n";
    for (int i = 0; i < c.points; ++i) {
        const double w = c.range_lo * std::pow(c.range_hi / c.range_lo, double(i) / (c.points - 1));
        const Real chi = std::abs(susceptibility(w, p));
        const auto amp = [](Real s) { return format_number(static_cast<double>(std::sqrt(s))); };
        os << format_number(w) << "," << amp(gc * gc * chi * chi * noise.force(w)) << ","
           << amp(gc * gc * noise.sensing(w)) << ","
           << amp(squeezed_quantum_noise_spectrum(p, InputFieldState::vacuum(), w)) << ","
           << amp(squeezed_quantum_noise_spectrum(p, fis, w)) << ","
           << amp(squeezed_quantum_noise_spectrum(p, fds, w)) << ","
           << format_number(gc * std::sqrt(2 * p.omega_m) / w) << "\n";
    }
    emit(g, os.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optomechanical entanglement verdicts and transition maps"};
    Globals g;
    app.add_option("--config", g.config, "key = value configuration file");
    app.add_option("--out", g.out, "output path (default stdout)");
    app.add_option("--format", g.format, "csv or records")->check(CLI::IsMember({"csv", "records"}));
    app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "seed (stochastic oracle tests only)");
    app.require_subcommand(1);

    std::string dump;
    auto* verdict = app.add_subcommand("verdict", "entanglement verdict at one point");
    verdict->add_option("--dump-covariance", dump, "write the covariance matrix here");
    auto* transition = app.add_subcommand("transition", "locate the transition along one ray");
    auto* sweep_cmd = app.add_subcommand("sweep", "verdicts on an (omega_F, omega_S) grid");
    auto* universality = app.add_subcommand("universality", "transition across the omega_q list");
    auto* loss = app.add_subcommand("loss", "universality study per eta");
    auto* spectra = app.add_subcommand("spectra", "amplitude spectra of noises and quantum noise");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*verdict) run_verdict(g, dump);
        if (*transition) run_transition(g);
        if (*sweep_cmd) run_sweep(g);
        if (*universality) run_universality(g);
        if (*loss) run_loss(g);
        if (*spectra) run_spectra(g);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NoTransition& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
