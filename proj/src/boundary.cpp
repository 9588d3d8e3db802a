#include "lightmass/boundary.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace lightmass {

std::string to_string(RayKind kind) {
    return kind == RayKind::omega_S ? "omega_S" : "beta_S";
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    const int workers = std::clamp(threads, 1, std::max(n, 1));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first;
    std::mutex guard;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(guard);
                    if (!first) first = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first) std::rethrow_exception(first);
}

NoiseModel noise_on_ray(const SweepSpec& spec, double x) {
    NoiseModel n = spec.noise;
    const double wm = spec.plant.omega_m;
    if (spec.ray == RayKind::omega_S) {
        n.sensing = white_sensing(x, wm);
        n.omega_S = x;
    } else {
        if (!(x >= 0) || !std::isfinite(x)) throw InvalidInput("beta_S must be finite and >= 0");
        n.sensing = scale(spec.noise.sensing, x);
        if (spec.noise.omega_S && x > 0)
            n.omega_S = *spec.noise.omega_S / std::sqrt(x);
        else if (x == 0)
            n.omega_S = std::numeric_limits<double>::infinity();
        else
            n.omega_S.reset();
    }
    return n;
}

InputFieldState ray_input(const SweepSpec& spec) {
    if (!spec.autotune || spec.input.kind != SqueezeKind::fds) return spec.input;
    TuneBand band = *spec.autotune;
    if (spec.relative_band) {
        band.lo *= spec.plant.omega_q;
        band.hi *= spec.plant.omega_q;
    }
    InputFieldState s = autotune_filter(spec.plant, spec.input.r, band);
    return s;
}

TemporalModeBasis ray_basis(const SweepSpec& spec) {
    if (spec.basis) return *spec.basis;
    const auto [lo, hi] = ray_bracket(spec);
    (void)hi;
    return auto_basis(spec.plant, noise_on_ray(spec, lo), ray_input(spec), spec.N);
}

std::pair<double, double> ray_bracket(const SweepSpec& spec) {
    if (!(spec.lo > 0) || !(spec.hi > spec.lo) || !std::isfinite(spec.hi))
        throw InvalidInput("bracket: need 0 < lo < hi < inf");
    if (spec.ray == RayKind::beta_S) return {spec.lo, spec.hi};
    const double corner = characteristic_rate(
        PlantParams{spec.plant.omega_m, spec.plant.gamma_m, 0.0, spec.plant.eta},
        spec.noise, InputFieldState::vacuum());
    const double scale = spec.noise.omega_F ? *spec.noise.omega_F : corner;
    return {spec.lo * scale, spec.hi * scale};
}

namespace {

PointResult evaluate_with(const SweepSpec& spec, const InputFieldState& input,
                          const TemporalModeBasis& basis, double x) {
    CovarianceOptions cov = spec.cov;
    cov.eps_phys = spec.tol.eps_phys;
    const CovarianceMatrix V = build_covariance(spec.plant, noise_on_ray(spec, x), input, basis, cov);
    return {x, evaluate_entanglement(V, spec.tol)};
}

// Sign of the surrogate nu_min - 1 in the direction of "more sensing noise":
// positive means separable side.
int side(double nu) { return nu > 1 ? 1 : (nu < 1 ? -1 : 0); }

CoarseScan scan_with(const SweepSpec& spec, const InputFieldState& input,
                     const TemporalModeBasis& basis) {
    const auto [lo, hi] = ray_bracket(spec);
    const int n = std::max(spec.coarse_points, 2);
    CoarseScan out;
    for (int i = 0; i < n; ++i) {
        const double x = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
        out.x.push_back(x);
        out.surrogate.push_back(evaluate_with(spec, input, basis, x).verdict.nu_min - 1);
    }
    for (int i = 0; i + 1 < n; ++i)
        if (side(out.surrogate[i] + 1) * side(out.surrogate[i + 1] + 1) < 0) ++out.sign_changes;
    return out;
}

}  // namespace

PointResult evaluate_on_ray(const SweepSpec& spec, const TemporalModeBasis& basis, double x) {
    return evaluate_with(spec, ray_input(spec), basis, x);
}

CoarseScan coarse_scan(const SweepSpec& spec, const TemporalModeBasis& basis) {
    return scan_with(spec, ray_input(spec), basis);
}

BoundaryPoint find_transition(const SweepSpec& spec) {
    spec.plant.validate();
    const InputFieldState input = ray_input(spec);
    BoundaryPoint bp;
    bp.ray = spec.ray;
    bp.plant = spec.plant;
    bp.input = input;
    bp.omega_F = spec.noise.omega_F ? *spec.noise.omega_F : std::numeric_limits<double>::quiet_NaN();
    SweepSpec fixed = spec;
    fixed.input = input;
    fixed.autotune.reset();
    bp.basis = ray_basis(fixed);

    bp.scan = scan_with(fixed, input, bp.basis);
    const CoarseScan& sc = bp.scan;
    if (sc.sign_changes == 0) {
        std::ostringstream msg;
        msg << "no-transition-in-range: nu_min - 1 keeps one sign on [" << sc.x.front() << ", "
            << sc.x.back() << "] (" << sc.surrogate.front() << " .. " << sc.surrogate.back() << ")";
        throw NoTransition(msg.str());
    }
    if (sc.sign_changes > 1) {
        std::ostringstream msg;
        msg << "uniqueness alarm: " << sc.sign_changes << " sign changes on the coarse scan:";
        for (std::size_t i = 0; i < sc.x.size(); ++i) msg << " (" << sc.x[i] << ", " << sc.surrogate[i] << ")";
        throw NumericalFailure(msg.str());
    }
    std::size_t k = 0;
    while (side(sc.surrogate[k] + 1) * side(sc.surrogate[k + 1] + 1) >= 0) ++k;
    double lo = sc.x[k], hi = sc.x[k + 1];
    double nu_lo = sc.surrogate[k] + 1, nu_hi = sc.surrogate[k + 1] + 1;
    const int s_lo = side(nu_lo);

    // Bisection in log x on the sign of nu_min - 1; inside the indeterminate
    // band the sign is still resolved, since nu is far more accurate than eps_ppt.
    while (hi / lo - 1 > spec.rel_width) {
        const double mid = std::sqrt(lo * hi);
        const double nu = evaluate_with(fixed, input, bp.basis, mid).verdict.nu_min;
        ++bp.iterations;
        if (side(nu) == 0) {
            lo = hi = mid;
            nu_lo = nu_hi = nu;
            break;
        }
        if (side(nu) == s_lo) {
            lo = mid;
            nu_lo = nu;
        } else {
            hi = mid;
            nu_hi = nu;
        }
    }
    bp.lo = lo;
    bp.hi = hi;
    bp.nu_lo = nu_lo;
    bp.nu_hi = nu_hi;
    bp.x_star = (lo + hi) / 2;
    bp.nu_mid = evaluate_with(fixed, input, bp.basis, bp.x_star).verdict.nu_min;

    const double d = spec.delta_report;
    bp.nu_report_below = evaluate_with(fixed, input, bp.basis, bp.x_star * (1 - d)).verdict.nu_min;
    bp.nu_report_above = evaluate_with(fixed, input, bp.basis, bp.x_star * (1 + d)).verdict.nu_min;
    bp.report_verdicts_differ = side(bp.nu_report_below) * side(bp.nu_report_above) < 0;

    if (spec.verify_doubled_n) {
        TemporalModeBasis big = bp.basis;
        big.N *= 2;
        bp.doubled_checked = true;
        bp.nu_doubled_below = evaluate_with(fixed, input, big, bp.x_star * 0.99).verdict.nu_min;
        bp.nu_doubled_above = evaluate_with(fixed, input, big, bp.x_star * 1.01).verdict.nu_min;
        bp.doubled_within_1pct = side(bp.nu_doubled_below) * side(bp.nu_doubled_above) < 0;
    }
    return bp;
}

double relative_spread(const std::vector<BoundaryPoint>& points) {
    if (points.empty()) return 0;
    double lo = points.front().x_star, hi = lo, sum = 0;
    for (const auto& p : points) {
        lo = std::min(lo, p.x_star);
        hi = std::max(hi, p.x_star);
        sum += p.x_star;
    }
    return (hi - lo) / (sum / points.size());
}

UniversalityResult universality_study(const std::vector<double>& omega_q, const SweepSpec& spec,
                                      int threads) {
    if (omega_q.empty()) throw InvalidInput("universality_study: empty omega_q list");
    UniversalityResult out;
    out.points.resize(omega_q.size());
    parallel_for(static_cast<int>(omega_q.size()), threads, [&](int i) {
        SweepSpec s = spec;
        s.plant.omega_q = omega_q[i];
        out.points[i] = find_transition(s);
    });
    out.spread = relative_spread(out.points);
    return out;
}

LossStudyResult loss_study(const std::vector<double>& eta, const std::vector<double>& omega_q,
                           const SweepSpec& spec, int threads) {
    LossStudyResult out;
    for (double e : eta) {
        SweepSpec s = spec;
        s.plant.eta = e;
        s.plant.validate();
        out.eta.push_back(e);
        out.studies.push_back(universality_study(omega_q, s, threads));
    }
    return out;
}

std::vector<SweepRecord> sweep(const std::vector<double>& omega_F,
                               const std::vector<double>& omega_S, const SweepSpec& spec,
                               int threads) {
    if (omega_F.empty() || omega_S.empty()) throw InvalidInput("sweep: empty grid");
    const int n = static_cast<int>(omega_F.size() * omega_S.size());
    std::vector<SweepRecord> out(n);
    parallel_for(n, threads, [&](int i) {
        SweepRecord& r = out[i];
        r.run_id = i;
        r.plant = spec.plant;
        r.omega_F = omega_F[i / omega_S.size()];
        r.omega_S = omega_S[i % omega_S.size()];
        try {
            SweepSpec s = spec;
            s.noise = NoiseModel::white(r.omega_F, r.omega_S, spec.plant.omega_m);
            s.ray = RayKind::omega_S;
            r.input = ray_input(s);
            r.basis = spec.basis ? *spec.basis : auto_basis(s.plant, s.noise, r.input, spec.N);
            CovarianceOptions cov = spec.cov;
            cov.eps_phys = spec.tol.eps_phys;
            const CovarianceMatrix V = build_covariance(s.plant, s.noise, r.input, r.basis, cov);
            r.verdict = evaluate_entanglement(V, spec.tol);
            r.status = r.verdict.verdict == Verdict::indeterminate ? "indeterminate" : "ok";
        } catch (const std::exception& e) {
            r.input = spec.input;
            r.verdict.nu_min = r.verdict.log_negativity = r.verdict.schur_indicator =
                std::numeric_limits<double>::quiet_NaN();
            r.status = std::string("error: ") + e.what();
        }
    });
    return out;
}

}  // namespace lightmass
