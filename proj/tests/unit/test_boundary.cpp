#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "doctest.h"
#include "lightmass/boundary.hpp"

using namespace lightmass;

namespace {

SweepSpec small_spec(double omega_F = 10, double omega_q = 1) {
    SweepSpec s;
    s.plant.omega_q = omega_q;
    s.plant.gamma_m = 1e-3;
    s.noise = NoiseModel::white(omega_F, 1, 1);
    s.N = 24;
    s.lo = 0.5;
    s.hi = 4;
    s.coarse_points = 8;
    return s;
}

}  // namespace

TEST_CASE("noise along rays") {
    SweepSpec s = small_spec();
    const NoiseModel a = noise_on_ray(s, 25);
    CHECK(a.omega_S.value() == 25);
    CHECK(evaluate(a.sensing, 3) == doctest::Approx(2.0 / 625));
    CHECK(evaluate(a.force, 3) == doctest::Approx(200));

    s.ray = RayKind::beta_S;
    s.noise = NoiseModel::white(10, 5, 1);
    const NoiseModel b = noise_on_ray(s, 4);
    CHECK(b.omega_S.value() == doctest::Approx(2.5));
    CHECK(evaluate(b.sensing, 1) == doctest::Approx(4 * 2.0 / 25));
    CHECK(std::isinf(noise_on_ray(s, 0).omega_S.value()));
    CHECK(noise_on_ray(s, 0).sensing.is_zero());
    CHECK_THROWS_AS(noise_on_ray(s, -1), InvalidInput);

    s.lo = 0.1;
    s.hi = 7;
    CHECK(ray_bracket(s) == std::pair{0.1, 7.0});
    s.ray = RayKind::omega_S;
    CHECK(ray_bracket(s) == std::pair{1.0, 70.0});
    s.hi = 0.05;
    CHECK_THROWS_AS(ray_bracket(s), InvalidInput);
}

TEST_CASE("transition on an omega_S ray") {
    const SweepSpec s = small_spec();
    const BoundaryPoint bp = find_transition(s);
    CHECK(bp.scan.sign_changes == 1);
    CHECK(bp.lo <= bp.x_star);
    CHECK(bp.x_star <= bp.hi);
    CHECK(bp.hi / bp.lo - 1 <= s.rel_width);
    CHECK(bp.x_star > 5);
    CHECK(bp.x_star < 40);
    // entangled at low sensing noise (large omega_S)
    CHECK(bp.nu_hi < 1);
    CHECK(bp.nu_lo > 1);
    CHECK(bp.report_verdicts_differ);
    CHECK(bp.nu_report_below > 1);
    CHECK(bp.nu_report_above < 1);
    CHECK(bp.doubled_checked);
    // refinement only lowers nu (nested bases)
    CHECK(bp.nu_doubled_below <= bp.nu_report_below + 1e-12);

    // deterministic: a second run is bit-identical
    const BoundaryPoint again = find_transition(s);
    CHECK(again.x_star == bp.x_star);
    CHECK(again.nu_mid == bp.nu_mid);
    CHECK(again.iterations == bp.iterations);
}

TEST_CASE("no transition in the bracket") {
    SweepSpec s = small_spec();
    s.lo = 0.01;
    s.hi = 0.05;
    CHECK_THROWS_AS(find_transition(s), NoTransition);
    try {
        find_transition(s);
    } catch (const NoTransition& e) {
        CHECK(std::string(e.what()).rfind("no-transition-in-range", 0) == 0);
    }
}

TEST_CASE("beta_S ray matches the omega_S ray") {
    // beta_S scales S_S = 2 w_m / W_S^2, so beta* = (W_base / W_S*)^2.
    const SweepSpec s = small_spec();
    const BoundaryPoint a = find_transition(s);
    SweepSpec b = s;
    b.ray = RayKind::beta_S;
    b.noise = NoiseModel::white(10, 20, 1);
    b.lo = 0.05;
    b.hi = 20;
    b.basis = a.basis;
    const BoundaryPoint bb = find_transition(b);
    CHECK(bb.x_star == doctest::Approx(std::pow(20 / a.x_star, 2)).epsilon(3e-3));
    CHECK(bb.nu_lo < 1);  // small beta: little sensing noise
    CHECK(bb.nu_hi > 1);

    // log-negativity does not increase with the sensing amplitude
    double prev = std::numeric_limits<double>::infinity();
    for (double beta : {0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 8.0}) {
        const double en = evaluate_on_ray(b, a.basis, beta).verdict.log_negativity;
        CHECK(en <= prev + 1e-12);
        prev = en;
    }
}

TEST_CASE("universality and loss studies") {
    SweepSpec s = small_spec();
    const std::vector<double> wq = {0.5, 2.0};
    const UniversalityResult u1 = universality_study(wq, s, 1);
    const UniversalityResult u2 = universality_study(wq, s, 2);
    REQUIRE(u1.points.size() == 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(u1.points[i].plant.omega_q == wq[i]);
        CHECK(u1.points[i].x_star == u2.points[i].x_star);
    }
    CHECK(u1.spread == relative_spread(u1.points));
    CHECK(u1.spread >= 0);

    const LossStudyResult l = loss_study({1.0, 0.8}, wq, s, 1);
    REQUIRE(l.studies.size() == 2);
    for (int i = 0; i < 2; ++i) CHECK(l.studies[0].points[i].x_star == u1.points[i].x_star);
    // loss can only make entanglement harder to keep: boundary moves to larger omega_S
    for (int i = 0; i < 2; ++i) CHECK(l.studies[1].points[i].x_star >= l.studies[0].points[i].x_star);
    CHECK_THROWS_AS(loss_study({0.0}, wq, s, 1), InvalidInput);
    CHECK_THROWS_AS(universality_study({}, s, 1), InvalidInput);
}

TEST_CASE("relative spread") {
    std::vector<BoundaryPoint> pts(3);
    pts[0].x_star = 1;
    pts[1].x_star = 2;
    pts[2].x_star = 3;
    CHECK(relative_spread(pts) == doctest::Approx(1.0));
    CHECK(relative_spread({}) == 0);
}

TEST_CASE("sweep grid") {
    SweepSpec s = small_spec();
    const std::vector<double> wF = {1, 10}, wS = {0.0, 5, 1e3};
    const auto rec = sweep(wF, wS, s, 2);
    REQUIRE(rec.size() == 6);
    for (int i = 0; i < 6; ++i) {
        CHECK(rec[i].run_id == i);
        CHECK(rec[i].omega_F == wF[i / 3]);
        CHECK(rec[i].omega_S == wS[i % 3]);
    }
    // W_S = 0 is invalid: the error is recorded and the sweep continues
    CHECK(rec[0].status.rfind("error: ", 0) == 0);
    CHECK(std::isnan(rec[0].verdict.nu_min));
    CHECK(rec[1].status == "ok");
    CHECK(rec[2].status == "ok");
    CHECK(rec[2].verdict.entangled());
    CHECK(rec[5].verdict.nu_min < rec[4].verdict.nu_min);
    CHECK_THROWS_AS(sweep({}, wS, s), InvalidInput);
}

TEST_CASE("parallel_for") {
    std::vector<int> hit(100, 0);
    parallel_for(100, 3, [&](int i) { hit[i] += 1; });
    for (int h : hit) CHECK(h == 1);
    std::atomic<int> count = 0;
    CHECK_THROWS_AS(parallel_for(20, 2,
                                 [&](int i) {
                                     ++count;
                                     if (i == 7) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}
