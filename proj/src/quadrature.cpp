// Frequency-domain covariance: V = (1/2pi) int S(W) (window transforms) dW,
// done panel by panel with Gauss-Legendre and an asymptotic tail past
// omega_max. Independent of the state-space route except for the model
// spectra themselves.
#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <Eigen/QR>
#include <boost/math/quadrature/gauss.hpp>

#include "lightmass/covariance.hpp"

namespace lightmass {

namespace {

using Block = std::array<Complex, 4>;  // row-major 2x2

struct Rule {
    std::vector<Real> x;  // on [-1, 1]
    std::vector<Real> w;
};

template <unsigned P>
Rule make_rule() {
    using G = boost::math::quadrature::gauss<Real, P>;
    Rule r;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
        r.x.push_back(a[i]);
        r.w.push_back(w[i]);
        if (a[i] != 0) {
            r.x.push_back(-a[i]);
            r.w.push_back(w[i]);
        }
    }
    return r;
}

Rule gauss_rule(int nodes) {
    switch (nodes) {
        case 15: return make_rule<15>();
        case 20: return make_rule<20>();
        case 30: return make_rule<30>();
        default: throw InvalidInput("quadrature: nodes_per_panel must be 15, 20 or 30");
    }
}

// S_vv(inf): the loss, the input light past the filter and white sensing noise.
Matrix2R vv_at_infinity(const PlantParams& p, const NoiseModel& noise, const InputFieldState& s) {
    InputFieldState far = s;
    if (far.kind == SqueezeKind::fds) far.kind = SqueezeKind::fis;
    const Real eta = p.eta;
    const Real g = p.coupling();
    Matrix2R m = eta * input_spectrum(0, far);
    m(1, 1) += eta * g * g * noise.sensing.at_infinity();
    m.diagonal().array() += 1 - eta;
    return m;
}

// Poles of the model as (center, width) on the positive axis.
std::vector<RefinementWindow> automatic_windows(const PlantParams& p, const NoiseModel& noise,
                                                const InputFieldState& s) {
    std::vector<RefinementWindow> out;
    const double wm = p.omega_m, g = p.gamma_m;
    out.push_back({std::sqrt(std::max(wm * wm - g * g / 4, 0.0)), std::max(g / 2, 1e-12 * wm)});
    if (s.kind == SqueezeKind::fds)
        out.push_back({std::abs(s.filter.delta), s.filter.gamma_f / 2});
    for (const RationalSpectrum* sp : {&noise.force, &noise.sensing}) {
        if (sp->is_zero()) continue;
        const std::vector<double>& den = sp->denominator();
        for (const Complex& y : polynomial_roots({den.begin(), den.end()})) {
            const Complex w = std::sqrt(y);
            out.push_back({static_cast<double>(std::abs(w.real())),
                           static_cast<double>(std::abs(w.imag()))});
        }
    }
    return out;
}

double largest_scale(const std::vector<RefinementWindow>& windows) {
    double s = 0;
    for (const auto& w : windows) s = std::max({s, w.center, w.width});
    return s;
}

// Lower bound on omega_max: 10 max(W_F, W_S, W_q^2 / w_m, 1/tau).
double omega_max_floor(const PlantParams& p, const NoiseModel& noise,
                       const TemporalModeBasis& basis) {
    double m = std::max(p.omega_q * p.omega_q / p.omega_m, 1.0 / basis.tau);
    if (noise.omega_F) m = std::max(m, *noise.omega_F);
    if (noise.omega_S && std::isfinite(*noise.omega_S)) m = std::max(m, *noise.omega_S);
    return 10 * m;
}

std::vector<Real> panel_edges(const QuadratureSettings& q, const TemporalModeBasis& basis,
                              Real x_max) {
    std::vector<Real> e{0, x_max};
    Real smallest = 1 / basis.span();
    for (const auto& w : q.refinements) {
        if (w.center > 0) smallest = std::min<Real>(smallest, w.center);
        if (w.width > 0) smallest = std::min<Real>(smallest, w.width);
    }
    const Real lo = 1e-4L * smallest;
    const Real step = std::pow(10.0L, 1 / static_cast<Real>(q.points_per_decade));
    for (Real x = lo; x < x_max; x *= step) e.push_back(x);

    // Geometric grading toward each pole center, finest at width/16.
    for (const auto& w : q.refinements) {
        if (!(w.width > 0)) continue;
        const Real c = w.center;
        if (c > 0 && c < x_max) e.push_back(c);
        for (Real o = w.width / 16.0L; o < x_max; o *= std::sqrt(2.0L)) {
            if (c + o < x_max) e.push_back(c + o);
            if (c - o > 0) e.push_back(c - o);
            if (o > 64 * w.width && o > c) break;
        }
    }
    std::sort(e.begin(), e.end());
    std::vector<Real> u{e.front()};
    for (Real x : e)
        if (x > u.back() * (1 + 1e-12L) + 1e-300L) u.push_back(x);

    // Cap the width so the window phases turn by at most pi per panel.
    const Real h_max = static_cast<Real>(M_PI) / basis.span() * 40 / q.points_per_decade;
    std::vector<Real> out{u.front()};
    for (std::size_t i = 1; i < u.size(); ++i) {
        const Real a = out.back(), b = u[i];
        const long pieces = std::max(1L, static_cast<long>(std::ceil((b - a) / h_max)));
        for (long j = 1; j <= pieces; ++j) out.push_back(a + (b - a) * j / pieces);
    }
    return out;
}

// J_p(a) = int_X^inf W^{-p} e^{-i a W} dW, p >= 2.
Complex tail_integral(int p, Real a, Real X) {
    if (a == 0) return Complex(std::pow(X, Real(1 - p)) / (p - 1), 0);
    const Complex ia(0, a);
    Complex sum = 0;
    Complex term = Real(1) / (ia * std::pow(X, Real(p)));
    Real prev = std::abs(term);
    for (int m = 0; m < 60; ++m) {
        sum += term;
        const Complex next = -term * Real(p + m) / (ia * X);
        const Real size = std::abs(next);
        if (size > prev || size < 1e-30L * std::abs(sum)) break;  // optimal truncation
        prev = size;
        term = next;
    }
    return std::polar(Real(1), -a * X) * sum;
}

// Coefficients c_1..c_J of S(W) ~ sum c_j W^{-j} past X, fitted in u = 1/W.
// Entry 0 of the result is the constant term, kept as a check.
std::vector<Block> fit_tail(const PlantParams& p, const NoiseModel& noise,
                            const InputFieldState& s, const Matrix2R& vv_inf, Real X, int order,
                            int block_row, int block_col) {
    const int samples = 2 * order + 4;
    MatrixR vand(samples, order + 1);
    MatrixC rhs(samples, 4);
    for (int i = 0; i < samples; ++i) {
        // Chebyshev points of (0, 1], mapped to u in (0, 1/X].
        const Real t = (1 + std::cos(static_cast<Real>(M_PI) * (i + 0.5L) / samples)) / 2;
        const Real u = t / X;
        for (int j = 0; j <= order; ++j) vand(i, j) = std::pow(t, Real(j));
        const auto S = spectral_density(1 / u, p, noise, s);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                Complex v = S(block_row + r, block_col + c);
                if (block_row == 2 && block_col == 2) v -= vv_inf(r, c);
                rhs(i, 2 * r + c) = v;
            }
    }
    const MatrixC coef = vand.cast<Complex>().colPivHouseholderQr().solve(rhs);
    std::vector<Block> out(order + 1);
    for (int j = 0; j <= order; ++j)
        for (int e = 0; e < 4; ++e) out[j][e] = coef(j, e) * std::pow(X, Real(j));  // t^j = (X u)^j
    return out;
}

}  // namespace

QuadratureSettings default_quadrature(const PlantParams& p, const NoiseModel& noise,
                                      const InputFieldState& s, const TemporalModeBasis& basis) {
    QuadratureSettings q;
    q.refinements = automatic_windows(p, noise, s);
    q.omega_max = std::max({omega_max_floor(p, noise, basis), 50.0 / basis.tau,
                            100.0 * largest_scale(q.refinements)});
    return q;
}

MatrixR quadrature_covariance(const PlantParams& p, const NoiseModel& noise,
                              const InputFieldState& s, const TemporalModeBasis& basis,
                              const QuadratureSettings& settings) {
    basis.validate();
    if (!(settings.points_per_decade >= 4))
        throw InvalidInput("quadrature: points_per_decade must be >= 4");
    if (settings.tail_order < 2 || settings.tail_order > 12)
        throw InvalidInput("quadrature: tail_order must lie in [2, 12]");
    const Rule rule = gauss_rule(settings.nodes_per_panel);

    QuadratureSettings q = default_quadrature(p, noise, s, basis);
    q.points_per_decade = settings.points_per_decade;
    q.nodes_per_panel = settings.nodes_per_panel;
    q.tail_order = settings.tail_order;
    q.refinements.insert(q.refinements.end(), settings.refinements.begin(),
                         settings.refinements.end());
    if (settings.omega_max > 0) {
        if (settings.omega_max < omega_max_floor(p, noise, basis))
            throw InvalidInput("quadrature: omega_max below 10 max(W_F, W_S, W_q^2/w_m, 1/tau)");
        q.omega_max = settings.omega_max;
    }

    const int N = basis.N;
    const Real tau = basis.tau;
    const Real X = q.omega_max;
    const Matrix2R vv_inf = vv_at_infinity(p, noise, s);

    Block bb{};
    std::vector<Block> bv(N, Block{}), vv(N, Block{});
    std::vector<Complex> phase(N);

    const std::vector<Real> edges = panel_edges(q, basis, X);
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
        const Real a = edges[e], b = edges[e + 1];
        const Real mid = (a + b) / 2, half = (b - a) / 2;
        for (std::size_t n = 0; n < rule.x.size(); ++n) {
            const Real w = mid + half * rule.x[n];
            const Real wt = half * rule.w[n];
            const auto S = spectral_density(w, p, noise, s);
            const Complex f1 = window_fourier(1, w, basis);
            const Real f2 = std::norm(f1);
            const Complex step = std::polar(Real(1), -w * tau);

            for (int i = 0; i < 4; ++i) bb[i] += wt * S(i / 2, i % 2);

            Block sbv, svv;
            for (int i = 0; i < 4; ++i) {
                sbv[i] = wt * S(i / 2, 2 + i % 2) * f1;
                svv[i] = wt * f2 * (S(2 + i / 2, 2 + i % 2) - vv_inf(i / 2, i % 2));
            }
            Complex ph = 1;
            for (int k = 0; k < N; ++k) {
                phase[k] = ph;
                ph *= step;
            }
            for (int k = 0; k < N; ++k) {
                const Complex c = phase[k], cc = std::conj(c);
                Block& B = bv[k];
                Block& C = vv[k];
                for (int i = 0; i < 4; ++i) {
                    B[i] += sbv[i] * c;
                    C[i] += svv[i] * cc;
                }
            }
        }
    }

    // Tails past X.
    const int J = q.tail_order;
    const auto tb = fit_tail(p, noise, s, vv_inf, X, J, 0, 0);
    const auto tv = fit_tail(p, noise, s, vv_inf, X, J, 0, 2);
    const auto tw = fit_tail(p, noise, s, vv_inf, X, J, 2, 2);
    auto small_vs = [](const Block& c, const Block& ref) {
        for (int i = 0; i < 4; ++i)
            if (std::abs(c[i].real()) > 1e-6L * (1e-300L + std::abs(ref[i]))) return false;
        return true;
    };
    Block bb_scale;
    for (int i = 0; i < 4; ++i) bb_scale[i] = bb[i] + Complex(1e-30L, 0);
    if (!small_vs(tb[0], bb_scale) || !small_vs(tb[1], bb_scale))
        throw NumericalFailure("quadrature: oscillator spectrum does not decay, integral diverges");

    for (int j = 2; j <= J; ++j)
        for (int i = 0; i < 4; ++i) bb[i] += tb[j][i] * tail_integral(j, 0, X);
    const Real rs = 1 / std::sqrt(tau);
    for (int k = 0; k < N; ++k) {
        // f_k = tau^{-1/2} (e^{-iW k tau} - e^{-iW (k+1) tau}) / (iW) for index k = 0..N-1
        for (int j = 1; j <= J; ++j) {  // S_bv vanishes at infinity
            const Complex f = rs / Complex(0, 1) *
                              (tail_integral(j + 1, k * tau, X) - tail_integral(j + 1, (k + 1) * tau, X));
            for (int i = 0; i < 4; ++i) bv[k][i] += tv[j][i] * f;
        }
        // |f_1|^2 e^{iW d tau} = (2 e^{iWd tau} - e^{iW(d-1)tau} - e^{iW(d+1)tau}) / (tau W^2)
        for (int j = 0; j <= J; ++j) {
            const Complex f = (Real(2) * tail_integral(j + 2, -k * tau, X) -
                               tail_integral(j + 2, -(k - 1) * tau, X) -
                               tail_integral(j + 2, -(k + 1) * tau, X)) / tau;
            for (int i = 0; i < 4; ++i) vv[k][i] += tw[j][i] * f;
        }
    }

    // int_{-inf}^{inf} = 2 Re int_0^inf, with the 1/2pi prefactor.
    const Real scale = 1 / static_cast<Real>(M_PI);
    const Eigen::Index size = 2 + 2 * N;
    MatrixR V = MatrixR::Zero(size, size);
    for (int i = 0; i < 4; ++i) V(i / 2, i % 2) = scale * bb[i].real();
    for (int k = 1; k <= N; ++k)
        for (int i = 0; i < 4; ++i) {
            const Real x = scale * bv[k - 1][i].real();
            V(i / 2, 2 * k + i % 2) = x;
            V(2 * k + i % 2, i / 2) = x;
        }
    for (int k = 1; k <= N; ++k)
        for (int l = 1; l <= k; ++l)
            for (int i = 0; i < 4; ++i) {
                Real x = scale * vv[k - l][i].real();
                if (k == l) x += vv_inf(i / 2, i % 2);
                V(2 * k + i / 2, 2 * l + i % 2) = x;
                V(2 * l + i % 2, 2 * k + i / 2) = x;
            }
    return (V + V.transpose()) / 2;
}

}  // namespace lightmass
