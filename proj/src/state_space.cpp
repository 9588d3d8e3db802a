#include "lightmass/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

namespace lightmass {

LtiSystem LtiSystem::static_gain(const MatrixR& D) {
    return {MatrixR(0, 0), MatrixR(0, D.cols()), MatrixR(D.rows(), 0), D};
}

MatrixC LtiSystem::transfer(Real omega) const {
    MatrixC H = D.cast<Complex>();
    if (states() == 0) return H;
    MatrixC M = -A.cast<Complex>();
    M.diagonal().array() += Complex(0, -omega);
    H += C.cast<Complex>() * M.partialPivLu().solve(B.cast<Complex>());
    return H;
}

LtiSystem series(const LtiSystem& first, const LtiSystem& second) {
    const Eigen::Index n1 = first.states(), n2 = second.states();
    LtiSystem s;
    s.A = MatrixR::Zero(n1 + n2, n1 + n2);
    s.A.topLeftCorner(n1, n1) = first.A;
    s.A.bottomLeftCorner(n2, n1) = second.B * first.C;
    s.A.bottomRightCorner(n2, n2) = second.A;
    s.B.resize(n1 + n2, first.inputs());
    s.B << first.B, second.B * first.D;
    s.C.resize(second.outputs(), n1 + n2);
    s.C << second.D * first.C, second.C;
    s.D = second.D * first.D;
    return s;
}

namespace {

// Monic real polynomial factor in s, ascending coefficients (degree 1 or 2).
using Factor = std::vector<Real>;

// Stable/minimum-phase half of the W-roots of an even polynomial given by
// its roots in y = W^2, mapped to s = -iW.
std::vector<Complex> causal_half(const std::vector<Complex>& y_roots) {
    std::vector<Complex> s_roots;
    int on_axis = 0;
    for (const Complex& y : y_roots) {
        Complex w = std::sqrt(y);
        const Real tol = 1e-9L * std::max<Real>(1, std::abs(w));
        if (std::abs(w.imag()) <= tol) {
            // Real-axis zeros come in pairs; alternate the sign so the chosen
            // set stays closed under conjugation in s.
            w = Complex(on_axis++ % 2 == 0 ? w.real() : -w.real(), 0);
        } else if (w.imag() > 0) {
            w = -w;
        }
        s_roots.push_back(Complex(0, -1) * w);
    }
    return s_roots;
}

// Groups s-roots into real monic factors: conjugate pairs become quadratics,
// real roots are merged two at a time; at most one linear factor remains.
std::vector<Factor> real_factors(std::vector<Complex> roots) {
    std::vector<Factor> quads;
    std::vector<Real> reals;
    std::vector<bool> used(roots.size(), false);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        const Complex r = roots[i];
        const Real tol = 1e-9L * std::max<Real>(1, std::abs(r));
        if (std::abs(r.imag()) <= tol) {
            reals.push_back(r.real());
            used[i] = true;
            continue;
        }
        std::size_t best = roots.size();
        Real best_d = 0;
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            const Real d = std::abs(roots[j] - std::conj(r));
            if (best == roots.size() || d < best_d) {
                best = j;
                best_d = d;
            }
        }
        if (best == roots.size() || best_d > 1e-6L * std::max<Real>(1, std::abs(r)))
            throw NumericalFailure("spectral factor: unpaired complex root");
        used[i] = used[best] = true;
        const Complex m = (r + std::conj(roots[best])) / Real(2);
        quads.push_back({std::norm(m), -2 * m.real(), 1});
    }
    std::sort(reals.begin(), reals.end());
    for (std::size_t i = 0; i + 1 < reals.size(); i += 2)
        quads.push_back({reals[i] * reals[i + 1], -(reals[i] + reals[i + 1]), 1});
    if (reals.size() % 2 == 1) quads.push_back({-reals.back(), 1});
    return quads;
}

Complex eval_factor(const Factor& f, Complex s) {
    Complex acc = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * s + *it;
    return acc;
}

// Realization of num(s)/den(s), deg num <= deg den <= 2, den monic.
LtiSystem section(const Factor& den, const Factor& num) {
    const auto coef = [](const Factor& f, std::size_t k) { return k < f.size() ? f[k] : Real(0); };
    if (den.size() == 2) {
        const Real a0 = den[0], b0 = coef(num, 0), b1 = coef(num, 1);
        LtiSystem s;
        s.A = MatrixR::Constant(1, 1, -a0);
        s.B = MatrixR::Constant(1, 1, 1);
        s.C = MatrixR::Constant(1, 1, b0 - b1 * a0);
        s.D = MatrixR::Constant(1, 1, b1);
        return s;
    }
    const Real a0 = den[0], a1 = den[1];
    const Real b0 = coef(num, 0), b1 = coef(num, 1), b2 = coef(num, 2);
    LtiSystem s;
    s.A.resize(2, 2);
    s.A << 0, 1, -a0, -a1;
    s.B.resize(2, 1);
    s.B << 0, 1;
    s.C.resize(1, 2);
    s.C << b0 - b2 * a0, b1 - b2 * a1;
    s.D = MatrixR::Constant(1, 1, b2);
    return s;
}

std::vector<Real> widen(const std::vector<double>& c) { return {c.begin(), c.end()}; }

}  // namespace

LtiSystem spectral_factor(const RationalSpectrum& spec) {
    if (spec.is_zero()) return LtiSystem::static_gain(MatrixR::Zero(1, 1));
    if (spec.denominator().size() == 1 && spec.numerator().size() == 1)
        return LtiSystem::static_gain(MatrixR::Constant(1, 1, std::sqrt(spec(0))));

    const std::vector<Factor> dens = real_factors(causal_half(polynomial_roots(widen(spec.denominator()))));
    std::vector<Factor> nums = real_factors(causal_half(polynomial_roots(widen(spec.numerator()))));

    // Quadratic numerators go to quadratic sections; a linear one goes to the
    // linear section if there is one, otherwise to a free quadratic section.
    std::vector<Factor> assigned(dens.size(), Factor{1});
    std::vector<bool> taken(dens.size(), false);
    std::sort(nums.begin(), nums.end(), [](const Factor& a, const Factor& b) { return a.size() > b.size(); });
    for (const Factor& n : nums) {
        std::size_t pick = dens.size();
        for (std::size_t i = 0; i < dens.size() && pick == dens.size(); ++i)
            if (!taken[i] && dens[i].size() == n.size()) pick = i;
        for (std::size_t i = 0; i < dens.size() && pick == dens.size(); ++i)
            if (!taken[i] && dens[i].size() > n.size()) pick = i;
        if (pick == dens.size()) throw NumericalFailure("spectral factor: cannot place numerator");
        assigned[pick] = n;
        taken[pick] = true;
    }

    LtiSystem sys = section(dens[0], assigned[0]);
    for (std::size_t i = 1; i < dens.size(); ++i) sys = series(sys, section(dens[i], assigned[i]));

    // Fix the gain where the spectrum is largest among a few probe points.
    Real best_w = 0, best_s = -1;
    for (Real w : {Real(0), Real(0.5), Real(1), Real(2), Real(10), Real(100)}) {
        if (spec(w) > best_s) {
            best_s = spec(w);
            best_w = w;
        }
    }
    Complex h = 1;
    for (std::size_t i = 0; i < dens.size(); ++i)
        h *= eval_factor(assigned[i], Complex(0, -best_w)) / eval_factor(dens[i], Complex(0, -best_w));
    const Real k = std::sqrt(best_s) / std::abs(h);
    sys.C *= k;
    sys.D *= k;
    return sys;
}

LtiSystem input_field_system(const InputFieldState& s) {
    s.validate();
    if (s.kind == SqueezeKind::vacuum) return LtiSystem::static_gain(MatrixR::Identity(2, 2));
    const MatrixR sq = squeezer_matrix(s.r, s.theta);
    if (s.kind == SqueezeKind::fis) return LtiSystem::static_gain(sq);
    const Real g = s.filter.gamma_f, d = s.filter.delta;
    LtiSystem f;
    f.A.resize(2, 2);
    f.A << -g / 2, d, -d, -g / 2;
    f.B = std::sqrt(g) * MatrixR::Identity(2, 2);
    f.C = -std::sqrt(g) * MatrixR::Identity(2, 2);
    f.D = MatrixR::Identity(2, 2);
    return series(LtiSystem::static_gain(sq), f);
}

LtiSystem joint_system(const PlantParams& p, const NoiseModel& noise, const InputFieldState& s) {
    p.validate();
    const LtiSystem in = input_field_system(s);
    const LtiSystem fn = spectral_factor(noise.force);
    const LtiSystem sn = spectral_factor(noise.sensing);
    const Eigen::Index nu = in.states(), nf = fn.states(), ns = sn.states();
    const Eigen::Index n = 2 + nu + nf + ns;
    const Eigen::Index ou = 2, of = 2 + nu, os = 2 + nu + nf;  // state offsets
    enum { wu = 0, wf = 2, ws = 3, wl = 4 };                   // input offsets

    const Real wm = p.omega_m, gm = p.gamma_m, g = p.coupling();
    const Real se = std::sqrt(static_cast<Real>(p.eta)), sl = std::sqrt(1 - static_cast<Real>(p.eta));

    LtiSystem j;
    j.A = MatrixR::Zero(n, n);
    j.B = MatrixR::Zero(n, port_count);
    j.C = MatrixR::Zero(2, n);
    j.D = MatrixR::Zero(2, port_count);

    j.A(0, 1) = wm;
    j.A(1, 0) = -wm;
    j.A(1, 1) = -gm;
    j.A.block(ou, ou, nu, nu) = in.A;
    j.A.block(of, of, nf, nf) = fn.A;
    j.A.block(os, os, ns, ns) = sn.A;
    j.B.block(ou, wu, nu, 2) = in.B;
    j.B.block(of, wf, nf, 1) = fn.B;
    j.B.block(os, ws, ns, 1) = sn.B;

    // b2 is driven by g u1 + n_F.
    j.A.block(1, ou, 1, nu) += g * in.C.row(0);
    j.B.block(1, wu, 1, 2) += g * in.D.row(0);
    j.A.block(1, of, 1, nf) += fn.C;
    j.B(1, wf) += fn.D(0, 0);

    // v1 = sqrt(eta) u1 + sqrt(1 - eta) l1
    j.C.block(0, ou, 1, nu) = se * in.C.row(0);
    j.D.block(0, wu, 1, 2) = se * in.D.row(0);
    j.D(0, wl) = sl;
    // v2 = sqrt(eta) (u2 + g b1 + g n_S) + sqrt(1 - eta) l2
    j.C.block(1, ou, 1, nu) = se * in.C.row(1);
    j.D.block(1, wu, 1, 2) = se * in.D.row(1);
    j.C(1, 0) = se * g;
    j.C.block(1, os, 1, ns) = se * g * sn.C;
    j.D(1, ws) = se * g * sn.D(0, 0);
    j.D(1, wl + 1) = sl;
    return j;
}

MatrixR lyapunov(const MatrixR& A, const MatrixR& Q) {
    const Eigen::Index n = A.rows();
    if (n == 0) return MatrixR(0, 0);
    const Eigen::Index n2 = n * n;
    MatrixR L = MatrixR::Zero(n2, n2);
    // column-major vec: vec(A P) = (I kron A) vec P, vec(P A^T) = (A kron I) vec P
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r) {
            const Eigen::Index row = c * n + r;
            for (Eigen::Index k = 0; k < n; ++k) {
                L(row, c * n + k) += A(r, k);
                L(row, k * n + r) += A(c, k);
            }
        }
    const VectorR rhs = -Eigen::Map<const VectorR>(Q.data(), n2);
    const VectorR x = L.fullPivLu().solve(rhs);
    MatrixR P = Eigen::Map<const MatrixR>(x.data(), n, n);
    return (P + P.transpose()) / 2;
}

Discretized discretize(const LtiSystem& sys, Real tau) {
    const Eigen::Index n = sys.states(), m = sys.outputs(), k = n + m;
    MatrixR At = MatrixR::Zero(k, k);
    At.topLeftCorner(n, n) = sys.A;
    At.bottomLeftCorner(m, n) = sys.C;
    MatrixR Bt(k, sys.inputs());
    Bt << sys.B, sys.D;

    MatrixR M = MatrixR::Zero(2 * k, 2 * k);
    M.topLeftCorner(k, k) = -At;
    M.topRightCorner(k, k) = Bt * Bt.transpose();
    M.bottomRightCorner(k, k) = At.transpose();
    const MatrixR F = (M * tau).exp();
    const MatrixR phit = F.bottomRightCorner(k, k).transpose();
    MatrixR q = phit * F.topRightCorner(k, k);
    q = (q + q.transpose()) / 2;

    return {phit.topLeftCorner(n, n), phit.bottomLeftCorner(m, n), q.topLeftCorner(n, n),
            q.topRightCorner(n, m), q.bottomRightCorner(m, m)};
}

}  // namespace lightmass
