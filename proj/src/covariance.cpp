#include "lightmass/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "lightmass/entanglement.hpp"
#include "lightmass/state_space.hpp"

namespace lightmass {

void TemporalModeBasis::validate() const {
    if (N < 1) throw InvalidInput("basis: N must be >= 1");
    if (!(tau > 0) || !std::isfinite(tau)) throw InvalidInput("basis: tau must be positive");
}

namespace {

// White-equivalent force corner: sqrt(w_m max S_F / 2).
double force_corner(const PlantParams& p, const NoiseModel& noise) {
    if (noise.omega_F) return *noise.omega_F;
    Real peak = 0;
    for (int i = 0; i <= 180; ++i) {
        const Real w = p.omega_m * std::pow(10.0L, -3 + i / 20.0L);
        peak = std::max(peak, noise.force(w));
    }
    return std::sqrt(static_cast<double>(peak) * p.omega_m / 2);
}

}  // namespace

double characteristic_rate(const PlantParams& p, const NoiseModel& noise,
                           const InputFieldState& s) {
    const double slow = std::max(p.omega_m, force_corner(p, noise));
    double fast = p.omega_q;
    if (s.kind == SqueezeKind::fds) fast = std::max({fast, s.filter.gamma_f, std::abs(s.filter.delta)});
    // With N fixed, resolving a fast coupling costs span at the force scale;
    // the geometric mean keeps both within reach (Omega_q >> Omega_F rays).
    return fast > slow ? std::sqrt(fast * slow) : slow;
}

TemporalModeBasis auto_basis(const PlantParams& p, const NoiseModel& noise,
                             const InputFieldState& s, int N) {
    TemporalModeBasis b{N, 1.0 / (4.0 * characteristic_rate(p, noise, s))};
    b.validate();
    return b;
}

Complex window_fourier(int k, Real omega, const TemporalModeBasis& basis) {
    if (k < 1 || k > basis.N) throw InvalidInput("window_fourier: k out of range");
    const Real tau = basis.tau;
    const Real x = omega * tau / 2;
    const Real sinc = std::abs(x) < 1e-8L ? 1 - x * x / 6 : std::sin(x) / x;
    return std::sqrt(tau) * sinc * std::polar(Real(1), -omega * (k - Real(0.5)) * tau);
}

CovarianceMatrix::CovarianceMatrix(MatrixR v) : v_(std::move(v)) {
    if (v_.rows() != v_.cols() || v_.rows() < 2 || v_.rows() % 2 != 0)
        throw InvalidInput("covariance: need an even-sized square matrix");
    const Real asym = (v_ - v_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12L * std::max<Real>(1, v_.cwiseAbs().maxCoeff()))
        throw InvalidInput("covariance: matrix is not symmetric");
}

MatrixR CovarianceMatrix::symplectic_form(Eigen::Index size) {
    MatrixR K = MatrixR::Zero(size, size);
    for (Eigen::Index i = 0; i + 1 < size; i += 2) {
        K(i, i + 1) = 1;
        K(i + 1, i) = -1;
    }
    return K;
}

PhysicalityReport check_physicality(const CovarianceMatrix& cv, double eps) {
    const MatrixR& V = cv.V();
    const MatrixR K = cv.K();
    const Real norm = V.cwiseAbs().rowwise().sum().maxCoeff();  // infinity norm >= 2-norm
    const Complex i(0, 1);

    MatrixC shifted = V.cast<Complex>() + i * K.cast<Complex>();
    shifted.diagonal().array() += static_cast<Real>(eps) * norm;
    const bool psd_ok = Eigen::LLT<MatrixC>(shifted).info() == Eigen::Success;

    // V + i nu K > 0 exactly when nu is below every symplectic eigenvalue.
    const MatrixC probe = V.cast<Complex>() + i * (1 - static_cast<Real>(eps)) * K.cast<Complex>();
    bool symplectic_ok = Eigen::LLT<MatrixC>(probe).info() == Eigen::Success;
    if (!symplectic_ok) {
        // Cholesky can fail on roundoff alone for very ill-conditioned V;
        // settle it with the spectrum.
        const auto nu = symplectic_spectrum(V, K);
        symplectic_ok = !nu.empty() && nu.front() >= 1 - static_cast<Real>(eps);
    }
    return {psd_ok, symplectic_ok, norm};
}

namespace {

MatrixR state_space_covariance(const PlantParams& p, const NoiseModel& noise,
                               const InputFieldState& s, const TemporalModeBasis& basis) {
    const LtiSystem sys = joint_system(p, noise, s);
    const Eigen::Index m = sys.outputs();
    const int N = basis.N;
    const Real tau = basis.tau;

    const MatrixR P0 = lyapunov(sys.A, sys.B * sys.B.transpose());
    const Discretized d = discretize(sys, tau);

    // Windows j = 0..N-1, oldest first, ending at t = 0. cross[i] holds
    // cov(x at the current window start, Y_i) for the windows already passed.
    std::vector<MatrixR> cross(N);
    MatrixR Vyy = MatrixR::Zero(N * m, N * m);
    MatrixR P = P0;
    for (int j = 0; j < N; ++j) {
        Vyy.block(j * m, j * m, m, m) = d.gamma * P * d.gamma.transpose() + d.qyy;
        for (int i = 0; i < j; ++i) {
            const MatrixR c = d.gamma * cross[i];
            Vyy.block(j * m, i * m, m, m) = c;
            Vyy.block(i * m, j * m, m, m) = c.transpose();
            cross[i] = d.phi * cross[i];
        }
        cross[j] = d.phi * P * d.gamma.transpose() + d.qxy;
        P = d.phi * P * d.phi.transpose() + d.qxx;
    }

    // Mode k = 1 is the newest window (j = N - 1). Y is the plain window
    // integral, so modes carry 1/sqrt(tau) each.
    const Eigen::Index size = 2 + 2 * N;
    MatrixR V(size, size);
    V.topLeftCorner(2, 2) = P.topLeftCorner(2, 2);
    const Real rs = 1 / std::sqrt(tau);
    for (int k = 1; k <= N; ++k) {
        const int j = N - k;
        const MatrixR bv = cross[j].topRows(2) * rs;
        V.block(0, 2 * k, 2, 2) = bv;
        V.block(2 * k, 0, 2, 2) = bv.transpose();
        for (int l = 1; l <= N; ++l)
            V.block(2 * k, 2 * l, 2, 2) = Vyy.block(j * m, (N - l) * m, m, m) / tau;
    }
    return (V + V.transpose()) / 2;
}

}  // namespace

CovarianceMatrix build_covariance(const PlantParams& p, const NoiseModel& noise,
                                  const InputFieldState& s, const TemporalModeBasis& basis,
                                  const CovarianceOptions& options) {
    p.validate();
    s.validate();
    basis.validate();
    if (!(p.gamma_m > 0)) throw InvalidInput("build_covariance: needs gamma_m > 0 (stationarity)");

    MatrixR V = options.method == CovarianceMethod::state_space
                    ? state_space_covariance(p, noise, s, basis)
                    : quadrature_covariance(p, noise, s, basis, options.quad);
    if (!V.allFinite()) throw NumericalFailure("build_covariance: non-finite entries");
    CovarianceMatrix cv(std::move(V));
    if (options.check_physicality) {
        const PhysicalityReport r = check_physicality(cv, options.eps_phys);
        if (!r.psd_ok || !r.symplectic_ok) {
            std::ostringstream msg;
            msg << "build_covariance: physicality violated beyond eps_phys=" << options.eps_phys
                << (r.psd_ok ? "" : " (V + iK not PSD)")
                << (r.symplectic_ok ? "" : " (symplectic eigenvalue below 1)");
            throw NumericalFailure(msg.str());
        }
    }
    return cv;
}

void write_covariance(std::ostream& os, const CovarianceMatrix& cv) {
    const MatrixR& V = cv.V();
    os << "# lightmass-covariance size=" << V.rows() << " modes=" << cv.modes() << "\n";
    os << "# order b1 b2";
    for (int k = 1; k <= cv.modes(); ++k) os << " v1[" << k << "] v2[" << k << "]";
    os << "\n" << std::setprecision(21);
    for (Eigen::Index r = 0; r < V.rows(); ++r) {
        for (Eigen::Index c = 0; c < V.cols(); ++c) os << (c ? " " : "") << V(r, c);
        os << "\n";
    }
}

CovarianceMatrix read_covariance(std::istream& is) {
    std::string line;
    Eigen::Index size = -1;
    while (size < 0 && std::getline(is, line)) {
        const auto pos = line.find("size=");
        if (line.rfind("#", 0) == 0 && pos != std::string::npos)
            size = std::stol(line.substr(pos + 5));
    }
    if (size < 2) throw InvalidInput("read_covariance: missing header");
    MatrixR V(size, size);
    Eigen::Index filled = 0;
    while (filled < size * size && std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        Real x;
        while (row >> x) {
            if (filled >= size * size) throw InvalidInput("read_covariance: too many entries");
            V(filled / size, filled % size) = x;
            ++filled;
        }
    }
    if (filled != size * size) throw InvalidInput("read_covariance: truncated matrix");
    return CovarianceMatrix(std::move(V));
}

}  // namespace lightmass
