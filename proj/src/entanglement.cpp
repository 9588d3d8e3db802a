#include "lightmass/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace lightmass {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::separable: return "separable";
        case Verdict::entangled: return "entangled";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

CovarianceMatrix partial_transpose(const CovarianceMatrix& v) {
    MatrixR m = v.V();
    m.row(1) *= -1;
    m.col(1) *= -1;
    return CovarianceMatrix(std::move(m));
}

namespace {

// (max L_ii / min L_ii)^2 from a Cholesky factor: a cheap lower estimate
// of the condition number.
template <class Llt>
double cholesky_condition(const Llt& llt) {
    const auto d = llt.matrixLLT().diagonal().cwiseAbs();
    const Real lo = d.minCoeff(), hi = d.maxCoeff();
    if (!(lo > 0)) return std::numeric_limits<double>::infinity();
    return static_cast<double>((hi / lo) * (hi / lo));
}

std::vector<Real> upper_half(std::vector<Real> all) {
    std::sort(all.begin(), all.end());
    return {all.begin() + static_cast<std::ptrdiff_t>(all.size() / 2), all.end()};
}

}  // namespace

SymplecticSpectrum symplectic_spectrum_ex(const MatrixR& v, const MatrixR& k) {
    if (v.rows() != v.cols() || v.rows() % 2 != 0 || k.rows() != v.rows())
        throw InvalidInput("symplectic_spectrum: shape mismatch");
    // V = L L^T; A = L^T K L is antisymmetric with eigenvalues +-i nu_j, so
    // (being normal) its singular values are the nu_j, each twice.
    Eigen::LLT<MatrixR> llt(v);
    if (llt.info() == Eigen::Success) {
        const MatrixR L = llt.matrixL();
        MatrixR a = L.transpose() * k * L;
        a = (a - a.transpose()) / 2;
        Eigen::BDCSVD<MatrixR> svd(a);
        if (svd.info() != Eigen::Success) throw NumericalFailure("symplectic_spectrum: SVD failed");
        const VectorR sv = svd.singularValues();
        std::vector<Real> s(sv.data(), sv.data() + sv.size());
        std::sort(s.begin(), s.end());
        std::vector<Real> nu;
        for (std::size_t i = 0; i + 1 < s.size(); i += 2) nu.push_back((s[i] + s[i + 1]) / 2);
        return {nu, "williamson-svd"};
    }
    // Not positive definite: moduli of the eigenvalues of K^{-1} V directly.
    const MatrixR m = k.transpose() * v;  // K^{-1} = -K = K^T
    Eigen::EigenSolver<MatrixR> es(m, false);
    if (es.info() != Eigen::Success) throw NumericalFailure("symplectic_spectrum: eigensolver failed");
    std::vector<Real> mods;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) mods.push_back(std::abs(es.eigenvalues()(i)));
    return {upper_half(std::move(mods)), "direct"};
}

std::vector<Real> symplectic_spectrum(const MatrixR& v, const MatrixR& k) {
    return symplectic_spectrum_ex(v, k).values;
}

double log_negativity(const CovarianceMatrix& v) {
    const CovarianceMatrix pt = partial_transpose(v);
    Real sum = 0;
    for (Real nu : symplectic_spectrum(pt.V(), pt.K()))
        if (nu < 1) sum -= std::log(nu);
    return static_cast<double>(sum);
}

EntanglementVerdict ppt_verdict(const CovarianceMatrix& v, const PptTolerances& tol) {
    const CovarianceMatrix pt = partial_transpose(v);
    const SymplecticSpectrum sp = symplectic_spectrum_ex(pt.V(), pt.K());

    EntanglementVerdict out;
    auto& d = out.diagnostics;
    d.modes = v.modes();
    d.eps_ppt = tol.eps_ppt;
    d.symplectic_method = sp.method;
    d.cond_v = cholesky_condition(Eigen::LLT<MatrixR>(v.V()));
    out.nu_min = static_cast<double>(sp.values.front());
    d.second_nu = sp.values.size() > 1 ? static_cast<double>(sp.values[1]) : out.nu_min;
    Real ln = 0;
    for (Real nu : sp.values) {
        if (nu < 1 - tol.eps_ppt) ++d.below_threshold;
        if (nu < 1) ln -= std::log(nu);
    }
    out.log_negativity = static_cast<double>(ln);
    if (d.below_threshold > 1) {
        std::ostringstream msg;
        msg << "ppt: " << d.below_threshold << " partial-transpose symplectic eigenvalues below 1 - "
            << tol.eps_ppt << " (at most one is possible for a 1 x N split)";
        throw NumericalFailure(msg.str());
    }
    if (v.bv().isZero(0)) {
        // Product state: separable whatever the light's own spectrum (pure
        // vacuum light sits exactly at nu = 1).
        out.verdict = Verdict::separable;
        d.note += "product state; ";
    } else if (out.nu_min < 1 - tol.eps_ppt)
        out.verdict = Verdict::entangled;
    else if (out.nu_min > 1 + tol.eps_ppt)
        out.verdict = Verdict::separable;
    else
        out.verdict = Verdict::indeterminate;
    return out;
}

SchurResult schur_complement_det(const CovarianceMatrix& v, const PptTolerances& tol) {
    const CovarianceMatrix pt = partial_transpose(v);
    const Eigen::Index n = v.size() - 2;
    const Complex i(0, 1);
    const MatrixC K = pt.K().cast<Complex>();

    MatrixC M = pt.bb().cast<Complex>() + i * K.topLeftCorner(2, 2);
    const MatrixR bv = pt.bv();
    double cond = 1;
    if (!bv.isZero(0)) {
        const MatrixC C = pt.vv().cast<Complex>() + i * K.bottomRightCorner(n, n);
        Eigen::LLT<MatrixC> llt(C);
        if (llt.info() != Eigen::Success)
            throw NumericalFailure("schur: V^vv + iK^v is singular or not positive definite");
        cond = cholesky_condition(llt);
        if (!(cond < 1e14))
            throw NumericalFailure("schur: V^vv + iK^v too ill-conditioned");
        const MatrixC B = bv.cast<Complex>();
        M -= B * llt.solve(MatrixC(B.adjoint()));
    }
    const Complex det = M.determinant();
    const Real tr = M.trace().real();
    (void)tol;
    return {static_cast<double>(det.real()), static_cast<double>(tr * tr),
            static_cast<double>(std::abs(det.imag())), cond};
}

double schur_indicator(const CovarianceMatrix& v, const PptTolerances& tol) {
    return schur_complement_det(v, tol).value;
}

EntanglementVerdict evaluate_entanglement(const CovarianceMatrix& v, const PptTolerances& tol) {
    EntanglementVerdict out = ppt_verdict(v, tol);
    auto& d = out.diagnostics;
    try {
        const SchurResult s = schur_complement_det(v, tol);
        out.schur_indicator = s.value;
        out.schur_available = true;
        d.schur_scale = s.scale;
        d.schur_imag = s.imag;
        d.cond_vv = s.cond_vv;
        if (s.imag > tol.eps_imag * std::max(s.scale, 1e-300))
            d.note += "schur determinant has a sizeable imaginary part; ";

        Verdict schur = Verdict::indeterminate;
        if (s.value < -tol.eps_det * s.scale) schur = Verdict::entangled;
        if (s.value > tol.eps_det * s.scale) schur = Verdict::separable;
        if (out.verdict != Verdict::indeterminate && schur != Verdict::indeterminate &&
            schur != out.verdict) {
            std::ostringstream msg;
            msg << "entanglement: PPT (nu_min=" << out.nu_min << ") and Schur (det=" << s.value
                << ", scale=" << s.scale << ") disagree";
            throw NumericalFailure(msg.str());
        }
    } catch (const NumericalFailure& e) {
        if (std::string(e.what()).rfind("entanglement:", 0) == 0) throw;
        out.schur_available = false;
        out.schur_indicator = std::numeric_limits<double>::quiet_NaN();
        d.note += std::string("schur unavailable: ") + e.what() + "; ";
    }
    return out;
}

}  // namespace lightmass
