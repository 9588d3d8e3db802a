#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lightmass/common.hpp"
#include "lightmass/covariance.hpp"

namespace lightmass {

struct PptTolerances {
    double eps_ppt = 1e-4;   // indeterminate band |nu_min - 1| < eps_ppt
    double eps_det = 1e-8;   // Schur indicator band, relative to (tr M)^2
    double eps_phys = 1e-6;
    double eps_imag = 1e-8;  // allowed |Im det| / |det| scale
};

struct EntanglementDiagnostics {
    int modes = 0;
    double eps_ppt = 0.0;
    double second_nu = 0.0;        // second-smallest PPT symplectic eigenvalue
    int below_threshold = 0;       // PPT eigenvalues below 1 - eps_ppt
    double cond_v = 0.0;           // 2-norm condition estimate of V
    double cond_vv = 0.0;          // of V^vv + iK^v
    double schur_scale = 0.0;
    double schur_imag = 0.0;
    std::string symplectic_method;
    std::string note;
};

enum class Verdict { separable, entangled, indeterminate };

std::string to_string(Verdict v);

struct EntanglementVerdict {
    double nu_min = 0.0;
    double log_negativity = 0.0;
    double schur_indicator = 0.0;
    bool schur_available = false;
    Verdict verdict = Verdict::separable;
    EntanglementDiagnostics diagnostics;

    bool entangled() const { return verdict == Verdict::entangled; }
};

// b2 -> -b2.
CovarianceMatrix partial_transpose(const CovarianceMatrix& v);

// Moduli of the eigenvalues of K^{-1} V, one per pair, ascending. The
// direct eigenproblem is used for well-conditioned V, otherwise the
// Williamson route through a Cholesky square root.
struct SymplecticSpectrum {
    std::vector<Real> values;
    std::string method;
};
SymplecticSpectrum symplectic_spectrum_ex(const MatrixR& v, const MatrixR& k);
std::vector<Real> symplectic_spectrum(const MatrixR& v, const MatrixR& k);

// PPT route only. Throws NumericalFailure if more than one PPT symplectic
// eigenvalue lies below 1 - eps_ppt.
EntanglementVerdict ppt_verdict(const CovarianceMatrix& v, const PptTolerances& tol = {});

struct SchurResult {
    double value;
    double scale;      // (tr M)^2 with M the 2x2 Schur complement
    double imag;       // |Im det M|
    double cond_vv;
};

// det[(V_pt^bb + iK^b) - V_pt^bv (V^vv + iK^v)^{-1} V_pt^vb].
SchurResult schur_complement_det(const CovarianceMatrix& v, const PptTolerances& tol = {});
double schur_indicator(const CovarianceMatrix& v, const PptTolerances& tol = {});

double log_negativity(const CovarianceMatrix& v);

// Both routes; throws NumericalFailure when they disagree outside their bands.
EntanglementVerdict evaluate_entanglement(const CovarianceMatrix& v,
                                          const PptTolerances& tol = {});

}  // namespace lightmass
