#pragma once

#include <cmath>
#include <utility>

namespace lightmass {

// Golden-section search for a minimum of a unimodal f on [a, b]. Returns
// (argmin, min) once the bracket is narrower than tol * (|a| + |b|) or after
// max_iter steps.
template <class F>
std::pair<double, double> golden_section_minimize(F&& f, double a, double b, double tol = 1e-10,
                                                  int max_iter = 200) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < max_iter && std::abs(b - a) > tol * (std::abs(a) + std::abs(b)); ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace lightmass
