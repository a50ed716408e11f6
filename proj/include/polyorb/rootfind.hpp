#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "polyorb/errors.hpp"

namespace polyorb::detail {

/// Root of f on a bracketing interval [a, b] (f(a) and f(b) of opposite sign,
/// or zero at an endpoint). Bisects until the interval width reaches tol, then
/// polishes with a few secant steps confined to the bracket. Throws
/// NumericalError on non-finite values or when max_iter iterations pass
/// without convergence.
template <class F>
double bisect_secant(F&& f, double a, double b, double tol, int max_iter = 100) {
    double fa = f(a);
    double fb = f(b);
    if (!std::isfinite(fa) || !std::isfinite(fb))
        throw NumericalError("root finding: non-finite function value at bracket");
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0.0) == (fb > 0.0))
        throw std::invalid_argument("root finding: interval does not bracket a root");

    int iter = 0;
    while (b - a > tol) {
        if (++iter > max_iter)
            throw NumericalError("root finding: bisection did not converge");
        double m = 0.5 * (a + b);
        if (m <= a || m >= b) break; // interval at machine resolution
        double fm = f(m);
        if (!std::isfinite(fm))
            throw NumericalError("root finding: non-finite function value");
        if (fm == 0.0) return m;
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m; fa = fm;
        } else {
            b = m; fb = fm;
        }
    }

    // secant polish; the bracket is already tight so a few steps suffice
    double x0 = a, f0 = fa, x1 = b, f1 = fb;
    double best = std::fabs(f0) < std::fabs(f1) ? x0 : x1;
    double bestf = std::min(std::fabs(f0), std::fabs(f1));
    for (int k = 0; k < 4; ++k) {
        double denom = f1 - f0;
        if (denom == 0.0) break;
        double x2 = x1 - f1 * (x1 - x0) / denom;
        if (!(x2 >= a) || !(x2 <= b)) break;
        double f2 = f(x2);
        if (!std::isfinite(f2))
            throw NumericalError("root finding: non-finite function value");
        if (std::fabs(f2) < bestf) { best = x2; bestf = std::fabs(f2); }
        if (f2 == 0.0) break;
        x0 = x1; f0 = f1; x1 = x2; f1 = f2;
    }
    return best;
}

} // namespace polyorb::detail
