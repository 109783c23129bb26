#pragma once

// Test-only adaptive Simpson quadrature, kept independent of the library's
// analytic formulas so it can serve as an oracle.

#include <cmath>
#include <functional>

namespace testsupport {

inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int depth = 60) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return adapt(f, a, b, fa, fm, fb, simpson(f, a, b, fa, fm, fb), tol, depth);
}

// integrate with interior breakpoints (kinks of the integrand)
inline double integrate_pieces(const std::function<double(double)>& f,
                               std::initializer_list<double> knots, double tol = 1e-12) {
    double total = 0.0;
    const double* it = knots.begin();
    for (std::size_t i = 0; i + 1 < knots.size(); ++i)
        total += integrate(f, it[i], it[i + 1], tol);
    return total;
}

}  // namespace testsupport
