#pragma once

#include <cmath>
#include <utility>

namespace colglasso {

// Van Wijngaarden-Dekker-Brent root finding on a bracketing interval.
// a and b must satisfy f(a) * f(b) <= 0; returns the root location once
// the bracket shrinks below tol (or an exact zero is hit).
template <class F>
double brent_root(F&& f, double a, double b, double tol, int max_iter = 200) {
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;

    if (std::abs(fa) < std::abs(fb)) {
        std::swap(a, b);
        std::swap(fa, fb);
    }
    double c = a, fc = fa;
    bool bisected = true;
    double d = 0.0;

    for (int it = 0; it < max_iter; ++it) {
        if (fb == 0.0 || std::abs(b - a) < tol) break;
        double s;
        if (fa != fc && fb != fc) {
            // inverse quadratic interpolation
            s = a * fb * fc / ((fa - fb) * (fa - fc)) +
                b * fa * fc / ((fb - fa) * (fb - fc)) +
                c * fa * fb / ((fc - fa) * (fc - fb));
        } else {
            // secant
            s = b - fb * (b - a) / (fb - fa);
        }

        const double mid = 0.25 * (3.0 * a + b);
        const bool out_of_range = !((s > mid && s < b) || (s < mid && s > b));
        if (out_of_range || (bisected && std::abs(s - b) >= 0.5 * std::abs(b - c)) ||
            (!bisected && std::abs(s - b) >= 0.5 * std::abs(c - d)) ||
            (bisected && std::abs(b - c) < tol) || (!bisected && std::abs(c - d) < tol)) {
            s = 0.5 * (a + b);
            bisected = true;
        } else {
            bisected = false;
        }

        const double fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if (fa * fs < 0) {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if (std::abs(fa) < std::abs(fb)) {
            std::swap(a, b);
            std::swap(fa, fb);
        }
    }
    return b;
}

}  // namespace colglasso
