#pragma once
// Bracketed scalar root finding: secant steps safeguarded by bisection.
// Callers supply a bracket with a sign change; width tolerance is absolute.

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace sl {

template <class F>
double refine_root(F&& f, double lo, double hi, double flo, double fhi, double tol) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    double x = lo, fx = flo;
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        double denom = fhi - flo;
        double xs = (denom != 0.0) ? (lo * fhi - hi * flo) / denom : mid;
        // fall back to bisection when the secant point hugs an endpoint
        double margin = 0.01 * (hi - lo);
        x = (xs > lo + margin && xs < hi - margin) ? xs : mid;
        fx = f(x);
        if (fx == 0.0) return x;
        if ((flo < 0) != (fx < 0)) {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
    }
    return 0.5 * (lo + hi);
}

template <class F>
double refine_root(F&& f, double lo, double hi, double tol) {
    return refine_root(f, lo, hi, f(lo), f(hi), tol);
}

// First sign change in [lo, hi] over a pts-point scan, refined to
// 1e-13*(1+|x|); NaN when the window holds no change.
template <class F>
double first_root_in(F&& f, double lo, double hi, int pts = 41) {
    double prev_x = lo, prev_y = f(lo);
    for (int i = 1; i < pts; ++i) {
        double x = lo + (hi - lo) * i / (pts - 1);
        double y = f(x);
        if (prev_y == 0.0) return prev_x;
        if ((prev_y < 0) != (y < 0) && std::isfinite(prev_y) && std::isfinite(y)) {
            double tol = 1e-13 * (1.0 + std::abs(x));
            return refine_root(f, prev_x, x, prev_y, y, tol);
        }
        prev_x = x;
        prev_y = y;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

// Sign-change scan over precomputed samples ys at ascending points xs;
// each change is refined to tol_scale*(1+|x|).
template <class F>
std::vector<double> roots_from_scan(F&& f, const std::vector<double>& xs,
                                    const std::vector<double>& ys, double tol_scale) {
    std::vector<double> zeros;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (ys[i - 1] == 0.0) {
            if (zeros.empty() || zeros.back() != xs[i - 1]) zeros.push_back(xs[i - 1]);
            continue;
        }
        if ((ys[i - 1] < 0) != (ys[i] < 0)) {
            double tol = tol_scale * (1.0 + std::max(std::abs(xs[i - 1]), std::abs(xs[i])));
            zeros.push_back(refine_root(f, xs[i - 1], xs[i], ys[i - 1], ys[i], tol));
        }
    }
    if (!xs.empty() && !ys.empty() && ys.back() == 0.0 &&
        (zeros.empty() || zeros.back() != xs.back()))
        zeros.push_back(xs.back());
    return zeros;
}

}  // namespace sl
