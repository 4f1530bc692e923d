#pragma once
// Independent reference integrator for test oracles.  Deliberately NOT the
// production path: a fixed-step 11-stage 8th-order explicit Runge-Kutta
// (Cooper-Verner tableau) marching the second-order system directly, plus a
// brute-force quadrature for norming integrals.  Slow and simple on purpose.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

struct State {
    double y;
    double yp;
};

// y'' = (q(x) - lam^2) y  integrated x: 0 -> pi with nsteps fixed steps.
// q is any callable; tests pass closed forms (0, sin x, ...) so the oracle
// never sees the production sampling/interpolation path.
inline State integrate(const std::function<double(double)>& q, double lam, double y0,
                       double yp0, long nsteps, double x_end = 3.14159265358979323846) {
    static const double r21 = std::sqrt(21.0);
    // Cooper-Verner, 11 stages, order 8.
    const double c[11] = {0.0,
                          0.5,
                          0.5,
                          (7.0 + r21) / 14.0,
                          (7.0 + r21) / 14.0,
                          0.5,
                          (7.0 - r21) / 14.0,
                          (7.0 - r21) / 14.0,
                          0.5,
                          (7.0 + r21) / 14.0,
                          1.0};
    double a[11][11] = {};
    a[1][0] = 0.5;
    a[2][0] = 0.25;
    a[2][1] = 0.25;
    a[3][0] = 1.0 / 7.0;
    a[3][1] = -(7.0 + 3.0 * r21) / 98.0;
    a[3][2] = (21.0 + 5.0 * r21) / 49.0;
    a[4][0] = (11.0 + r21) / 84.0;
    a[4][2] = (18.0 + 4.0 * r21) / 63.0;
    a[4][3] = (21.0 - r21) / 252.0;
    a[5][0] = (5.0 + r21) / 48.0;
    a[5][2] = (9.0 + r21) / 36.0;
    a[5][3] = (-231.0 + 14.0 * r21) / 360.0;
    a[5][4] = (63.0 - 7.0 * r21) / 80.0;
    a[6][0] = (10.0 - r21) / 42.0;
    a[6][2] = (-432.0 + 92.0 * r21) / 315.0;
    a[6][3] = (633.0 - 145.0 * r21) / 90.0;
    a[6][4] = (-504.0 + 115.0 * r21) / 70.0;
    a[6][5] = (63.0 - 13.0 * r21) / 35.0;
    a[7][0] = 1.0 / 14.0;
    a[7][4] = (14.0 - 3.0 * r21) / 126.0;
    a[7][5] = (13.0 - 3.0 * r21) / 63.0;
    a[7][6] = 1.0 / 9.0;
    a[8][0] = 1.0 / 32.0;
    a[8][4] = (91.0 - 21.0 * r21) / 576.0;
    a[8][5] = 11.0 / 72.0;
    a[8][6] = -(385.0 + 75.0 * r21) / 1152.0;
    a[8][7] = (63.0 + 13.0 * r21) / 128.0;
    a[9][0] = 1.0 / 14.0;
    a[9][4] = 1.0 / 9.0;
    a[9][5] = -(733.0 + 147.0 * r21) / 2205.0;
    a[9][6] = (515.0 + 111.0 * r21) / 504.0;
    a[9][7] = -(51.0 + 11.0 * r21) / 56.0;
    a[9][8] = (132.0 + 28.0 * r21) / 245.0;
    a[10][4] = (-42.0 + 7.0 * r21) / 18.0;
    a[10][5] = (-18.0 + 28.0 * r21) / 45.0;
    a[10][6] = -(273.0 + 53.0 * r21) / 72.0;
    a[10][7] = (301.0 + 53.0 * r21) / 72.0;
    a[10][8] = (28.0 - 28.0 * r21) / 45.0;
    a[10][9] = (49.0 - 7.0 * r21) / 18.0;
    const double b[11] = {1.0 / 20.0, 0, 0, 0, 0, 0, 0, 49.0 / 180.0, 16.0 / 45.0,
                          49.0 / 180.0, 1.0 / 20.0};

    const double h = x_end / double(nsteps);
    double x = 0.0, y = y0, yp = yp0;
    double ky[11], kp[11];
    for (long n = 0; n < nsteps; ++n) {
        for (int i = 0; i < 11; ++i) {
            double yi = y, ypi = yp;
            for (int j = 0; j < i; ++j) {
                yi += h * a[i][j] * ky[j];
                ypi += h * a[i][j] * kp[j];
            }
            double xi = x + c[i] * h;
            ky[i] = ypi;
            kp[i] = (q(xi) - lam * lam) * yi;
        }
        for (int i = 0; i < 11; ++i) {
            y += h * b[i] * ky[i];
            yp += h * b[i] * kp[i];
        }
        x += h;
    }
    return {y, yp};
}

// Fundamental system (c, c', s, s') at pi.
struct Fund {
    double c, cp, s, sp;
};
inline Fund fundamental(const std::function<double(double)>& q, double lam, long nsteps) {
    State C = integrate(q, lam, 1.0, 0.0, nsteps);
    State S = integrate(q, lam, 0.0, 1.0, nsteps);
    return {C.y, C.yp, S.y, S.yp};
}

// integral over [0,pi] of s(x,lam)^2 dx: march the oracle one step at a time
// (x-offset folded into the callable) and apply composite Simpson (nsteps even).
inline double norming_integral(const std::function<double(double)>& q, double lam,
                               long nsteps) {
    const double h = 3.14159265358979323846 / double(nsteps);
    std::vector<double> ys;
    ys.reserve(nsteps + 1);
    double x = 0.0, y = 0.0, yp = 1.0;
    ys.push_back(y);
    for (long n = 0; n < nsteps; ++n) {
        double x0 = x;
        auto qs = [&q, x0](double t) { return q(x0 + t); };
        State st = integrate(qs, lam, y, yp, 1, h);
        y = st.y;
        yp = st.yp;
        x += h;
        ys.push_back(y);
    }
    double acc = 0.0;
    for (long i = 0; i + 2 <= nsteps; i += 2)
        acc += ys[i] * ys[i] + 4.0 * ys[i + 1] * ys[i + 1] + ys[i + 2] * ys[i + 2];
    return acc * h / 3.0;
}

}  // namespace oracle
