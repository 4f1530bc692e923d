#pragma once
// Fundamental system of -y'' + q y = lam^2 y on [0, pi] by the Pruess method:
// q is frozen at the midpoint of each subcell and the exact constant-q
// transfer matrix is applied.  Exact for piecewise-constant q (in particular
// q == 0); O(h^2) otherwise.  Works for real and complex lam (the complex
// path feeds the near-origin zero search of entire characteristic functions).

#include <complex>
#include <vector>

#include "sl/types.hpp"

namespace sl {

// C(xi) = cos(sqrt(xi)), S(xi) = sin(sqrt(xi))/sqrt(xi): entire in xi, stable
// through xi <= 0 (hyperbolic branch) and xi ~ 0 (series).
void cs_funcs(double xi, double& C, double& S);
void cs_funcs(std::complex<double> xi, std::complex<double>& C, std::complex<double>& S);

template <class T>
struct Fundamental {
    T c, cp, s, sp;  // c(pi), c'(pi), s(pi), s'(pi)
};

class Problem {
  public:
    // The operative potential is the linear interpolant of `q.values` on the
    // uniform grid; each grid interval is split into nsub Pruess cells.
    Problem(Potential q, BoundaryParams bp, int nsub = 8);

    const BoundaryParams& bp() const { return bp_; }
    const Potential& q() const { return q_; }
    double qbar() const { return qbar_; }
    double Q() const { return 0.5 * qbar_ * PI; }  // (1/2) integral of q

    template <class T>
    Fundamental<T> fundamental(T lam) const;

    // Scalar evaluations at x = pi.
    double delta(double lam) const;      // characteristic function
    double sigma_pi(double lam) const;   // s' + gamma s
    double eta_pi(double lam) const;     // c' + gamma c
    double s_pi(double lam) const;
    double sp_pi(double lam) const;
    std::complex<double> delta(std::complex<double> lam) const;

    std::vector<double> delta(const std::vector<double>& lam) const;

  private:
    Potential q_;
    BoundaryParams bp_;
    std::vector<double> qm_;  // per-cell midpoint potential values
    double h_ = 0.0;          // cell width
    double qbar_ = 0.0;
};

// delta assembled from a fundamental system and boundary parameters:
//   delta = 2w - (c' + g c) + w^2 s + (a lam + b)(s' + g s)
template <class T>
T delta_value(const Fundamental<T>& f, const BoundaryParams& bp, T lam) {
    T eta = f.cp + bp.gamma * f.c;
    T sig = f.sp + bp.gamma * f.s;
    return 2.0 * bp.omega - eta + bp.omega * bp.omega * f.s + (bp.alpha * lam + bp.beta) * sig;
}

// Closed forms for q == 0: c = cos(lam pi), s = sin(lam pi)/lam, entire in lam.
Fundamental<double> fundamental_free(double lam);
std::complex<double> delta_free(std::complex<double> lam, const BoundaryParams& bp);
double delta_free(double lam, const BoundaryParams& bp);

inline std::pair<double, double> eta_sigma(const Fundamental<double>& f, double gamma) {
    return {f.cp + gamma * f.c, f.sp + gamma * f.s};
}

// Fundamental values refined by cell subdivision until two consecutive
// levels agree within tol*(1+|lam|) componentwise; throws StepUnderflow if
// the refinement cap is hit first.
Fundamental<double> integrate_fundamental(const Potential& q, double lam, double tol = 1e-9);

// Central difference d/dlam with one Richardson extrapolation; step
// h = scale * max(1,|lam|) * eps^(1/3).
template <class F>
double dlam(F&& f, double lam, double scale = 1.0) {
    double h = scale * std::max(1.0, std::abs(lam)) * 6.06e-6;  // cbrt(machine eps)
    double d1 = (f(lam + h) - f(lam - h)) / (2.0 * h);
    double d2 = (f(lam + h / 2) - f(lam - h / 2)) / h;
    return (4.0 * d2 - d1) / 3.0;
}

}  // namespace sl
