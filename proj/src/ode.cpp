#include "sl/ode.hpp"

#include <cmath>
#include <stdexcept>

namespace sl {

void cs_funcs(double xi, double& C, double& S) {
    if (std::abs(xi) < 1e-4) {
        // series keeps full precision through the branch point
        C = 1.0 + xi * (-0.5 + xi * (1.0 / 24.0 - xi / 720.0));
        S = 1.0 + xi * (-1.0 / 6.0 + xi * (1.0 / 120.0 - xi / 5040.0));
        return;
    }
    if (xi > 0.0) {
        double r = std::sqrt(xi);
        C = std::cos(r);
        S = std::sin(r) / r;
    } else {
        double r = std::sqrt(-xi);
        C = std::cosh(r);
        S = std::sinh(r) / r;
    }
}

void cs_funcs(std::complex<double> xi, std::complex<double>& C, std::complex<double>& S) {
    if (std::abs(xi) < 1e-4) {
        C = 1.0 + xi * (-0.5 + xi * (1.0 / 24.0 - xi / 720.0));
        S = 1.0 + xi * (-1.0 / 6.0 + xi * (1.0 / 120.0 - xi / 5040.0));
        return;
    }
    std::complex<double> r = std::sqrt(xi);  // either branch: C, S are even in r
    C = std::cos(r);
    S = std::sin(r) / r;
}

Problem::Problem(Potential q, BoundaryParams bp, int nsub) : q_(std::move(q)), bp_(bp) {
    bp_.validate();
    if (q_.values.size() < 2) throw std::invalid_argument("Problem: potential needs >= 2 samples");
    if (nsub < 1) throw std::invalid_argument("Problem: nsub >= 1");
    const std::size_t nint = q_.values.size() - 1;
    const double hg = PI / double(nint);
    h_ = hg / double(nsub);
    qm_.reserve(nint * std::size_t(nsub));
    for (std::size_t i = 0; i < nint; ++i) {
        double q0 = q_.values[i], q1 = q_.values[i + 1];
        for (int j = 0; j < nsub; ++j) {
            double tm = (double(j) + 0.5) / double(nsub);  // midpoint in the interval
            qm_.push_back(q0 + (q1 - q0) * tm);
        }
    }
    qbar_ = q_.mean();
}

template <class T>
Fundamental<T> Problem::fundamental(T lam) const {
    T c = 1.0, cp = 0.0, s = 0.0, sp = 1.0;
    const T lam2 = lam * lam;
    for (double qm : qm_) {
        T w = lam2 - qm;
        T xi = w * (h_ * h_);
        T C, S;
        cs_funcs(xi, C, S);
        T hS = h_ * S;
        T c2 = C * c + hS * cp;
        T cp2 = -w * hS * c + C * cp;
        T s2 = C * s + hS * sp;
        T sp2 = -w * hS * s + C * sp;
        c = c2;
        cp = cp2;
        s = s2;
        sp = sp2;
    }
    return {c, cp, s, sp};
}

template Fundamental<double> Problem::fundamental<double>(double) const;
template Fundamental<std::complex<double>> Problem::fundamental<std::complex<double>>(
    std::complex<double>) const;

double Problem::delta(double lam) const { return delta_value(fundamental(lam), bp_, lam); }

std::complex<double> Problem::delta(std::complex<double> lam) const {
    return delta_value(fundamental(lam), bp_, lam);
}

double Problem::sigma_pi(double lam) const {
    auto f = fundamental(lam);
    return f.sp + bp_.gamma * f.s;
}

double Problem::eta_pi(double lam) const {
    auto f = fundamental(lam);
    return f.cp + bp_.gamma * f.c;
}

double Problem::s_pi(double lam) const { return fundamental(lam).s; }
double Problem::sp_pi(double lam) const { return fundamental(lam).sp; }

std::vector<double> Problem::delta(const std::vector<double>& lam) const {
    std::vector<double> out(lam.size());
    for (std::size_t i = 0; i < lam.size(); ++i) out[i] = delta(lam[i]);
    return out;
}

Fundamental<double> integrate_fundamental(const Potential& q, double lam, double tol) {
    double scale = tol * (1.0 + std::abs(lam));
    Fundamental<double> prev = Problem(q, {1, 0, 0, 1}, 1).fundamental(lam);
    for (int nsub = 2; nsub <= (1 << 14); nsub *= 2) {
        Fundamental<double> cur = Problem(q, {1, 0, 0, 1}, nsub).fundamental(lam);
        double diff = std::max({std::abs(cur.c - prev.c), std::abs(cur.cp - prev.cp),
                                std::abs(cur.s - prev.s), std::abs(cur.sp - prev.sp)});
        // one subdivision level gains 4x, so agreement at tol/3 bounds the error by tol
        if (diff <= scale / 3.0) return cur;
        prev = cur;
    }
    throw StepUnderflow("fundamental system not converged at lam = " + std::to_string(lam));
}

Fundamental<double> fundamental_free(double lam) {
    double xi = lam * lam * PI * PI;
    double C, S;
    cs_funcs(xi, C, S);
    return {C, -lam * lam * PI * S, PI * S, C};
}

double delta_free(double lam, const BoundaryParams& bp) {
    return delta_value(fundamental_free(lam), bp, lam);
}

std::complex<double> delta_free(std::complex<double> lam, const BoundaryParams& bp) {
    std::complex<double> xi = lam * lam * (PI * PI);
    std::complex<double> C, S;
    cs_funcs(xi, C, S);
    Fundamental<std::complex<double>> f{C, -lam * lam * PI * S, PI * S, C};
    return delta_value(f, bp, lam);
}

}  // namespace sl
