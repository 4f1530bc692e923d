#pragma once

#include <vector>

#include "sl/recover.hpp"

namespace sl {

// norming constants alpha_n = s_mu(pi, lam_n) * s'(pi, lam_n), with the
// mu-derivative taken as d/dlam s(pi, .) / (2 lam); all must come out positive
struct NormingConstants {
    std::vector<double> alpha;
};

NormingConstants norming_constants(const std::vector<double>& lambda_d,
                                   const CharFn& s_pi, const CharFn& s_prime_pi);

// input kernel F(x,t) = sum_n [ sin(lam_n x) sin(lam_n t) / (lam_n^2 alpha_n)
//                               - (2/pi) sin(n x) sin(n t) ]
struct GLKernel {
    std::vector<double> lam;
    std::vector<double> coef;  // 1 / (lam_n^2 alpha_n)
    double operator()(double x, double t) const;
    double tail_estimate(double x, double t) const;  // last-quarter partial sum
};

GLKernel gl_kernel(const std::vector<double>& lambda_d, const NormingConstants& nc);

// per-x Nystrom solve of K(x,t) + F(x,t) + int_0^x K(x,s) F(s,t) ds = 0,
// then q = 2 d/dx K(x,x)
struct GLSolution {
    std::vector<double> x;
    std::vector<double> kernel_diag;
    Potential q_rec;
};

GLSolution solve_gl(const GLKernel& F, int grid_n);

// model modes appended past the data: lam_n = sqrt(n^2 + qbar + c_lam/n^2),
// alpha_n = pi/(2n^2) (1 + c_alpha/n^2), coefficients from the data tail
struct ModeCompletion {
    std::vector<double> lam;
    std::vector<double> alpha;
    double c_lam = 0.0;
    double c_alpha = 0.0;
};

ModeCompletion complete_modes(const std::vector<double>& lambda_d,
                              const std::vector<double>& alpha, double qbar, int M);

struct GLOptions {
    int trusted = 0;    // modes taken from the data; 0 = quarter of the ladder
    int modes = 512;    // ladder length after completion
    int grid_n = 201;
};

struct PotentialRecovery {
    ModeCompletion modes;
    GLSolution gl;
    Potential q;
};

// full route: interlacing check, norming, completion, mean-shifted GL solve
PotentialRecovery recover_potential(const AuxSpectra& aux, const CharFn& s_pi,
                                    const CharFn& s_prime_pi, double qbar,
                                    const GLOptions& opt = {});

// Gauss-Newton polish of q against target Dirichlet / Dirichlet-Neumann
// spectra; cosine-basis steps, Tikhonov ladder, monotone acceptance
struct RefineResult {
    Potential q;
    std::vector<double> residuals;  // RMS before and after each accepted step
    int accepted = 0;
    bool stalled = false;
};

RefineResult refine_q(const Potential& q0, const std::vector<double>& target_lambda,
                      const std::vector<double>& target_nu, int iters);

}  // namespace sl
