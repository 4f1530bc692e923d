#pragma once
// Inverse pipeline, spectral side: index assignment of the stored zeros,
// asymptotic tail fits, the q == 0 reference model, the ratio-product
// characteristic function with optional complex-pair correction, and the
// recovered-function chain ending in auxiliary spectra and norming constants.

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sl/ode.hpp"
#include "sl/types.hpp"

namespace sl {

// ---------------------------------------------------------------- indexing
// Integer index k (mu_k ~ k + a) for every stored zero, anchored by the
// circular mean of the tail fractional parts.  surplus == 2 flags an origin
// straddle pair (two zeros carrying the +-0 labels, marked k = 0 here);
// surplus == 0 means the near-origin zero pair is complex and every real
// zero carries a nonzero integer index.
struct IndexAssignment {
    std::vector<double> z;  // sorted ascending
    std::vector<int> k;     // index per zero; 0 marks a straddle label
    int surplus = 0;
    double anchor = 0.0;

    bool straddle() const { return surplus == 2; }
    std::optional<double> at(int index) const;  // lookup by nonzero index
    int max_abs_index() const;
};

IndexAssignment assign_indices(const std::vector<double>& zeros);

// c0 of a least-squares fit c0 + c1/x + ... + c_orders/x^orders over the
// tail half of the samples (x >= max(x)/2).
double tail_limit(const std::vector<double>& xs, const std::vector<double>& ws,
                  int orders = 2);

// Weighted LS of mu_k = k + a + ((-1)^{k+1} A - B)/(k pi) plus two
// higher-order nuisance terms per parity, over |k| >= (1 - tail_window) K,
// weights k^2.  Throws FitDiverged when |a| >= 1/2.
AsymptoticFit fit_asymptotics(const IndexAssignment& idx, double tail_window = 0.5);

// alpha = -tan(pi a); omega = A sqrt(1+alpha^2)/2, cross-checked against the
// even/odd gap limit (pi sqrt(1+alpha^2)/2) lim k(mu_{2k+1} - mu_{2k} - 1).
// Throws InconsistentOmega when the two estimates differ by more than
// 5e-2 (1 + |omega|).
struct AlphaOmega {
    double alpha = 0.0;
    double omega = 0.0;
    double omega_cross = 0.0;
};
AlphaOmega recover_alpha_omega(const AsymptoticFit& fit, const IndexAssignment& idx);

// ---------------------------------------------------------------- reference
// q == 0 model problem with the fitted (alpha, omega) and matched
// (beta0, gamma_ref); its closed-form delta anchors the ratio product.
struct Reference {
    BoundaryParams bp;

    double delta(double lam) const { return delta_free(lam, bp); }
    double delta0() const;  // closed form at lam = 0; sign tags the class
    bool straddle() const { return delta0() < 0.0; }
    std::vector<double> zeros(double radius) const;
    // Near-origin zero in the upper half plane, if the class has one.
    std::optional<std::complex<double>> complex_pair() const;
};

// gamma_ref minimizing the order-paired near-origin zero mismatch, subject
// to the reference landing in the data's class (straddle vs complex pair).
double match_gamma_ref(const IndexAssignment& idx, double alpha, double omega,
                       double B);

// Reference with B matched exactly: beta0 = (B + gamma_ref)(1 + alpha^2).
Reference make_reference(const IndexAssignment& idx, double alpha, double omega,
                         double B);

// Reference zeros order-paired to the data zeros (innermost outward per
// side, surplus trimmed at the outer edges).  Throws FitDiverged when the
// reference cannot supply enough zeros per side.
std::vector<double> pair_reference_zeros(const std::vector<double>& zeros,
                                         const Reference& ref);

// ------------------------------------------------------- recovered functions
struct CharFn {
    enum class Kind { ClosedForm, ProductDelta, OddPartSigma, RecoveredS, RecoveredSPrime };
    Kind kind = Kind::ClosedForm;
    std::function<double(double)> eval;
    std::vector<double> zeros;  // the zero list the instance was built from/for

    double operator()(double lam) const { return eval(lam); }
};

// Multiplicative correction ((lam-u)^2 + v^2) / ((lam-u_ref)^2 + v_ref^2)
// replacing the reference's own complex zero pair by a fitted one.
struct PairCorrection {
    double u = 0.0, v = 0.0;
    double u_ref = 0.0, v_ref = 0.0;
};

// delta(lam) = delta_ref(lam) prod_k (mu_k - lam)/(mu_k^ref - lam), zeros
// paired by position, optionally times the complex-pair correction.
CharFn delta_from_product(const std::vector<double>& zeros,
                          const std::vector<double>& ref_zeros, const Reference& ref,
                          const std::optional<PairCorrection>& pair = {});

// sigma(pi, lam) = (delta(lam) - delta(-lam)) / (2 alpha lam), with the
// |lam| <= 1e-4 band replaced by delta'(0)/alpha.
CharFn sigma_from_delta(const CharFn& delta, double alpha);

// First zero of sigma in [n - 0.95, n - 0.05] for n = 1..N, with one
// widened rescan [max(0.02, n - 1.45), n + 0.45] before giving up.
// Throws RootCountMismatch on a missing root or non-increasing sequence.
std::vector<double> theta_from_sigma(const CharFn& sigma, int N);

// beta = 2 omega sqrt(1+alpha^2) - 2 pi (1+alpha^2) L with
// L = lim k (mu_{2k+1} - theta_{2k+1} - a - 1/2) by tail extrapolation.
double recover_beta(const IndexAssignment& idx, const std::vector<double>& theta,
                    double a, double alpha, double omega);

// v_plus(lam) = delta(lam) - 2 omega - (alpha lam + beta) sigma(pi, lam).
double v_plus_eval(const CharFn& delta, double omega, double alpha, double beta,
                   const CharFn& sigma, double lam);

// v_minus(theta_n) = (-1)^{n+1} sigma_n sqrt(v_plus^2 - 4 omega^2); the
// radicand is clamped to zero within tol_b = 1e-6 (1 + v_plus^2) and throws
// RadicandNegative below -tol_b when sigma_n != 0.
double v_minus_at_theta(double v_plus_n, double omega, int sigma_n, int n);

// g(theta_n) = v_plus(theta_n) - v_minus(theta_n) - 2 omega^2 sin(theta_n pi)/theta_n.
std::vector<double> g_samples(const std::vector<double>& theta,
                              const std::vector<double>& v_plus,
                              const std::vector<double>& v_minus, double omega);

// Sampling-series interpolant
//   g(lam) = 2 sigma(pi, lam) sum_n theta_n g_n / ((lam^2 - theta_n^2) sigma_dot_n);
// within 1e-9 of a node it returns the stored sample.
struct GInterpolant {
    std::vector<double> theta, g, sdot;
    CharFn sigma;

    double operator()(double lam) const;
    // Magnitude of the last-quarter partial sum: truncation estimate.
    double tail_estimate(double lam) const;
};
GInterpolant g_interpolate(std::vector<double> theta, std::vector<double> g_at_theta,
                           const CharFn& sigma);

// s(pi, lam) = g(lam)/(2 omega^2) + sin(lam pi)/lam (series under 1e-4).
CharFn s_pi_from_g(const GInterpolant& g, double omega);

// One zero of s(pi, .) per bracket (theta_n, theta_{n+1}).
std::vector<double> lambda_zeros(const CharFn& s_pi, const std::vector<double>& theta);

// gamma = pi lim n(theta_n - lambda_n + 1/2); Q = pi lim n(lambda_n - n).
// Both tail-extrapolated over the mid window n in [max(3, N/8), N/2], where
// the interpolant is trusted.
double recover_gamma(const std::vector<double>& theta, const std::vector<double>& lambda_d);
double recover_q_half(const std::vector<double>& lambda_d);

// s'(pi, lam) = sigma(pi, lam) - gamma s(pi, lam).
CharFn s_prime_pi_from(const CharFn& sigma, const CharFn& s_pi, double gamma);

// One zero of s'(pi, .) per bracket [n - 0.95, n - 0.05], widened fallback
// as for theta_from_sigma.
std::vector<double> nu_zeros(const CharFn& s_prime_pi, int N);

// --------------------------------------------------------------- the chain
// One full function-recovery pass for a fixed pair correction: theta, v+-,
// g samples, s, its zeros, gamma, Q, s', norming constants.  `bad` marks a
// failed pass (missing root, non-monotone thetas) when throwing is not
// wanted; `barrier` accumulates penalty terms for constraint violations
// (negative radicand, sign law of s at the nodes).
struct Chain {
    bool bad = false;
    double barrier = 0.0;
    std::vector<double> theta, v_plus, v_minus, g_s, sdot, lamd, alphas, nus;
    double gamma = 0.0, Q = 0.0, qbar = 0.0;
    CharFn delta, sigma, s_pi, s_prime_pi;
    GInterpolant g;
};

// One recovery pass at fixed correction; strict mode throws
// (RootCountMismatch, RadicandNegative, FitDiverged) where the soft mode
// marks `bad` or accumulates `barrier`, which the pair fit minimizes over.
Chain chain_eval(const CharFn& delta, const CharFn& sigma, double alpha, double omega,
                 double beta, const std::vector<int>& signs, int N,
                 const Chain* warm = nullptr, bool strict = true);

struct RecoveredFunctions {
    CharFn v_plus, g, s_pi, s_prime_pi;
    double gamma = 0.0;
    AuxSpectra aux;
};

// ----------------------------------------------------------------- driver
struct InverseOptions {
    int n_aux = 64;            // auxiliary zeros per function
    double tail_window = 0.5;  // fraction of |k| range used by the tail fit
    bool fit_pair = true;      // complex-pair correction of the product
    bool full_output = true;   // nu zeros + strict errors on the final chain
};

struct Reconstruction {
    IndexAssignment idx;
    AsymptoticFit fit;
    RecoveredParams params;
    Reference ref;
    std::vector<double> ref_zeros;
    double pair_dev = 0.0;  // max |mu_k - mu_k^ref| over the pairing
    std::optional<PairCorrection> pair;
    Chain chain;
    RecoveredFunctions funcs;
    std::vector<std::string> log;  // how each constant was obtained
};

Reconstruction reconstruct(const SpectralData& data, const InverseOptions& opt = {});

}  // namespace sl
