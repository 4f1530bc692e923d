#pragma once
// Forward spectral maps: from (q, boundary parameters) to the eigenvalues of
// the coupled problem, the auxiliary zero sequences, and the sign sequence.

#include <string>
#include <vector>

#include "sl/ode.hpp"
#include "sl/types.hpp"

namespace sl {

struct ForwardResult {
    SpectralData data;
    AuxSpectra aux;
    std::vector<std::string> diagnostics;  // near-double zeros, skipped verifications
};

// Zeros of delta: K per side beyond the two closest to the origin.
// Scans step-0.1 windows [k + a +- 0.45] (a = -(1/pi) arctan alpha) merged
// with a dense [-1.2, 1.2] origin scan; refines each sign change by
// safeguarded secant to tol_root*(1+|lam|).
TwoSidedSpectrum eigenvalues_P(const Problem& p, int K, double tol_root = 1e-12,
                               std::vector<std::string>* diagnostics = nullptr);

// First N zeros of sigma(pi, .), s(pi, .), s'(pi, .) on the positive axis.
std::vector<double> theta_zeros(const Problem& p, int N, double tol_root = 1e-13);
std::vector<double> dirichlet_spectrum(const Problem& p, int N, double tol_root = 1e-13);
std::vector<double> dn_spectrum(const Problem& p, int N, double tol_root = 1e-13);

// sigma_n = sign(1 - |omega s(pi, theta_n)|), with a dead band tol_sign for 0.
SignSequence sign_sequence(const Problem& p, const std::vector<double>& theta,
                           double tol_sign = 1e-8);

ForwardResult forward(const Potential& q, const BoundaryParams& bp, int K, int N,
                      double tol_root = 1e-12, double tol_sign = 1e-8, int nsub = 8);

}  // namespace sl
