#include "sl/forward.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "sl/roots.hpp"

namespace sl {

namespace {

std::string fmt(const char* pattern, double x, double y = 0.0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, pattern, x, y);
    return buf;
}

// Zeros of an even function of lam on (lo, hi): sample a uniform grid, refine
// every sign change.  Step 0.02 resolves any pair of simple zeros further
// apart than the grid; the callers' zero families have unit asymptotic gaps.
template <class Fn>
std::vector<double> scan_interval(Fn&& f, double lo, double hi, double step,
                                  double tol_root) {
    std::vector<double> xs;
    int n = int(std::ceil((hi - lo) / step));
    xs.reserve(n + 1);
    for (int i = 0; i <= n; ++i) xs.push_back(std::min(lo + step * i, hi));
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = f(xs[i]);
    return roots_from_scan(f, xs, ys, tol_root);
}

std::vector<double> first_n_zeros(const char* what, std::vector<double> zeros, int N,
                                  double residual_tol,
                                  const std::function<double(double)>& f) {
    if (int(zeros.size()) < N)
        throw RootCountMismatch(std::string(what) + ": found " +
                                std::to_string(zeros.size()) + " zeros, need " +
                                std::to_string(N));
    zeros.resize(N);
    for (double z : zeros)
        if (std::abs(f(z)) > residual_tol * (1.0 + std::abs(z)))
            throw RootCountMismatch(std::string(what) + ": residual " +
                                    std::to_string(f(z)) + " at zero " + std::to_string(z));
    return zeros;
}

}  // namespace

TwoSidedSpectrum eigenvalues_P(const Problem& p, int K, double tol_root,
                               std::vector<std::string>* diagnostics) {
    if (K < 8) throw CountMismatch("eigenvalues_P needs K >= 8");
    const BoundaryParams& bp = p.bp();
    const double a = -std::atan(bp.alpha) / PI;

    // merged scan grid: per-index windows [k + a +- 0.45] at step 0.1 abut one
    // another (0.1 gaps), so the union is a uniform sweep; the origin zone
    // gets step 0.01 to separate a possible extra pair from its neighbours.
    std::vector<double> xs;
    const int kmax = K + 2;
    for (double x = -kmax + a - 0.45; x <= kmax + a + 0.45 + 1e-12; x += 0.1)
        if (std::abs(x) > 1.2) xs.push_back(x);
    for (double x = -1.2; x <= 1.2 + 1e-12; x += 0.01) xs.push_back(x);
    std::sort(xs.begin(), xs.end());

    std::vector<double> ys = p.delta(xs);
    auto f = [&p](double lam) { return p.delta(lam); };
    std::vector<double> zeros = roots_from_scan(f, xs, ys, tol_root);

    for (std::size_t i = 1; i < zeros.size(); ++i)
        if (zeros[i] - zeros[i - 1] < 1e-6 && diagnostics)
            diagnostics->push_back(fmt("near-double zero pair at %.12g, %.12g",
                                       zeros[i - 1], zeros[i]));

    if (zeros.size() < std::size_t(2 * K + 2))
        throw RootCountMismatch("eigenvalues_P: found " + std::to_string(zeros.size()) +
                                " zeros for K = " + std::to_string(K));

    // the two zeros closest to the origin take the +-0 labels (by value
    // order); in a sorted list they are a consecutive pair
    std::size_t i0 = 0;
    for (std::size_t i = 1; i + 1 < zeros.size(); ++i)
        if (std::abs(zeros[i]) + std::abs(zeros[i + 1]) <
            std::abs(zeros[i0]) + std::abs(zeros[i0 + 1]))
            i0 = i;

    TwoSidedSpectrum sp;
    sp.mu_neg0 = zeros[i0];
    sp.mu_pos0 = zeros[i0 + 1];
    if (i0 < std::size_t(K))
        throw RootCountMismatch("eigenvalues_P: only " + std::to_string(i0) +
                                " zeros below the origin pair, need " + std::to_string(K));
    if (zeros.size() - i0 - 2 < std::size_t(K))
        throw RootCountMismatch("eigenvalues_P: only " +
                                std::to_string(zeros.size() - i0 - 2) +
                                " zeros above the origin pair, need " + std::to_string(K));
    for (int k = 1; k <= K; ++k) {
        sp.mu_neg.push_back(zeros[i0 - k]);
        sp.mu_pos.push_back(zeros[i0 + 1 + k]);
    }

    // count verification against the asymptotic layout: in the outer half of
    // the range each window [k + a +- 0.45] must hold exactly one zero.  The
    // 1/k corrections must be small enough for the window picture to apply;
    // otherwise the check is recorded as skipped.
    const double A = 2.0 * bp.omega / std::sqrt(1.0 + bp.alpha * bp.alpha);
    const double corr = (std::abs(A) + std::abs(bp.beta) + std::abs(bp.gamma) +
                         std::abs(p.Q())) /
                        (PI * std::max(1, K / 2));
    if (corr < 0.40) {
        for (int k = K / 2; k <= K; ++k)
            for (double center : {double(k) + a, -double(k) + a}) {
                auto lo = std::lower_bound(zeros.begin(), zeros.end(), center - 0.45);
                auto hi = std::upper_bound(zeros.begin(), zeros.end(), center + 0.45);
                if (hi - lo != 1)
                    throw RootCountMismatch(
                        fmt("eigenvalues_P: window at %.6g holds %.0f zeros",
                            center, double(hi - lo)));
            }
    } else if (diagnostics) {
        diagnostics->push_back(
            fmt("window verification skipped: 1/k correction %.3g too large at K/2", corr));
    }
    return sp;
}

std::vector<double> theta_zeros(const Problem& p, int N, double tol_root) {
    if (N < 4) throw CountMismatch("theta_zeros needs N >= 4");
    // theta_n ~ n - 1/2 + (Q + gamma)/(n pi): sweep the whole strip
    auto f = [&p](double lam) { return p.sigma_pi(lam); };
    auto zeros = scan_interval(f, 0.02, N + 0.6, 0.02, tol_root);
    return first_n_zeros("theta_zeros", std::move(zeros), N, 1e-9, f);
}

std::vector<double> dirichlet_spectrum(const Problem& p, int N, double tol_root) {
    if (N < 4) throw CountMismatch("dirichlet_spectrum needs N >= 4");
    auto f = [&p](double lam) { return p.s_pi(lam); };
    auto zeros = scan_interval(f, 0.02, N + 0.7, 0.02, tol_root);
    return first_n_zeros("dirichlet_spectrum", std::move(zeros), N, 1e-9, f);
}

std::vector<double> dn_spectrum(const Problem& p, int N, double tol_root) {
    if (N < 4) throw CountMismatch("dn_spectrum needs N >= 4");
    auto f = [&p](double lam) { return p.sp_pi(lam); };
    auto zeros = scan_interval(f, 0.02, N + 0.2, 0.02, tol_root);
    return first_n_zeros("dn_spectrum", std::move(zeros), N, 1e-9, f);
}

SignSequence sign_sequence(const Problem& p, const std::vector<double>& theta,
                           double tol_sign) {
    SignSequence out;
    out.sigma.reserve(theta.size());
    for (double t : theta) {
        double v = 1.0 - std::abs(p.bp().omega * p.s_pi(t));
        out.sigma.push_back(std::abs(v) <= tol_sign ? 0 : (v > 0 ? 1 : -1));
    }
    return out;
}

ForwardResult forward(const Potential& q, const BoundaryParams& bp, int K, int N,
                      double tol_root, double tol_sign, int nsub) {
    bp.validate();
    Problem p(q, bp, nsub);
    ForwardResult r;
    r.data.spectrum = eigenvalues_P(p, K, tol_root, &r.diagnostics);
    r.aux.theta = theta_zeros(p, N, tol_root / 10);
    r.data.signs = sign_sequence(p, r.aux.theta, tol_sign);
    r.aux.lambda_d = dirichlet_spectrum(p, N, tol_root / 10);
    r.aux.nu = dn_spectrum(p, N, tol_root / 10);
    r.data.validate();
    return r;
}

}  // namespace sl
