#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>

#include "sl/recover.hpp"
#include "sl/roots.hpp"

namespace sl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sinc_pi(double lam) {
    if (std::abs(lam) <= 1e-4) {
        double x = lam * PI;
        return PI * (1.0 - x * x / 6.0 + x * x * x * x / 120.0);
    }
    return std::sin(lam * PI) / lam;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0,
                double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
    return buf;
}

}  // namespace

// ----------------------------------------------------- pointwise operations
double v_plus_eval(const CharFn& delta, double omega, double alpha, double beta,
                   const CharFn& sigma, double lam) {
    return delta(lam) - 2.0 * omega - (alpha * lam + beta) * sigma(lam);
}

double v_minus_at_theta(double v_plus_n, double omega, int sigma_n, int n) {
    double rad = v_plus_n * v_plus_n - 4.0 * omega * omega;
    if (sigma_n == 0) rad = std::max(rad, 0.0);  // product vanishes either way
    // slightly negative radicand = recovery noise at a near-touching node
    if (rad < 0.0 && rad >= -1e-5 * (1.0 + v_plus_n * v_plus_n)) rad = 0.0;
    if (rad < 0.0)
        throw RadicandNegative("v_plus^2 < 4 omega^2 at n = " + std::to_string(n) +
                               " (radicand " + std::to_string(rad) + ")");
    double flip = (n % 2 == 0) ? -1.0 : 1.0;  // (-1)^{n+1}
    return flip * sigma_n * std::sqrt(rad);
}

std::vector<double> g_samples(const std::vector<double>& theta,
                              const std::vector<double>& v_plus,
                              const std::vector<double>& v_minus, double omega) {
    if (theta.size() != v_plus.size() || theta.size() != v_minus.size())
        throw CountMismatch("g_samples list lengths");
    std::vector<double> g(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i)
        g[i] = v_plus[i] - v_minus[i] - 2.0 * omega * omega * std::sin(theta[i] * PI) / theta[i];
    return g;
}

double GInterpolant::operator()(double lam) const {
    double al = std::abs(lam);
    double tot = 0.0;
    for (std::size_t n = 0; n < theta.size(); ++n) {
        if (std::abs(al - theta[n]) <= 1e-9) return g[n];
        tot += theta[n] * g[n] / ((lam * lam - theta[n] * theta[n]) * sdot[n]);
    }
    return 2.0 * sigma(lam) * tot;
}

double GInterpolant::tail_estimate(double lam) const {
    double tot = 0.0;
    for (std::size_t n = 3 * theta.size() / 4; n < theta.size(); ++n)
        tot += theta[n] * g[n] / ((lam * lam - theta[n] * theta[n]) * sdot[n]);
    return std::abs(2.0 * sigma(lam) * tot);
}

GInterpolant g_interpolate(std::vector<double> theta, std::vector<double> g_at_theta,
                           const CharFn& sigma) {
    if (theta.size() != g_at_theta.size()) throw CountMismatch("g_interpolate lists");
    GInterpolant out;
    out.sdot.reserve(theta.size());
    for (double t : theta) out.sdot.push_back(dlam(sigma.eval, t));
    out.theta = std::move(theta);
    out.g = std::move(g_at_theta);
    out.sigma = sigma;
    return out;
}

CharFn s_pi_from_g(const GInterpolant& g, double omega) {
    if (omega == 0.0) throw DegenerateParameter("omega = 0 in s recovery");
    CharFn fn;
    fn.kind = CharFn::Kind::RecoveredS;
    fn.eval = [g, omega](double lam) {
        return g(lam) / (2.0 * omega * omega) + sinc_pi(lam);
    };
    return fn;
}

std::vector<double> lambda_zeros(const CharFn& s_pi, const std::vector<double>& theta) {
    std::vector<double> out;
    if (theta.size() < 2) return out;
    out.reserve(theta.size() - 1);
    for (std::size_t n = 0; n + 1 < theta.size(); ++n) {
        double r = first_root_in(s_pi.eval, theta[n] + 1e-9, theta[n + 1] - 1e-9);
        if (std::isnan(r))
            throw RootCountMismatch("no s zero between theta_" + std::to_string(n + 1) +
                                    " and theta_" + std::to_string(n + 2));
        out.push_back(r);
    }
    return out;
}

namespace {

// pi * c0 of w_n restricted to the mid window n in [max(3, N/8), N/2]; the
// sampling series is trusted there, while samples near n = N carry the
// truncation error of the interpolant.
double mid_window_limit(const std::vector<double>& w) {
    int N = static_cast<int>(w.size()) + 1;
    if (N < 16) throw CountMismatch("tail limit needs at least 16 aux zeros");
    int lo = std::max(3, N / 8), hi = N / 2;
    std::vector<double> xs, ws;
    for (int n = lo; n <= hi && n <= static_cast<int>(w.size()); ++n) {
        xs.push_back(n);
        ws.push_back(w[n - 1]);
    }
    return PI * tail_limit(xs, ws);
}

}  // namespace

double recover_gamma(const std::vector<double>& theta, const std::vector<double>& lambda_d) {
    if (theta.size() < lambda_d.size()) throw CountMismatch("gamma limit lists");
    std::vector<double> w(lambda_d.size());
    for (std::size_t i = 0; i < lambda_d.size(); ++i)
        w[i] = (i + 1.0) * (theta[i] - lambda_d[i] + 0.5);
    return mid_window_limit(w);
}

double recover_q_half(const std::vector<double>& lambda_d) {
    std::vector<double> w(lambda_d.size());
    for (std::size_t i = 0; i < lambda_d.size(); ++i)
        w[i] = (i + 1.0) * (lambda_d[i] - (i + 1.0));
    return mid_window_limit(w);
}

CharFn s_prime_pi_from(const CharFn& sigma, const CharFn& s_pi, double gamma) {
    CharFn fn;
    fn.kind = CharFn::Kind::RecoveredSPrime;
    auto sg = sigma.eval, sp = s_pi.eval;
    fn.eval = [sg, sp, gamma](double lam) { return sg(lam) - gamma * sp(lam); };
    return fn;
}

std::vector<double> nu_zeros(const CharFn& s_prime_pi, int N) {
    std::vector<double> out;
    out.reserve(N);
    for (int n = 1; n <= N; ++n) {
        double r = first_root_in(s_prime_pi.eval, n - 0.95, n - 0.05);
        if (std::isnan(r)) {
            double lo = std::max(0.02, n - 1.45);
            if (!out.empty()) lo = std::max(lo, out.back() + 0.02);
            r = first_root_in(s_prime_pi.eval, lo, n + 0.45);
        }
        if (std::isnan(r))
            throw RootCountMismatch("no s' zero near n - 1/2 for n = " + std::to_string(n));
        if (!out.empty() && r <= out.back())
            throw RootCountMismatch("s' zeros out of order at n = " + std::to_string(n));
        out.push_back(r);
    }
    return out;
}

// ------------------------------------------------------------------ chain
Chain chain_eval(const CharFn& delta, const CharFn& sigma, double alpha, double omega,
                 double beta, const std::vector<int>& signs, int N, const Chain* warm,
                 bool strict) {
    Chain ch;
    ch.delta = delta;
    ch.sigma = sigma;
    if (static_cast<int>(signs.size()) < N) throw CountMismatch("sign sequence shorter than N");
    bool have_warm = warm && !warm->bad && static_cast<int>(warm->theta.size()) == N;

    ch.theta.reserve(N);
    for (int n = 1; n <= N; ++n) {
        double r = kNaN;
        if (have_warm) {
            double w = warm->theta[n - 1];
            r = first_root_in(sigma.eval, w - 0.2, w + 0.2);
        }
        if (std::isnan(r)) r = first_root_in(sigma.eval, n - 0.95, n - 0.05);
        if (std::isnan(r)) {
            double lo = std::max(0.02, n - 1.45);
            if (!ch.theta.empty()) lo = std::max(lo, ch.theta.back() + 0.02);
            r = first_root_in(sigma.eval, lo, n + 0.45);
        }
        bool order_ok = !std::isnan(r) && (ch.theta.empty() || r > ch.theta.back());
        if (!order_ok) {
            if (strict)
                throw RootCountMismatch("sigma zero missing or out of order at n = " +
                                        std::to_string(n));
            ch.bad = true;
            return ch;
        }
        ch.theta.push_back(r);
    }

    ch.v_plus.resize(N);
    ch.v_minus.resize(N);
    ch.sdot.resize(N);
    for (int n = 1; n <= N; ++n) {
        double t = ch.theta[n - 1];
        ch.v_plus[n - 1] = v_plus_eval(delta, omega, alpha, beta, sigma, t);
        ch.sdot[n - 1] = dlam(sigma.eval, t);
        double vp = ch.v_plus[n - 1];
        if (strict) {
            ch.v_minus[n - 1] = v_minus_at_theta(vp, omega, signs[n - 1], n);
        } else {
            double rad = vp * vp - 4.0 * omega * omega;
            double tol_b = 1e-6 * (1.0 + vp * vp);
            if (rad < -tol_b && signs[n - 1] != 0) ch.barrier += 1e2 * rad * rad;
            if (std::abs(rad) <= tol_b) rad = 0.0;
            rad = std::max(rad, 0.0);
            double flip = (n % 2 == 0) ? -1.0 : 1.0;
            ch.v_minus[n - 1] = flip * signs[n - 1] * std::sqrt(rad);
        }
    }
    ch.g_s = g_samples(ch.theta, ch.v_plus, ch.v_minus, omega);

    ch.g.theta = ch.theta;
    ch.g.g = ch.g_s;
    ch.g.sdot = ch.sdot;
    ch.g.sigma = sigma;
    ch.s_pi = s_pi_from_g(ch.g, omega);

    // sign law of s at the nodes, from the samples themselves
    for (int n = 1; n <= N; ++n) {
        double sv = ch.g_s[n - 1] / (2.0 * omega * omega) +
                    std::sin(ch.theta[n - 1] * PI) / ch.theta[n - 1];
        double chk = sv * ((n % 2 == 0) ? -1.0 : 1.0);
        if (chk < 0) ch.barrier += 1e2 * chk * chk;
    }

    ch.lamd.reserve(N - 1);
    bool warm_l = have_warm && static_cast<int>(warm->lamd.size()) == N - 1;
    for (int n = 0; n + 1 < N; ++n) {
        double blo = ch.theta[n] + 1e-9, bhi = ch.theta[n + 1] - 1e-9;
        double r = kNaN;
        if (warm_l) {
            double w = warm->lamd[n];
            double lo = std::max(blo, w - 0.15), hi = std::min(bhi, w + 0.15);
            if (lo < hi) r = first_root_in(ch.s_pi.eval, lo, hi);
        }
        if (std::isnan(r)) r = first_root_in(ch.s_pi.eval, blo, bhi);
        if (std::isnan(r)) {
            if (strict)
                throw RootCountMismatch("no s zero between theta_" + std::to_string(n + 1) +
                                        " and theta_" + std::to_string(n + 2));
            ch.bad = true;
            return ch;
        }
        ch.lamd.push_back(r);
    }

    ch.gamma = recover_gamma(ch.theta, ch.lamd);
    ch.Q = recover_q_half(ch.lamd);
    ch.qbar = 2.0 * ch.Q / PI;
    ch.s_prime_pi = s_prime_pi_from(sigma, ch.s_pi, ch.gamma);

    ch.alphas.resize(N - 1);
    for (int n = 0; n + 1 < N; ++n) {
        double l = ch.lamd[n];
        ch.alphas[n] = dlam(ch.s_pi.eval, l) / (2.0 * l) * ch.s_prime_pi(l);
    }

    if (strict) {
        ch.nus = nu_zeros(ch.s_prime_pi, N - 1);
        ch.s_pi.zeros = ch.lamd;
        ch.s_prime_pi.zeros = ch.nus;
        ch.sigma.zeros = ch.theta;
    }
    return ch;
}

// --------------------------------------------------------------- pair fit
namespace {

// Smoothness of the recovered Dirichlet data against its own asymptotic
// model over the trusted band, plus the feasibility barriers.
double pair_objective(const Chain& ch, int N) {
    if (ch.bad) return 1e12;
    int m = std::max(8, N / 4);
    std::vector<double> wl(m), wa(m);
    for (int n = 1; n <= m; ++n) {
        double nn = n;
        wl[n - 1] = (ch.lamd[n - 1] * ch.lamd[n - 1] - nn * nn - ch.qbar) * nn * nn;
        wa[n - 1] = (2.0 * nn * nn * ch.alphas[n - 1] / PI - 1.0) * nn * nn;
    }
    double r = 0.0;
    for (int i = 0; i + 1 < m; ++i) {
        double dl = wl[i + 1] - wl[i], da = wa[i + 1] - wa[i];
        r += dl * dl + da * da;
    }
    return r + ch.barrier;
}

// Sharper variant for the final polish: residuals of wl over n in [5, 12]
// after removing a fitted cl + d n^2 trend.  Dropping n <= 4 discards the
// genuine low-n structure that biases the difference objective, and the n^2
// term absorbs the mean-shift error, so what is left alternates with the
// pair misfit and vanishes at the true pair.
double pair_objective_mid(const Chain& ch) {
    if (ch.bad) return 1e12;
    const int n0 = 5, n1 = 12;
    if (static_cast<int>(ch.lamd.size()) < n1) return 1e12;
    double s00 = 0, s01 = 0, s11 = 0, b0 = 0, b1 = 0;
    std::array<double, n1 - n0 + 1> wl;
    for (int n = n0; n <= n1; ++n) {
        double nn = n;
        double w = (ch.lamd[n - 1] * ch.lamd[n - 1] - nn * nn - ch.qbar) * nn * nn;
        wl[n - n0] = w;
        s00 += 1.0;
        s01 += nn * nn;
        s11 += nn * nn * nn * nn;
        b0 += w;
        b1 += w * nn * nn;
    }
    double det = s00 * s11 - s01 * s01;
    double cl = (b0 * s11 - b1 * s01) / det;
    double d = (s00 * b1 - s01 * b0) / det;
    double r = 0.0;
    for (int n = n0; n <= n1; ++n) {
        double e = wl[n - n0] - cl - d * n * n;
        r += e * e;
    }
    return r + ch.barrier;
}

struct PairFitResult {
    PairCorrection pc;
    double objective = 0.0;
};

// Nelder-Mead in two variables: reflection 1, expansion 2, contraction 1/2,
// shrink 1/2; stops when the simplex and its values both collapse.  The
// initial simplex steps 5% per coordinate unless explicit offsets are given.
template <class F>
std::array<double, 3> nelder_mead2(F&& f, double x0, double y0, double xatol,
                                   double fatol, int maxiter, double dx0 = 0.0,
                                   double dy0 = 0.0) {
    struct V {
        double x, y, f;
    };
    auto mk = [&](double x, double y) { return V{x, y, f(x, y)}; };
    double x1 = dx0 != 0.0 ? x0 + dx0 : (x0 != 0.0 ? 1.05 * x0 : 2.5e-4);
    double y1 = dy0 != 0.0 ? y0 + dy0 : (y0 != 0.0 ? 1.05 * y0 : 2.5e-4);
    std::array<V, 3> s = {mk(x0, y0), mk(x1, y0), mk(x0, y1)};
    auto order = [&] {
        std::sort(s.begin(), s.end(), [](const V& a, const V& b) { return a.f < b.f; });
    };
    order();
    for (int it = 0; it < maxiter; ++it) {
        double dx = std::max(std::abs(s[1].x - s[0].x), std::abs(s[2].x - s[0].x));
        double dy = std::max(std::abs(s[1].y - s[0].y), std::abs(s[2].y - s[0].y));
        double df = std::max(std::abs(s[1].f - s[0].f), std::abs(s[2].f - s[0].f));
        if (std::max(dx, dy) <= xatol && df <= fatol) break;
        double cx = 0.5 * (s[0].x + s[1].x), cy = 0.5 * (s[0].y + s[1].y);
        V xr = mk(2.0 * cx - s[2].x, 2.0 * cy - s[2].y);
        if (xr.f < s[0].f) {
            V xe = mk(3.0 * cx - 2.0 * s[2].x, 3.0 * cy - 2.0 * s[2].y);
            s[2] = (xe.f < xr.f) ? xe : xr;
        } else if (xr.f < s[1].f) {
            s[2] = xr;
        } else {
            bool shrink = false;
            if (xr.f < s[2].f) {
                V xc = mk(1.5 * cx - 0.5 * s[2].x, 1.5 * cy - 0.5 * s[2].y);
                if (xc.f <= xr.f)
                    s[2] = xc;
                else
                    shrink = true;
            } else {
                V xcc = mk(0.5 * cx + 0.5 * s[2].x, 0.5 * cy + 0.5 * s[2].y);
                if (xcc.f < s[2].f)
                    s[2] = xcc;
                else
                    shrink = true;
            }
            if (shrink) {
                s[1] = mk(s[0].x + 0.5 * (s[1].x - s[0].x), s[0].y + 0.5 * (s[1].y - s[0].y));
                s[2] = mk(s[0].x + 0.5 * (s[2].x - s[0].x), s[0].y + 0.5 * (s[2].y - s[0].y));
            }
        }
        order();
    }
    return {s[0].x, s[0].y, s[0].f};
}

std::optional<PairFitResult> fit_pair(const std::vector<double>& zeros,
                                      const std::vector<double>& ref_zeros,
                                      const Reference& ref, double alpha, double omega,
                                      double beta, const std::vector<int>& signs, int N,
                                      std::vector<std::string>* log) {
    auto rp = ref.complex_pair();
    if (!rp) return std::nullopt;
    double u0 = rp->real(), v0 = rp->imag();
    Chain warm;
    warm.bad = true;
    auto F = [&](double u, double v) {
        if (v < 0.03 || std::abs(u) > 2.5 || v > 3.0) return 1e12;
        PairCorrection pc{u, v, u0, v0};
        CharFn d = delta_from_product(zeros, ref_zeros, ref, pc);
        CharFn sg = sigma_from_delta(d, alpha);
        Chain ch = chain_eval(d, sg, alpha, omega, beta, signs, N,
                              warm.bad ? nullptr : &warm, false);
        double val = pair_objective(ch, N);
        if (!ch.bad) warm = std::move(ch);
        return val;
    };
    double best_u = u0, best_v = v0, best_f = F(u0, v0);
    for (int iu = 0; iu < 7; ++iu) {
        double du = -0.6 + 1.2 * iu / 6.0;
        for (int iv = 0; iv < 6; ++iv) {
            double dv = -0.3 + 0.9 * iv / 5.0;
            double u = u0 + du, v = std::max(0.06, v0 + dv);
            double val = F(u, v);
            if (val < best_f) {
                best_f = val;
                best_u = u;
                best_v = v;
            }
        }
    }
    auto res = nelder_mead2(F, best_u, best_v, 1e-6, 1e-14, 300);
    if (log) {
        log->push_back(fmt("pair fit: reference (%+.5f, %+.5f), grid best (%+.4f, %+.4f)",
                           u0, v0, best_u, best_v));
        log->push_back(fmt("pair fit: corrected (u, v) = (%+.6f, %+.6f), objective %.4e",
                           res[0], res[1], res[2]));
    }
    return PairFitResult{PairCorrection{res[0], res[1], u0, v0}, res[2]};
}

}  // namespace

// ------------------------------------------------------------------ driver
Reconstruction reconstruct(const SpectralData& data, const InverseOptions& opt) {
    data.validate();
    Reconstruction R;
    int N = opt.n_aux;
    if (static_cast<int>(data.signs.sigma.size()) < N) {
        N = static_cast<int>(data.signs.sigma.size());
        R.log.push_back("n_aux clamped to the " + std::to_string(N) + " available signs");
    }
    if (N < 16) throw CountMismatch("need at least 16 auxiliary zeros");

    R.idx = assign_indices(data.spectrum.flatten());
    R.log.push_back(fmt("indices: %g zeros, surplus %g, anchor a = %.8f",
                        static_cast<double>(R.idx.z.size()),
                        static_cast<double>(R.idx.surplus), R.idx.anchor));
    R.fit = fit_asymptotics(R.idx, opt.tail_window);
    R.log.push_back(fmt("tail fit: a = %.10f, A = %.10f, B = %.10f, rms = %.3e", R.fit.a,
                        R.fit.A, R.fit.B, R.fit.rms));
    AlphaOmega ao = recover_alpha_omega(R.fit, R.idx);
    R.log.push_back(fmt("alpha = -tan(pi a) = %.10f; omega = A sqrt(1+alpha^2)/2 = %.10f "
                        "(gap estimate %.6f)",
                        ao.alpha, ao.omega, ao.omega_cross));

    R.ref = make_reference(R.idx, ao.alpha, ao.omega, R.fit.B);
    R.log.push_back(fmt("reference: gamma_ref = %.8f, beta0 = (B + gamma_ref)(1+alpha^2) "
                        "= %.8f, delta_ref(0) = %.6f",
                        R.ref.bp.gamma, R.ref.bp.beta, R.ref.delta0()));
    R.ref_zeros = pair_reference_zeros(R.idx.z, R.ref);
    R.pair_dev = 0.0;
    for (std::size_t i = 0; i < R.idx.z.size(); ++i)
        R.pair_dev = std::max(R.pair_dev, std::abs(R.idx.z[i] - R.ref_zeros[i]));
    R.log.push_back(fmt("zero pairing: max |mu - mu_ref| = %.3e", R.pair_dev));

    // first pass without the pair correction fixes beta for the chain
    CharFn d0 = delta_from_product(R.idx.z, R.ref_zeros, R.ref);
    CharFn s0 = sigma_from_delta(d0, ao.alpha);
    std::vector<double> th0 = theta_from_sigma(s0, N);
    double beta1 = recover_beta(R.idx, th0, R.fit.a, ao.alpha, ao.omega);
    R.log.push_back(fmt("beta (first pass) = %.8f", beta1));

    if (opt.fit_pair && !R.idx.straddle()) {
        auto pf = fit_pair(R.idx.z, R.ref_zeros, R.ref, ao.alpha, ao.omega, beta1,
                           data.signs.sigma, N, &R.log);
        if (pf) R.pair = pf->pc;
        if (!pf) R.log.push_back("reference has no complex pair; product left uncorrected");
    } else if (R.idx.straddle()) {
        R.log.push_back("straddle class: all zeros real, no pair correction");
    }

    CharFn dfin = delta_from_product(R.idx.z, R.ref_zeros, R.ref, R.pair);
    CharFn sfin = sigma_from_delta(dfin, ao.alpha);
    R.chain = chain_eval(dfin, sfin, ao.alpha, ao.omega, beta1, data.signs.sigma, N,
                         nullptr, opt.full_output);

    R.params.alpha = ao.alpha;
    R.params.omega = ao.omega;
    R.params.omega_cross = ao.omega_cross;
    R.params.beta = recover_beta(R.idx, R.chain.theta, R.fit.a, ao.alpha, ao.omega);
    R.params.gamma = R.chain.gamma;
    R.params.Q = R.chain.Q;
    R.fit.Q_est = R.chain.Q;
    R.params.fit = R.fit;
    R.log.push_back(fmt("beta (final) = %.8f; gamma = pi lim n(theta - lambda + 1/2) = "
                        "%.8f; Q = pi lim n(lambda - n) = %.8f",
                        R.params.beta, R.params.gamma, R.params.Q));

    R.funcs.gamma = R.chain.gamma;
    R.funcs.aux.theta = R.chain.theta;
    R.funcs.aux.lambda_d = R.chain.lamd;
    R.funcs.aux.nu = R.chain.nus;
    R.funcs.s_pi = R.chain.s_pi;
    R.funcs.s_prime_pi = R.chain.s_prime_pi;
    double al = ao.alpha, om = ao.omega, be = R.params.beta;
    CharFn vp;
    vp.kind = CharFn::Kind::ClosedForm;
    vp.eval = [dfin, sfin, al, om, be](double lam) {
        return v_plus_eval(dfin, om, al, be, sfin, lam);
    };
    R.funcs.v_plus = vp;
    CharFn gfn;
    gfn.kind = CharFn::Kind::ClosedForm;
    GInterpolant g = R.chain.g;
    gfn.eval = [g](double lam) { return g(lam); };
    gfn.zeros = R.chain.theta;
    R.funcs.g = gfn;
    return R;
}

}  // namespace sl
