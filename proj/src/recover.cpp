#include "sl/recover.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "sl/roots.hpp"

namespace sl {

namespace {

// Fractional offset shared by the tail zeros, as a circular mean so the
// branch cut at half-integers does not bias it.
double circ_mean_frac(const std::vector<double>& vals) {
    std::complex<double> acc{0.0, 0.0};
    for (double v : vals) acc += std::polar(1.0, 2.0 * PI * v);
    return std::arg(acc) / (2.0 * PI);
}

std::vector<double> scan_zeros(const std::function<double(double)>& f, double lo,
                               double hi, double step) {
    std::vector<double> xs, ys;
    int n = static_cast<int>(std::ceil((hi - lo) / step));
    xs.reserve(n + 1);
    for (int i = 0; i <= n; ++i) xs.push_back(lo + (hi - lo) * i / n);
    ys.reserve(xs.size());
    for (double x : xs) ys.push_back(f(x));
    return roots_from_scan(f, xs, ys, 1e-13);
}

}  // namespace

// ---------------------------------------------------------------- indexing
std::optional<double> IndexAssignment::at(int index) const {
    for (std::size_t i = 0; i < k.size(); ++i)
        if (k[i] == index && index != 0) return z[i];
    return std::nullopt;
}

int IndexAssignment::max_abs_index() const {
    int m = 0;
    for (int v : k) m = std::max(m, std::abs(v));
    return m;
}

IndexAssignment assign_indices(const std::vector<double>& zeros) {
    IndexAssignment out;
    out.z = zeros;
    std::sort(out.z.begin(), out.z.end());
    int total = static_cast<int>(out.z.size());
    if (total < 8) throw CountMismatch("need at least 8 zeros to anchor indices");
    int npos = static_cast<int>(std::count_if(out.z.begin(), out.z.end(),
                                              [](double v) { return v > 0; }));
    int nneg = total - npos;
    if (npos < 3 || nneg < 3) throw FitDiverged("spectrum is one-sided");
    int tp = std::max(3, static_cast<int>(std::ceil(npos * 0.4)));
    int tn = std::max(3, static_cast<int>(std::ceil(nneg * 0.4)));
    std::vector<double> tail(out.z.end() - tp, out.z.end());
    tail.insert(tail.end(), out.z.begin(), out.z.begin() + tn);
    double a = circ_mean_frac(tail);
    out.anchor = a;
    int m_hi = static_cast<int>(std::lround(out.z.back() - a));
    int m_lo = static_cast<int>(std::lround(out.z.front() - a));
    if (m_lo >= 0 || m_hi <= 0) throw FitDiverged("index range does not straddle zero");
    out.surplus = total - (m_hi - m_lo);
    out.k.assign(total, 0);
    if (out.surplus == 0) {
        int i = 0;
        for (int k = m_lo; k <= m_hi; ++k) {
            if (k == 0) continue;
            out.k[i++] = k;
        }
    } else if (out.surplus == 2) {
        int i = 0;
        for (int k = m_lo; k <= -1; ++k) out.k[i++] = k;
        i += 2;  // straddle pair keeps k = 0
        for (int k = 1; k <= m_hi; ++k) out.k[i++] = k;
    } else {
        throw FitDiverged("index surplus " + std::to_string(out.surplus));
    }
    return out;
}

// -------------------------------------------------------------- tail fits
double tail_limit(const std::vector<double>& xs, const std::vector<double>& ws,
                  int orders) {
    if (xs.size() != ws.size() || xs.empty()) throw CountMismatch("tail_limit lists");
    double xmax = *std::max_element(xs.begin(), xs.end());
    std::vector<int> sel;
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (xs[i] >= 0.5 * xmax) sel.push_back(static_cast<int>(i));
    int rows = static_cast<int>(sel.size()), cols = orders + 1;
    if (rows < cols) throw FitDiverged("tail_limit: fewer points than coefficients");
    Eigen::MatrixXd X(rows, cols);
    Eigen::VectorXd y(rows);
    for (int r = 0; r < rows; ++r) {
        double x = xs[sel[r]];
        X(r, 0) = 1.0;
        for (int j = 1; j < cols; ++j) X(r, j) = X(r, j - 1) / x;
        y(r) = ws[sel[r]];
    }
    Eigen::VectorXd coef = X.colPivHouseholderQr().solve(y);
    if (!coef.allFinite()) throw FitDiverged("tail_limit: singular fit");
    return coef(0);
}

AsymptoticFit fit_asymptotics(const IndexAssignment& idx, double tail_window) {
    int K = idx.max_abs_index();
    if (K < 16) throw CountMismatch("tail fit needs indices up to at least 16");
    double kmin = (1.0 - tail_window) * K;
    std::vector<int> rows;
    for (std::size_t i = 0; i < idx.k.size(); ++i)
        if (idx.k[i] != 0 && std::abs(idx.k[i]) >= kmin) rows.push_back(static_cast<int>(i));
    const int cols = 7;  // 1, alt/(k pi), -1/(k pi), then 1/k^j, alt/k^j for j = 2, 3
    if (static_cast<int>(rows.size()) < cols + 2)
        throw FitDiverged("tail window too small for the fit");
    Eigen::MatrixXd X(rows.size(), cols);
    Eigen::VectorXd y(rows.size());
    Eigen::VectorXd w(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        double k = idx.k[rows[r]];
        double alt = (std::abs(idx.k[rows[r]]) % 2 == 0) ? -1.0 : 1.0;  // (-1)^{|k|+1}
        X(r, 0) = 1.0;
        X(r, 1) = alt / (k * PI);
        X(r, 2) = -1.0 / (k * PI);
        X(r, 3) = 1.0 / (k * k);
        X(r, 4) = alt / (k * k);
        X(r, 5) = 1.0 / (k * k * k);
        X(r, 6) = alt / (k * k * k);
        y(r) = idx.z[rows[r]] - k;
        w(r) = k * k;
    }
    Eigen::MatrixXd Xw = w.asDiagonal() * X;
    Eigen::VectorXd coef = Xw.colPivHouseholderQr().solve(w.asDiagonal() * y);
    if (!coef.allFinite()) throw FitDiverged("asymptotic fit is singular");
    AsymptoticFit fit;
    fit.a = coef(0);
    fit.A = coef(1);
    fit.B = coef(2);
    Eigen::VectorXd resid = y - X * coef;
    fit.residuals.assign(resid.data(), resid.data() + resid.size());
    fit.rms = std::sqrt((w.array() * resid.array().square()).sum() / w.sum());
    if (std::abs(fit.a) >= 0.5)
        throw FitDiverged("offset |a| = " + std::to_string(std::abs(fit.a)) + " >= 1/2");
    return fit;
}

AlphaOmega recover_alpha_omega(const AsymptoticFit& fit, const IndexAssignment& idx) {
    AlphaOmega out;
    out.alpha = -std::tan(PI * fit.a);
    double root = std::sqrt(1.0 + out.alpha * out.alpha);
    out.omega = fit.A * root / 2.0;
    // independent estimate from the even/odd gap on the positive side; the
    // weighted gap is exactly linear in 1/(2k+1) for the model class, so the
    // fit abscissa is 2k+1 rather than k
    std::vector<double> xs, ws;
    for (int k = 1; 2 * k + 1 <= idx.max_abs_index(); ++k) {
        auto even = idx.at(2 * k), odd = idx.at(2 * k + 1);
        if (!even || !odd) continue;
        xs.push_back(2 * k + 1);
        ws.push_back(k * (*odd - *even - 1.0));
    }
    if (xs.size() >= 4) {
        out.omega_cross = (PI * root / 2.0) * tail_limit(xs, ws);
        if (std::abs(out.omega - out.omega_cross) > 5e-2 * (1.0 + std::abs(out.omega)))
            throw InconsistentOmega("product estimate " + std::to_string(out.omega) +
                                    " vs gap estimate " + std::to_string(out.omega_cross));
    } else {
        out.omega_cross = out.omega;
    }
    return out;
}

// ---------------------------------------------------------------- reference
double Reference::delta0() const {
    return 2.0 * bp.omega - bp.gamma + bp.omega * bp.omega * PI +
           bp.beta * (1.0 + bp.gamma * PI);
}

std::vector<double> Reference::zeros(double radius) const {
    return scan_zeros([this](double x) { return delta(x); }, -radius, radius, 0.02);
}

std::optional<std::complex<double>> Reference::complex_pair() const {
    auto fc = [this](std::complex<double> z) { return delta_free(z, bp); };
    std::optional<std::complex<double>> best;
    for (int iu = 0; iu < 9; ++iu) {
        double ur = -1.2 + 2.4 * iu / 8.0;
        for (double vr : {0.3, 0.8, 1.4}) {
            std::complex<double> z{ur, vr};
            bool ok = true;
            for (int it = 0; it < 80; ++it) {
                double h = 1e-7 * (1.0 + std::abs(z));
                std::complex<double> fz = fc(z);
                std::complex<double> fp = (fc(z + h) - fc(z - h)) / (2.0 * h);
                if (fp == std::complex<double>{0.0, 0.0}) {
                    ok = false;
                    break;
                }
                std::complex<double> dz = fz / fp;
                z -= dz;
                if (std::abs(dz) < 1e-13 * (1.0 + std::abs(z))) break;
            }
            if (ok && std::abs(fc(z)) < 1e-9 && z.imag() > 1e-4 && std::abs(z.real()) < 1.5 &&
                z.imag() < 2.5) {
                if (!best || std::abs(z) < std::abs(*best)) best = z;
            }
        }
    }
    return best;
}

namespace {

// Order-paired squared mismatch of the innermost reference zeros against the
// innermost data zeros, infeasible classes pushed out by a large penalty.
double gamma_ref_cost(double g, bool data_straddle, const std::vector<double>& dneg,
                      const std::vector<double>& dpos, double alpha, double omega,
                      double B) {
    double beta0 = (B + g) * (1.0 + alpha * alpha);
    Reference ref{{alpha, beta0, g, omega}};
    if (ref.straddle() != data_straddle) return 1e6 + std::abs(g);
    std::vector<double> zs = ref.zeros(7.5);
    std::vector<double> rneg, rpos;
    for (double z : zs) (z < 0 ? rneg : rpos).push_back(z);
    if (rneg.size() < dneg.size() || rpos.size() < dpos.size()) return 1e6 + std::abs(g);
    double c = 0.0;
    for (std::size_t i = 0; i < dneg.size(); ++i) {
        double d = rneg[rneg.size() - dneg.size() + i] - dneg[i];
        c += d * d;
    }
    for (std::size_t i = 0; i < dpos.size(); ++i) {
        double d = rpos[i] - dpos[i];
        c += d * d;
    }
    return c;
}

}  // namespace

double match_gamma_ref(const IndexAssignment& idx, double alpha, double omega,
                       double B) {
    std::vector<double> dneg, dpos;
    for (double z : idx.z) (z < 0 ? dneg : dpos).push_back(z);
    if (dneg.size() > 5) dneg.erase(dneg.begin(), dneg.end() - 5);
    if (dpos.size() > 5) dpos.resize(5);
    auto cost = [&](double g) {
        return gamma_ref_cost(g, idx.straddle(), dneg, dpos, alpha, omega, B);
    };
    const int n = 46;
    double best = 0.0, best_c = std::numeric_limits<double>::infinity();
    int best_i = 0;
    std::vector<double> gs(n);
    for (int i = 0; i < n; ++i) {
        gs[i] = -1.5 + 4.5 * i / (n - 1);
        double c = cost(gs[i]);
        if (c < best_c) {
            best_c = c;
            best = gs[i];
            best_i = i;
        }
    }
    if (best_c >= 1e6) throw FitDiverged("no admissible reference class found");
    double lo = gs[std::max(0, best_i - 1)], hi = gs[std::min(n - 1, best_i + 1)];
    for (int it = 0; it < 40; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (cost(m1) < cost(m2))
            hi = m2;
        else
            lo = m1;
    }
    (void)best;
    return 0.5 * (lo + hi);
}

Reference make_reference(const IndexAssignment& idx, double alpha, double omega,
                         double B) {
    double g = match_gamma_ref(idx, alpha, omega, B);
    double beta0 = (B + g) * (1.0 + alpha * alpha);
    return Reference{{alpha, beta0, g, omega}};
}

std::vector<double> pair_reference_zeros(const std::vector<double>& zeros,
                                         const Reference& ref) {
    double radius = 1.6;
    for (double z : zeros) radius = std::max(radius, std::abs(z) + 1.6);
    std::vector<double> all = ref.zeros(radius);
    std::vector<double> rneg, rpos, zneg, zpos;
    for (double z : all) (z < 0 ? rneg : rpos).push_back(z);
    for (double z : zeros) (z < 0 ? zneg : zpos).push_back(z);
    if (rneg.size() < zneg.size() || rpos.size() < zpos.size())
        throw FitDiverged("reference supplies too few zeros per side");
    std::vector<double> out;
    out.insert(out.end(), rneg.end() - zneg.size(), rneg.end());
    out.insert(out.end(), rpos.begin(), rpos.begin() + zpos.size());
    return out;
}

// ----------------------------------------------------------------- product
CharFn delta_from_product(const std::vector<double>& zeros,
                          const std::vector<double>& ref_zeros, const Reference& ref,
                          const std::optional<PairCorrection>& pair) {
    if (zeros.size() != ref_zeros.size()) throw CountMismatch("zero pairing lengths");
    CharFn fn;
    fn.kind = CharFn::Kind::ProductDelta;
    fn.zeros = zeros;
    fn.eval = [zeros, ref_zeros, ref, pair](double lam) {
        // nudge off an exact reference zero: the ratio has a removable
        // singularity there, but 0/0 does not evaluate
        for (double zr : ref_zeros)
            if (std::abs(zr - lam) < 1e-13 * (1.0 + std::abs(lam))) {
                lam += 3e-13 * (1.0 + std::abs(lam));
                break;
            }
        double val = ref.delta(lam);
        for (std::size_t i = 0; i < zeros.size(); ++i)
            val *= (zeros[i] - lam) / (ref_zeros[i] - lam);
        if (pair) {
            double dn = (lam - pair->u) * (lam - pair->u) + pair->v * pair->v;
            double dd = (lam - pair->u_ref) * (lam - pair->u_ref) + pair->v_ref * pair->v_ref;
            val *= dn / dd;
        }
        return val;
    };
    return fn;
}

CharFn sigma_from_delta(const CharFn& delta, double alpha) {
    if (alpha == 0.0) throw DegenerateParameter("alpha = 0 in sigma quotient");
    CharFn fn;
    fn.kind = CharFn::Kind::OddPartSigma;
    auto d = delta.eval;
    fn.eval = [d, alpha](double lam) {
        if (std::abs(lam) <= 1e-4) return dlam(d, 0.0) / alpha;
        return (d(lam) - d(-lam)) / (2.0 * alpha * lam);
    };
    return fn;
}

std::vector<double> theta_from_sigma(const CharFn& sigma, int N) {
    std::vector<double> th;
    th.reserve(N);
    for (int n = 1; n <= N; ++n) {
        double r = first_root_in(sigma.eval, n - 0.95, n - 0.05, 61);
        if (std::isnan(r)) {
            double lo = std::max(0.02, n - 1.45);
            if (!th.empty()) lo = std::max(lo, th.back() + 0.02);
            r = first_root_in(sigma.eval, lo, n + 0.45, 61);
        }
        if (std::isnan(r))
            throw RootCountMismatch("no sigma zero near n = " + std::to_string(n));
        if (!th.empty() && r <= th.back())
            throw RootCountMismatch("sigma zeros out of order at n = " + std::to_string(n));
        th.push_back(r);
    }
    return th;
}

double recover_beta(const IndexAssignment& idx, const std::vector<double>& theta,
                    double a, double alpha, double omega) {
    // k-weighted gap is exactly linear in 1/m for the model class (m = 2k+1),
    // so extrapolate against m; the limit is unchanged
    std::vector<double> xs, ws;
    for (int k = 1;; ++k) {
        int m = 2 * k + 1;
        if (m > static_cast<int>(theta.size())) break;
        auto mu = idx.at(m);
        if (!mu) continue;
        xs.push_back(m);
        ws.push_back(k * (*mu - theta[m - 1] - a - 0.5));
    }
    if (xs.size() < 4) throw FitDiverged("too few odd-index gaps for the beta limit");
    double L = tail_limit(xs, ws);
    double root2 = 1.0 + alpha * alpha;
    return 2.0 * omega * std::sqrt(root2) - 2.0 * PI * root2 * L;
}

}  // namespace sl
