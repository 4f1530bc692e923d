#include "sl/gl.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "sl/forward.hpp"
#include "sl/ode.hpp"

namespace sl {

NormingConstants norming_constants(const std::vector<double>& lambda_d,
                                   const CharFn& s_pi, const CharFn& s_prime_pi) {
    NormingConstants nc;
    nc.alpha.reserve(lambda_d.size());
    for (std::size_t i = 0; i < lambda_d.size(); ++i) {
        double lam = lambda_d[i];
        double a = dlam(s_pi.eval, lam) / (2.0 * lam) * s_prime_pi(lam);
        if (!(a > 0.0))
            throw NonpositiveNorming("alpha_" + std::to_string(i + 1) + " = " +
                                     std::to_string(a) + " at lambda = " + std::to_string(lam));
        nc.alpha.push_back(a);
    }
    return nc;
}

double GLKernel::operator()(double x, double t) const {
    double tot = 0.0;
    for (std::size_t n = 0; n < lam.size(); ++n)
        tot += coef[n] * std::sin(lam[n] * x) * std::sin(lam[n] * t) -
               (2.0 / PI) * std::sin((n + 1.0) * x) * std::sin((n + 1.0) * t);
    return tot;
}

double GLKernel::tail_estimate(double x, double t) const {
    double tot = 0.0;
    for (std::size_t n = lam.size() - lam.size() / 4; n < lam.size(); ++n)
        tot += coef[n] * std::sin(lam[n] * x) * std::sin(lam[n] * t) -
               (2.0 / PI) * std::sin((n + 1.0) * x) * std::sin((n + 1.0) * t);
    return std::abs(tot);
}

GLKernel gl_kernel(const std::vector<double>& lambda_d, const NormingConstants& nc) {
    if (lambda_d.size() != nc.alpha.size()) throw CountMismatch("gl_kernel list lengths");
    GLKernel F;
    F.lam = lambda_d;
    F.coef.reserve(lambda_d.size());
    for (std::size_t n = 0; n < lambda_d.size(); ++n)
        F.coef.push_back(1.0 / (lambda_d[n] * lambda_d[n] * nc.alpha[n]));
    return F;
}

GLSolution solve_gl(const GLKernel& F, int grid_n) {
    if (grid_n < 32) throw MalformedInput("solve_gl needs a grid of at least 32 points");
    GLSolution out;
    out.x.resize(grid_n);
    const double h = PI / (grid_n - 1);
    for (int i = 0; i < grid_n; ++i) out.x[i] = PI * i / (grid_n - 1);

    // dense kernel matrix from mode tables; the per-x systems share it
    const int M = static_cast<int>(F.lam.size());
    Eigen::MatrixXd Fm = Eigen::MatrixXd::Zero(grid_n, grid_n);
    if (M > 0) {
        Eigen::MatrixXd SX(grid_n, M), S0(grid_n, M);
        for (int i = 0; i < grid_n; ++i)
            for (int n = 0; n < M; ++n) {
                SX(i, n) = std::sin(F.lam[n] * out.x[i]);
                S0(i, n) = std::sin((n + 1.0) * out.x[i]);
            }
        Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(F.coef.data(), M);
        Fm = SX * c.asDiagonal() * SX.transpose() - (2.0 / PI) * S0 * S0.transpose();
    }

    out.kernel_diag.assign(grid_n, 0.0);
    for (int i = 0; i < grid_n; ++i) {
        int m = i + 1;
        Eigen::VectorXd w = Eigen::VectorXd::Constant(m, h);
        w(0) = 0.5 * h;
        w(m - 1) = 0.5 * h;
        Eigen::MatrixXd A =
            Eigen::MatrixXd::Identity(m, m) + Fm.topLeftCorner(m, m) * w.asDiagonal();
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
        if (lu.rcond() < 1e-12)
            throw SingularSystem("Nystrom matrix singular at x = " + std::to_string(out.x[i]));
        Eigen::VectorXd sol = lu.solve(-Fm.block(0, i, m, 1));
        out.kernel_diag[i] = sol(m - 1);
    }

    // q = 2 dK/dx: 4th-order centered inside, 2nd-order at the edges
    const auto& K = out.kernel_diag;
    out.q_rec.values.assign(grid_n, 0.0);
    for (int i = 0; i < grid_n; ++i) {
        double d;
        if (i >= 2 && i <= grid_n - 3)
            d = (K[i - 2] - 8.0 * K[i - 1] + 8.0 * K[i + 1] - K[i + 2]) / (12.0 * h);
        else if (i == 0)
            d = (-3.0 * K[0] + 4.0 * K[1] - K[2]) / (2.0 * h);
        else if (i == 1)
            d = (K[2] - K[0]) / (2.0 * h);
        else if (i == grid_n - 2)
            d = (K[grid_n - 1] - K[grid_n - 3]) / (2.0 * h);
        else
            d = (3.0 * K[grid_n - 1] - 4.0 * K[grid_n - 2] + K[grid_n - 3]) / (2.0 * h);
        out.q_rec.values[i] = 2.0 * d;
    }
    return out;
}

ModeCompletion complete_modes(const std::vector<double>& lambda_d,
                              const std::vector<double>& alpha, double qbar, int M) {
    if (lambda_d.size() != alpha.size()) throw CountMismatch("complete_modes list lengths");
    const int m = static_cast<int>(lambda_d.size());
    if (m < 4) throw CountMismatch("mode completion needs at least 4 data modes");
    // tail means of the n^2-weighted deviations from the free model
    double cl = 0.0, ca = 0.0;
    int cnt = 0;
    for (int n = std::max(3, m / 2); n <= m; ++n) {
        double nn = n;
        cl += (lambda_d[n - 1] * lambda_d[n - 1] - nn * nn - qbar) * nn * nn;
        ca += (2.0 * nn * nn * alpha[n - 1] / PI - 1.0) * nn * nn;
        ++cnt;
    }
    cl /= cnt;
    ca /= cnt;
    ModeCompletion out{lambda_d, alpha, cl, ca};
    out.lam.reserve(M);
    out.alpha.reserve(M);
    for (int n = m + 1; n <= M; ++n) {
        double nn = n;
        out.lam.push_back(std::sqrt(nn * nn + qbar + cl / (nn * nn)));
        out.alpha.push_back(PI / (2.0 * nn * nn) * (1.0 + ca / (nn * nn)));
    }
    return out;
}

PotentialRecovery recover_potential(const AuxSpectra& aux, const CharFn& s_pi,
                                    const CharFn& s_prime_pi, double qbar,
                                    const GLOptions& opt) {
    const int avail = static_cast<int>(aux.lambda_d.size());
    int m = opt.trusted > 0 ? opt.trusted : (avail + 1) / 4;
    m = std::min(m, avail);
    if (m < 4) throw CountMismatch("potential recovery needs at least 4 trusted modes");

    // the two ladders must alternate for the data to determine a potential
    for (int i = 0; i < m; ++i) {
        bool ok = i < static_cast<int>(aux.nu.size()) &&
                  aux.nu[i] * aux.nu[i] < aux.lambda_d[i] * aux.lambda_d[i];
        if (ok && i + 1 < static_cast<int>(aux.nu.size()))
            ok = aux.lambda_d[i] * aux.lambda_d[i] < aux.nu[i + 1] * aux.nu[i + 1];
        if (!ok)
            throw UnorderedSpectrum("lambda/nu ladders do not alternate at n = " +
                                    std::to_string(i + 1));
    }

    std::vector<double> lam(aux.lambda_d.begin(), aux.lambda_d.begin() + m);
    NormingConstants nc = norming_constants(lam, s_pi, s_prime_pi);

    PotentialRecovery R;
    R.modes = complete_modes(lam, nc.alpha, qbar, opt.modes);

    // solve for q - qbar: its Dirichlet ladder is sqrt(lam^2 - qbar), the
    // norming constants are unchanged to leading order
    std::vector<double> shifted(R.modes.lam.size());
    for (std::size_t i = 0; i < shifted.size(); ++i) {
        double LL = R.modes.lam[i] * R.modes.lam[i] - qbar;
        if (LL <= 0.0)
            throw DegenerateParameter("mode " + std::to_string(i + 1) +
                                      " falls below the mean shift");
        shifted[i] = std::sqrt(LL);
    }
    R.gl = solve_gl(gl_kernel(shifted, NormingConstants{R.modes.alpha}), opt.grid_n);
    R.q = R.gl.q_rec;
    for (double& v : R.q.values) v += qbar;
    return R;
}

// ---------------------------------------------------------------- refinement
namespace {

// Dirichlet and Dirichlet-Neumann ladders of a candidate; both depend on q
// alone, so the boundary parameters are immaterial here
std::vector<double> spectra_of(const Potential& q, int m_lam, int m_nu) {
    Problem p(q, BoundaryParams{1.0, 0.0, 0.0, 1.0});
    auto l = dirichlet_spectrum(p, std::max(4, m_lam));
    auto v = dn_spectrum(p, std::max(4, m_nu));
    std::vector<double> out(l.begin(), l.begin() + m_lam);
    out.insert(out.end(), v.begin(), v.begin() + m_nu);
    return out;
}

double rms(const std::vector<double>& got, const std::vector<double>& want) {
    double s = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i)
        s += (got[i] - want[i]) * (got[i] - want[i]);
    return std::sqrt(s / want.size());
}

}  // namespace

RefineResult refine_q(const Potential& q0, const std::vector<double>& target_lambda,
                      const std::vector<double>& target_nu, int iters) {
    const int m_lam = std::min<int>(target_lambda.size(), 24);
    const int m_nu = std::min<int>(target_nu.size(), 24);
    if (m_lam < 4) throw CountMismatch("refinement needs at least 4 lambda targets");
    if (q0.values.size() < 16) throw CountMismatch("refinement grid too coarse");
    std::vector<double> want(target_lambda.begin(), target_lambda.begin() + m_lam);
    want.insert(want.end(), target_nu.begin(), target_nu.begin() + m_nu);

    const int nb = 12;            // cosine basis
    const double fd = 1e-3;       // Jacobian step
    const double conv = 1e-10;    // residual considered matched
    const double margin = 1e-6;   // smallest relative decrease worth a step

    RefineResult R;
    R.q = q0;
    const std::size_t g = q0.values.size();
    std::vector<double> cur = spectra_of(R.q, m_lam, m_nu);
    double r = rms(cur, want);
    R.residuals.push_back(r);

    for (int it = 0; it < iters && r > conv; ++it) {
        Eigen::MatrixXd J(want.size(), nb);
        for (int j = 0; j < nb; ++j) {
            Potential qp = R.q;
            for (std::size_t i = 0; i < g; ++i)
                qp.values[i] += fd * std::cos(j * PI * i / double(g - 1));
            std::vector<double> sp = spectra_of(qp, m_lam, m_nu);
            for (std::size_t i = 0; i < want.size(); ++i) J(i, j) = (sp[i] - cur[i]) / fd;
        }
        Eigen::VectorXd res(want.size());
        for (std::size_t i = 0; i < want.size(); ++i) res(i) = want[i] - cur[i];
        Eigen::MatrixXd JtJ = J.transpose() * J;
        Eigen::VectorXd Jtr = J.transpose() * res;
        double scale = JtJ.trace() / nb;

        double best_r = r;
        Potential best_q;
        std::vector<double> best_sp;
        for (double tau : {0.0, 1e-8, 1e-6, 1e-4, 1e-2}) {
            Eigen::MatrixXd Areg =
                JtJ + tau * scale * Eigen::MatrixXd::Identity(nb, nb);
            Eigen::VectorXd c = Areg.ldlt().solve(Jtr);
            if (!c.allFinite()) continue;
            Potential qc = R.q;
            for (std::size_t i = 0; i < g; ++i) {
                double xi = PI * i / double(g - 1);
                for (int j = 0; j < nb; ++j) qc.values[i] += c(j) * std::cos(j * xi);
            }
            try {
                std::vector<double> sp = spectra_of(qc, m_lam, m_nu);
                double rc = rms(sp, want);
                if (rc < best_r) {
                    best_r = rc;
                    best_q = std::move(qc);
                    best_sp = std::move(sp);
                }
            } catch (const Error&) {
                // candidate drove the spectra out of range; discard it
            }
        }
        if (best_r <= r * (1.0 - margin)) {
            R.q = std::move(best_q);
            cur = std::move(best_sp);
            r = best_r;
            R.residuals.push_back(r);
            ++R.accepted;
        } else {
            R.stalled = true;
            break;
        }
    }
    if (R.stalled && R.accepted == 0 && r > conv)
        throw NoProgress("refinement cannot reduce the spectral residual (rms " +
                         std::to_string(r) + ")");
    return R;
}

}  // namespace sl
