#pragma once
// Core domain types for the coupled-boundary Sturm-Liouville problem
//   -y'' + q(x) y = lam^2 y on [0, pi]
//   y'(0) + (alpha*lam + beta) y(0) + omega y(pi) = 0
//   y'(pi) + gamma y(pi) - omega y(0) = 0,   alpha != 0, omega != 0.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sl {

constexpr double PI = 3.14159265358979323846;

// ------------------------------------------------------------------ errors
// Every failure mode has a name and a process exit code:
//   2 = malformed/out-of-class input, 3 = inadmissible data, 4 = numerical.
struct Error : std::runtime_error {
    int exit_code;
    Error(const std::string& name, const std::string& msg, int code)
        : std::runtime_error(name + ": " + msg), exit_code(code) {}
};

#define SL_ERROR(Name, code)                                              \
    struct Name : Error {                                                 \
        explicit Name(const std::string& msg) : Error(#Name, msg, code) {} \
    }

SL_ERROR(IoError, 2);
SL_ERROR(MalformedInput, 2);
SL_ERROR(DegenerateParameter, 2);  // alpha = 0 or omega = 0
SL_ERROR(UnorderedSpectrum, 2);
SL_ERROR(CountMismatch, 2);
SL_ERROR(StepUnderflow, 4);
SL_ERROR(RootCountMismatch, 4);
SL_ERROR(FitDiverged, 3);        // tail fit outside the admissible class
SL_ERROR(InconsistentOmega, 3);  // two omega estimates disagree
SL_ERROR(RadicandNegative, 3);   // v+^2 - 4 omega^2 < 0 where sigma_n != 0
SL_ERROR(NonpositiveNorming, 4);
SL_ERROR(SingularSystem, 4);
SL_ERROR(NoProgress, 4);

#undef SL_ERROR

struct BoundaryParams {
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 0.0;
    double omega = 1.0;

    void validate() const {
        if (alpha == 0.0) throw DegenerateParameter("alpha must be nonzero");
        if (omega == 0.0) throw DegenerateParameter("omega must be nonzero");
    }
};

// Potential sampled on a uniform grid over [0, pi].
struct Potential {
    std::vector<double> values;   // values[i] = q(i*pi/(n-1)), n = values.size() >= 2

    double mean() const;          // (1/pi) * trapezoid integral
    double half_integral() const; // Q = (1/2) * integral of q
    static Potential zero(std::size_t n = 201);
};

// Two-sided eigenvalue list of the characteristic function delta.
// Storage convention: the two zeros smallest in |.| form (mu_neg0, mu_pos0);
// mu_pos holds mu_1 < mu_2 < ... ascending, mu_neg holds mu_-1 > mu_-2 > ...
// descending (each moving away from the origin).
struct TwoSidedSpectrum {
    double mu_neg0 = 0.0;
    double mu_pos0 = 0.0;
    std::vector<double> mu_pos;
    std::vector<double> mu_neg;

    std::size_t pairs() const { return mu_pos.size(); }
    // All zeros ascending: mu_neg reversed, mu_neg0, mu_pos0, mu_pos.
    std::vector<double> flatten() const;
    void validate() const;
};

// Sign sequence sigma_n in {-1, 0, +1} attached to the sigma(pi, lam) zeros.
// Stored for n >= 1 only; sigma(pi, .) is even, so sigma_{-n} = sigma_n.
struct SignSequence {
    std::vector<int> sigma;
    void validate() const;
};

// Bundle written by `forward` and consumed by `invert` / `check`.
struct SpectralData {
    TwoSidedSpectrum spectrum;
    SignSequence signs;

    void validate() const;
};

// Zeros of the three auxiliary functions, positive half-axis only
// (all three are even in lam).
struct AuxSpectra {
    std::vector<double> theta;     // zeros of sigma(pi, .) = s' + gamma s
    std::vector<double> lambda_d;  // zeros of s(pi, .)
    std::vector<double> nu;        // zeros of s'(pi, .)
};

// Tail fit mu_k ~ k + a + ((-1)^{k+1} A - B)/(k pi).
struct AsymptoticFit {
    double a = 0.0;                 // fractional offset, |a| < 1/2 when admissible
    double A = 0.0;                 // alternating 1/k coefficient
    double B = 0.0;                 // smooth 1/k coefficient
    double Q_est = 0.0;             // (1/2) integral of q implied by companion fits
    std::vector<double> residuals;  // per-index remainders of the fit
    double rms = 0.0;               // weighted RMS of residuals
};

struct AdmissibilityReport {
    struct Cond1 { bool pass = false; AsymptoticFit fit; std::string reason; };
    struct Cond2 { bool pass = false; int first_violation = -1; std::string reason; };
    struct Cond3 { bool pass = false; std::vector<double> b_values; std::string reason; };
    struct Cond4 { bool pass = false; int N0 = -1; std::string reason; };
    Cond1 cond1;
    Cond2 cond2;
    Cond3 cond3;
    Cond4 cond4;
    bool delta0_negative = false;      // diagnostic: delta(0) < 0
    bool delta0_applicable = false;    // only with a surplus real pair present
    bool verdict = false;
};

// Recovered boundary parameters plus bookkeeping from the inverse pipeline.
struct RecoveredParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double omega = 0.0;
    double omega_cross = 0.0;  // independent omega estimate (consistency check)
    double Q = 0.0;            // (1/2) integral of q estimate
    AsymptoticFit fit;
};

// ---------------------------------------------------------------- JSON I/O
// Serialization is deterministic: same data -> byte-identical text.
// File schemas:
//   potential      {"n_nodes": int, "values": [real...]}
//   boundary       {"alpha": real, "beta": real, "gamma": real, "omega": real}
//   spectral data  {"mu_neg0", "mu_pos0", "mu_pos": [...], "mu_neg": [...], "sigma": [...]}
std::string to_json(const SpectralData& d);
SpectralData spectral_data_from_json(const std::string& text);

std::string to_json(const Potential& q);
Potential potential_from_json(const std::string& text);

std::string to_json(const BoundaryParams& bp);
BoundaryParams boundary_from_json(const std::string& text);

std::string to_json(const AuxSpectra& aux);
AuxSpectra aux_spectra_from_json(const std::string& text);

std::string to_json(const AdmissibilityReport& r);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

// CSV with 17 significant digits (shortest round-trip not guaranteed by
// stream defaults, so the precision is pinned).
std::string csv_potential(const std::vector<double>& x, const std::vector<double>& q,
                          const std::vector<double>* q_true = nullptr);
std::string csv_function(const std::string& name, const std::vector<double>& x,
                         const std::vector<double>& y);

}  // namespace sl
