#include "sl/types.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sl {

double Potential::mean() const {
    if (values.size() < 2) throw MalformedInput("potential needs >= 2 samples");
    double h = PI / double(values.size() - 1);
    double s = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
    return s * h / PI;
}

double Potential::half_integral() const { return 0.5 * mean() * PI; }

Potential Potential::zero(std::size_t n) {
    Potential q;
    q.values.assign(n, 0.0);
    return q;
}

std::vector<double> TwoSidedSpectrum::flatten() const {
    std::vector<double> out;
    out.reserve(mu_neg.size() + mu_pos.size() + 2);
    for (auto it = mu_neg.rbegin(); it != mu_neg.rend(); ++it) out.push_back(*it);
    out.push_back(mu_neg0);
    out.push_back(mu_pos0);
    for (double z : mu_pos) out.push_back(z);
    return out;
}

void TwoSidedSpectrum::validate() const {
    if (mu_pos.size() != mu_neg.size())
        throw CountMismatch("spectrum side lengths differ");
    auto fl = flatten();
    for (std::size_t i = 1; i < fl.size(); ++i)
        if (!(fl[i - 1] < fl[i]))
            throw UnorderedSpectrum("flattened order not strictly increasing at entry " +
                                    std::to_string(i));
}

void SignSequence::validate() const {
    for (int s : sigma)
        if (s < -1 || s > 1)
            throw MalformedInput("sign entries must be in {-1,0,1}");
}

void SpectralData::validate() const {
    spectrum.validate();
    signs.validate();
    auto k = std::ptrdiff_t(spectrum.pairs()), n = std::ptrdiff_t(signs.sigma.size());
    if (k - n > 1 || n - k > 1)
        throw CountMismatch("sign count " + std::to_string(n) +
                            " not within 1 of per-side eigenvalue count " + std::to_string(k));
}

// ---------------------------------------------------------------- JSON I/O
using nlohmann::json;

// 17 significant digits reproduce any double exactly; parsing the printed
// text back into a json number keeps output independent of locale/stream state.
static json num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return json::parse(buf);
}

static json num_array(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

static json parse_or_throw(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw MalformedInput(std::string("not valid JSON for ") + what);
    return j;
}

std::string to_json(const SpectralData& d) {
    json j;
    j["mu_neg0"] = num(d.spectrum.mu_neg0);
    j["mu_pos0"] = num(d.spectrum.mu_pos0);
    j["mu_pos"] = num_array(d.spectrum.mu_pos);
    j["mu_neg"] = num_array(d.spectrum.mu_neg);
    j["sigma"] = d.signs.sigma;
    return j.dump(2) + "\n";
}

SpectralData spectral_data_from_json(const std::string& text) {
    json j = parse_or_throw(text, "spectral data");
    SpectralData d;
    try {
        d.spectrum.mu_neg0 = j.at("mu_neg0").get<double>();
        d.spectrum.mu_pos0 = j.at("mu_pos0").get<double>();
        d.spectrum.mu_pos = j.at("mu_pos").get<std::vector<double>>();
        d.spectrum.mu_neg = j.at("mu_neg").get<std::vector<double>>();
        d.signs.sigma = j.at("sigma").get<std::vector<int>>();
    } catch (const json::exception& e) {
        throw MalformedInput(std::string("spectral data fields: ") + e.what());
    }
    d.validate();
    return d;
}

std::string to_json(const Potential& q) {
    json j;
    j["n_nodes"] = q.values.size();
    j["values"] = num_array(q.values);
    return j.dump(2) + "\n";
}

Potential potential_from_json(const std::string& text) {
    json j = parse_or_throw(text, "potential");
    Potential q;
    try {
        q.values = j.at("values").get<std::vector<double>>();
        if (j.contains("n_nodes") && j.at("n_nodes").get<std::size_t>() != q.values.size())
            throw CountMismatch("n_nodes disagrees with values length");
    } catch (const json::exception& e) {
        throw MalformedInput(std::string("potential fields: ") + e.what());
    }
    if (q.values.size() < 2) throw MalformedInput("potential needs >= 2 samples");
    return q;
}

std::string to_json(const BoundaryParams& bp) {
    json j;
    j["alpha"] = num(bp.alpha);
    j["beta"] = num(bp.beta);
    j["gamma"] = num(bp.gamma);
    j["omega"] = num(bp.omega);
    return j.dump(2) + "\n";
}

BoundaryParams boundary_from_json(const std::string& text) {
    json j = parse_or_throw(text, "boundary parameters");
    BoundaryParams bp;
    try {
        bp.alpha = j.at("alpha").get<double>();
        bp.beta = j.at("beta").get<double>();
        bp.gamma = j.at("gamma").get<double>();
        bp.omega = j.at("omega").get<double>();
    } catch (const json::exception& e) {
        throw MalformedInput(std::string("boundary fields: ") + e.what());
    }
    bp.validate();
    return bp;
}

std::string to_json(const AuxSpectra& aux) {
    json j;
    j["theta"] = num_array(aux.theta);
    j["lambda_d"] = num_array(aux.lambda_d);
    j["nu"] = num_array(aux.nu);
    return j.dump(2) + "\n";
}

AuxSpectra aux_spectra_from_json(const std::string& text) {
    json j = parse_or_throw(text, "auxiliary spectra");
    AuxSpectra aux;
    try {
        aux.theta = j.at("theta").get<std::vector<double>>();
        aux.lambda_d = j.at("lambda_d").get<std::vector<double>>();
        aux.nu = j.at("nu").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw MalformedInput(std::string("aux spectra fields: ") + e.what());
    }
    return aux;
}

std::string to_json(const AdmissibilityReport& r) {
    json j;
    j["cond1"] = {{"pass", r.cond1.pass},
                  {"fit", {{"a", num(r.cond1.fit.a)}, {"A", num(r.cond1.fit.A)},
                           {"B", num(r.cond1.fit.B)}, {"rms", num(r.cond1.fit.rms)}}},
                  {"reason", r.cond1.reason}};
    json c2 = {{"pass", r.cond2.pass}, {"reason", r.cond2.reason}};
    if (r.cond2.first_violation >= 0) c2["first_violation"] = r.cond2.first_violation;
    j["cond2"] = c2;
    j["cond3"] = {{"pass", r.cond3.pass}, {"b_values", num_array(r.cond3.b_values)},
                  {"reason", r.cond3.reason}};
    json c4 = {{"pass", r.cond4.pass}, {"reason", r.cond4.reason}};
    if (r.cond4.N0 >= 0) c4["N0"] = r.cond4.N0;
    j["cond4"] = c4;
    j["delta0_negative"] = r.delta0_negative;
    j["delta0_applicable"] = r.delta0_applicable;
    j["verdict"] = r.verdict;
    return j.dump(2) + "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << text;
}

std::string csv_potential(const std::vector<double>& x, const std::vector<double>& q,
                          const std::vector<double>* q_true) {
    std::ostringstream ss;
    ss << (q_true ? "x,q_rec,q_true\n" : "x,q_rec\n");
    char buf[96];
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (q_true)
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x[i], q[i], (*q_true)[i]);
        else
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x[i], q[i]);
        ss << buf;
    }
    return ss.str();
}

std::string csv_function(const std::string& name, const std::vector<double>& x,
                         const std::vector<double>& y) {
    std::ostringstream ss;
    ss << "lambda," << name << "\n";
    char buf[64];
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x[i], y[i]);
        ss << buf;
    }
    return ss.str();
}

}  // namespace sl
