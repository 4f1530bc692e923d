#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sl/types.hpp"

using namespace sl;

static SpectralData sample_data() {
    SpectralData d;
    d.spectrum.mu_neg0 = -0.51234567890123456;
    d.spectrum.mu_pos0 = 1.0 / 3.0;
    d.spectrum.mu_pos = {1.25, 2.0 + 1e-13, 3.1};
    d.spectrum.mu_neg = {-1.5, -2.25, -3.75};
    d.signs.sigma = {0, 1, -1};
    return d;
}

TEST_CASE("spectral data round-trips bit-exactly and serializes deterministically") {
    SpectralData d = sample_data();
    std::string j1 = to_json(d);
    SpectralData e = spectral_data_from_json(j1);
    CHECK(e.spectrum.mu_neg0 == d.spectrum.mu_neg0);
    CHECK(e.spectrum.mu_pos0 == d.spectrum.mu_pos0);
    CHECK(e.spectrum.mu_pos == d.spectrum.mu_pos);
    CHECK(e.spectrum.mu_neg == d.spectrum.mu_neg);
    CHECK(e.signs.sigma == d.signs.sigma);
    CHECK(to_json(e) == j1);  // byte-identical after a round trip
    CHECK(j1.back() == '\n');
    for (const char* key : {"mu_neg0", "mu_pos0", "mu_pos", "mu_neg", "sigma"})
        CHECK(j1.find(std::string("\"") + key + "\"") != std::string::npos);
}

TEST_CASE("validation rejects malformed bundles with typed errors") {
    SpectralData d = sample_data();
    d.spectrum.mu_pos[1] = 0.1;  // breaks ascending order
    CHECK_THROWS_AS(d.validate(), UnorderedSpectrum);

    d = sample_data();
    d.spectrum.mu_neg.pop_back();  // unequal side lengths
    CHECK_THROWS_AS(d.validate(), CountMismatch);

    d = sample_data();
    d.signs.sigma = {0};  // 1 sign for 3 per-side eigenvalues
    CHECK_THROWS_AS(d.validate(), CountMismatch);

    d = sample_data();
    d.signs.sigma[0] = 2;
    CHECK_THROWS_AS(d.validate(), MalformedInput);

    CHECK_THROWS_AS(BoundaryParams({0.0, 0.0, 0.0, 1.0}).validate(), DegenerateParameter);
    CHECK_THROWS_AS(BoundaryParams({1.0, 0.0, 0.0, 0.0}).validate(), DegenerateParameter);
    CHECK_THROWS_AS(spectral_data_from_json("{ not json"), MalformedInput);
    CHECK_THROWS_AS(spectral_data_from_json("{\"mu_neg0\": 0.0}"), MalformedInput);
}

TEST_CASE("error types carry CLI exit codes") {
    CHECK(IoError("x").exit_code == 2);
    CHECK(DegenerateParameter("x").exit_code == 2);
    CHECK(RadicandNegative("x").exit_code == 3);
    CHECK(InconsistentOmega("x").exit_code == 3);
    CHECK(RootCountMismatch("x").exit_code == 4);
    CHECK(SingularSystem("x").exit_code == 4);
    CHECK(std::string(DegenerateParameter("alpha must be nonzero").what()) ==
          "DegenerateParameter: alpha must be nonzero");
}

TEST_CASE("flatten interleaves the two sides in ascending order") {
    SpectralData d = sample_data();
    auto fl = d.spectrum.flatten();
    REQUIRE(fl.size() == 8);
    CHECK(fl.front() == -3.75);
    CHECK(fl[3] == d.spectrum.mu_neg0);
    CHECK(fl[4] == d.spectrum.mu_pos0);
    CHECK(fl.back() == 3.1);
    for (std::size_t i = 1; i < fl.size(); ++i) CHECK(fl[i - 1] < fl[i]);
}

TEST_CASE("potential JSON carries n_nodes and round-trips every sample") {
    Potential q;
    q.values = {0.0, 1.0 / 7.0, -2.5e-17, 3.141592653589793, 1e300};
    std::string j = to_json(q);
    CHECK(j.find("\"n_nodes\": 5") != std::string::npos);
    Potential r = potential_from_json(j);
    CHECK(r.values == q.values);
    CHECK(to_json(r) == j);
    CHECK_THROWS_AS(
        potential_from_json("{\"n_nodes\": 4, \"values\": [0.0, 1.0]}"), CountMismatch);
    CHECK_THROWS_AS(potential_from_json("{\"values\": [0.0]}"), MalformedInput);
}

TEST_CASE("boundary JSON round-trips and validates on read") {
    BoundaryParams bp{1.0, 0.5, 0.3, 0.7};
    std::string j = to_json(bp);
    BoundaryParams r = boundary_from_json(j);
    CHECK(r.alpha == bp.alpha);
    CHECK(r.beta == bp.beta);
    CHECK(r.gamma == bp.gamma);
    CHECK(r.omega == bp.omega);
    CHECK(to_json(r) == j);
    CHECK_THROWS_AS(
        boundary_from_json("{\"alpha\": 0, \"beta\": 0, \"gamma\": 0, \"omega\": 1}"),
        DegenerateParameter);
}

TEST_CASE("aux spectra JSON round-trips") {
    AuxSpectra aux;
    aux.theta = {0.5, 1.5, 2.5};
    aux.lambda_d = {1.0, 2.0};
    aux.nu = {0.5, 1.5};
    AuxSpectra r = aux_spectra_from_json(to_json(aux));
    CHECK(r.theta == aux.theta);
    CHECK(r.lambda_d == aux.lambda_d);
    CHECK(r.nu == aux.nu);
}

TEST_CASE("csv uses 17 significant digits and an optional truth column") {
    std::vector<double> x = {0.0, 0.5}, q = {1.0 / 3.0, 2.0}, t = {0.3, 2.0};
    std::string two = csv_potential(x, q);
    CHECK(two.substr(0, 8) == "x,q_rec\n");
    CHECK(two.find("0.33333333333333331") != std::string::npos);
    std::string three = csv_potential(x, q, &t);
    CHECK(three.substr(0, 15) == "x,q_rec,q_true\n");
    CHECK(three.find(",0.29999999999999999\n") != std::string::npos);
    std::string f = csv_function("delta", {1.5}, {-2.0 / 3.0});
    CHECK(f.substr(0, 13) == "lambda,delta\n");
    CHECK(f.find("1.5,-0.66666666666666663\n") != std::string::npos);
}

TEST_CASE("admissibility report serializes all four conditions") {
    AdmissibilityReport r;
    r.cond1.pass = true;
    r.cond1.fit = {.a = -0.25, .A = 0.9, .B = 0.1, .rms = 1e-8};
    r.cond2.pass = true;
    r.cond3.pass = true;
    r.cond3.b_values = {0.0, 2.0 / 3.0};
    r.cond4.pass = false;
    r.cond4.N0 = 3;
    r.cond4.reason = "sign/magnitude mismatch at n = 2";
    r.verdict = false;
    std::string j = to_json(r);
    CHECK(j.find("\"verdict\": false") != std::string::npos);
    CHECK(j.find("\"N0\": 3") != std::string::npos);
    CHECK(j.find("0.6666666666666666") != std::string::npos);
    CHECK(to_json(r) == j);
}
