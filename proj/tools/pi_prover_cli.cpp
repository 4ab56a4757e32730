// pi-prover: derives the exact constants (z, b, a) of level-1 Ramanujan-type
// series from Weber modular polynomial data files, certifies every step with
// ball arithmetic, and verifies the resulting series against an independent
// pi oracle.

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "piprover/modeq.hpp"
#include "piprover/prover.hpp"
#include "piprover/series.hpp"

using nlohmann::json;
using namespace pipr;

namespace {

constexpr const char* kVersion = "1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitCertifiedFailure = 2;
constexpr int kExitInconclusive = 3;
constexpr int kExitUsage = 64;

std::string data_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("PI_PROVER_DATA")) return env;
    return "data";
}

std::string poly_path(const std::string& dir, int d) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "/weber_d%02d.poly", d);
    return dir + buf;
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[65536];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
        EVP_DigestUpdate(ctx, buf, static_cast<size_t>(in.gcount()));
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

long radius_log10(const ComplexBall& x) {
    if (mpfr_zero_p(x.rad())) return -999999;
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_log10(t, x.rad(), MPFR_RNDU);
    long e = mpfr_get_si(t, MPFR_RNDU);
    mpfr_clear(t);
    return e;
}

json ball_json(const ComplexBall& x, long digits = 40) {
    return json{{"enclosure", x.to_string(digits)}, {"radius_log10", radius_log10(x)}};
}

json surd_json(const Surd& s) {
    return json{{"coefficient", s.coefficient.get_str()}, {"radicand", s.radicand.get_str()}};
}

Rational parse_rational(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::runtime_error("bad rational: " + s);
    r.canonicalize();
    return r;
}

json proof_json(const ProofResult& r, const PolyFile& file, const std::string& hash) {
    json j;
    j["tool"] = "pi-prover";
    j["version"] = kVersion;
    j["degree"] = r.d;
    j["form"] = r.form == WMapForm::exp12 ? "mod12" : "raw24";
    j["polynomial_file"] = {{"path", file.path}, {"sha256", hash}};
    j["precision_digits"] = r.digits;
    j["point"] = {{"u0", ball_json(r.chain.u0)}, {"v0", ball_json(r.chain.v0)}};
    j["residuals"] = {{"w_map", ball_json(r.check.w_residual)},
                      {"polynomial", ball_json(r.check.p_residual)},
                      {"certified", r.check.certified()}};
    j["chain"] = {{"vp", ball_json(r.chain.vp)},       {"vpp", ball_json(r.chain.vpp)},
                  {"alpha0", ball_json(r.chain.alpha0)}, {"alphap", ball_json(r.chain.alphap)},
                  {"alphapp", ball_json(r.chain.alphapp)}, {"beta0", ball_json(r.chain.beta0)},
                  {"betap", ball_json(r.chain.betap)},   {"betapp", ball_json(r.chain.betapp)},
                  {"m0", ball_json(r.chain.m0)}};
    j["raw"] = {{"z", ball_json(r.raw.z)},
                {"a", ball_json(r.raw.a)},
                {"b", ball_json(r.raw.b)},
                {"m_prime_over_alpha_prime", ball_json(r.raw.m_prime_over_alpha_prime)}};
    j["params"] = {{"s", r.params.s},
                   {"level", r.params.level},
                   {"z", r.params.z.get_str()},
                   {"a", surd_json(r.params.a)},
                   {"b", surd_json(r.params.b)}};
    j["checks"] = {{"beta_identity", r.beta_identity_ok},
                   {"m0_modulus", r.m0_modulus_ok},
                   {"j_invariant_bridge", r.heegner_ok},
                   {"stable_under_doubling", r.stable_under_doubling}};
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

void print_proof_text(const ProofResult& r) {
    std::printf("degree %d (w-map exponent %d), %ld digits\n", r.d, static_cast<int>(r.form),
                r.digits);
    std::printf("  residuals certified zero : %s\n", r.check.certified() ? "yes" : "NO");
    std::printf("  z  = %s\n", r.params.z.get_str().c_str());
    std::printf("  a  = %s\n", r.params.a.to_string().c_str());
    std::printf("  b  = %s\n", r.params.b.to_string().c_str());
    std::printf("  m0 = %s\n", r.chain.m0.to_string(25).c_str());
    std::printf("  beta identity            : %s\n", r.beta_identity_ok ? "pass" : "FAIL");
    std::printf("  |m0|^2 = 1/d             : %s\n", r.m0_modulus_ok ? "pass" : "FAIL");
    std::printf("  J-invariant bridge       : %s\n", r.heegner_ok ? "pass" : "FAIL");
    std::printf("  stable at doubled digits : %s\n", r.stable_under_doubling ? "pass" : "FAIL");
    std::printf("  wall time                : %.2f s\n", r.wall_seconds);
}

bool proof_passed(const ProofResult& r) {
    return r.check.certified() && r.beta_identity_ok && r.m0_modulus_ok && r.heegner_ok &&
           r.stable_under_doubling;
}

int cmd_prove(int degree, long precision, bool as_json, const std::string& poly_file,
              const std::string& dir) {
    std::string path = poly_file.empty() ? poly_path(dir, degree) : poly_file;
    PolyFile file = load_poly_file(path);
    if (file.degree != degree) {
        std::cerr << "polynomial file declares degree " << file.degree << ", expected " << degree
                  << "\n";
        return kExitCertifiedFailure;
    }
    ProofResult r = prove_degree(file, Precision(precision));
    if (as_json)
        std::cout << proof_json(r, file, sha256_file(path)).dump(2) << "\n";
    else
        print_proof_text(r);
    return proof_passed(r) ? kExitOk : kExitCertifiedFailure;
}

int cmd_verify(int degree, long digits, const std::string& params_path, bool as_json,
               const std::string& dir) {
    SeriesParams params;
    if (!params_path.empty()) {
        std::ifstream in(params_path);
        if (!in) throw std::runtime_error("cannot open " + params_path);
        json j = json::parse(in);
        params.s = j.value("s", 6);
        params.level = j.value("level", 1);
        params.d = j.value("d", 0);
        auto parse_radicand = [](const json& r) {
            return r.is_string() ? Integer(r.get<std::string>()) : Integer(r.get<long>());
        };
        params.z = parse_rational(j.at("z").get<std::string>());
        params.a = Surd{parse_rational(j.at("a").at("coefficient").get<std::string>()),
                        parse_radicand(j.at("a").at("radicand"))};
        params.b = Surd{parse_rational(j.at("b").at("coefficient").get<std::string>()),
                        parse_radicand(j.at("b").at("radicand"))};
    } else {
        PolyFile file = load_poly_file(poly_path(dir, degree));
        ProofResult r = prove_degree(file, Precision(200));
        if (!proof_passed(r)) {
            std::cerr << "derivation for degree " << degree << " did not certify\n";
            return kExitCertifiedFailure;
        }
        params = r.params;
    }
    VerificationReport v = verify_against_pi(params, digits);
    if (as_json) {
        json j = {{"tool", "pi-prover"},
                  {"version", kVersion},
                  {"degree", params.d},
                  {"z", params.z.get_str()},
                  {"digits_requested", v.digits_requested},
                  {"digits_matched", v.digits_matched},
                  {"terms_used", v.terms_used},
                  {"residual", ball_json(v.residual, 10)},
                  {"elapsed_seconds", v.elapsed}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("series z = %s: %ld of %ld digits of 1/pi matched with %ld terms (%.2f s)\n",
                    params.z.get_str().c_str(), v.digits_matched, v.digits_requested,
                    v.terms_used, v.elapsed);
    }
    return v.digits_matched >= v.digits_requested ? kExitOk : kExitCertifiedFailure;
}

int cmd_validate(int degree, const std::string& tau, long precision, bool as_json,
                 const std::string& dir) {
    PolyFile file = load_poly_file(poly_path(dir, degree));
    Rational t = parse_rational(tau);
    ValidationReport rep = validate_modular_polynomial(file.poly, degree, t, Precision(precision));
    if (as_json) {
        json j = {{"tool", "pi-prover"},
                  {"version", kVersion},
                  {"degree", rep.degree},
                  {"t", rep.t.get_str()},
                  {"degenerate", rep.degenerate},
                  {"pass_direct", rep.pass_direct},
                  {"pass_swapped", rep.pass_swapped},
                  {"residual_direct", rep.residual_direct},
                  {"residual_swapped", rep.residual_swapped},
                  {"passed", rep.passed()}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("degree %d at t = %s: direct %s, swapped %s -> %s\n", rep.degree,
                    rep.t.get_str().c_str(), rep.pass_direct ? "pass" : "fail",
                    rep.pass_swapped ? "pass" : "fail", rep.passed() ? "PASS" : "FAIL");
    }
    return rep.passed() ? kExitOk : kExitCertifiedFailure;
}

int cmd_constants_pi(long digits) {
    ComplexBall pi = pi_oracle(Precision(digits));
    std::cout << pi.to_string(digits) << "\n";
    return kExitOk;
}

int cmd_all(long digits, const std::string& dir) {
    bool ok = true;
    for (int d : catalog_degrees()) {
        PolyFile file = load_poly_file(poly_path(dir, d));
        ProofResult r = prove_degree(file, Precision(200));
        print_proof_text(r);
        if (!proof_passed(r)) {
            ok = false;
            continue;
        }
        VerificationReport v = verify_against_pi(r.params, digits);
        std::printf("  1/pi digits matched      : %ld of %ld (%ld terms)\n\n", v.digits_matched,
                    v.digits_requested, v.terms_used);
        ok = ok && v.digits_matched >= v.digits_requested;
    }
    return ok ? kExitOk : kExitCertifiedFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified derivation and verification of level-1 series for 1/pi"};
    app.require_subcommand(1);

    std::string dir_flag;
    app.add_option("--data-dir", dir_flag,
                   "polynomial data directory (default: $PI_PROVER_DATA or ./data)");

    int degree = 17;
    long precision = 200, digits = 1100;
    bool as_json = false;
    std::string poly_file, params_path, tau = "1";

    auto* prove = app.add_subcommand("prove", "run the full derivation for one degree");
    prove->add_option("--degree", degree, "degree in {5,7,11,17,41}")->required();
    prove->add_option("--precision", precision, "working precision in digits")
        ->check(CLI::Range(10L, 100000L));
    prove->add_flag("--json", as_json, "emit a JSON proof report");
    prove->add_option("--poly-file", poly_file, "explicit polynomial file path");

    auto* verify = app.add_subcommand("verify-series", "sum a series and compare against 1/pi");
    verify->add_option("--degree", degree, "degree in {5,7,11,17,41}");
    verify->add_option("--digits", digits, "digits of pi to verify")->check(CLI::Range(50L, 100000L));
    verify->add_option("--params", params_path, "JSON file with explicit series parameters");
    verify->add_flag("--json", as_json, "emit a JSON report");

    auto* validate = app.add_subcommand("validate-modeq", "validate a polynomial data file");
    validate->add_option("--degree", degree, "degree in {5,7,11,17,41}")->required();
    validate->add_option("--tau", tau, "imaginary part t of tau = i t, as a rational (t >= 1/2)");
    validate->add_option("--precision", precision, "working precision in digits");
    validate->add_flag("--json", as_json, "emit a JSON report");

    auto* constants = app.add_subcommand("constants", "print reference constants");
    auto* cpi = constants->add_subcommand("pi", "print the pi oracle value");
    cpi->add_option("--digits", digits, "digits to print")->check(CLI::Range(10L, 100000L));
    constants->require_subcommand(1);

    auto* all = app.add_subcommand("all", "prove and verify every catalog degree");
    all->add_option("--digits", digits, "digits of pi to verify per series");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const std::string dir = data_dir(dir_flag);
    try {
        if (prove->parsed()) {
            if (solution_catalog(degree).d != degree) return kExitUsage;
            return cmd_prove(degree, precision, as_json, poly_file, dir);
        }
        if (verify->parsed()) return cmd_verify(degree, digits, params_path, as_json, dir);
        if (validate->parsed()) return cmd_validate(degree, tau, precision, as_json, dir);
        if (constants->parsed()) return cmd_constants_pi(digits);
        if (all->parsed()) return cmd_all(digits, dir);
    } catch (const UnsupportedDegree& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ResidualNotCertified& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const AmbiguousRecognition& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const SingularDenominator& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const DomainStraddle& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const PoleStraddle& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCertifiedFailure;
    }
    return kExitUsage;
}
