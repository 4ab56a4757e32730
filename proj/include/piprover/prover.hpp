// The derivation pipeline: closed-form solution catalog, implicit
// differentiation of P(u, v) = 0 and of the w-maps, the multiplier, and the
// extraction of certified exact series parameters (z, b, a).

#ifndef PIPROVER_PROVER_HPP
#define PIPROVER_PROVER_HPP

#include <memory>
#include <vector>

#include "piprover/modeq.hpp"
#include "piprover/params.hpp"
#include "piprover/polyring.hpp"

namespace pipr {

struct UnsupportedDegree : std::runtime_error {
    explicit UnsupportedDegree(int d)
        : std::runtime_error("no catalog solution for degree " + std::to_string(d)) {}
};

struct ResidualNotCertified : std::runtime_error {
    explicit ResidualNotCertified(const std::string& what) : std::runtime_error(what) {}
};

struct SingularDenominator : std::runtime_error {
    explicit SingularDenominator(const std::string& what) : std::runtime_error(what) {}
};

struct RecognitionFailed : std::runtime_error {
    explicit RecognitionFailed(const std::string& what) : std::runtime_error(what) {}
};

struct AmbiguousRecognition : std::runtime_error {
    explicit AmbiguousRecognition(const std::string& what) : std::runtime_error(what) {}
};

struct NonRealResult : std::runtime_error {
    explicit NonRealResult(const std::string& what) : std::runtime_error(what) {}
};

// --- closed-form expressions --------------------------------------------------

class RadicalExpr;
using RadicalPtr = std::shared_ptr<const RadicalExpr>;

class RadicalExpr {
  public:
    enum class Kind { rational, imaginary_unit, add, sub, mul, div, sqrt, cbrt };

    Kind kind;
    Rational value;       // for Kind::rational
    RadicalPtr lhs, rhs;  // children; unary ops use lhs only

    static RadicalPtr rat(const Rational& q);
    static RadicalPtr imag();
    static RadicalPtr add2(RadicalPtr a, RadicalPtr b);
    static RadicalPtr sub2(RadicalPtr a, RadicalPtr b);
    static RadicalPtr mul2(RadicalPtr a, RadicalPtr b);
    static RadicalPtr div2(RadicalPtr a, RadicalPtr b);
    static RadicalPtr sqrt1(RadicalPtr a);
    static RadicalPtr cbrt1(RadicalPtr a);
};

ComplexBall eval_radical(const RadicalPtr& e, Precision p);

struct SolutionPoint {
    int d = 0;
    WMapForm form = WMapForm::exp12;
    RadicalPtr u0, v0;
};

// the five published closed-form solutions; form = raw24 for d = 7
SolutionPoint solution_catalog(int d);
const std::vector<int>& catalog_degrees();

// --- certification --------------------------------------------------------------

struct CheckResult {
    ComplexBall u0, v0;
    ComplexBall w_residual;  // w(u0) - w(v0)
    ComplexBall p_residual;  // P(u0, v0)
    bool degenerate = false;
    bool w_contains_zero = false;
    bool p_contains_zero = false;

    bool certified() const { return w_contains_zero && (degenerate || p_contains_zero); }
};

// Certifies both residuals contain zero with radii below 10^(30 - p.digits).
// Throws ResidualNotCertified when the radii are too large to decide.
CheckResult check_solution(const SolutionPoint& sp, const BivariatePoly& P, Precision p);

struct DerivativeChain {
    int d = 0;
    ComplexBall u0, v0, vp, vpp;
    ComplexBall alpha0, alphap, alphapp;
    ComplexBall beta0, betap, betapp;
    ComplexBall one_minus_2alpha;
    ComplexBall m0;
};

DerivativeChain derivative_chain(const SolutionPoint& sp, const BivariatePoly& P, Precision p);

// --- recognition -----------------------------------------------------------------

// nearest rational with bounded denominator via continued-fraction
// convergents; requires the ball to certify real
Rational recognize_rational(const ComplexBall& x, const Integer& denom_bound, Precision p);

// known-radicand form: the caller supplies M
Surd recognize_surd(const ComplexBall& x, const Integer& radicand, const Integer& denom_bound,
                    Precision p);

// radicand discovered from the square-free part of the recognized x^2
Surd recognize_surd_auto(const ComplexBall& x, Precision p);

// n = square * squarefree; returns {sqrt(square), squarefree}
std::pair<Integer, Integer> squarefree_decompose(const Integer& n);

// --- parameter extraction ---------------------------------------------------------

struct RawSeriesBalls {
    ComplexBall z, a, b, m_prime_over_alpha_prime;
};

struct SeriesDerivation {
    SeriesParams params;
    RawSeriesBalls raw;
};

// alternating branch, level 1: z = 4 a0 b0, b = (1-2a0) sqrt(4d-1), Eq-(9) a
SeriesDerivation series_params_alternating(int d, const DerivativeChain& chain, Precision p);

// positive branch (4d under the root); rejects chains whose alpha0 is not a
// real point of (0,1)
struct PositiveSeriesResult {
    SeriesParams params;
    bool degenerate_b = false;  // alpha0 == 1/2
};
PositiveSeriesResult series_params_positive(int d, const DerivativeChain& chain, Precision p);

// --- full pipeline -----------------------------------------------------------------

struct ProofResult {
    int d = 0;
    WMapForm form = WMapForm::exp12;
    long digits = 0;
    CheckResult check;
    DerivativeChain chain;
    RawSeriesBalls raw;
    SeriesParams params;
    bool beta_identity_ok = false;      // alpha0 + beta0 contains 1
    bool m0_modulus_ok = false;         // |m0|^2 contains 1/d
    bool heegner_ok = false;            // j(-e^(-pi sqrt(4d-1))) = 1728/z to 1e-6
    bool stable_under_doubling = false; // identical constants at 2x digits
    double wall_seconds = 0;
};

// Runs the whole derivation for one degree at p digits, re-runs at 2p digits
// and requires bit-identical recognized constants.
ProofResult prove_degree(const PolyFile& file, Precision p);

}  // namespace pipr

#endif  // PIPROVER_PROVER_HPP
