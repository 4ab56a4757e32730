#include "piprover/prover.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <tuple>

namespace pipr {

namespace {

Integer pow10(long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e < 0 ? 0 : e));
    return r;
}

Rational mpfr_exact(mpfr_srcptr x) {
    if (mpfr_zero_p(x)) return Rational(0);
    mpq_t q;
    mpq_init(q);
    mpfr_get_q(q, x);
    Rational r(q);
    mpq_clear(q);
    return r;
}

}  // namespace

// --- RadicalExpr -----------------------------------------------------------

RadicalPtr RadicalExpr::rat(const Rational& q) {
    auto e = std::make_shared<RadicalExpr>();
    e->kind = Kind::rational;
    e->value = q;
    return e;
}

RadicalPtr RadicalExpr::imag() {
    auto e = std::make_shared<RadicalExpr>();
    e->kind = Kind::imaginary_unit;
    return e;
}

namespace {
RadicalPtr node(RadicalExpr::Kind k, RadicalPtr a, RadicalPtr b) {
    auto e = std::make_shared<RadicalExpr>();
    e->kind = k;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}
}  // namespace

RadicalPtr RadicalExpr::add2(RadicalPtr a, RadicalPtr b) { return node(Kind::add, a, b); }
RadicalPtr RadicalExpr::sub2(RadicalPtr a, RadicalPtr b) { return node(Kind::sub, a, b); }
RadicalPtr RadicalExpr::mul2(RadicalPtr a, RadicalPtr b) { return node(Kind::mul, a, b); }
RadicalPtr RadicalExpr::div2(RadicalPtr a, RadicalPtr b) { return node(Kind::div, a, b); }
RadicalPtr RadicalExpr::sqrt1(RadicalPtr a) { return node(Kind::sqrt, a, nullptr); }
RadicalPtr RadicalExpr::cbrt1(RadicalPtr a) { return node(Kind::cbrt, a, nullptr); }

ComplexBall eval_radical(const RadicalPtr& e, Precision p) {
    using K = RadicalExpr::Kind;
    switch (e->kind) {
        case K::rational:
            return ComplexBall::from_rational(e->value, p);
        case K::imaginary_unit:
            return ComplexBall::i_unit(p);
        case K::add:
            return add(eval_radical(e->lhs, p), eval_radical(e->rhs, p), p);
        case K::sub:
            return sub(eval_radical(e->lhs, p), eval_radical(e->rhs, p), p);
        case K::mul:
            return mul(eval_radical(e->lhs, p), eval_radical(e->rhs, p), p);
        case K::div: {
            ComplexBall den = eval_radical(e->rhs, p);
            if (contains_zero(den)) throw DomainStraddle("eval_radical: divisor ball contains zero");
            return div(eval_radical(e->lhs, p), den, p);
        }
        case K::sqrt:
            return sqrt(eval_radical(e->lhs, p), p);
        case K::cbrt:
            return cbrt(eval_radical(e->lhs, p), p);
    }
    throw std::logic_error("eval_radical: unreachable");
}

// --- solution catalog --------------------------------------------------------

namespace {

using RP = RadicalPtr;

RP operator+(const RP& a, const RP& b) { return RadicalExpr::add2(a, b); }
RP operator-(const RP& a, const RP& b) { return RadicalExpr::sub2(a, b); }
RP operator*(const RP& a, const RP& b) { return RadicalExpr::mul2(a, b); }

RP q(long n, long d) { return RadicalExpr::rat(Rational(n, d)); }
RP qi(long n) { return RadicalExpr::rat(Rational(n)); }
RP rt(long n) { return RadicalExpr::sqrt1(qi(n)); }

}  // namespace

SolutionPoint solution_catalog(int d) {
    SolutionPoint sp;
    sp.d = d;
    RP I = RadicalExpr::imag();
    switch (d) {
        case 17: {
            sp.form = WMapForm::exp12;
            RP H = RadicalExpr::cbrt1(qi(91) + qi(9) * rt(201));
            RP H2 = H * H;
            sp.u0 = (q(91, 1200) - q(3, 400) * rt(201)) * H2 + q(1, 3) * H - q(2, 3);
            RP re = (q(3, 800) * rt(201) - q(91, 2400)) * H2 - q(1, 6) * H - q(2, 3);
            RP im = (q(-9, 800) * rt(67) + q(91, 2400) * rt(3)) * H2 - q(1, 6) * rt(3) * H;
            sp.v0 = re + I * im;
            break;
        }
        case 5: {
            sp.form = WMapForm::exp12;
            RP H = RadicalExpr::cbrt1(qi(1) + qi(3) * rt(57));
            RP H2 = H * H;
            sp.u0 = (q(-1, 192) + q(1, 64) * rt(57)) * H2 - q(1, 3) * H + q(2, 3);
            RP re = (q(-1, 128) * rt(57) + q(1, 384)) * H2 + q(1, 6) * H + q(2, 3);
            RP brace = (q(1, 384) * rt(3) - q(1, 128) * rt(171)) * H2 - q(1, 6) * rt(3) * H;
            sp.v0 = re - I * brace;
            break;
        }
        case 11: {
            sp.form = WMapForm::exp12;
            RP H = RadicalExpr::cbrt1(qi(35) + qi(3) * rt(129));
            RP H2 = H * H;
            sp.u0 = (q(-35, 48) + q(1, 16) * rt(129)) * H2 - q(1, 3) * H + q(4, 3);
            RP re = (q(35, 96) - q(1, 32) * rt(129)) * H2 + q(1, 6) * H + q(4, 3);
            RP im = (q(-35, 96) * rt(3) + q(3, 32) * rt(43)) * H2 + q(1, 6) * rt(3) * H;
            sp.v0 = re + I * im;
            break;
        }
        case 41: {
            sp.form = WMapForm::exp12;
            RP H = RadicalExpr::cbrt1(qi(467) + qi(33) * rt(489));
            RP H2 = H * H;
            sp.u0 = (q(-467, 13872) + q(11, 4624) * rt(489)) * H2 - q(1, 3) * H + q(4, 3);
            RP re = (q(467, 27744) - q(11, 9248) * rt(489)) * H2 + q(1, 6) * H + q(4, 3);
            RP im = (q(467, 27744) * rt(3) - q(33, 9248) * rt(163)) * H2 - q(1, 6) * rt(3) * H;
            sp.v0 = re + I * im;
            break;
        }
        case 7: {
            sp.form = WMapForm::exp24;
            RP c2 = RadicalExpr::cbrt1(qi(2));   // 2^(1/3)
            RP c4 = c2 * c2;                     // 4^(1/3)
            RP u0 = RadicalExpr::sqrt1(c2) * RadicalExpr::cbrt1(c2 - qi(1));
            sp.u0 = u0;
            RP factor = q(1, 2) * (c4 + qi(1)) -
                        I * (q(1, 6) * rt(3) * (qi(1) + c4 + qi(2) * c2));
            sp.v0 = u0 * factor;
            break;
        }
        default:
            throw UnsupportedDegree(d);
    }
    return sp;
}

const std::vector<int>& catalog_degrees() {
    static const std::vector<int> ds = {5, 7, 11, 17, 41};
    return ds;
}

// --- certification ------------------------------------------------------------

namespace {

// ok = certified zero; throws when inconclusive; ok = false means certified nonzero
bool judge_residual(const ComplexBall& res, const Rational& thr, const char* name) {
    Rational rad = mpfr_exact(res.rad());
    if (contains_zero(res)) {
        if (rad <= thr) return true;
        throw ResidualNotCertified(std::string(name) +
                                   ": residual radius too large; raise precision");
    }
    return false;
}

}  // namespace

CheckResult check_solution(const SolutionPoint& sp, const BivariatePoly& P, Precision p) {
    CheckResult r;
    r.u0 = eval_radical(sp.u0, p);
    r.v0 = eval_radical(sp.v0, p);
    r.w_residual = sub(w_map(r.u0, sp.form, p), w_map(r.v0, sp.form, p), p);
    r.degenerate = P.is_zero();
    r.p_residual = r.degenerate ? ComplexBall::zero(p) : eval_poly(P, r.u0, r.v0, p);

    Rational thr(Integer(1), pow10(p.digits - 30));
    r.w_contains_zero = judge_residual(r.w_residual, thr, "w_map(u0) - w_map(v0)");
    r.p_contains_zero = r.degenerate || judge_residual(r.p_residual, thr, "P(u0, v0)");
    return r;
}

DerivativeChain derivative_chain(const SolutionPoint& sp, const BivariatePoly& P, Precision p) {
    DerivativeChain ch;
    ch.d = sp.d;
    ch.u0 = eval_radical(sp.u0, p);
    ch.v0 = eval_radical(sp.v0, p);

    BivariatePoly Pu = partial_derivative(P, 'u');
    BivariatePoly Pv = partial_derivative(P, 'v');
    BivariatePoly Puu = partial_derivative(Pu, 'u');
    BivariatePoly Puv = partial_derivative(Pu, 'v');
    BivariatePoly Pvv = partial_derivative(Pv, 'v');

    ComplexBall pu = eval_poly(Pu, ch.u0, ch.v0, p);
    ComplexBall pv = eval_poly(Pv, ch.u0, ch.v0, p);
    if (contains_zero(pv)) throw SingularDenominator("dP/dv straddles zero; raise precision");
    ch.vp = neg(div(pu, pv, p));

    ComplexBall puu = eval_poly(Puu, ch.u0, ch.v0, p);
    ComplexBall puv = eval_poly(Puv, ch.u0, ch.v0, p);
    ComplexBall pvv = eval_poly(Pvv, ch.u0, ch.v0, p);
    ComplexBall vp2 = mul(ch.vp, ch.vp, p);
    ComplexBall num =
        add(add(puu, mul_rational(mul(puv, ch.vp, p), Rational(2), p), p), mul(pvv, vp2, p), p);
    ch.vpp = neg(div(num, pv, p));

    WDerivatives wu = w_map_derivatives(ch.u0, sp.form, p);
    WDerivatives wv = w_map_derivatives(ch.v0, sp.form, p);

    ch.alpha0 = alpha_from_w(wu.w, AlphaBranch::minus, p);
    ch.one_minus_2alpha = add_rational(mul_rational(ch.alpha0, Rational(-2), p), Rational(1), p);
    if (contains_zero(ch.one_minus_2alpha))
        throw SingularDenominator("1 - 2*alpha0 straddles zero; raise precision");

    ch.alphap = div(wu.wp, ch.one_minus_2alpha, p);
    ch.alphapp =
        div(add(wu.wpp, mul_rational(mul(ch.alphap, ch.alphap, p), Rational(2), p), p),
            ch.one_minus_2alpha, p);

    ch.beta0 = add_rational(neg(ch.alpha0), Rational(1), p);
    ComplexBall one_minus_2beta = neg(ch.one_minus_2alpha);
    ch.betap = div(mul(wv.wp, ch.vp, p), one_minus_2beta, p);
    if (contains_zero(ch.betap))
        throw SingularDenominator("beta'0 straddles zero; raise precision");
    ComplexBall bnum = add(add(mul(wv.wpp, vp2, p), mul(wv.wp, ch.vpp, p), p),
                           mul_rational(mul(ch.betap, ch.betap, p), Rational(2), p), p);
    ch.betapp = div(bnum, one_minus_2beta, p);

    ch.m0 = sqrt(div(ch.alphap, mul_rational(ch.betap, Rational(sp.d), p), p), p);
    if (mpfr_sgn(ch.m0.re()) < 0) ch.m0 = neg(ch.m0);
    return ch;
}

// --- recognition ----------------------------------------------------------------

Rational recognize_rational(const ComplexBall& x, const Integer& denom_bound, Precision p) {
    long half = p.digits / 2;
    if (!certifies_real(x, half)) throw NonRealResult("recognize_rational: not certified real");

    Rational rad = mpfr_exact(x.rad());
    if (rad > Rational(Integer(1), pow10(p.digits - 10)))
        throw RecognitionFailed("recognize_rational: radius above 10^(10-p)");

    Rational m = mpfr_exact(x.re());
    Rational thr(Integer(1), pow10(half));

    std::vector<Rational> hits;
    Integer hm1 = 1, hm2 = 0, km1 = 0, km2 = 1;
    Rational rem = m;
    for (int iter = 0; iter < 20000; ++iter) {
        Integer a;
        mpz_fdiv_q(a.get_mpz_t(), rem.get_num_mpz_t(), rem.get_den_mpz_t());
        Integer h = a * hm1 + hm2;
        Integer k = a * km1 + km2;
        if (k > denom_bound) break;
        Rational conv(h, k);
        conv.canonicalize();
        if (abs(m - conv) < thr && !(hits.size() && hits.back() == conv)) hits.push_back(conv);
        rem -= Rational(a);
        if (rem == 0) break;
        rem = 1 / rem;
        hm2 = hm1;
        hm1 = h;
        km2 = km1;
        km1 = k;
    }
    if (hits.empty())
        throw RecognitionFailed("recognize_rational: no convergent within tolerance");
    if (hits.size() > 1)
        throw AmbiguousRecognition("recognize_rational: multiple convergents fit; raise precision");
    return hits[0];
}

namespace {

void factor_into(Integer n, std::map<Integer, int>& out);

Integer pollard_rho(const Integer& n) {
    for (unsigned long c = 1;; ++c) {
        Integer x = 2, y = 2, d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            Integer diff = x > y ? x - y : y - x;
            if (diff == 0) break;  // cycle without factor; retry with next c
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_into(Integer n, std::map<Integer, int>& out) {
    for (Integer f = 2; f * f <= n && f < 1000000; f == 2 ? f = 3 : f += 2) {
        while (n % f == 0) {
            ++out[f];
            n /= f;
        }
    }
    if (n == 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 40)) {
        ++out[n];
        return;
    }
    Integer d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

std::pair<Integer, Integer> squarefree_decompose(const Integer& n) {
    if (n <= 0) throw std::invalid_argument("squarefree_decompose: n must be positive");
    std::map<Integer, int> fac;
    factor_into(n, fac);
    Integer s = 1, m = 1;
    for (const auto& [prime, e] : fac) {
        for (int i = 0; i < e / 2; ++i) s *= prime;
        if (e % 2) m *= prime;
    }
    return {s, m};
}

Surd recognize_surd(const ComplexBall& x, const Integer& radicand, const Integer& denom_bound,
                    Precision p) {
    if (radicand <= 0) throw std::invalid_argument("recognize_surd: radicand must be positive");
    ComplexBall root = sqrt(ComplexBall::from_rational(Rational(radicand), p), p);
    Rational coeff = recognize_rational(div(x, root, p), denom_bound, p);
    Surd s{coeff, radicand};
    ComplexBall resid = sub(x, s.eval(p), p);
    if (!is_certified_below(resid, Rational(Integer(1), pow10(p.digits / 2))))
        throw RecognitionFailed("recognize_surd: residual not certified below tolerance");
    return s;
}

Surd recognize_surd_auto(const ComplexBall& x, Precision p) {
    long half = p.digits / 2;
    if (!certifies_real(x, half)) throw NonRealResult("recognize_surd_auto: not certified real");

    Rational r2 = recognize_rational(mul(x, x, p), pow10(std::min<long>(p.digits - 40, 60)), p);
    if (r2 == 0) return Surd{Rational(0), Integer(1)};
    if (r2 < 0) throw RecognitionFailed("recognize_surd_auto: negative recognized square");

    auto [square_root, radicand] = squarefree_decompose(r2.get_num() * r2.get_den());
    Rational coeff(square_root, r2.get_den());
    coeff.canonicalize();
    if (mpfr_sgn(x.re()) < 0) coeff = -coeff;

    Surd s{coeff, radicand};
    ComplexBall resid = sub(x, s.eval(p), p);
    if (!is_certified_below(resid, Rational(Integer(1), pow10(half))))
        throw RecognitionFailed("recognize_surd_auto: residual not certified below tolerance");
    return s;
}

// --- parameter extraction ----------------------------------------------------------

namespace {

// m'0/alpha'0 = 1/2 (m0 + 1/(d m0)) (a0 - b0)/(a0 b0) + m0/(2 a'0) (a''0/a'0 - b''0/b'0)
ComplexBall multiplier_quotient(int d, const DerivativeChain& ch, Precision p) {
    ComplexBall ab = mul(ch.alpha0, ch.beta0, p);
    ComplexBall inv_dm0 = div(ComplexBall::one(p), mul_rational(ch.m0, Rational(d), p), p);
    ComplexBall term1 = mul(mul_rational(add(ch.m0, inv_dm0, p), Rational(1, 2), p),
                            div(sub(ch.alpha0, ch.beta0, p), ab, p), p);
    ComplexBall term2 =
        mul(div(ch.m0, mul_rational(ch.alphap, Rational(2), p), p),
            sub(div(ch.alphapp, ch.alphap, p), div(ch.betapp, ch.betap, p), p), p);
    return add(term1, term2, p);
}

void require_real(const ComplexBall& x, long thresh, const char* name) {
    if (!certifies_real(x, thresh))
        throw NonRealResult(std::string(name) + ": imaginary part does not certify as zero");
}

}  // namespace

SeriesDerivation series_params_alternating(int d, const DerivativeChain& chain, Precision p) {
    long half = p.digits / 2;
    ComplexBall ab = mul(chain.alpha0, chain.beta0, p);

    RawSeriesBalls raw;
    raw.z = mul_rational(ab, Rational(4), p);
    ComplexBall root = sqrt(ComplexBall::from_rational(Rational(4 * d - 1), p), p);
    raw.b = mul(chain.one_minus_2alpha, root, p);
    raw.m_prime_over_alpha_prime = multiplier_quotient(d, chain, p);
    raw.a = mul_rational(mul(ab, raw.m_prime_over_alpha_prime, p), Rational(-2 * (long)d), p);

    require_real(raw.z, half, "z");
    require_real(raw.a, half, "a");
    require_real(raw.b, half, "b");

    SeriesDerivation out;
    out.raw = raw;
    out.params.s = 6;
    out.params.level = 1;
    out.params.d = d;
    out.params.z = recognize_rational(raw.z, pow10(20), p);
    out.params.a = recognize_surd_auto(raw.a, p);
    out.params.b = recognize_surd_auto(raw.b, p);
    return out;
}

PositiveSeriesResult series_params_positive(int d, const DerivativeChain& chain, Precision p) {
    long half = p.digits / 2;
    require_real(chain.alpha0, half, "alpha0");
    require_real(chain.beta0, half, "beta0");

    auto inside_unit_interval = [](const ComplexBall& x) {
        Rational m = mpfr_exact(x.re());
        Rational r = mpfr_exact(x.rad());
        return m - r > 0 && m + r < 1;
    };
    if (!inside_unit_interval(chain.alpha0) || !inside_unit_interval(chain.beta0))
        throw NonRealResult("series_params_positive: alpha0/beta0 not certified inside (0,1)");

    ComplexBall ab = mul(chain.alpha0, chain.beta0, p);
    ComplexBall z_ball = mul_rational(ab, Rational(4), p);
    ComplexBall root = sqrt(ComplexBall::from_rational(Rational(4 * d), p), p);
    ComplexBall b_ball = mul(chain.one_minus_2alpha, root, p);
    ComplexBall a_ball =
        mul_rational(mul(ab, multiplier_quotient(d, chain, p), p), Rational(-2 * (long)d), p);

    PositiveSeriesResult res;
    res.degenerate_b = contains_zero(b_ball);
    res.params.s = 6;
    res.params.level = 1;
    res.params.d = d;
    res.params.z = recognize_rational(z_ball, pow10(20), p);
    res.params.b = res.degenerate_b ? Surd{Rational(0), Integer(1)} : recognize_surd_auto(b_ball, p);
    res.params.a = recognize_surd_auto(a_ball, p);
    return res;
}

// --- full pipeline -------------------------------------------------------------------

ProofResult prove_degree(const PolyFile& file, Precision p) {
    auto t0 = std::chrono::steady_clock::now();

    SolutionPoint sp = solution_catalog(file.degree);
    if (sp.form != file.form)
        throw std::invalid_argument("prove_degree: polynomial form does not match degree " +
                                    std::to_string(file.degree));
    BivariatePoly P =
        (file.form == WMapForm::exp12) ? weber_transform(file.poly) : file.poly;

    auto run = [&](Precision pp) {
        CheckResult ck = check_solution(sp, P, pp);
        DerivativeChain ch = derivative_chain(sp, P, pp);
        SeriesDerivation sd = series_params_alternating(file.degree, ch, pp);
        return std::tuple<CheckResult, DerivativeChain, SeriesDerivation>(ck, ch, sd);
    };

    ProofResult res;
    res.d = file.degree;
    res.form = file.form;
    res.digits = p.digits;

    auto [ck, ch, sd] = run(p);
    res.check = ck;
    res.chain = ch;
    res.raw = sd.raw;
    res.params = sd.params;

    if (ck.certified()) {
        auto [ck2, ch2, sd2] = run(p.doubled());
        res.stable_under_doubling = ck2.certified() && sd.params.z == sd2.params.z &&
                                    sd.params.a == sd2.params.a && sd.params.b == sd2.params.b;

        // beta0 re-derived from w(v0) on the opposite branch must complement alpha0
        ComplexBall beta_indep =
            alpha_from_w(w_map(ch.v0, sp.form, p), AlphaBranch::plus, p);
        res.beta_identity_ok =
            contains_point(add(ch.alpha0, beta_indep, p), Rational(1), Rational(0));

        ComplexBall m0_sq = mul(ch.m0, conj(ch.m0), p);
        res.m0_modulus_ok = contains_point(m0_sq, Rational(1, res.d), Rational(0));

        Precision ph(60);
        ComplexBall j = j_invariant(nome_alternating(res.d, ph), ph);
        ComplexBall diff = add_rational(j, -(Rational(1728) / res.params.z), ph);
        res.heegner_ok = is_certified_below(diff, Rational(1, 1000000));
    }

    res.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

}  // namespace pipr
