#include "piprover/modeq.hpp"

#include <cmath>
#include <mutex>
#include <vector>

namespace pipr {

namespace {

Rational pow10_rational(long k) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(k < 0 ? -k : k));
    return k < 0 ? Rational(1, p) : Rational(p);
}

// |x| upper bound (midpoint magnitude + radius) into a 64-bit mpfr
void ball_mag_upper(mpfr_ptr out, const ComplexBall& x) {
    mpfr_hypot(out, x.re(), x.im(), MPFR_RNDU);
    mpfr_add(out, out, x.rad(), MPFR_RNDU);
}

// --- exact q-expansion of the modular invariant -----------------------------

constexpr long kJOrder = 40;  // coefficients from q^-1 up to q^kJOrder

// truncated product of two series mod q^(len)
std::vector<Integer> series_mul(const std::vector<Integer>& a, const std::vector<Integer>& b,
                                size_t len) {
    std::vector<Integer> out(len, Integer(0));
    for (size_t i = 0; i < a.size() && i < len; ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size() && i + j < len; ++j) {
            if (b[j] == 0) continue;
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

// Coefficients c_m of q*J(q) = E4(q)^3 / prod (1 - q^n)^24, m = 0..kJOrder+1,
// so that J = sum c_m q^(m-1).
const std::vector<Integer>& qj_coefficients() {
    static std::vector<Integer> table;
    static std::once_flag once;
    std::call_once(once, [] {
        const size_t len = kJOrder + 2;
        // prod (1 - q^n)
        std::vector<Integer> eta(len, Integer(0));
        eta[0] = 1;
        for (size_t n = 1; n < len; ++n) {
            for (size_t k = len; k-- > n;) eta[k] -= eta[k - n];
        }
        // 24th power by squaring: eta^24 = ((eta^2)^2 * eta^2)^4
        std::vector<Integer> e2 = series_mul(eta, eta, len);
        std::vector<Integer> e4 = series_mul(e2, e2, len);
        std::vector<Integer> e6 = series_mul(e4, e2, len);
        std::vector<Integer> e12 = series_mul(e6, e6, len);
        std::vector<Integer> e24 = series_mul(e12, e12, len);
        // Eisenstein E4 = 1 + 240 sum sigma_3(n) q^n
        std::vector<Integer> E4(len, Integer(0));
        E4[0] = 1;
        for (size_t n = 1; n < len; ++n) {
            Integer s3(0);
            for (size_t d = 1; d <= n; ++d) {
                if (n % d == 0) s3 += Integer(d) * Integer(d) * Integer(d);
            }
            E4[n] = 240 * s3;
        }
        std::vector<Integer> E43 = series_mul(series_mul(E4, E4, len), E4, len);
        // invert e24 (unit constant term)
        std::vector<Integer> inv(len, Integer(0));
        inv[0] = 1;
        for (size_t n = 1; n < len; ++n) {
            Integer acc(0);
            for (size_t k = 1; k <= n; ++k) acc += e24[k] * inv[n - k];
            inv[n] = -acc;
        }
        table = series_mul(E43, inv, len);
    });
    return table;
}

}  // namespace

Integer j_series_coefficient(long n) {
    if (n < -1 || n > kJOrder) throw std::out_of_range("j_series_coefficient: order out of range");
    return qj_coefficients()[static_cast<size_t>(n + 1)];
}

QPoint QPoint::make(ComplexBall v, std::string desc) {
    mpfr_t m;
    mpfr_init2(m, 64);
    ball_mag_upper(m, v);
    bool ok = mpfr_cmp_ui(m, 1) < 0;
    mpfr_clear(m);
    if (!ok) throw NomeTooLarge("nome |q| >= 1: " + desc);
    return QPoint{std::move(v), std::move(desc)};
}

QPoint nome_alternating(int d, Precision p) {
    ComplexBall pi = pi_oracle(p);
    ComplexBall s = sqrt(ComplexBall::from_long(4L * d - 1, p), p);
    ComplexBall q = neg(exp(neg(mul(pi, s, p)), p));
    return QPoint::make(std::move(q),
                        "-exp(-pi*sqrt(" + std::to_string(4 * d - 1) + "))");
}

ComplexBall w_map(const ComplexBall& x, WMapForm form, Precision p) {
    long e = static_cast<long>(form);
    ComplexBall xe = pow_int(x, e, p);
    ComplexBall den = add_rational(xe, Rational(-16), p);
    if (contains_zero(den)) throw PoleStraddle("w_map: x^e - 16 may vanish");
    return div(mul_rational(xe, Rational(432), p), pow_int(den, 3, p), p);
}

WDerivatives w_map_derivatives(const ComplexBall& x, WMapForm form, Precision p) {
    const long e = static_cast<long>(form);
    ComplexBall xe = pow_int(x, e, p);
    ComplexBall g = add_rational(xe, Rational(-16), p);  // x^e - 16
    if (contains_zero(g)) throw PoleStraddle("w_map_derivatives: x^e - 16 may vanish");
    ComplexBall xem1 = pow_int(x, e - 1, p);
    ComplexBall xem2 = pow_int(x, e - 2, p);
    ComplexBall g2 = mul(g, g, p);
    ComplexBall g3 = mul(g2, g, p);

    ComplexBall N = mul_rational(xe, Rational(432), p);
    ComplexBall Np = mul_rational(xem1, Rational(432 * e), p);
    ComplexBall Npp = mul_rational(xem2, Rational(432 * e * (e - 1)), p);

    ComplexBall D = g3;
    // D' = 3 e x^(e-1) g^2; D'' = 6 e^2 x^(2e-2) g + 3 e (e-1) x^(e-2) g^2
    ComplexBall Dp = mul_rational(mul(xem1, g2, p), Rational(3 * e), p);
    ComplexBall Dpp = add(mul_rational(mul(mul(xem1, xem1, p), g, p), Rational(6 * e * e), p),
                          mul_rational(mul(xem2, g2, p), Rational(3 * e * (e - 1)), p), p);

    WDerivatives out{ComplexBall(), ComplexBall(), ComplexBall()};
    out.w = div(N, D, p);
    ComplexBall t = sub(mul(Np, D, p), mul(N, Dp, p), p);  // N'D - N D'
    out.wp = div(t, mul(D, D, p), p);
    ComplexBall first = div(sub(mul(Npp, D, p), mul(N, Dpp, p), p), mul(D, D, p), p);
    ComplexBall second = div(mul_rational(mul(Dp, t, p), Rational(2), p), mul(mul(D, D, p), D, p), p);
    out.wpp = sub(first, second, p);
    return out;
}

ComplexBall alpha_from_w(const ComplexBall& w, AlphaBranch branch, Precision p) {
    ComplexBall s = sqrt(sub(ComplexBall::one(p), mul_rational(w, Rational(4), p), p), p);
    ComplexBall num = branch == AlphaBranch::minus ? sub(ComplexBall::one(p), s, p)
                                                   : add(ComplexBall::one(p), s, p);
    return mul_rational(num, Rational(1, 2), p);
}

ComplexBall j_invariant(const QPoint& q, Precision p) {
    mpfr_t mag;
    mpfr_init2(mag, 64);
    ball_mag_upper(mag, q.value);
    bool small = mpfr_cmp_d(mag, 0.1) <= 0;
    if (!small) {
        mpfr_clear(mag);
        throw NomeTooLarge("j_invariant requires certified |q| <= 1/10");
    }
    const auto& c = qj_coefficients();
    // Horner for q*J
    ComplexBall acc = ComplexBall::from_rational(Rational(c.back()), p);
    for (size_t k = c.size() - 1; k-- > 0;) {
        acc = add_rational(mul(acc, q.value, p), Rational(c[k]), p);
    }
    ComplexBall j = div(acc, q.value, p);

    // tail: sum_{n > kJOrder} c_n q^n with c_n <= e^(4 pi sqrt(n))
    mpfr_t first, ratio, t;
    mpfr_inits2(64, first, ratio, t, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_ui(t, kJOrder + 1, MPFR_RNDU);
    mpfr_sqrt(t, t, MPFR_RNDU);
    mpfr_const_pi(first, MPFR_RNDU);
    mpfr_mul(first, first, t, MPFR_RNDU);
    mpfr_mul_ui(first, first, 4, MPFR_RNDU);
    mpfr_exp(first, first, MPFR_RNDU);                       // e^(4 pi sqrt(41))
    mpfr_pow_ui(t, mag, kJOrder + 1, MPFR_RNDU);
    mpfr_mul(first, first, t, MPFR_RNDU);
    // ratio <= e^(2 pi / sqrt(41)) |q| < 0.27 for |q| <= 1/10
    mpfr_set_d(ratio, 2.7, MPFR_RNDU);
    mpfr_mul(ratio, ratio, mag, MPFR_RNDU);
    mpfr_ui_sub(ratio, 1, ratio, MPFR_RNDD);
    mpfr_div(first, first, ratio, MPFR_RNDU);
    mpfr_add(j.rad(), j.rad(), first, MPFR_RNDU);
    mpfr_clears(first, ratio, t, static_cast<mpfr_ptr>(nullptr));
    mpfr_clear(mag);
    return j;
}

namespace {

double ball_mag_upper_d(const ComplexBall& x) {
    mpfr_t m;
    mpfr_init2(m, 64);
    ball_mag_upper(m, x);
    double d = mpfr_get_d(m, MPFR_RNDU);
    mpfr_clear(m);
    return d;
}

long product_terms_needed(double qmag, Precision p, long stride) {
    double bits = static_cast<double>(p.bits()) + 48;
    if (qmag <= 0) return 4;
    long n = static_cast<long>(bits * std::log(2.0) / (-std::log(qmag) * stride)) + 4;
    return std::max<long>(n, 4);
}

// multiplies x by the enclosure of exp([-t, t]) given a log-tail bound t >= 0
ComplexBall apply_log_tail(const ComplexBall& x, mpfr_srcptr tail_log, Precision p) {
    ComplexBall f = ComplexBall::one(p);
    mpfr_t e;
    mpfr_init2(e, 64);
    mpfr_expm1(e, tail_log, MPFR_RNDU);
    mpfr_add(f.rad(), f.rad(), e, MPFR_RNDU);
    mpfr_clear(e);
    return mul(x, f, p);
}

// |q|^k / (1 - |q|)^pow2 as an up-rounded 64-bit bound
void tail_bound(mpfr_ptr out, double, const ComplexBall& q, long k, int pow_denom, double scale) {
    mpfr_t m, d;
    mpfr_inits2(64, m, d, static_cast<mpfr_ptr>(nullptr));
    ball_mag_upper(m, q);
    mpfr_pow_ui(out, m, static_cast<unsigned long>(k), MPFR_RNDU);
    mpfr_ui_sub(d, 1, m, MPFR_RNDD);
    for (int i = 0; i < pow_denom; ++i) mpfr_div(out, out, d, MPFR_RNDU);
    mpfr_mul_d(out, out, scale, MPFR_RNDU);
    mpfr_clears(m, d, static_cast<mpfr_ptr>(nullptr));
}

}  // namespace

ComplexBall x_level(const QPoint& qp, int level, Precision p) {
    const ComplexBall& q = qp.value;
    double qmag = ball_mag_upper_d(q);
    if (qmag > 0.1) throw NomeTooLarge("x_level requires certified |q| <= 1/10");
    ComplexBall one = ComplexBall::one(p);
    mpfr_t tl;
    mpfr_init2(tl, 64);

    ComplexBall result;
    switch (level) {
        case 4: {
            long N = product_terms_needed(qmag, p, 2);
            ComplexBall q2 = mul(q, q, p);
            ComplexBall even_pow = q2;          // q^(2n)
            ComplexBall odd_pow = q;            // q^(2n-1)
            ComplexBall prod = one;
            for (long n = 1; n <= N; ++n) {
                ComplexBall f = div(add(one, even_pow, p), add(one, odd_pow, p), p);
                prod = mul(prod, f, p);
                if (n < N) {
                    even_pow = mul(even_pow, q2, p);
                    odd_pow = mul(odd_pow, q2, p);
                }
            }
            prod = pow_int(prod, 8, p);
            // log-tail of the 8th-power quotient product
            tail_bound(tl, qmag, q, 2 * N + 1, 2, 16.0);
            prod = apply_log_tail(prod, tl, p);
            result = mul(mul_rational(q, Rational(16), p), prod, p);
            break;
        }
        case 2: {
            long N = product_terms_needed(qmag, p, 1);
            ComplexBall qpow = q;
            ComplexBall prod = one;
            for (long n = 1; n <= N; ++n) {
                prod = mul(prod, add(one, qpow, p), p);
                if (n < N) qpow = mul(qpow, q, p);
            }
            tail_bound(tl, qmag, q, N + 1, 1, 1.0);
            prod = apply_log_tail(prod, tl, p);
            ComplexBall p24 = pow_int(prod, 24, p);
            ComplexBall t = mul(mul_rational(q, Rational(64), p), p24, p);
            result = div(t, add(t, one, p), p);
            break;
        }
        case 3: {
            long N = product_terms_needed(qmag, p, 1);
            ComplexBall qpow = q;
            ComplexBall q2pow = mul(q, q, p);
            ComplexBall prod = one;
            for (long n = 1; n <= N; ++n) {
                prod = mul(prod, add(add(one, qpow, p), q2pow, p), p);
                if (n < N) {
                    qpow = mul(qpow, q, p);
                    q2pow = mul(q2pow, mul(q, q, p), p);
                }
            }
            tail_bound(tl, qmag, q, N + 1, 2, 2.0);
            prod = apply_log_tail(prod, tl, p);
            ComplexBall p12 = pow_int(prod, 12, p);
            ComplexBall t = mul(mul_rational(q, Rational(27), p), p12, p);
            result = div(t, add(t, one, p), p);
            break;
        }
        default:
            mpfr_clear(tl);
            throw std::invalid_argument("x_level: level must be 2, 3 or 4");
    }
    mpfr_clear(tl);
    return result;
}

ComplexBall j_from_x(const ComplexBall& x, int level, Precision p) {
    ComplexBall one = ComplexBall::one(p);
    ComplexBall omx = sub(one, x, p);
    try {
        switch (level) {
            case 1: {
                ComplexBall den = mul_rational(mul(x, omx, p), Rational(4), p);
                return div(ComplexBall::from_long(1728, p), den, p);
            }
            case 2: {
                ComplexBall num = pow_int(add_rational(mul_rational(x, Rational(3), p), Rational(1), p), 3, p);
                ComplexBall den = mul(x, pow_int(omx, 2, p), p);
                return div(mul_rational(num, Rational(64), p), den, p);
            }
            case 3: {
                ComplexBall num = pow_int(add_rational(mul_rational(x, Rational(8), p), Rational(1), p), 3, p);
                ComplexBall den = mul(x, pow_int(omx, 3, p), p);
                return div(mul_rational(num, Rational(27), p), den, p);
            }
            case 4: {
                ComplexBall num = add_rational(add(mul_rational(x, Rational(14), p), mul(x, x, p), p),
                                               Rational(1), p);
                num = pow_int(num, 3, p);
                ComplexBall den = mul(x, pow_int(omx, 4, p), p);
                return div(mul_rational(num, Rational(16), p), den, p);
            }
        }
    } catch (const DomainStraddle&) {
        throw PoleStraddle("j_from_x: denominator may vanish");
    }
    throw std::invalid_argument("j_from_x: level must be 1..4");
}

ComplexBall weber_f(const Rational& t, Precision p) {
    if (t < Rational(1, 2)) throw std::invalid_argument("weber_f requires t >= 1/2");
    ComplexBall pi = pi_oracle(p);
    ComplexBall pt = mul_rational(pi, t, p);
    ComplexBall x = exp(neg(pt), p);  // e^(-pi t) = q^(1/2)
    double xmag = ball_mag_upper_d(x);
    long N = product_terms_needed(xmag, p, 2);

    ComplexBall one = ComplexBall::one(p);
    ComplexBall xx = mul(x, x, p);
    ComplexBall pw = x;  // x^(2n-1)
    ComplexBall prod = one;
    for (long n = 1; n <= N; ++n) {
        prod = mul(prod, add(one, pw, p), p);
        if (n < N) pw = mul(pw, xx, p);
    }
    mpfr_t tl;
    mpfr_init2(tl, 64);
    tail_bound(tl, xmag, x, 2 * N + 1, 2, 1.0);
    prod = apply_log_tail(prod, tl, p);
    mpfr_clear(tl);

    ComplexBall pref = exp(mul_rational(pi, t / 24, p), p);  // q^(-1/48)
    return mul(pref, prod, p);
}

ValidationReport validate_modular_polynomial(const BivariatePoly& phi, int d, const Rational& t,
                                             Precision p) {
    ValidationReport rep;
    rep.degree = d;
    rep.t = t;
    if (phi.is_zero()) {
        rep.degenerate = true;
        return rep;
    }

    // the evaluation cancels terms as large as max |c| u^i v^j; boost the
    // working precision by that scale so the residual certifies at 10^(-p/2)
    Precision probe(30);
    double lu = mag_upper_log10(weber_f(t, probe));
    double lv = mag_upper_log10(weber_f(t * d, probe));
    double scale = 0;
    for (const auto& [e, c] : phi.terms()) {
        double lc = mpz_sizeinbase(c.get_mpz_t(), 10);
        scale = std::max(scale, e.first * lu + e.second * lv + lc);
        scale = std::max(scale, e.first * lv + e.second * lu + lc);
    }
    Precision pw(p.digits + static_cast<long>(scale) + 40);

    ComplexBall u = weber_f(t, pw);
    ComplexBall v = weber_f(t * d, pw);
    ComplexBall r1 = eval_poly(phi, u, v, pw);
    ComplexBall r2 = eval_poly(phi, v, u, pw);
    Rational thresh = pow10_rational(-(p.digits / 2));
    rep.pass_direct = is_certified_below(r1, thresh);
    rep.pass_swapped = is_certified_below(r2, thresh);
    rep.residual_direct = r1.to_string(10);
    rep.residual_swapped = r2.to_string(10);
    rep.certified_digits_direct = certified_zero_digits(r1);
    rep.certified_digits_swapped = certified_zero_digits(r2);
    return rep;
}

}  // namespace pipr
