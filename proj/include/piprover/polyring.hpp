// Exact sparse bivariate integer polynomials: parsing, ball/rational
// evaluation, formal partial derivatives, and the parity split / squaring
// transform applied to Weber modular polynomials.

#ifndef PIPROVER_POLYRING_HPP
#define PIPROVER_POLYRING_HPP

#include <map>
#include <string>
#include <utility>

#include "piprover/numcore.hpp"

namespace pipr {

struct ParseError : std::runtime_error {
    long line;
    ParseError(long ln, const std::string& what)
        : std::runtime_error("line " + std::to_string(ln) + ": " + what), line(ln) {}
};

struct ExponentOverflow : std::runtime_error {
    explicit ExponentOverflow(const std::string& what) : std::runtime_error(what) {}
};

struct MixedParity : std::runtime_error {
    int i, j;
    MixedParity(int i_, int j_)
        : std::runtime_error("monomial u^" + std::to_string(i_) + " v^" + std::to_string(j_) +
                             " has mixed exponent parity"),
          i(i_), j(j_) {}
};

inline constexpr int kMaxExponent = 64;

class BivariatePoly {
  public:
    using Exponents = std::pair<int, int>;  // (i, j) for u^i v^j
    using TermMap = std::map<Exponents, Integer>;

    BivariatePoly() = default;

    // drops zero coefficients, enforces the exponent cap
    void set_term(int i, int j, const Integer& c);
    void add_term(int i, int j, const Integer& c);
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    int degree_u() const;
    int degree_v() const;
    Integer coefficient(int i, int j) const;

    bool operator==(const BivariatePoly& o) const { return terms_ == o.terms_; }

    BivariatePoly swapped_vars() const;

  private:
    TermMap terms_;
};

struct PolySplit {
    BivariatePoly q_part;  // even-even monomials
    BivariatePoly r_part;  // phi == q_part - u*v*r_part
};

// One term per line: "<coeff> <i> <j>"; '#' starts a comment; blank lines
// ignored. Duplicate exponent pairs accumulate.
BivariatePoly parse_poly(const std::string& text);

// canonical form: graded lexicographic by (i+j, i), one term per line
std::string serialize_poly(const BivariatePoly& poly);

BivariatePoly partial_derivative(const BivariatePoly& poly, char var /* 'u' or 'v' */);

ComplexBall eval_poly(const BivariatePoly& poly, const ComplexBall& u, const ComplexBall& v,
                      Precision p);

// exact evaluation at a rational point; test oracle for eval_poly
Rational eval_poly_exact(const BivariatePoly& poly, const Rational& u, const Rational& v);

PolySplit parity_split(const BivariatePoly& phi);

// P(u,v) = Qh(u,v)^2 - u v Rh(u,v)^2 with Qh, Rh the exponent-halved parts;
// satisfies P(s^2, t^2) = phi(s,t) * (q_part(s,t) + s t r_part(s,t))
BivariatePoly weber_transform(const BivariatePoly& phi);

BivariatePoly multiply(const BivariatePoly& a, const BivariatePoly& b);

// --- polynomial data files ---------------------------------------------------

enum class WMapForm { exp12 = 12, exp24 = 24 };

struct PolyFile {
    BivariatePoly poly;
    int degree = 0;
    WMapForm form = WMapForm::exp12;
    std::string path;
};

// Reads a data file with header "# weber degree=<d> form=<raw24|mod12>".
PolyFile load_poly_file(const std::string& path);

}  // namespace pipr

#endif  // PIPROVER_POLYRING_HPP
