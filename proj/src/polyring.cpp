#include "piprover/polyring.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace pipr {

void BivariatePoly::set_term(int i, int j, const Integer& c) {
    if (i < 0 || j < 0 || i > kMaxExponent || j > kMaxExponent) {
        throw ExponentOverflow("exponent (" + std::to_string(i) + "," + std::to_string(j) +
                               ") outside [0," + std::to_string(kMaxExponent) + "]");
    }
    if (c == 0) {
        terms_.erase({i, j});
    } else {
        terms_[{i, j}] = c;
    }
}

void BivariatePoly::add_term(int i, int j, const Integer& c) {
    if (i < 0 || j < 0 || i > kMaxExponent || j > kMaxExponent) {
        throw ExponentOverflow("exponent (" + std::to_string(i) + "," + std::to_string(j) +
                               ") outside [0," + std::to_string(kMaxExponent) + "]");
    }
    Integer& slot = terms_[{i, j}];
    slot += c;
    if (slot == 0) terms_.erase({i, j});
}

int BivariatePoly::degree_u() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.first);
    return d;
}

int BivariatePoly::degree_v() const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e.second);
    return d;
}

Integer BivariatePoly::coefficient(int i, int j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? Integer(0) : it->second;
}

BivariatePoly BivariatePoly::swapped_vars() const {
    BivariatePoly out;
    for (const auto& [e, c] : terms_) out.set_term(e.second, e.first, c);
    return out;
}

BivariatePoly parse_poly(const std::string& text) {
    BivariatePoly poly;
    std::istringstream in(text);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string coeff_s;
        if (!(ls >> coeff_s)) continue;  // blank
        long i, j;
        if (!(ls >> i >> j)) throw ParseError(lineno, "expected '<coeff> <i> <j>'");
        std::string extra;
        if (ls >> extra) throw ParseError(lineno, "trailing token '" + extra + "'");
        Integer c;
        try {
            c = Integer(coeff_s);
        } catch (const std::invalid_argument&) {
            throw ParseError(lineno, "bad coefficient '" + coeff_s + "'");
        }
        if (i < 0 || j < 0) throw ParseError(lineno, "negative exponent");
        poly.add_term(static_cast<int>(i), static_cast<int>(j), c);
    }
    return poly;
}

std::string serialize_poly(const BivariatePoly& poly) {
    std::vector<std::pair<BivariatePoly::Exponents, Integer>> ts(poly.terms().begin(),
                                                                 poly.terms().end());
    std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
        int ga = a.first.first + a.first.second, gb = b.first.first + b.first.second;
        if (ga != gb) return ga < gb;
        return a.first.first < b.first.first;
    });
    std::string out;
    for (const auto& [e, c] : ts) {
        out += c.get_str() + " " + std::to_string(e.first) + " " + std::to_string(e.second) + "\n";
    }
    return out;
}

BivariatePoly partial_derivative(const BivariatePoly& poly, char var) {
    if (var != 'u' && var != 'v') throw std::invalid_argument("partial_derivative: var must be u or v");
    BivariatePoly out;
    for (const auto& [e, c] : poly.terms()) {
        if (var == 'u' && e.first > 0) out.add_term(e.first - 1, e.second, c * e.first);
        if (var == 'v' && e.second > 0) out.add_term(e.first, e.second - 1, c * e.second);
    }
    return out;
}

ComplexBall eval_poly(const BivariatePoly& poly, const ComplexBall& u, const ComplexBall& v,
                      Precision p) {
    if (poly.is_zero()) return ComplexBall::zero(p);
    // group by u-exponent; Horner in u over inner Horner evaluations in v
    std::map<int, std::map<int, Integer>> byu;
    for (const auto& [e, c] : poly.terms()) byu[e.first][e.second] = c;

    ComplexBall acc = ComplexBall::zero(p);
    int prev_i = -1;
    for (auto it = byu.rbegin(); it != byu.rend(); ++it) {
        if (prev_i >= 0) acc = mul(acc, pow_int(u, prev_i - it->first, p), p);
        // inner polynomial in v, sparse Horner
        ComplexBall inner = ComplexBall::zero(p);
        int prev_j = -1;
        for (auto jt = it->second.rbegin(); jt != it->second.rend(); ++jt) {
            if (prev_j >= 0) inner = mul(inner, pow_int(v, prev_j - jt->first, p), p);
            inner = add_rational(inner, Rational(jt->second), p);
            prev_j = jt->first;
        }
        if (prev_j > 0) inner = mul(inner, pow_int(v, prev_j, p), p);
        acc = add(acc, inner, p);
        prev_i = it->first;
    }
    if (prev_i > 0) acc = mul(acc, pow_int(u, prev_i, p), p);
    return acc;
}

Rational eval_poly_exact(const BivariatePoly& poly, const Rational& u, const Rational& v) {
    Rational acc(0);
    for (const auto& [e, c] : poly.terms()) {
        Rational t(c);
        Rational up(1), vp(1);
        for (int k = 0; k < e.first; ++k) up *= u;
        for (int k = 0; k < e.second; ++k) vp *= v;
        acc += t * up * vp;
    }
    return acc;
}

PolySplit parity_split(const BivariatePoly& phi) {
    PolySplit out;
    for (const auto& [e, c] : phi.terms()) {
        bool iu = e.first % 2 != 0, jv = e.second % 2 != 0;
        if (iu != jv) throw MixedParity(e.first, e.second);
        if (!iu) {
            out.q_part.set_term(e.first, e.second, c);
        } else {
            out.r_part.set_term(e.first - 1, e.second - 1, -c);
        }
    }
    return out;
}

BivariatePoly multiply(const BivariatePoly& a, const BivariatePoly& b) {
    BivariatePoly out;
    for (const auto& [ea, ca] : a.terms()) {
        for (const auto& [eb, cb] : b.terms()) {
            out.add_term(ea.first + eb.first, ea.second + eb.second, ca * cb);
        }
    }
    return out;
}

BivariatePoly weber_transform(const BivariatePoly& phi) {
    PolySplit s = parity_split(phi);
    BivariatePoly qh, rh;
    for (const auto& [e, c] : s.q_part.terms()) qh.set_term(e.first / 2, e.second / 2, c);
    for (const auto& [e, c] : s.r_part.terms()) rh.set_term(e.first / 2, e.second / 2, c);
    BivariatePoly p = multiply(qh, qh);
    BivariatePoly r2 = multiply(rh, rh);
    for (const auto& [e, c] : r2.terms()) p.add_term(e.first + 1, e.second + 1, -c);
    return p;
}

PolyFile load_poly_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open polynomial file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();

    PolyFile out;
    out.path = path;
    // header: "# weber degree=<d> form=<raw24|mod12>"
    std::istringstream ls(text);
    std::string header;
    std::getline(ls, header);
    std::istringstream hs(header);
    std::string tok, kind;
    hs >> tok >> kind;
    if (tok != "#" || kind != "weber") {
        throw std::runtime_error(path + ": missing '# weber degree=<d> form=<...>' header");
    }
    bool have_d = false, have_f = false;
    while (hs >> tok) {
        if (tok.rfind("degree=", 0) == 0) {
            out.degree = std::stoi(tok.substr(7));
            have_d = true;
        } else if (tok.rfind("form=", 0) == 0) {
            std::string f = tok.substr(5);
            if (f == "raw24") out.form = WMapForm::exp24;
            else if (f == "mod12") out.form = WMapForm::exp12;
            else throw std::runtime_error(path + ": unknown form '" + f + "'");
            have_f = true;
        }
    }
    if (!have_d || !have_f) throw std::runtime_error(path + ": incomplete header");
    out.poly = parse_poly(text);
    return out;
}

}  // namespace pipr
