#include "symschrod/laurent.hpp"

#include <algorithm>
#include <sstream>

#include "symschrod/error.hpp"

namespace symschrod {

Monomial Monomial::unit(std::size_t nvars, std::size_t var, int power) {
    Monomial m(nvars);
    m.exps[var] = power;
    return m;
}

int Monomial::total_degree() const {
    int d = 0;
    for (int e : exps) d += e;
    return d;
}

bool Monomial::is_constant() const {
    return std::all_of(exps.begin(), exps.end(), [](int e) { return e == 0; });
}

bool operator<(const Monomial& a, const Monomial& b) {
    int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    return a.exps < b.exps;
}

Monomial Monomial::operator*(const Monomial& b) const {
    Monomial r = *this;
    for (std::size_t i = 0; i < exps.size(); ++i) r.exps[i] += b.exps[i];
    return r;
}

LaurentPoly LaurentPoly::constant(std::size_t nvars, GaussianRational c) {
    LaurentPoly p(nvars);
    if (!c.is_zero()) p.terms_.emplace(Monomial(nvars), std::move(c));
    return p;
}

LaurentPoly LaurentPoly::variable(std::size_t nvars, std::size_t var, int power) {
    LaurentPoly p(nvars);
    if (power == 0) return constant(nvars, GaussianRational(1));
    p.terms_.emplace(Monomial::unit(nvars, var, power), GaussianRational(1));
    return p;
}

LaurentPoly LaurentPoly::term(std::size_t nvars, Monomial mono, GaussianRational c) {
    LaurentPoly p(nvars);
    if (!c.is_zero()) p.terms_.emplace(std::move(mono), std::move(c));
    return p;
}

GaussianRational LaurentPoly::coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? GaussianRational() : it->second;
}

int LaurentPoly::max_degree(std::size_t var) const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.exps[var]);
    return d;
}

int LaurentPoly::min_degree(std::size_t var) const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::min(d, m.exps[var]);
    return d;
}

bool LaurentPoly::depends_on(std::size_t var) const {
    for (const auto& [m, c] : terms_) {
        if (m.exps[var] != 0) return true;
    }
    return false;
}

void LaurentPoly::check_arity(const LaurentPoly& other) const {
    if (nvars_ != other.nvars_)
        throw Error(ErrorKind::ArityMismatch, "LaurentPoly: operands have different variable arity");
}

void LaurentPoly::add_term(const Monomial& mono, const GaussianRational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(mono, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    a.check_arity(b);
    LaurentPoly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
    a.check_arity(b);
    LaurentPoly r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
    return r;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    a.check_arity(b);
    LaurentPoly r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r(nvars_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

LaurentPoly LaurentPoly::scale(const GaussianRational& c) const {
    LaurentPoly r(nvars_);
    if (c.is_zero()) return r;
    for (const auto& [m, coef] : terms_) r.terms_.emplace(m, coef * c);
    return r;
}

LaurentPoly LaurentPoly::diff(std::size_t var, int order) const {
    if (order < 0) throw Error(ErrorKind::BadArgument, "diff: negative order");
    LaurentPoly cur = *this;
    for (int k = 0; k < order; ++k) {
        LaurentPoly next(nvars_);
        for (const auto& [m, c] : cur.terms_) {
            int e = m.exps[var];
            if (e == 0) continue;
            Monomial dm = m;
            dm.exps[var] = e - 1;
            next.add_term(dm, c * GaussianRational(Rational(e)));
        }
        cur = std::move(next);
    }
    return cur;
}

LaurentPoly LaurentPoly::antiderivative(std::size_t var) const {
    LaurentPoly r(nvars_);
    for (const auto& [m, c] : terms_) {
        int e = m.exps[var];
        if (e == -1)
            throw Error(ErrorKind::Unsupported,
                        "antiderivative: term with exponent -1 needs a logarithm");
        Monomial im = m;
        im.exps[var] = e + 1;
        r.add_term(im, c * GaussianRational(Rational(1, e + 1)));
    }
    return r;
}

LaurentPoly LaurentPoly::substitute(std::size_t var, const Rational& value) const {
    LaurentPoly r(nvars_);
    for (const auto& [m, c] : terms_) {
        int e = m.exps[var];
        GaussianRational scaled = c;
        if (e != 0) {
            if (value.is_zero()) {
                if (e < 0) throw Error(ErrorKind::PoleAtPoint, "substitute: pole at zero");
                continue;  // positive power of zero
            }
            Rational p(1);
            Rational base = e > 0 ? value : value.inverse();
            for (int k = 0; k < std::abs(e); ++k) p *= base;
            scaled = c * GaussianRational(p);
        }
        Monomial sm = m;
        sm.exps[var] = 0;
        r.add_term(sm, scaled);
    }
    return r;
}

std::complex<double> LaurentPoly::eval(const std::vector<std::complex<double>>& point) const {
    if (point.size() != nvars_)
        throw Error(ErrorKind::ArityMismatch, "eval: point dimension mismatch");
    std::complex<double> sum = 0;
    for (const auto& [m, c] : terms_) {
        std::complex<double> v = c.to_complex();
        for (std::size_t i = 0; i < nvars_; ++i) {
            int e = m.exps[i];
            if (e == 0) continue;
            if (point[i] == std::complex<double>(0.0, 0.0) && e < 0)
                throw Error(ErrorKind::PoleAtPoint, "eval: pole at evaluation point");
            std::complex<double> base = e > 0 ? point[i] : 1.0 / point[i];
            for (int k = 0; k < std::abs(e); ++k) v *= base;
        }
        sum += v;
    }
    return sum;
}

std::string LaurentPoly::to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    auto var_name = [&](std::size_t i) -> std::string {
        if (i < names.size()) return names[i];
        if (i == 0) return "t";
        if (nvars_ == 2) return "x";
        return "x" + std::to_string(i);
    };
    std::ostringstream os;
    bool first = true;
    // Print highest-degree terms first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!first) os << " + ";
        first = false;
        os << "(" << it->second.to_string() << ")";
        for (std::size_t i = 0; i < nvars_; ++i) {
            int e = it->first.exps[i];
            if (e == 0) continue;
            os << "*" << var_name(i);
            if (e != 1) os << "^" << e;
        }
    }
    return os.str();
}

}  // namespace symschrod
