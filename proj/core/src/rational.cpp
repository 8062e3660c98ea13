#include "symschrod/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace symschrod {

void Rational::normalize() {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    if (num_.is_zero()) {
        den_ = BigInt(1);
        return;
    }
    if (den_.is_negative()) {
        num_ = -num_;
        den_ = -den_;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (!g.is_one()) {
        num_ = num_ / g;
        den_ = den_ / g;
    }
}

Rational Rational::from_string(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return {BigInt::from_string(s), BigInt(1)};
    return {BigInt::from_string(s.substr(0, slash)), BigInt::from_string(s.substr(slash + 1))};
}

Rational operator+(const Rational& a, const Rational& b) {
    return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_};
}

Rational operator-(const Rational& a, const Rational& b) {
    return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_};
}

Rational operator*(const Rational& a, const Rational& b) {
    return {a.num_ * b.num_, a.den_ * b.den_};
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    return {a.num_ * b.den_, a.den_ * b.num_};
}

Rational Rational::operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
}

Rational Rational::inverse() const {
    if (is_zero()) throw std::domain_error("Rational: inverse of zero");
    return {den_, num_};
}

int Rational::cmp(const Rational& a, const Rational& b) {
    return BigInt::cmp(a.num_ * b.den_, b.num_ * a.den_);
}

std::string Rational::to_string() const {
    if (den_.is_one()) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
}

double Rational::to_double() const { return num_.to_double() / den_.to_double(); }

namespace {

BigInt isqrt(const BigInt& n) {
    if (n.is_zero()) return BigInt(0);
    BigInt x(static_cast<std::int64_t>(std::sqrt(n.to_double())) + 2);
    while (true) {
        BigInt y = (x + n / x) / BigInt(2);
        if (y >= x) break;
        x = y;
    }
    while (x * x > n) x = x - BigInt(1);
    return x;
}

}  // namespace

std::optional<Rational> exact_sqrt(const Rational& r) {
    if (r.sign() < 0) return std::nullopt;
    BigInt sn = isqrt(r.num()), sd = isqrt(r.den());
    if (sn * sn != r.num() || sd * sd != r.den()) return std::nullopt;
    return Rational(sn, sd);
}

GaussianRational GaussianRational::inverse() const {
    Rational n2 = norm2();
    if (n2.is_zero()) throw std::domain_error("GaussianRational: inverse of zero");
    return {re_ / n2, -im_ / n2};
}

GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ + b.re_, a.im_ + b.im_};
}

GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ - b.re_, a.im_ - b.im_};
}

GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
}

GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    return a * b.inverse();
}

std::string GaussianRational::to_string() const {
    if (im_.is_zero()) return re_.to_string();
    std::string im_part = im_.to_string() + "*i";
    if (re_.is_zero()) return im_part;
    if (im_.sign() > 0) return re_.to_string() + "+" + im_part;
    return re_.to_string() + im_part;  // sign is carried by the numeral
}

}  // namespace symschrod
