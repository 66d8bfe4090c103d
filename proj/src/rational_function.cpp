#include "mdpval/rational_function.hpp"

#include <stdexcept>

namespace mdpval {

RationalFunction::RationalFunction(Polynomial num, Polynomial den) {
    if (den.is_zero()) throw std::domain_error("RationalFunction: zero denominator");
    if (num.is_zero()) {
        num_ = Polynomial();
        den_ = Polynomial({Rational(1)});
        return;
    }
    Polynomial g = poly_gcd(num, den);
    if (g.degree() > 0) {
        num = num.divexact(g);
        den = den.divexact(g);
    }
    Rational lead_inv = Rational(1) / den.leading();
    num_ = lead_inv * num;
    den_ = lead_inv * den;
}

Rational RationalFunction::eval(const Rational& x) const {
    Rational d = den_.eval(x);
    if (d.is_zero()) throw std::domain_error("RationalFunction: pole at evaluation point");
    return num_.eval(x) / d;
}

double RationalFunction::eval_double(double x) const {
    return num_.eval_double(x) / den_.eval_double(x);
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw std::domain_error("RationalFunction: division by zero");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunction operator*(const Rational& s, const RationalFunction& f) {
    return RationalFunction(s * f.num_, f.den_);
}

std::string RationalFunction::to_string() const {
    if (den_.is_one()) return num_.to_string();
    return "(" + num_.to_string() + ") / (" + den_.to_string() + ")";
}

std::vector<Rational> taylor_coefficients(const RationalFunction& f, size_t n) {
    const Rational q0 = f.denominator().coeff(0);
    if (q0.is_zero()) throw std::domain_error("taylor_coefficients: pole at 0");
    std::vector<Rational> out(n);
    for (size_t k = 0; k < n; ++k) {
        Rational acc = f.numerator().coeff(k);
        for (size_t i = 1; i <= k; ++i) acc -= f.denominator().coeff(i) * out[k - i];
        out[k] = acc / q0;
    }
    return out;
}

}  // namespace mdpval
