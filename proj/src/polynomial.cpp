#include "mdpval/polynomial.hpp"

#include <sstream>
#include <stdexcept>

namespace mdpval {

Polynomial Polynomial::monomial(const Rational& coeff, size_t k) {
    if (coeff.is_zero()) return Polynomial();
    std::vector<Rational> c(k + 1);
    c[k] = coeff;
    return Polynomial(std::move(c));
}

Polynomial Polynomial::power_minus_one(long n) {
    if (n < 1) throw std::invalid_argument("power_minus_one: n must be >= 1");
    std::vector<Rational> c(static_cast<size_t>(n) + 1);
    c[0] = Rational(-1);
    c[static_cast<size_t>(n)] = Rational(1);
    return Polynomial(std::move(c));
}

const Rational& Polynomial::leading() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
    return c_.back();
}

Rational Polynomial::eval(const Rational& x) const {
    Rational acc;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

double Polynomial::eval_double(double x) const {
    double acc = 0.0;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i].to_double();
    return acc;
}

Polynomial Polynomial::operator-() const {
    std::vector<Rational> c(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) c[i] = -c_[i];
    return Polynomial(std::move(c));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero()) continue;
        for (size_t j = 0; j < b.c_.size(); ++j) {
            if (b.c_[j].is_zero()) continue;
            c[i + j] += a.c_[i] * b.c_[j];
        }
    }
    return Polynomial(std::move(c));
}

Polynomial operator*(const Rational& s, const Polynomial& p) {
    if (s.is_zero()) return Polynomial();
    std::vector<Rational> c(p.c_.size());
    for (size_t i = 0; i < p.c_.size(); ++i) c[i] = s * p.c_[i];
    return Polynomial(std::move(c));
}

std::pair<Polynomial, Polynomial> Polynomial::divrem(const Polynomial& b) const {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (degree() < b.degree()) return {Polynomial(), *this};
    std::vector<Rational> rem = c_;
    std::vector<Rational> quo(c_.size() - b.c_.size() + 1);
    const Rational& lead = b.leading();
    for (size_t shift = quo.size(); shift-- > 0;) {
        Rational& top = rem[shift + b.c_.size() - 1];
        if (top.is_zero()) continue;
        Rational f = top / lead;
        quo[shift] = f;
        for (size_t j = 0; j < b.c_.size(); ++j) rem[shift + j] -= f * b.c_[j];
    }
    return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
}

Polynomial Polynomial::divexact(const Polynomial& b) const {
    auto [q, r] = divrem(b);
    if (!r.is_zero()) throw std::logic_error("divexact: nonzero remainder");
    return q;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<Rational> c(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) c[i - 1] = Rational(static_cast<long>(i)) * c_[i];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::monic() const {
    if (is_zero()) throw std::domain_error("monic of zero polynomial");
    if (is_monic()) return *this;
    Rational inv = Rational(1) / leading();
    return inv * *this;
}

Polynomial Polynomial::reversed() const {
    std::vector<Rational> c(c_.rbegin(), c_.rend());
    return Polynomial(std::move(c));
}

Polynomial Polynomial::compose_neg() const {
    std::vector<Rational> c = c_;
    for (size_t i = 1; i < c.size(); i += 2) c[i] = -c[i];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::compose_scale(const Rational& c) const {
    std::vector<Rational> out = c_;
    Rational pw(1);
    for (size_t i = 1; i < out.size(); ++i) {
        pw *= c;
        out[i] *= pw;
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::compose_power(long n) const {
    if (n < 1) throw std::invalid_argument("compose_power: n must be >= 1");
    if (is_zero()) return Polynomial();
    std::vector<Rational> out(static_cast<size_t>(degree()) * n + 1);
    for (size_t i = 0; i < c_.size(); ++i) out[i * n] = c_[i];
    return Polynomial(std::move(out));
}

std::string Polynomial::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        if (!first) os << (c_[i].sign() > 0 ? " + " : " - ");
        else if (c_[i].sign() < 0) os << "-";
        Rational a = c_[i].abs();
        if (i == 0 || a != Rational(1)) os << a.to_string();
        if (i >= 1) {
            if (a != Rational(1)) os << "*";
            os << "x";
            if (i >= 2) os << "^" << i;
        }
        first = false;
    }
    return os.str();
}

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() && b.is_zero()) throw std::domain_error("gcd of two zero polynomials");
    Polynomial x = a, y = b;
    // Monic remainder sequence keeps coefficient growth in check.
    while (!y.is_zero()) {
        Polynomial r = x.divrem(y).second;
        x = std::move(y);
        y = r.is_zero() ? Polynomial() : r.monic();
    }
    return x.monic();
}

Polynomial poly_lcm(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) throw std::domain_error("lcm with zero polynomial");
    return (a * b).divexact(poly_gcd(a, b)).monic();
}

}  // namespace mdpval
