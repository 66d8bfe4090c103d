#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "mdpval/rational.hpp"

namespace mdpval {

// Univariate polynomial over Rational in the discount variable.
// Coefficients are stored in ascending degree order with no trailing zeros;
// the zero polynomial has an empty coefficient list and degree -1.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(std::initializer_list<Rational> coeffs) : c_(coeffs) { trim(); }
    explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Polynomial constant(const Rational& a) { return Polynomial({a}); }
    static Polynomial variable() { return Polynomial({Rational(0), Rational(1)}); }
    // coeff * x^k
    static Polynomial monomial(const Rational& coeff, size_t k);
    // x^n - 1
    static Polynomial power_minus_one(long n);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == Rational(1); }
    bool is_monic() const { return !c_.empty() && c_.back() == Rational(1); }

    // Coefficient of x^i; zero beyond the degree.
    const Rational& coeff(size_t i) const {
        static const Rational kZero;
        return i < c_.size() ? c_[i] : kZero;
    }
    const Rational& leading() const;
    const std::vector<Rational>& coeffs() const { return c_; }

    Rational eval(const Rational& x) const;
    double eval_double(double x) const;

    Polynomial operator-() const;
    Polynomial& operator+=(const Polynomial& o);
    Polynomial& operator-=(const Polynomial& o);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Rational& s, const Polynomial& p);

    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    // Euclidean division: returns (q, r) with *this = q*b + r, deg r < deg b.
    std::pair<Polynomial, Polynomial> divrem(const Polynomial& b) const;
    // Division known to be exact; throws std::logic_error on nonzero remainder.
    Polynomial divexact(const Polynomial& b) const;

    Polynomial derivative() const;
    Polynomial monic() const;
    // Coefficient reversal: x^deg * p(1/x).
    Polynomial reversed() const;
    // p(-x)
    Polynomial compose_neg() const;
    // p(c*x)
    Polynomial compose_scale(const Rational& c) const;
    // p(x^n), n >= 1
    Polynomial compose_power(long n) const;

    std::string to_string() const;

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Rational> c_;
};

// Monic greatest common divisor; gcd(p, 0) = monic(p). Both zero is an error.
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);
// Monic least common multiple.
Polynomial poly_lcm(const Polynomial& a, const Polynomial& b);

}  // namespace mdpval
