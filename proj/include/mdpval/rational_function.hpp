#pragma once

#include <string>
#include <vector>

#include "mdpval/polynomial.hpp"

namespace mdpval {

// Reduced rational function P/Q: Q is monic and nonzero, gcd(P, Q) = 1.
// The representation is canonical, so operator== decides functional equality.
class RationalFunction {
public:
    RationalFunction() : num_(), den_({Rational(1)}) {}
    RationalFunction(Polynomial num, Polynomial den);
    explicit RationalFunction(const Polynomial& num) : RationalFunction(num, Polynomial({Rational(1)})) {}
    explicit RationalFunction(const Rational& c) : RationalFunction(Polynomial({c})) {}

    const Polynomial& numerator() const { return num_; }
    const Polynomial& denominator() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    Rational eval(const Rational& x) const;
    double eval_double(double x) const;

    RationalFunction operator-() const;
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const Rational& s, const RationalFunction& f);

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

    // f(-x), f(c*x), f(x^n)
    RationalFunction compose_neg() const { return RationalFunction(num_.compose_neg(), den_.compose_neg()); }
    RationalFunction compose_scale(const Rational& c) const {
        return RationalFunction(num_.compose_scale(c), den_.compose_scale(c));
    }
    RationalFunction compose_power(long n) const {
        return RationalFunction(num_.compose_power(n), den_.compose_power(n));
    }

    std::string to_string() const;

private:
    Polynomial num_, den_;
};

// First n coefficients of the power series of f at 0 (requires f.denominator()(0) != 0),
// by exact series division.
std::vector<Rational> taylor_coefficients(const RationalFunction& f, size_t n);

}  // namespace mdpval
