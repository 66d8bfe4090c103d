#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace mdpval {

// Exact rational scalar. Canonical form is maintained throughout: lowest
// terms, denominator > 0, zero stored as 0/1.
class Rational {
public:
    Rational() : v_(0) {}
    Rational(int n) : v_(n) {}
    Rational(long n) : v_(static_cast<signed long>(n)) {}
    Rational(long num, long den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : v_(q) {
        if (v_.get_den() == 0) throw std::domain_error("Rational: zero denominator");
        v_.canonicalize();
    }
    explicit Rational(const mpz_class& z) : v_(z) {}

    // Accepts "3", "-7/4", "+1/2" and plain decimals like "0.25" or "-.5".
    static Rational parse(const std::string& s);

    // Exact binary value of d (doubles are dyadic rationals).
    static Rational from_double(double d) {
        if (!std::isfinite(d)) throw std::domain_error("Rational: non-finite double");
        return Rational(mpq_class(d));
    }

    const mpz_class& num() const { return v_.get_num(); }
    const mpz_class& den() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }
    Rational abs() const { return Rational(mpq_class(::abs(v_))); }

    double to_double() const { return v_.get_d(); }
    // "num" when the denominator is 1, else "num/den".
    std::string to_string() const {
        return is_integer() ? v_.get_num().get_str() : v_.get_str();
    }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    const mpq_class& raw() const { return v_; }

private:
    mpq_class v_;
};

inline Rational Rational::parse(const std::string& raw) {
    std::string s = raw;
    if (!s.empty() && s[0] == '+') s = s.substr(1);  // mpz rejects a leading plus
    if (s.empty()) throw std::invalid_argument("Rational: empty string");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        mpz_class num, den;
        if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0)
            throw std::invalid_argument("Rational: cannot parse '" + s + "'");
        if (den == 0) throw std::domain_error("Rational: zero denominator in '" + s + "'");
        mpq_class q(num);
        q /= mpq_class(den);
        return Rational(q);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        size_t frac_len = s.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+") digits += "0";
        mpz_class num;
        if (num.set_str(digits, 10) != 0)
            throw std::invalid_argument("Rational: cannot parse '" + s + "'");
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
        mpq_class q(num);
        q /= mpq_class(den);
        return Rational(q);
    }
    mpz_class num;
    if (num.set_str(s, 10) != 0)
        throw std::invalid_argument("Rational: cannot parse '" + s + "'");
    return Rational(num);
}

}  // namespace mdpval
