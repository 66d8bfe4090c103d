#include "mdpval/roots.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mdpval {

long euler_phi(long d) {
    if (d < 1) throw std::invalid_argument("euler_phi: d must be >= 1");
    long result = d, n = d;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            result -= result / p;
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

static std::vector<long> divisors_of(long d) {
    std::vector<long> out;
    for (long e = 1; e * e <= d; ++e) {
        if (d % e == 0) {
            out.push_back(e);
            if (e != d / e) out.push_back(d / e);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Polynomial cyclotomic(long d) {
    if (d < 1) throw std::invalid_argument("cyclotomic: d must be >= 1");
    // Phi_e = (x^e - 1) / prod_{e' | e, e' < e} Phi_{e'}, built up over the
    // divisors of d in ascending order.
    std::map<long, Polynomial> phi;
    for (long e : divisors_of(d)) {
        Polynomial num = Polynomial::power_minus_one(e);
        for (long ep : divisors_of(e)) {
            if (ep == e) continue;
            num = num.divexact(phi.at(ep));
        }
        phi.emplace(e, std::move(num));
    }
    return phi.at(d);
}

CyclotomicExtraction extract_cyclotomic_part(const Polynomial& q) {
    if (q.is_zero()) throw std::domain_error("extract_cyclotomic_part: zero polynomial");
    CyclotomicExtraction out;
    out.remainder = q;
    const long deg0 = q.degree();
    // phi(d) >= sqrt(d/2), so any cyclotomic divisor has index d <= 2*deg^2.
    const long limit = 2 * deg0 * deg0;
    for (long d = 1; d <= limit; ++d) {
        if (euler_phi(d) > out.remainder.degree()) continue;
        Polynomial phi_d = cyclotomic(d);
        auto [quo, rem] = out.remainder.divrem(phi_d);
        if (!rem.is_zero()) continue;
        out.indices.push_back(d);
        out.remainder = quo;
        if (out.remainder.divrem(phi_d).second.is_zero()) out.multiplicity_violation = true;
    }
    return out;
}

std::string to_string(DiskVerdict v) {
    switch (v) {
        case DiskVerdict::yes: return "yes";
        case DiskVerdict::no: return "no";
        default: return "boundary";
    }
}

DiskVerdict all_roots_outside_unit_disk(const Polynomial& q) {
    if (q.is_zero()) throw std::domain_error("all_roots_outside_unit_disk: zero polynomial");
    if (q.degree() == 0) return DiskVerdict::yes;
    if (q.coeff(0).is_zero()) return DiskVerdict::no;  // root at 0
    // All roots of q outside the disk iff all roots of the reversal are
    // strictly inside; run the Schur-Cohn step-down on the reversal.
    Polynomial p = q.reversed();
    while (p.degree() > 0) {
        const size_t n = static_cast<size_t>(p.degree());
        const Rational a0 = p.coeff(0);
        const Rational an = p.coeff(n);
        const Rational d = an * an - a0 * a0;
        if (d.is_zero()) return DiskVerdict::boundary;
        if (d.sign() < 0) return DiskVerdict::no;
        // (an*p - a0*reverse(p)) has zero constant term; shift down one degree.
        std::vector<Rational> next(n);
        for (size_t j = 0; j < n; ++j) next[j] = an * p.coeff(j + 1) - a0 * p.coeff(n - 1 - j);
        p = Polynomial(std::move(next));
    }
    return DiskVerdict::yes;
}

DenominatorAdmissibility check_denominator(const Polynomial& q) {
    CyclotomicExtraction ex = extract_cyclotomic_part(q);
    DenominatorAdmissibility out;
    out.cyclotomic_indices = std::move(ex.indices);
    out.multiplicity_violation = ex.multiplicity_violation;
    out.remainder = std::move(ex.remainder);
    out.remainder_verdict = all_roots_outside_unit_disk(out.remainder);
    return out;
}

namespace {

struct ExactHit {
    Rational at;
};

class SturmChain {
public:
    explicit SturmChain(const Polynomial& f) {
        chain_.push_back(f);
        Polynomial d = f.derivative();
        if (!d.is_zero()) {
            chain_.push_back(normalize(d));
            while (true) {
                const Polynomial& a = chain_[chain_.size() - 2];
                const Polynomial& b = chain_.back();
                Polynomial r = a.divrem(b).second;
                if (r.is_zero()) break;
                chain_.push_back(normalize(-r));
            }
        }
    }

    // Sign variations at x, zeros skipped. With this convention
    // V(a) - V(b) counts the roots of a square-free f in (a, b].
    int variations(const Rational& x) const {
        int count = 0, prev = 0;
        for (const Polynomial& p : chain_) {
            int s = p.eval(x).sign();
            if (s == 0) continue;
            if (prev != 0 && s != prev) ++count;
            prev = s;
        }
        return count;
    }

private:
    // Positive rescaling preserves all signs.
    static Polynomial normalize(const Polynomial& p) {
        Rational inv = Rational(1) / p.leading().abs();
        return inv * p;
    }
    std::vector<Polynomial> chain_;
};

const Rational kIsolationWidth(1, 1000000000000L);

class Isolator {
public:
    Isolator(const Polynomial& f, const SturmChain& chain) : f_(f), chain_(chain) {}

    void run(const Rational& a, const Rational& b, std::vector<RationalInterval>& out) {
        int n = chain_.variations(a) - chain_.variations(b);
        if (n == 0) return;
        if (n == 1) {
            refine(a, b, out);
            return;
        }
        Rational m = midpoint(a, b);
        if (f_.eval(m).is_zero()) throw ExactHit{m};
        run(a, m, out);
        run(m, b, out);
    }

private:
    // Exactly one simple root inside (a, b): plain sign bisection.
    void refine(Rational a, Rational b, std::vector<RationalInterval>& out) const {
        int sa = f_.eval(a).sign();
        while (b - a >= kIsolationWidth) {
            Rational m = midpoint(a, b);
            int sm = f_.eval(m).sign();
            if (sm == 0) throw ExactHit{m};
            if (sm == sa) a = m;
            else b = m;
        }
        out.push_back({a, b});
    }

    static Rational midpoint(const Rational& a, const Rational& b) {
        return (a + b) / Rational(2);
    }

    const Polynomial& f_;
    const SturmChain& chain_;
};

}  // namespace

std::vector<RationalInterval> sturm_isolate(const Polynomial& q, const Rational& lo, const Rational& hi) {
    if (q.is_zero()) throw std::domain_error("sturm_isolate: zero polynomial");
    if (!(lo < hi)) throw std::invalid_argument("sturm_isolate: requires lo < hi");
    std::vector<RationalInterval> out;
    if (q.degree() == 0) return out;

    Polynomial f = q.divexact(poly_gcd(q, q.derivative()));  // square-free part
    std::vector<Rational> exact_roots;
    while (true) {
        if (f.degree() == 0) break;
        if (f.eval(lo).is_zero()) {
            exact_roots.push_back(lo);
            f = f.divexact(Polynomial({-lo, Rational(1)}));
            continue;
        }
        if (f.eval(hi).is_zero()) {
            // hi itself is outside [lo, hi); remove it so counting stays clean.
            f = f.divexact(Polynomial({-hi, Rational(1)}));
            continue;
        }
        SturmChain chain(f);
        std::vector<RationalInterval> found;
        try {
            Isolator(f, chain).run(lo, hi, found);
        } catch (const ExactHit& hit) {
            exact_roots.push_back(hit.at);
            f = f.divexact(Polynomial({-hit.at, Rational(1)}));
            continue;
        }
        out = std::move(found);
        break;
    }
    for (const Rational& r : exact_roots) {
        if (r >= lo && r < hi) out.push_back({r, r});
    }
    std::sort(out.begin(), out.end(),
              [](const RationalInterval& a, const RationalInterval& b) { return a.lo < b.lo; });
    return out;
}

std::vector<ComplexPoint> roots_numeric(const Polynomial& q) {
    if (q.degree() < 1) throw std::invalid_argument("roots_numeric: degree must be >= 1");
    std::vector<ComplexPoint> roots;

    // Factor out exact roots at 0 first.
    size_t low = 0;
    while (q.coeff(low).is_zero()) ++low;
    for (size_t i = 0; i < low; ++i) roots.emplace_back(0.0, 0.0);

    const size_t n = static_cast<size_t>(q.degree()) - low;
    if (n == 0) {
        std::sort(roots.begin(), roots.end(), [](const ComplexPoint& a, const ComplexPoint& b) {
            return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
        });
        return roots;
    }

    std::vector<std::complex<double>> c(n + 1);
    double max_abs = 0.0;
    for (size_t i = 0; i <= n; ++i) {
        c[i] = q.coeff(low + i).to_double();
        max_abs = std::max(max_abs, std::abs(c[i]));
    }

    auto eval_with_deriv = [&](std::complex<double> z) {
        std::complex<double> p = c[n], dp = 0.0;
        for (size_t i = n; i-- > 0;) {
            dp = dp * z + p;
            p = p * z + c[i];
        }
        return std::pair{p, dp};
    };

    // Cauchy bound start circle with an asymmetric angular offset.
    double radius = 0.0;
    for (size_t i = 0; i < n; ++i) radius = std::max(radius, std::abs(c[i] / c[n]));
    radius = 1.0 + radius;
    std::vector<std::complex<double>> z(n);
    const double two_pi = 6.283185307179586;
    for (size_t i = 0; i < n; ++i) {
        double ang = two_pi * (static_cast<double>(i) + 0.25) / static_cast<double>(n) + 0.4;
        z[i] = std::polar(0.5 * radius + 0.5, ang);
    }

    const int max_iter = 200;
    const double tol = 1e-12;
    for (int iter = 0; iter < max_iter; ++iter) {
        double max_step = 0.0;
        for (size_t i = 0; i < n; ++i) {
            auto [p, dp] = eval_with_deriv(z[i]);
            if (std::abs(p) == 0.0) continue;
            std::complex<double> w = (dp != 0.0) ? p / dp : std::complex<double>(1e-8, 1e-8);
            std::complex<double> sum = 0.0;
            for (size_t j = 0; j < n; ++j) {
                if (j != i) sum += 1.0 / (z[i] - z[j]);
            }
            std::complex<double> denom = 1.0 - w * sum;
            std::complex<double> step = (std::abs(denom) > 1e-300) ? w / denom : w;
            z[i] -= step;
            max_step = std::max(max_step, std::abs(step));
        }
        if (max_step < tol) break;
    }

    // Residual vetting: every returned point must actually be a root.
    for (size_t i = 0; i < n; ++i) {
        double r = std::abs(z[i]);
        double bound = 1e-8 * std::pow(1.0 + r, static_cast<double>(q.degree())) * max_abs;
        std::complex<double> p = c[n];
        for (size_t k = n; k-- > 0;) p = p * z[i] + c[k];
        if (!(std::abs(p) <= bound) || !std::isfinite(r))
            throw RootConvergenceError("roots_numeric: iteration did not converge on all roots");
        roots.push_back(z[i]);
    }
    std::sort(roots.begin(), roots.end(), [](const ComplexPoint& a, const ComplexPoint& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return roots;
}

}  // namespace mdpval
