#include "mdpval/analyzer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mdpval {

DenominatorReport classify_denominator(const Polynomial& q) {
    DenominatorReport out;
    out.adm = check_denominator(q);
    if (out.adm.remainder.degree() >= 1) {
        try {
            out.remainder_roots = roots_numeric(out.adm.remainder);
        } catch (const RootConvergenceError& e) {
            out.root_finder_note = e.what();
        }
    }
    return out;
}

AnalysisReport analyze(const Mdp& m, long cap) {
    AnalysisReport out;
    out.envelope = policy_envelope(m, cap);
    for (const auto& br : out.envelope.branches) {
        out.per_branch.push_back(classify_denominator(br.value.denominator()));
        out.all_admissible = out.all_admissible && out.per_branch.back().adm.admissible();
    }
    return out;
}

ExactVerification verify_exact(const Mdp& m, const MaxFSpec& spec) {
    if (!is_degenerate(m))
        throw TierMismatch("verify_exact: model has choice states; use verify_numeric");
    if (spec.branches.size() != 1)
        throw TierMismatch("verify_exact: spec has several branches; use verify_numeric");
    auto violations = validate(m);
    if (!violations.empty())
        throw std::invalid_argument("verify_exact: invalid model: " + to_string(violations.front()));

    ExactVerification out;
    Policy p;
    p.choice.assign(m.n_states(), 0);
    out.actual = stationary_value_symbolic(m, p).mu_value;
    out.expected = spec.branches[0].target();
    out.pass = out.actual == out.expected;
    return out;
}

NumericVerification verify_numeric(const Mdp& m, const MaxFSpec& spec,
                                   const std::vector<double>& grid, double tol) {
    auto violations = validate(m);
    if (!violations.empty())
        throw std::invalid_argument("verify_numeric: invalid model: " + to_string(violations.front()));
    if (!(tol > 0.0)) throw std::invalid_argument("verify_numeric: tol must be positive");
    for (double g : grid)
        if (!(g >= 0.0) || g >= 1.0)
            throw std::invalid_argument("verify_numeric: grid point outside [0, 1)");

    std::vector<RationalFunction> targets;
    for (const auto& br : spec.branches) targets.push_back(br.target());

    NumericVerification out;
    out.tol = tol;
    out.certified_eps = tol;
    out.grid_points = grid.size();
    for (double g : grid) {
        ValueIterationResult vi = value_iteration(m, g, tol);
        const Rational x = Rational::from_double(g);
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& f : targets) best = std::max(best, f.eval(x).to_double());
        out.max_deviation = std::max(out.max_deviation, std::abs(vi.mu_value - best));
    }
    out.pass = out.max_deviation <= tol + out.certified_eps;
    return out;
}

Rational rationalize(double x, long max_denominator) {
    if (!std::isfinite(x)) throw std::domain_error("rationalize: non-finite input");
    if (max_denominator < 1) throw std::invalid_argument("rationalize: max_denominator must be >= 1");
    const bool neg = x < 0;
    double v = std::abs(x);

    // Continued-fraction convergents p/q until the denominator cap.
    long p0 = 1, q0 = 0;  // h_{-1}/k_{-1}
    long p1 = static_cast<long>(std::floor(v)), q1 = 1;
    double frac = v - std::floor(v);
    for (int it = 0; it < 64 && frac > 1e-15; ++it) {
        double inv = 1.0 / frac;
        double fa = std::floor(inv);
        if (fa > 1e18) break;
        long a = static_cast<long>(fa);
        if (q1 > (max_denominator - q0) / std::max(a, 1L)) break;  // next q would overflow the cap
        long p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_denominator) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        frac = inv - fa;
    }
    Rational r(p1, q1);
    return neg ? -r : r;
}

FactoredDenominator approx_factor(const Polynomial& q, long max_denominator) {
    if (q.is_zero()) throw std::domain_error("approx_factor: zero polynomial");
    CyclotomicExtraction ex = extract_cyclotomic_part(q);
    FactoredDenominator out;
    out.cyclotomic_indices = ex.indices;
    if (ex.multiplicity_violation) {
        // Leave the repeated factor in the remainder; the admissibility
        // re-check downstream rejects it with a precise message.
    }
    if (ex.remainder.degree() < 1) return out;

    // Multiple roots land within ~sqrt(machine epsilon) of each other, so the
    // real/complex split and the clustering share one coarse tolerance.
    const double cluster_tol = 1e-6;
    std::vector<ComplexPoint> roots = roots_numeric(ex.remainder);
    std::vector<bool> used(roots.size(), false);
    for (size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        if (std::abs(roots[i].imag()) <= cluster_tol) {
            long mult = 0;
            for (size_t j = i; j < roots.size(); ++j) {
                if (!used[j] && std::abs(roots[j].imag()) <= cluster_tol &&
                    std::abs(roots[j].real() - roots[i].real()) <= cluster_tol) {
                    used[j] = true;
                    ++mult;
                }
            }
            out.real_roots.push_back({rationalize(roots[i].real(), max_denominator), mult});
        } else if (roots[i].imag() > 0) {
            long mult = 0;
            for (size_t j = i; j < roots.size(); ++j) {
                if (!used[j] && roots[j].imag() > cluster_tol &&
                    std::abs(roots[j].real() - roots[i].real()) <= cluster_tol &&
                    std::abs(roots[j].imag() - roots[i].imag()) <= cluster_tol) {
                    used[j] = true;
                    ++mult;
                }
            }
            double b = -2.0 * roots[i].real();
            double c = roots[i].real() * roots[i].real() + roots[i].imag() * roots[i].imag();
            out.quadratics.push_back(
                {rationalize(b, max_denominator), rationalize(c, max_denominator), mult});
        } else {
            used[i] = true;  // conjugate partner of a positive-imag root
        }
    }
    return out;
}

std::string admissibility_string(const DenominatorAdmissibility& adm) {
    std::ostringstream os;
    os << (adm.admissible() ? "admissible" : "inadmissible");
    os << "; cyclotomic=[";
    for (size_t i = 0; i < adm.cyclotomic_indices.size(); ++i) {
        if (i) os << ",";
        os << adm.cyclotomic_indices[i];
    }
    os << "]";
    if (adm.multiplicity_violation) os << "; unit-root multiplicity > 1";
    os << "; remainder=" << to_string(adm.remainder_verdict);
    return os.str();
}

}  // namespace mdpval
