#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdpval/mdp.hpp"
#include "mdpval/polynomial.hpp"
#include "mdpval/rational_function.hpp"

namespace mdpval {

// --- Elementary chains ------------------------------------------------------

// Value identically a: payoff a once, then absorb at payoff 0.
DegenerateMdp mk_const(const Rational& a);
// Single self-looping state with payoff 1: value 1/(1-x).
DegenerateMdp mk_geometric();

// --- Value-function combinators ---------------------------------------------
// Each maps valid inputs to valid outputs and transforms the value function
// exactly as stated.

DegenerateMdp scale(const DegenerateMdp& m, const Rational& a);          // a*f(x)
DegenerateMdp alternate_negate(const DegenerateMdp& m);                  // f(-x)
DegenerateMdp shift(const DegenerateMdp& m);                             // x*f(x)
DegenerateMdp contract(const DegenerateMdp& m, const Rational& c);       // f(c*x), c in [0,1]
DegenerateMdp add(const DegenerateMdp& mf, const DegenerateMdp& mg);     // f+g
DegenerateMdp power(const DegenerateMdp& m, long n);                     // f(x^n), n >= 1
// f(x)*g(c*x) for c in (0,1): one copy of mg, one copy of mf per mg-state.
DegenerateMdp product_contract(const DegenerateMdp& mf, const DegenerateMdp& mg, const Rational& c);
DegenerateMdp mul_by_poly(const DegenerateMdp& m, const Polynomial& p);  // p(x)*f(x)

// --- Root gadgets ------------------------------------------------------------

// Value 1/prod_{d in indices} Phi_d for distinct cyclotomic indices
// (empty product gives the constant 1).
DegenerateMdp inv_cyclotomic(const std::vector<long>& indices);

class GadgetSearchExhausted : public std::runtime_error {
public:
    explicit GadgetSearchExhausted(long bound)
        : std::runtime_error("gadget search exhausted: no admissible (k,l,m) triple with exponents <= " +
                             std::to_string(bound) + "; raise the bound"),
          bound(bound) {}
    long bound;
};

// Witness for the complex-root cycle gadget: exponents k < l < m and convex
// weights with 1 - a1*x^k - a2*x^l - a3*x^m divisible by x^2 + b*x + c.
struct GadgetCertificate {
    long k = 0, l = 0, m = 0;
    std::array<Rational, 3> alpha;
    Polynomial cycle_denominator() const;  // 1 - a1*x^k - a2*x^l - a3*x^m
};

// Deterministic lexicographic search over 1 <= k < l < m <= bound with exact
// 3x3 solves in the quadratic extension defined by w^2 = -b*w - c.
// Requires b^2 < 4c and c > 1.
GadgetCertificate gadget_search(const Rational& b, const Rational& c, long bound);

// Value 1/(x^2 + b*x + c) via the cycle gadget and its exact cofactor.
DegenerateMdp inv_quadratic(const Rational& b, const Rational& c, long bound = 200,
                            GadgetCertificate* certificate = nullptr);

// Value 1/(omega - x) for rational |omega| > 1.
DegenerateMdp inv_linear(const Rational& omega);

// --- Target-function input language ------------------------------------------

struct RealRootFactor {
    Rational root;      // |root| > 1
    long multiplicity = 1;
};

struct QuadraticFactor {
    Rational b, c;      // monic x^2 + b*x + c with b^2 < 4c and c > 1
    long multiplicity = 1;
};

struct FactoredDenominator {
    std::vector<long> cyclotomic_indices;  // distinct
    std::vector<RealRootFactor> real_roots;
    std::vector<QuadraticFactor> quadratics;

    // Product in the natural factor orientation: Phi_d for unit-root parts,
    // (root - x) for real roots, x^2 + b*x + c for quadratics.
    Polynomial expanded() const;
    std::vector<std::string> check() const;  // invariant violations, empty when valid
};

struct BranchSpec {
    Polynomial numerator;
    FactoredDenominator denominator;
    RationalFunction target() const { return RationalFunction(numerator, denominator.expanded()); }
};

struct MaxFSpec {
    std::vector<BranchSpec> branches;
    std::vector<std::string> check() const;
};

// --- Synthesis pipeline --------------------------------------------------------

struct SynthesisStep {
    std::string op;
    long states = 0;  // state count after the step
    std::optional<GadgetCertificate> certificate;
};

struct SynthesisReport {
    std::vector<SynthesisStep> steps;
    long state_count = 0;
};

// Compiles one branch: cyclotomic part first, then each quadratic factor and
// each real-root factor folded in through a rational contraction, then the
// numerator. The result's value function is exactly numerator/expanded().
DegenerateMdp synth_branch(const Polynomial& numerator, const FactoredDenominator& den,
                           long gadget_bound = 200, SynthesisReport* report = nullptr);

// Choice state over degenerate branches; value is the pointwise max.
Mdp synth_max(const std::vector<DegenerateMdp>& branches);

// Full pipeline; degenerate iff the spec has a single branch.
Mdp synth_spec(const MaxFSpec& spec, long gadget_bound = 200, SynthesisReport* report = nullptr);

}  // namespace mdpval
