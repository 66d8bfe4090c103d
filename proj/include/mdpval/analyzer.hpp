#pragma once

#include <string>
#include <vector>

#include "mdpval/solver.hpp"
#include "mdpval/synthesizer.hpp"

namespace mdpval {

struct DenominatorReport {
    DenominatorAdmissibility adm;
    std::vector<ComplexPoint> remainder_roots;  // numeric diagnostics only
    std::string root_finder_note;               // set when the numeric tier failed
};

// Admissibility verdict for a value-function denominator: cyclotomic part
// extracted exactly, remainder put through the exact outside-disk test,
// numeric roots attached for human inspection.
DenominatorReport classify_denominator(const Polynomial& q);

struct AnalysisReport {
    EnvelopeReport envelope;
    std::vector<DenominatorReport> per_branch;
    bool all_admissible = true;
};

// Full forward direction: policy envelope plus per-branch classification.
AnalysisReport analyze(const Mdp& m, long cap = 4096);

class TierMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExactVerification {
    bool pass = false;
    RationalFunction actual;
    RationalFunction expected;
};

// Exact tier: degenerate model against a single-branch spec; the symbolic
// value must equal the reduced target identically.
ExactVerification verify_exact(const Mdp& m, const MaxFSpec& spec);

struct NumericVerification {
    bool pass = false;
    double max_deviation = 0.0;
    double certified_eps = 0.0;
    double tol = 0.0;
    size_t grid_points = 0;
};

// Numeric tier: value iteration against the pointwise max of branch targets;
// passes iff the worst deviation stays within tol plus the certified epsilon.
NumericVerification verify_numeric(const Mdp& m, const MaxFSpec& spec,
                                   const std::vector<double>& grid, double tol);

// Best rational approximation with bounded denominator (continued fractions).
Rational rationalize(double x, long max_denominator);

// Convenience path for raw polynomial denominators: exact cyclotomic
// extraction, numeric factoring of the remainder into linear/quadratic
// factors, coefficients rationalized with denominators <= max_denominator.
// The result approximates the input; callers must re-check admissibility.
FactoredDenominator approx_factor(const Polynomial& q, long max_denominator = 1000000);

std::string admissibility_string(const DenominatorAdmissibility& adm);

}  // namespace mdpval
