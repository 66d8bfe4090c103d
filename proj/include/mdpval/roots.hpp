#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdpval/polynomial.hpp"

namespace mdpval {

// Numeric root diagnostics live in doubles; everything that gates a decision
// stays exact.
using ComplexPoint = std::complex<double>;

long euler_phi(long d);

// d-th cyclotomic polynomial: monic, integer coefficients, degree phi(d).
Polynomial cyclotomic(long d);

struct CyclotomicExtraction {
    std::vector<long> indices;   // distinct d with Phi_d divided out once each
    Polynomial remainder;        // q / prod Phi_d
    bool multiplicity_violation = false;  // some Phi_d divides q at least twice
};

// Trial-divides every applicable cyclotomic factor out of q (q != 0).
// q == remainder * prod_{d in indices} Phi_d holds exactly.
CyclotomicExtraction extract_cyclotomic_part(const Polynomial& q);

enum class DiskVerdict { yes, no, boundary };

std::string to_string(DiskVerdict v);

// Exact decision whether every root of q lies strictly outside the unit disk,
// via the Schur-Cohn recursion on the reversed polynomial. "boundary" means
// the recursion degenerated, which happens whenever a root lies on the unit
// circle (and only in reciprocal-pair configurations otherwise).
DiskVerdict all_roots_outside_unit_disk(const Polynomial& q);

// Combined denominator admissibility: unit roots only through cyclotomic
// factors of multiplicity 1, everything else strictly outside the disk.
struct DenominatorAdmissibility {
    std::vector<long> cyclotomic_indices;
    bool multiplicity_violation = false;
    Polynomial remainder;
    DiskVerdict remainder_verdict = DiskVerdict::yes;
    bool admissible() const { return !multiplicity_violation && remainder_verdict == DiskVerdict::yes; }
};

DenominatorAdmissibility check_denominator(const Polynomial& q);

struct RationalInterval {
    Rational lo, hi;  // lo == hi is an exact root hit
    bool is_point() const { return lo == hi; }
};

// Disjoint isolating intervals (width < 1e-12) for the distinct real roots of
// q in [lo, hi), sorted; exact rational roots come back as point intervals.
std::vector<RationalInterval> sturm_isolate(const Polynomial& q, const Rational& lo, const Rational& hi);

class RootConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// All complex roots with multiplicity via Aberth-Ehrlich iteration
// (deterministic start configuration; iteration cap 200, tolerance 1e-12).
// Throws RootConvergenceError instead of returning unvetted points.
std::vector<ComplexPoint> roots_numeric(const Polynomial& q);

}  // namespace mdpval
