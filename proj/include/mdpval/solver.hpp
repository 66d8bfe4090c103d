#pragma once

#include <stdexcept>
#include <vector>

#include "mdpval/mdp.hpp"
#include "mdpval/rational_function.hpp"
#include "mdpval/roots.hpp"

namespace mdpval {

// Pure stationary policy: one action index per state.
struct Policy {
    std::vector<int> choice;
};

struct PolicyValue {
    std::vector<RationalFunction> per_state;
    RationalFunction mu_value;  // initial-distribution average
};

// Exact per-state discounted value of the chain induced by a pure stationary
// policy, as reduced rational functions of the discount factor: solves
// (I - x*Q) v = r over the polynomial ring by fraction-free Bareiss
// elimination, one strongly connected component at a time.
PolicyValue stationary_value_symbolic(const Mdp& m, const Policy& p);
PolicyValue stationary_value_symbolic(const DegenerateMdp& m);

// The Markov reward chain a policy induces.
DegenerateMdp induced_chain(const Mdp& m, const Policy& p);

// Exact value at a fixed rational discount factor in [0, 1).
Rational degenerate_value_at(const DegenerateMdp& m, const Rational& lambda);

struct ValueIterationResult {
    std::vector<double> values;
    double mu_value = 0.0;
    double epsilon = 0.0;  // certified a-priori error bound
    long iterations = 0;
};

// Bellman iteration from the zero vector for a-priori N with
// lambda^N * R_max / (1 - lambda) <= eps.
ValueIterationResult value_iteration(const Mdp& m, double lambda, double eps);

class PolicyCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EnvelopeBranch {
    Policy policy;  // representative policy attaining this value function
    RationalFunction value;
    DenominatorAdmissibility admissibility;
};

struct EnvelopeReport {
    std::vector<EnvelopeBranch> branches;          // deduplicated by exact function equality
    std::vector<RationalInterval> switchpoints;    // argmax changes over [0, 1)
};

// Enumerates all pure stationary policies (throws PolicyCapExceeded beyond
// cap), computes each initial-distribution value exactly, checks denominator
// admissibility per branch, and isolates argmax switchpoints on [0, 1).
EnvelopeReport policy_envelope(const Mdp& m, long cap = 4096);

// Switchpoint sweep over arbitrary branch functions with no poles on [0, 1);
// exposed for direct testing.
std::vector<RationalInterval> envelope_switchpoints(const std::vector<RationalFunction>& branches);

// Dense fraction-free Bareiss solve of A v = b over the polynomial ring
// (A square and nonsingular); exposed for direct testing.
std::vector<RationalFunction> bareiss_solve(std::vector<std::vector<Polynomial>> a,
                                            std::vector<Polynomial> b);

}  // namespace mdpval
