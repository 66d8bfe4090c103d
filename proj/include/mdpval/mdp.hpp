#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mdpval/rational.hpp"

namespace mdpval {

// Sparse probability row: (state index, probability) entries, sorted by state
// index, zero entries omitted.
using ProbRow = std::vector<std::pair<int, Rational>>;

Rational row_sum(const ProbRow& row);
// Sorts, merges duplicate indices, drops zeros.
ProbRow normalize_row(ProbRow row);
ProbRow scale_row(const ProbRow& row, const Rational& factor);

// Finite Markov decision process with exact rational data. Indices into
// `states` are the working representation; names exist for I/O and
// provenance-readable synthesized output.
struct Mdp {
    std::vector<std::string> states;
    std::vector<std::vector<std::string>> actions;     // per state, nonempty when valid
    std::vector<std::vector<Rational>> payoff;         // [state][action]
    std::vector<std::vector<ProbRow>> transition;      // [state][action]
    std::vector<Rational> initial;                     // dense over states

    int n_states() const { return static_cast<int>(states.size()); }
    int n_actions(int s) const { return static_cast<int>(actions[s].size()); }
    int find_state(const std::string& name) const;
};

struct Violation {
    std::string location;
    std::string message;
};

std::string to_string(const Violation& v);

// Exhaustive exact validation: row sums, negativity, emptiness, structural
// totality, distribution constraints. Violations are data, not errors.
std::vector<Violation> validate(const Mdp& m);

bool is_degenerate(const Mdp& m);

// An MDP with exactly one action per state (a Markov reward chain). The
// constructor enforces degeneracy and validity.
class DegenerateMdp {
public:
    explicit DegenerateMdp(Mdp m);

    const Mdp& mdp() const { return m_; }
    int n_states() const { return m_.n_states(); }
    const Rational& payoff(int s) const { return m_.payoff[s][0]; }
    const ProbRow& row(int s) const { return m_.transition[s][0]; }
    const std::vector<Rational>& initial() const { return m_.initial; }
    const std::string& state_name(int s) const { return m_.states[s]; }

private:
    Mdp m_;
};

// Replaces the initial distribution by a single fresh state whose actions
// range over the joint action profiles on the support of the distribution;
// payoff and transitions of each profile are the expected first-stage payoff
// and the expected post-first-stage transitions. Value function is unchanged.
// The profile set is exponential in the support size for non-degenerate
// inputs, hence the guard.
Mdp determinize_initial(const Mdp& m, int max_support = 8);
DegenerateMdp determinize_initial(const DegenerateMdp& m);

// Fresh name helper: returns `base` if unused, else base#2, base#3, ...
std::string unique_state_name(const std::vector<std::string>& existing, const std::string& base);

}  // namespace mdpval
