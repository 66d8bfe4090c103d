#include "mdpval/mdp.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace mdpval {

Rational row_sum(const ProbRow& row) {
    Rational s;
    for (const auto& [idx, p] : row) s += p;
    return s;
}

ProbRow normalize_row(ProbRow row) {
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    ProbRow out;
    for (auto& [idx, p] : row) {
        if (!out.empty() && out.back().first == idx) out.back().second += p;
        else out.emplace_back(idx, p);
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const auto& e) { return e.second.is_zero(); }),
              out.end());
    return out;
}

ProbRow scale_row(const ProbRow& row, const Rational& factor) {
    if (factor.is_zero()) return {};
    ProbRow out = row;
    for (auto& [idx, p] : out) p *= factor;
    return out;
}

int Mdp::find_state(const std::string& name) const {
    for (int i = 0; i < n_states(); ++i)
        if (states[i] == name) return i;
    return -1;
}

std::string to_string(const Violation& v) { return v.location + ": " + v.message; }

std::vector<Violation> validate(const Mdp& m) {
    std::vector<Violation> out;
    const int n = m.n_states();
    if (n == 0) out.push_back({"states", "state list is empty"});

    std::set<std::string> seen;
    for (const auto& name : m.states) {
        if (!seen.insert(name).second) out.push_back({"states", "duplicate state name '" + name + "'"});
    }

    if (static_cast<int>(m.actions.size()) != n) out.push_back({"actions", "size differs from state count"});
    if (static_cast<int>(m.payoff.size()) != n) out.push_back({"payoff", "size differs from state count"});
    if (static_cast<int>(m.transition.size()) != n)
        out.push_back({"transition", "size differs from state count"});
    if (static_cast<int>(m.initial.size()) != n) out.push_back({"initial", "size differs from state count"});

    const int cols = std::min({n, static_cast<int>(m.actions.size()), static_cast<int>(m.payoff.size()),
                               static_cast<int>(m.transition.size())});
    for (int s = 0; s < cols; ++s) {
        const std::string& sn = m.states[s];
        if (m.actions[s].empty()) out.push_back({"actions[" + sn + "]", "empty action list"});
        std::set<std::string> aseen;
        for (const auto& an : m.actions[s]) {
            if (!aseen.insert(an).second)
                out.push_back({"actions[" + sn + "]", "duplicate action name '" + an + "'"});
        }
        if (m.payoff[s].size() != m.actions[s].size())
            out.push_back({"payoff[" + sn + "]", "missing or extra entries (totality)"});
        if (m.transition[s].size() != m.actions[s].size())
            out.push_back({"transition[" + sn + "]", "missing or extra rows (totality)"});
        const size_t na = std::min(m.transition[s].size(), m.actions[s].size());
        for (size_t a = 0; a < na; ++a) {
            const std::string loc = "transition[" + sn + "|" + m.actions[s][a] + "]";
            const ProbRow& row = m.transition[s][a];
            for (const auto& [idx, p] : row) {
                if (idx < 0 || idx >= n) out.push_back({loc, "entry refers to unknown state index"});
                if (p.sign() < 0) out.push_back({loc, "negative probability " + p.to_string()});
            }
            Rational sum = row_sum(row);
            if (sum != Rational(1))
                out.push_back({loc, "row sums to " + sum.to_string() + ", expected 1"});
        }
    }

    Rational isum;
    for (int s = 0; s < static_cast<int>(m.initial.size()); ++s) {
        if (m.initial[s].sign() < 0) {
            std::string loc = s < n ? m.states[s] : std::to_string(s);
            out.push_back({"initial[" + loc + "]", "negative probability"});
        }
        isum += m.initial[s];
    }
    if (n > 0 && isum != Rational(1))
        out.push_back({"initial", "sums to " + isum.to_string() + ", expected 1"});
    return out;
}

bool is_degenerate(const Mdp& m) {
    for (const auto& al : m.actions)
        if (al.size() != 1) return false;
    return true;
}

DegenerateMdp::DegenerateMdp(Mdp m) : m_(std::move(m)) {
    if (!is_degenerate(m_)) throw std::invalid_argument("DegenerateMdp: more than one action in some state");
    auto violations = validate(m_);
    if (!violations.empty())
        throw std::invalid_argument("DegenerateMdp: invalid model: " + to_string(violations.front()));
}

std::string unique_state_name(const std::vector<std::string>& existing, const std::string& base) {
    auto used = [&](const std::string& cand) {
        return std::find(existing.begin(), existing.end(), cand) != existing.end();
    };
    if (!used(base)) return base;
    for (int k = 2;; ++k) {
        std::string cand = base + "#" + std::to_string(k);
        if (!used(cand)) return cand;
    }
}

Mdp determinize_initial(const Mdp& m, int max_support) {
    auto violations = validate(m);
    if (!violations.empty())
        throw std::invalid_argument("determinize_initial: invalid model: " + to_string(violations.front()));

    std::vector<int> support;
    for (int s = 0; s < m.n_states(); ++s)
        if (!m.initial[s].is_zero()) support.push_back(s);

    bool choices = false;
    for (int s : support)
        if (m.n_actions(s) > 1) choices = true;
    if (choices && static_cast<int>(support.size()) > max_support)
        throw std::invalid_argument(
            "determinize_initial: joint action profiles are exponential in the support size; "
            "support exceeds " + std::to_string(max_support));

    Mdp out = m;
    const int init_idx = out.n_states();
    out.states.push_back(unique_state_name(out.states, "init"));
    out.actions.emplace_back();
    out.payoff.emplace_back();
    out.transition.emplace_back();
    out.initial.assign(out.states.size(), Rational(0));
    out.initial[init_idx] = Rational(1);

    // Enumerate one action per support state (mixed-radix counter).
    std::vector<int> profile(support.size(), 0);
    while (true) {
        std::string name;
        Rational pay;
        ProbRow row;
        for (size_t i = 0; i < support.size(); ++i) {
            const int s = support[i];
            const int a = profile[i];
            if (!name.empty()) name += "×";
            name += m.states[s] + ":" + m.actions[s][a];
            pay += m.initial[s] * m.payoff[s][a];
            for (const auto& [idx, p] : m.transition[s][a]) row.emplace_back(idx, m.initial[s] * p);
        }
        if (name.empty()) name = "noop";  // unreachable for valid input
        out.actions[init_idx].push_back(name);
        out.payoff[init_idx].push_back(pay);
        out.transition[init_idx].push_back(normalize_row(std::move(row)));

        size_t pos = 0;
        while (pos < support.size() && ++profile[pos] == m.n_actions(support[pos])) {
            profile[pos] = 0;
            ++pos;
        }
        if (pos == support.size()) break;
    }
    return out;
}

DegenerateMdp determinize_initial(const DegenerateMdp& m) {
    return DegenerateMdp(determinize_initial(m.mdp()));
}

}  // namespace mdpval
