#include "mdpval/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mdpval {

namespace {

void require_valid_policy(const Mdp& m, const Policy& p) {
    if (static_cast<int>(p.choice.size()) != m.n_states())
        throw std::invalid_argument("policy: choice vector size differs from state count");
    for (int s = 0; s < m.n_states(); ++s)
        if (p.choice[s] < 0 || p.choice[s] >= m.n_actions(s))
            throw std::invalid_argument("policy: action index out of range at state " + m.states[s]);
}

// Tarjan SCC; components come out with successors first, so they can be
// solved in emission order.
std::vector<std::vector<int>> scc_components(const std::vector<ProbRow>& rows) {
    const int n = static_cast<int>(rows.size());
    std::vector<int> index(n, -1), lowlink(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    std::vector<std::vector<int>> components;
    int counter = 0;

    struct Frame {
        int v;
        size_t edge;
    };
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> call;
        call.push_back({root, 0});
        index[root] = lowlink[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.edge < rows[f.v].size()) {
                int w = rows[f.v][f.edge++].first;
                if (index[w] == -1) {
                    index[w] = lowlink[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    lowlink[f.v] = std::min(lowlink[f.v], index[w]);
                }
            } else {
                if (lowlink[f.v] == index[f.v]) {
                    std::vector<int> comp;
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp.push_back(w);
                        if (w == f.v) break;
                    }
                    components.push_back(std::move(comp));
                }
                int v = f.v;
                call.pop_back();
                if (!call.empty()) {
                    int parent = call.back().v;
                    lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
                }
            }
        }
    }
    return components;
}

}  // namespace

std::vector<RationalFunction> bareiss_solve(std::vector<std::vector<Polynomial>> a,
                                            std::vector<Polynomial> b) {
    const size_t k = a.size();
    for (size_t i = 0; i < k; ++i) a[i].push_back(std::move(b[i]));

    Polynomial prev = Polynomial::constant(Rational(1));
    for (size_t col = 0; col + 1 < k; ++col) {
        if (a[col][col].is_zero()) {
            size_t r = col + 1;
            while (r < k && a[r][col].is_zero()) ++r;
            if (r == k) throw std::logic_error("bareiss_solve: singular matrix");
            std::swap(a[col], a[r]);
        }
        const Polynomial pivot = a[col][col];
        for (size_t i = col + 1; i < k; ++i) {
            for (size_t j = col + 1; j <= k; ++j)
                a[i][j] = (a[i][j] * pivot - a[i][col] * a[col][j]).divexact(prev);
            a[i][col] = Polynomial();
        }
        prev = pivot;
    }

    std::vector<RationalFunction> v(k);
    for (size_t i = k; i-- > 0;) {
        if (a[i][i].is_zero()) throw std::logic_error("bareiss_solve: singular matrix");
        RationalFunction acc(a[i][k]);
        for (size_t j = i + 1; j < k; ++j) acc = acc - RationalFunction(a[i][j]) * v[j];
        v[i] = acc / RationalFunction(a[i][i]);
    }
    return v;
}

PolicyValue stationary_value_symbolic(const Mdp& m, const Policy& p) {
    require_valid_policy(m, p);
    const int n = m.n_states();
    std::vector<ProbRow> rows(n);
    for (int s = 0; s < n; ++s) rows[s] = m.transition[s][p.choice[s]];

    const Polynomial x = Polynomial::variable();
    std::vector<RationalFunction> v(n);
    for (const auto& comp : scc_components(rows)) {
        const size_t k = comp.size();
        std::vector<int> pos(n, -1);
        for (size_t i = 0; i < k; ++i) pos[comp[i]] = static_cast<int>(i);

        // Right-hand side r_C + x * Q_{C,downstream} v_downstream, with the
        // common denominator cleared so the block solve stays polynomial.
        std::vector<RationalFunction> rhs(k);
        for (size_t i = 0; i < k; ++i) {
            const int s = comp[i];
            RationalFunction acc(Rational(m.payoff[s][p.choice[s]]));
            for (const auto& [t, prob] : rows[s]) {
                if (pos[t] == -1) acc = acc + RationalFunction(Polynomial::monomial(prob, 1)) * v[t];
            }
            rhs[i] = acc;
        }
        Polynomial common = Polynomial::constant(Rational(1));
        for (const auto& f : rhs)
            if (f.denominator().degree() > 0) common = poly_lcm(common, f.denominator());
        std::vector<Polynomial> nvec(k);
        for (size_t i = 0; i < k; ++i)
            nvec[i] = rhs[i].numerator() * common.divexact(rhs[i].denominator());

        std::vector<std::vector<Polynomial>> a(k, std::vector<Polynomial>(k));
        for (size_t i = 0; i < k; ++i) {
            const int s = comp[i];
            a[i][i] = Polynomial::constant(Rational(1));
            for (const auto& [t, prob] : rows[s]) {
                if (pos[t] != -1) a[i][static_cast<size_t>(pos[t])] -= Polynomial::monomial(prob, 1);
            }
        }

        std::vector<RationalFunction> w = bareiss_solve(std::move(a), std::move(nvec));
        const RationalFunction common_rf{Polynomial(common)};
        for (size_t i = 0; i < k; ++i) v[comp[i]] = w[i] / common_rf;
    }

    PolicyValue out;
    out.per_state = std::move(v);
    for (int s = 0; s < n; ++s) {
        if (!m.initial[s].is_zero())
            out.mu_value = out.mu_value + m.initial[s] * out.per_state[s];
    }
    return out;
}

PolicyValue stationary_value_symbolic(const DegenerateMdp& m) {
    Policy p;
    p.choice.assign(m.n_states(), 0);
    return stationary_value_symbolic(m.mdp(), p);
}

DegenerateMdp induced_chain(const Mdp& m, const Policy& p) {
    require_valid_policy(m, p);
    Mdp out;
    out.states = m.states;
    out.initial = m.initial;
    out.actions.resize(m.states.size());
    out.payoff.resize(m.states.size());
    out.transition.resize(m.states.size());
    for (int s = 0; s < m.n_states(); ++s) {
        out.actions[s] = {m.actions[s][p.choice[s]]};
        out.payoff[s] = {m.payoff[s][p.choice[s]]};
        out.transition[s] = {m.transition[s][p.choice[s]]};
    }
    return DegenerateMdp(std::move(out));
}

Rational degenerate_value_at(const DegenerateMdp& m, const Rational& lambda) {
    if (lambda.sign() < 0 || lambda >= Rational(1))
        throw std::invalid_argument("degenerate_value_at: discount factor must lie in [0, 1)");
    const int n = m.n_states();
    std::vector<ProbRow> rows(n);
    for (int s = 0; s < n; ++s) rows[s] = m.row(s);

    std::vector<Rational> v(n);
    for (const auto& comp : scc_components(rows)) {
        const size_t k = comp.size();
        std::vector<int> pos(n, -1);
        for (size_t i = 0; i < k; ++i) pos[comp[i]] = static_cast<int>(i);

        // Dense Gaussian elimination on the component block.
        std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k + 1));
        for (size_t i = 0; i < k; ++i) {
            const int s = comp[i];
            a[i][i] = Rational(1);
            a[i][k] = m.payoff(s);
            for (const auto& [t, prob] : rows[s]) {
                if (pos[t] != -1) a[i][static_cast<size_t>(pos[t])] -= lambda * prob;
                else a[i][k] += lambda * prob * v[t];
            }
        }
        for (size_t col = 0; col + 1 < k; ++col) {
            if (a[col][col].is_zero()) {
                size_t r = col + 1;
                while (r < k && a[r][col].is_zero()) ++r;
                if (r == k) throw std::logic_error("degenerate_value_at: singular system");
                std::swap(a[col], a[r]);
            }
            for (size_t i = col + 1; i < k; ++i) {
                if (a[i][col].is_zero()) continue;
                Rational f = a[i][col] / a[col][col];
                for (size_t j = col; j <= k; ++j) a[i][j] -= f * a[col][j];
            }
        }
        for (size_t i = k; i-- > 0;) {
            Rational acc = a[i][k];
            for (size_t j = i + 1; j < k; ++j) acc -= a[i][j] * v[comp[j]];
            if (a[i][i].is_zero()) throw std::logic_error("degenerate_value_at: singular system");
            v[comp[i]] = acc / a[i][i];
        }
    }

    Rational out;
    for (int s = 0; s < n; ++s) out += m.initial()[s] * v[s];
    return out;
}

ValueIterationResult value_iteration(const Mdp& m, double lambda, double eps) {
    if (!(lambda >= 0.0) || lambda >= 1.0)
        throw std::invalid_argument("value_iteration: discount factor must lie in [0, 1)");
    if (!(eps > 0.0)) throw std::invalid_argument("value_iteration: eps must be positive");

    const int n = m.n_states();
    double rmax = 0.0;
    std::vector<std::vector<double>> pay(n);
    std::vector<std::vector<std::vector<std::pair<int, double>>>> rows(n);
    for (int s = 0; s < n; ++s) {
        pay[s].resize(m.n_actions(s));
        rows[s].resize(m.n_actions(s));
        for (int a = 0; a < m.n_actions(s); ++a) {
            pay[s][a] = m.payoff[s][a].to_double();
            rmax = std::max(rmax, std::abs(pay[s][a]));
            for (const auto& [t, p] : m.transition[s][a]) rows[s][a].emplace_back(t, p.to_double());
        }
    }

    ValueIterationResult out;
    out.epsilon = eps;
    out.values.assign(n, 0.0);
    long iters = 0;
    if (rmax > 0.0 && lambda > 0.0) {
        // Smallest N with lambda^N * rmax / (1 - lambda) <= eps.
        double need = std::log(eps * (1.0 - lambda) / rmax) / std::log(lambda);
        iters = need <= 0.0 ? 0 : static_cast<long>(std::ceil(need));
    } else if (rmax > 0.0) {
        iters = 1;  // lambda == 0: a single Bellman step is exact
    }
    out.iterations = iters;

    std::vector<double> cur(n, 0.0), next(n, 0.0);
    for (long it = 0; it < iters; ++it) {
        for (int s = 0; s < n; ++s) {
            double best = -std::numeric_limits<double>::infinity();
            for (int a = 0; a < m.n_actions(s); ++a) {
                double acc = pay[s][a];
                for (const auto& [t, p] : rows[s][a]) acc += lambda * p * cur[t];
                best = std::max(best, acc);
            }
            next[s] = best;
        }
        std::swap(cur, next);
    }
    out.values = cur;
    for (int s = 0; s < n; ++s) out.mu_value += m.initial[s].to_double() * cur[s];
    return out;
}

namespace {

// Sign of f immediately to the right of x, for f with no pole at x: the sign
// of the first nonvanishing numerator derivative, times the denominator sign.
int sign_right_of(const RationalFunction& f, const Rational& x) {
    const int ds = f.denominator().eval(x).sign();
    if (ds == 0) throw std::logic_error("sign_right_of: pole at comparison point");
    Polynomial n = f.numerator();
    if (n.is_zero()) return 0;
    while (true) {
        int s = n.eval(x).sign();
        if (s != 0) return s * ds;
        n = n.derivative();
        if (n.is_zero()) return 0;
    }
}

size_t argmax_right_of(const std::vector<RationalFunction>& fs, const Rational& x) {
    size_t best = 0;
    for (size_t i = 1; i < fs.size(); ++i) {
        if (sign_right_of(fs[i] - fs[best], x) > 0) best = i;
    }
    return best;
}

// Numerator of f_i - f_j; its roots contain every crossing.
Polynomial cross_poly(const RationalFunction& a, const RationalFunction& b) {
    return a.numerator() * b.denominator() - b.numerator() * a.denominator();
}

}  // namespace

std::vector<RationalInterval> envelope_switchpoints(const std::vector<RationalFunction>& branches) {
    std::vector<RationalInterval> out;
    if (branches.size() < 2) return out;

    const Rational one(1);
    Rational t(0);
    size_t cur = argmax_right_of(branches, t);

    for (int guard = 0; guard < 100000; ++guard) {
        // Earliest remaining crossing of the current top branch.
        bool have = false;
        RationalInterval first{};
        std::vector<std::vector<RationalInterval>> all(branches.size());
        for (size_t j = 0; j < branches.size(); ++j) {
            if (j == cur) continue;
            Polynomial p = cross_poly(branches[cur], branches[j]);
            if (p.is_zero()) continue;  // identical functions are deduplicated upstream
            while (p.eval(one).is_zero()) p = p.divexact(Polynomial({-one, Rational(1)}));
            while (p.eval(t).is_zero()) p = p.divexact(Polynomial({-t, Rational(1)}));
            if (p.degree() < 1) continue;
            all[j] = sturm_isolate(p, t, one);
            if (!all[j].empty() && (!have || all[j].front().lo < first.lo)) {
                first = all[j].front();
                have = true;
            }
        }
        if (!have) break;

        // Merge every candidate interval overlapping the earliest one, so the
        // continuation point clears all crossings in the cluster.
        Rational lo = first.lo, hi = first.hi;
        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& ivs : all) {
                for (const auto& iv : ivs) {
                    if (iv.lo <= hi && iv.hi >= lo && (iv.lo < lo || iv.hi > hi)) {
                        if (iv.lo < lo) lo = iv.lo;
                        if (iv.hi > hi) hi = iv.hi;
                        grew = true;
                    }
                }
            }
        }

        size_t next = argmax_right_of(branches, hi);
        if (next != cur) {
            out.push_back({lo, hi});
            cur = next;
        }
        t = hi;
    }
    return out;
}

EnvelopeReport policy_envelope(const Mdp& m, long cap) {
    auto violations = validate(m);
    if (!violations.empty())
        throw std::invalid_argument("policy_envelope: invalid model: " + to_string(violations.front()));

    long count = 1;
    for (int s = 0; s < m.n_states(); ++s) {
        count *= m.n_actions(s);
        if (count > cap)
            throw PolicyCapExceeded("policy count exceeds cap " + std::to_string(cap));
    }

    EnvelopeReport report;
    Policy p;
    p.choice.assign(m.n_states(), 0);
    while (true) {
        RationalFunction value = stationary_value_symbolic(m, p).mu_value;
        bool known = false;
        for (const auto& br : report.branches) {
            if (br.value == value) {
                known = true;
                break;
            }
        }
        if (!known) {
            EnvelopeBranch br;
            br.policy = p;
            br.value = value;
            br.admissibility = check_denominator(value.denominator());
            report.branches.push_back(std::move(br));
        }

        int pos = 0;
        while (pos < m.n_states() && ++p.choice[pos] == m.n_actions(pos)) {
            p.choice[pos] = 0;
            ++pos;
        }
        if (pos == m.n_states()) break;
    }

    std::vector<RationalFunction> fs;
    fs.reserve(report.branches.size());
    for (const auto& br : report.branches) fs.push_back(br.value);
    report.switchpoints = envelope_switchpoints(fs);
    return report;
}

}  // namespace mdpval
