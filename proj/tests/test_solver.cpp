#include <doctest.h>

#include <cmath>

#include "mdpval/solver.hpp"
#include "mdpval/synthesizer.hpp"
#include "test_util.hpp"

using namespace mdpval;

namespace {

const RationalFunction kGeo{Polynomial{Rational(1)}, Polynomial{Rational(1), Rational(-1)}};

// Laplace expansion determinant, independent of the Bareiss path.
Polynomial laplace_det(const std::vector<std::vector<Polynomial>>& a) {
    const size_t n = a.size();
    if (n == 1) return a[0][0];
    Polynomial det;
    for (size_t j = 0; j < n; ++j) {
        if (a[0][j].is_zero()) continue;
        std::vector<std::vector<Polynomial>> minor;
        for (size_t i = 1; i < n; ++i) {
            std::vector<Polynomial> row;
            for (size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(a[i][k]);
            minor.push_back(std::move(row));
        }
        Polynomial term = a[0][j] * laplace_det(minor);
        if (j % 2 == 0) det += term;
        else det -= term;
    }
    return det;
}

std::vector<std::vector<Polynomial>> policy_matrix(const Mdp& m, const Policy& p) {
    const int n = m.n_states();
    std::vector<std::vector<Polynomial>> a(n, std::vector<Polynomial>(n));
    for (int i = 0; i < n; ++i) {
        a[i][i] = Polynomial::constant(Rational(1));
        for (const auto& [t, prob] : m.transition[i][p.choice[i]])
            a[i][t] -= Polynomial::monomial(prob, 1);
    }
    return a;
}

Mdp two_state_swap(const Rational& r1, const Rational& r2) {
    Mdp m;
    m.states = {"s1", "s2"};
    m.actions = {{"a"}, {"a"}};
    m.payoff = {{r1}, {r2}};
    m.transition = {{ProbRow{{1, Rational(1)}}}, {ProbRow{{0, Rational(1)}}}};
    m.initial = {Rational(1), Rational(0)};
    return m;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("stationary_value_symbolic worked examples") {
    // single self-looping state with payoff 1
    CHECK(stationary_value_symbolic(mk_geometric()).mu_value == kGeo);

    // deterministic swap with payoffs 1 and -1: geometric series 1 - x + x^2 - ...
    auto swap = stationary_value_symbolic(DegenerateMdp(two_state_swap(Rational(1), Rational(-1))));
    CHECK(swap.per_state[0] ==
          RationalFunction(Polynomial{Rational(1)}, Polynomial{Rational(1), Rational(1)}));

    // zero payoffs give the zero function
    Mdp z = two_state_swap(Rational(0), Rational(0));
    CHECK(stationary_value_symbolic(DegenerateMdp(z)).mu_value.is_zero());
}

TEST_CASE("symbolic solve satisfies the defining linear system") {
    testutil::Rng rng(10001);
    for (int i = 0; i < 40; ++i) {
        Mdp m = testutil::rand_mdp(rng, 6, 3);
        Policy p = testutil::rand_policy(rng, m);
        PolicyValue pv = stationary_value_symbolic(m, p);
        // v must satisfy v_s = r_s + x * sum_t q(t|s) v_t exactly
        for (int s = 0; s < m.n_states(); ++s) {
            RationalFunction rhs{Rational(m.payoff[s][p.choice[s]])};
            for (const auto& [t, prob] : m.transition[s][p.choice[s]])
                rhs = rhs + RationalFunction(Polynomial::monomial(prob, 1)) * pv.per_state[t];
            CHECK(pv.per_state[s] == rhs);
        }
    }
}

TEST_CASE("per-state denominators divide det(I - xQ)") {
    testutil::Rng rng(10002);
    for (int i = 0; i < 25; ++i) {
        Mdp m = testutil::rand_mdp(rng, 5, 2);
        Policy p = testutil::rand_policy(rng, m);
        Polynomial det = laplace_det(policy_matrix(m, p));
        PolicyValue pv = stationary_value_symbolic(m, p);
        for (const auto& v : pv.per_state) CHECK(det.divrem(v.denominator()).second.is_zero());
        CHECK(det.divrem(pv.mu_value.denominator()).second.is_zero());
    }
}

TEST_CASE("substitution at random rational discounts matches the scalar solve") {
    testutil::Rng rng(10003);
    for (int i = 0; i < 15; ++i) {
        Mdp m = testutil::rand_mdp(rng, 6, 3);
        Policy p = testutil::rand_policy(rng, m);
        PolicyValue pv = stationary_value_symbolic(m, p);
        DegenerateMdp chain = induced_chain(m, p);
        for (int k = 0; k < 20; ++k) {
            Rational lam(testutil::rand_long(rng, 0, 99), 100);
            CHECK(pv.mu_value.eval(lam) == degenerate_value_at(chain, lam));
        }
    }
}

TEST_CASE("degenerate_value_at worked examples") {
    CHECK(degenerate_value_at(mk_geometric(), Rational(1, 2)) == Rational(2));
    // discounting kills stages >= 2 at lambda = 0
    testutil::Rng rng(10004);
    for (int i = 0; i < 20; ++i) {
        DegenerateMdp m = testutil::rand_degenerate(rng, 5);
        Rational expect;
        for (int s = 0; s < m.n_states(); ++s) expect += m.initial()[s] * m.payoff(s);
        CHECK(degenerate_value_at(m, Rational(0)) == expect);
    }
    // alternation gadget at 1/3: 1/(1+x) = 3/4
    CHECK(degenerate_value_at(DegenerateMdp(two_state_swap(Rational(1), Rational(-1))),
                              Rational(1, 3)) == Rational(3, 4));
    CHECK_THROWS_AS(degenerate_value_at(mk_geometric(), Rational(1)), std::invalid_argument);
    CHECK_THROWS_AS(degenerate_value_at(mk_geometric(), Rational(-1, 2)), std::invalid_argument);
}

TEST_CASE("value_iteration worked examples") {
    // degenerate models: unique fixed point
    testutil::Rng rng(10005);
    for (int i = 0; i < 10; ++i) {
        DegenerateMdp m = testutil::rand_degenerate(rng, 5);
        for (double lam : {0.0, 0.3, 0.9}) {
            auto vi = value_iteration(m.mdp(), lam, 1e-10);
            double exact = degenerate_value_at(m, Rational::from_double(lam)).to_double();
            CHECK(std::abs(vi.mu_value - exact) <= vi.epsilon + 1e-9);
        }
    }

    // choice between the constant 2 and the geometric branch at 0.75
    Mdp choice = synth_max({mk_const(Rational(2)), mk_geometric()});
    auto vi = value_iteration(choice, 0.75, 1e-10);
    CHECK(std::abs(vi.mu_value - 4.0) <= vi.epsilon + 1e-9);

    // lambda = 0 collapses to one Bellman step
    auto vi0 = value_iteration(choice, 0.0, 1e-12);
    CHECK(vi0.mu_value == doctest::Approx(2.0));

    CHECK_THROWS_AS(value_iteration(choice, 1.0, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(value_iteration(choice, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("policy_envelope worked examples") {
    // degenerate model: a single branch, no switchpoints
    EnvelopeReport r1 = policy_envelope(mk_geometric().mdp());
    CHECK(r1.branches.size() == 1);
    CHECK(r1.switchpoints.empty());

    // max over {2, 1/(1-x)} crosses at 1/2
    EnvelopeReport r2 = policy_envelope(synth_max({mk_const(Rational(2)), mk_geometric()}));
    CHECK(r2.branches.size() == 2);
    REQUIRE(r2.switchpoints.size() == 1);
    CHECK(r2.switchpoints[0].lo <= Rational(1, 2));
    CHECK(Rational(1, 2) <= r2.switchpoints[0].hi);
    CHECK(r2.switchpoints[0].hi - r2.switchpoints[0].lo < Rational(1, 1000000000000L));

    // deterministic 2-cycle with payoffs (1, 0): denominator 1 - x^2
    EnvelopeReport r3 = policy_envelope(two_state_swap(Rational(1), Rational(0)));
    REQUIRE(r3.branches.size() == 1);
    CHECK(r3.branches[0].value.denominator() ==
          Polynomial{Rational(-1), Rational(0), Rational(1)});
    CHECK(r3.branches[0].admissibility.cyclotomic_indices == std::vector<long>{1, 2});
    CHECK(r3.branches[0].admissibility.admissible());

    // cap
    Mdp wide;
    for (int s = 0; s < 13; ++s) {
        wide.states.push_back("s" + std::to_string(s));
        wide.actions.push_back({"a", "b"});
        wide.payoff.push_back({Rational(0), Rational(1)});
        wide.transition.push_back({ProbRow{{s, Rational(1)}}, ProbRow{{s, Rational(1)}}});
        wide.initial.push_back(s == 0 ? Rational(1) : Rational(0));
    }
    CHECK_THROWS_AS(policy_envelope(wide, 4096), PolicyCapExceeded);
}

TEST_CASE("policy_envelope deduplicates identical value functions") {
    // two actions with identical dynamics collapse to one branch
    Mdp m = mk_geometric().mdp();
    m.actions[0].push_back("b");
    m.payoff[0].push_back(Rational(1));
    m.transition[0].push_back(ProbRow{{0, Rational(1)}});
    EnvelopeReport r = policy_envelope(m);
    CHECK(r.branches.size() == 1);
}

TEST_CASE("envelope max agrees with value iteration on random models") {
    testutil::Rng rng(10006);
    for (int i = 0; i < 15; ++i) {
        Mdp m = testutil::rand_mdp(rng, 4, 3);
        EnvelopeReport rep = policy_envelope(m);
        for (int g = 0; g < 25; ++g) {
            double lam = 0.04 * g;
            auto vi = value_iteration(m, lam, 1e-10);
            double best = -1e300;
            for (const auto& br : rep.branches)
                best = std::max(best, br.value.eval(Rational::from_double(lam)).to_double());
            CHECK(std::abs(best - vi.mu_value) <= vi.epsilon + 1e-9);
        }
    }
}

TEST_CASE("taylor coefficients of branch values match the chain recursion") {
    // x_{n+1} = mu Q^n r computed by sparse matrix-vector products is an
    // independent route to the series coefficients.
    testutil::Rng rng(10007);
    for (int i = 0; i < 25; ++i) {
        DegenerateMdp m = testutil::rand_degenerate(rng, 6);
        RationalFunction v = stationary_value_symbolic(m).mu_value;
        auto coeffs = taylor_coefficients(v, 12);
        std::vector<Rational> dist(m.initial());
        for (int n = 0; n < 12; ++n) {
            Rational xn;
            for (int s = 0; s < m.n_states(); ++s) xn += dist[s] * m.payoff(s);
            CHECK(coeffs[static_cast<size_t>(n)] == xn);
            std::vector<Rational> nxt(m.n_states());
            for (int s = 0; s < m.n_states(); ++s)
                for (const auto& [t, p] : m.row(s)) nxt[t] += dist[s] * p;
            dist = std::move(nxt);
        }
    }
}

TEST_CASE("taylor coefficients are bounded by the payoff range") {
    testutil::Rng rng(10008);
    for (int i = 0; i < 30; ++i) {
        DegenerateMdp m = testutil::rand_degenerate(rng, 6);
        Rational rmax;
        for (int s = 0; s < m.n_states(); ++s) rmax = std::max(rmax, m.payoff(s).abs());
        for (const auto& c : taylor_coefficients(stationary_value_symbolic(m).mu_value, 30))
            CHECK(c.abs() <= rmax);
    }
}

TEST_CASE("random chain denominators pass the admissibility check") {
    testutil::Rng rng(10009);
    for (int i = 0; i < 200; ++i) {
        DegenerateMdp m = testutil::rand_degenerate(rng, 10);
        auto adm = check_denominator(stationary_value_symbolic(m).mu_value.denominator());
        CHECK(adm.admissible());
    }
}

TEST_CASE("bareiss_solve matches Cramer on small random systems") {
    testutil::Rng rng(10010);
    for (int i = 0; i < 25; ++i) {
        const size_t n = static_cast<size_t>(testutil::rand_long(rng, 1, 4));
        std::vector<std::vector<Polynomial>> a(n, std::vector<Polynomial>(n));
        std::vector<Polynomial> b(n);
        Polynomial det;
        do {
            for (auto& row : a)
                for (auto& e : row) e = testutil::rand_poly(rng, 2, 4, 4);
            det = laplace_det(a);
        } while (det.is_zero());
        for (auto& e : b) e = testutil::rand_poly(rng, 2, 4, 4);
        auto v = bareiss_solve(a, b);
        for (size_t r = 0; r < n; ++r) {
            RationalFunction acc;
            for (size_t cidx = 0; cidx < n; ++cidx) acc = acc + RationalFunction(a[r][cidx]) * v[cidx];
            CHECK(acc == RationalFunction(b[r]));
        }
    }
}

TEST_CASE("envelope_switchpoints on hand-built branch sets") {
    // branches x/(1-x) and 1/(2-x) cross where x^2 - 3x + 1 = 0
    RationalFunction f1(Polynomial::variable(), Polynomial{Rational(1), Rational(-1)});
    RationalFunction f2(Polynomial{Rational(1)}, Polynomial{Rational(2), Rational(-1)});
    auto sp = envelope_switchpoints({f1, f2});
    REQUIRE(sp.size() == 1);
    // exact sign change of x^2-3x+1 across the reported interval
    Polynomial cross{Rational(1), Rational(-3), Rational(1)};
    CHECK(cross.eval(sp[0].lo).sign() * cross.eval(sp[0].hi).sign() <= 0);
    CHECK(sp[0].lo.to_double() == doctest::Approx(0.3819660113).epsilon(1e-6));

    // tangency without an argmax change is not a switchpoint: f and f - (x-1/2)^2
    RationalFunction g1(Polynomial{Rational(1)}, Polynomial{Rational(1)});
    RationalFunction g2 = g1 - RationalFunction(Polynomial{Rational(1, 4), Rational(-1), Rational(1)});
    CHECK(envelope_switchpoints({g1, g2}).empty());
}

}  // TEST_SUITE
