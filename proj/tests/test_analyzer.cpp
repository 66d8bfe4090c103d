#include <doctest.h>

#include <cmath>

#include "mdpval/analyzer.hpp"
#include "test_util.hpp"

using namespace mdpval;

namespace {

const Polynomial kOne{Rational(1)};

MaxFSpec single_branch(Polynomial numer, FactoredDenominator den) {
    MaxFSpec s;
    s.branches.push_back({std::move(numer), std::move(den)});
    return s;
}

MaxFSpec geometric_spec() {
    return single_branch(Polynomial{Rational(-1)}, FactoredDenominator{{1}, {}, {}});
}

std::vector<double> coarse_grid() {
    std::vector<double> g;
    for (int i = 0; i < 25; ++i) g.push_back(0.04 * i);
    return g;
}

}  // namespace

TEST_SUITE("analyzer") {

TEST_CASE("classify_denominator worked examples") {
    Polynomial q = Polynomial{Rational(1), Rational(1)} * Polynomial{Rational(2), Rational(-1)} *
                   Polynomial{Rational(4), Rational(0), Rational(1)};
    DenominatorReport rep = classify_denominator(q);
    CHECK(rep.adm.admissible());
    CHECK(rep.adm.cyclotomic_indices == std::vector<long>{2});
    REQUIRE(rep.remainder_roots.size() == 3);
    for (ComplexPoint want : {ComplexPoint(0, -2), ComplexPoint(0, 2), ComplexPoint(2, 0)}) {
        bool found = false;
        for (const auto& r : rep.remainder_roots) found = found || std::abs(r - want) < 1e-7;
        CHECK(found);
    }

    Polynomial sq = Polynomial{Rational(1), Rational(1)} * Polynomial{Rational(1), Rational(1)};
    DenominatorReport rep2 = classify_denominator(sq);
    CHECK_FALSE(rep2.adm.admissible());
    CHECK(rep2.adm.multiplicity_violation);

    DenominatorReport rep3 = classify_denominator(Polynomial{Rational(-1, 2), Rational(1)});
    CHECK_FALSE(rep3.adm.admissible());
    CHECK(rep3.adm.remainder_verdict == DiskVerdict::no);
}

TEST_CASE("classify multiplicativity across products") {
    testutil::Rng rng(12001);
    for (int i = 0; i < 40; ++i) {
        // two random admissible factored denominators
        FactoredDenominator d1, d2;
        d1.cyclotomic_indices = {testutil::rand_long(rng, 1, 4)};
        d2.cyclotomic_indices = {testutil::rand_long(rng, 1, 4)};
        d1.real_roots = {{Rational(testutil::rand_long(rng, 2, 5)), 1}};
        d2.quadratics = {{Rational(0), Rational(testutil::rand_long(rng, 2, 5)), 1}};
        Polynomial q1 = d1.expanded(), q2 = d2.expanded();
        bool share = d1.cyclotomic_indices[0] == d2.cyclotomic_indices[0];
        bool both_adm = check_denominator(q1).admissible() && check_denominator(q2).admissible();
        CHECK(both_adm);
        CHECK(check_denominator(q1 * q2).admissible() == !share);
    }
}

TEST_CASE("analyze marks synthesized and simple models admissible") {
    MaxFSpec spec;
    spec.branches.push_back({Polynomial{Rational(2)}, FactoredDenominator{}});
    spec.branches.push_back({Polynomial{Rational(-1)}, FactoredDenominator{{1}, {}, {}}});
    AnalysisReport rep = analyze(synth_spec(spec));
    CHECK(rep.all_admissible);
    CHECK(rep.envelope.branches.size() == 2);

    testutil::Rng rng(12002);
    for (int i = 0; i < 30; ++i) {
        AnalysisReport r = analyze(testutil::rand_mdp(rng, 4, 3));
        CHECK(r.all_admissible);  // Markov chain values always land in the admissible class
    }
}

TEST_CASE("verify_exact worked examples") {
    CHECK(verify_exact(mk_geometric().mdp(), geometric_spec()).pass);

    ExactVerification fail = verify_exact(shift(mk_geometric()).mdp(), geometric_spec());
    CHECK_FALSE(fail.pass);
    CHECK(fail.actual ==
          RationalFunction(Polynomial::variable(), Polynomial{Rational(1), Rational(-1)}));

    // flagship round trip
    FactoredDenominator d3;
    d3.cyclotomic_indices = {2};
    d3.real_roots = {{Rational(2), 1}};
    d3.quadratics = {{Rational(0), Rational(4), 1}};
    DegenerateMdp m = synth_branch(kOne, d3);
    CHECK(verify_exact(m.mdp(), single_branch(kOne, d3)).pass);

    // tier mismatches
    Mdp choice = synth_max({mk_const(Rational(2)), mk_geometric()});
    CHECK_THROWS_AS(verify_exact(choice, geometric_spec()), TierMismatch);
    MaxFSpec two = geometric_spec();
    two.branches.push_back(two.branches[0]);
    CHECK_THROWS_AS(verify_exact(mk_geometric().mdp(), two), TierMismatch);
}

TEST_CASE("verify_numeric worked examples") {
    MaxFSpec spec;
    spec.branches.push_back({Polynomial{Rational(2)}, FactoredDenominator{}});
    spec.branches.push_back({Polynomial{Rational(-1)}, FactoredDenominator{{1}, {}, {}}});
    Mdp m = synth_spec(spec);

    std::vector<double> grid;
    for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
    NumericVerification ok = verify_numeric(m, spec, grid, 1e-9);
    CHECK(ok.pass);

    MaxFSpec wrong;
    wrong.branches.push_back({Polynomial{Rational(3)}, FactoredDenominator{}});
    wrong.branches.push_back({Polynomial{Rational(-1)}, FactoredDenominator{{1}, {}, {}}});
    NumericVerification bad = verify_numeric(m, wrong, grid, 1e-9);
    CHECK_FALSE(bad.pass);
    CHECK(bad.max_deviation > 0.5);  // deviation is about 1 near lambda = 0

    CHECK_THROWS_AS(verify_numeric(m, spec, {1.0}, 1e-9), std::invalid_argument);
    CHECK_THROWS_AS(verify_numeric(m, spec, {0.5}, 0.0), std::invalid_argument);
}

TEST_CASE("numeric tier never contradicts the exact tier") {
    testutil::Rng rng(12003);
    for (int i = 0; i < 12; ++i) {
        FactoredDenominator d;
        if (testutil::rand_long(rng, 0, 1)) d.cyclotomic_indices.push_back(testutil::rand_long(rng, 1, 4));
        if (testutil::rand_long(rng, 0, 1))
            d.real_roots.push_back({Rational(testutil::rand_long(rng, 2, 4)), 1});
        if (d.cyclotomic_indices.empty() && d.real_roots.empty())
            d.quadratics.push_back({Rational(0), Rational(2), 1});
        Polynomial numer = testutil::rand_nonzero_poly(rng, 2, 4, 4);
        DegenerateMdp m = synth_branch(numer, d);
        MaxFSpec spec = single_branch(numer, d);
        CHECK(verify_exact(m.mdp(), spec).pass);
        CHECK(verify_numeric(m.mdp(), spec, coarse_grid(), 1e-8).pass);
    }
}

TEST_CASE("synthesize-then-verify round trip on random single-branch specs") {
    testutil::Rng rng(12004);
    int done = 0;
    while (done < 200) {
        FactoredDenominator d;
        long degree = 0;
        for (long idx = 1; idx <= 4 && degree < 6; ++idx) {
            if (testutil::rand_long(rng, 0, 3) == 0) {
                d.cyclotomic_indices.push_back(idx);
                degree += euler_phi(idx);
            }
        }
        long nreal = testutil::rand_long(rng, 0, 2);
        for (long i = 0; i < nreal && degree < 6; ++i, ++degree) {
            Rational w(testutil::rand_long(rng, 5, 16), 4);  // |w| in (1, 4]
            if (testutil::rand_long(rng, 0, 1)) w = -w;
            d.real_roots.push_back({w, 1});
        }
        long nquad = testutil::rand_long(rng, 0, 2);
        for (long i = 0; i < nquad && degree + 1 < 6; ++i, degree += 2) {
            Rational c(testutil::rand_long(rng, 13, 24), 8);  // c in (3/2, 3]
            Rational b(testutil::rand_long(rng, -8, 8), 8);
            d.quadratics.push_back({b, c, 1});
        }
        if (degree > 6 || !d.check().empty()) continue;
        Polynomial numer = testutil::rand_nonzero_poly(rng, 4, 8, 8);

        DegenerateMdp m = synth_branch(numer, d);
        MaxFSpec spec;
        spec.branches.push_back({numer, d});
        CHECK(verify_exact(m.mdp(), spec).pass);
        ++done;
    }
}

TEST_CASE("rationalize finds bounded-denominator approximations") {
    CHECK(rationalize(0.5, 100) == Rational(1, 2));
    CHECK(rationalize(2.0, 100) == Rational(2));
    CHECK(rationalize(-0.25, 100) == Rational(-1, 4));
    CHECK(rationalize(1.0 / 3.0, 1000) == Rational(1, 3));
    CHECK(rationalize(0.333, 999) == Rational(1, 3));  // 333/1000 is out of reach at this cap
    Rational pi = rationalize(3.14159265358979, 1000);
    CHECK(pi.den() <= 1000);
    CHECK(std::abs(pi.to_double() - 3.14159265358979) < 1e-5);
    CHECK_THROWS_AS(rationalize(0.5, 0), std::invalid_argument);
}

TEST_CASE("approx_factor recovers a nicely factored denominator") {
    Polynomial q = Polynomial{Rational(1), Rational(1)} * Polynomial{Rational(2), Rational(-1)} *
                   Polynomial{Rational(4), Rational(0), Rational(1)};
    FactoredDenominator fd = approx_factor(q);
    CHECK(fd.cyclotomic_indices == std::vector<long>{2});
    REQUIRE(fd.real_roots.size() == 1);
    CHECK(fd.real_roots[0].root == Rational(2));
    CHECK(fd.real_roots[0].multiplicity == 1);
    REQUIRE(fd.quadratics.size() == 1);
    CHECK(fd.quadratics[0].b == Rational(0));
    CHECK(fd.quadratics[0].c == Rational(4));
    CHECK(fd.check().empty());
    // reconstruction matches the input exactly here because the roots are rational
    CHECK(fd.expanded().monic() == q.monic());
}

TEST_CASE("approx_factor counts multiplicities") {
    Polynomial lin{Rational(3), Rational(-1)};  // 3 - x
    FactoredDenominator fd = approx_factor(lin * lin);
    REQUIRE(fd.real_roots.size() == 1);
    CHECK(fd.real_roots[0].multiplicity == 2);
    CHECK(std::abs(fd.real_roots[0].root.to_double() - 3.0) < 1e-4);
}

TEST_CASE("admissibility strings") {
    DenominatorAdmissibility adm = check_denominator(Polynomial{Rational(1), Rational(1)});
    CHECK(admissibility_string(adm) == "admissible; cyclotomic=[2]; remainder=yes");
    DenominatorAdmissibility bad =
        check_denominator(Polynomial{Rational(1), Rational(1)} * Polynomial{Rational(1), Rational(1)});
    CHECK(admissibility_string(bad).find("inadmissible") == 0);
    CHECK(admissibility_string(bad).find("multiplicity") != std::string::npos);
}

}  // TEST_SUITE
