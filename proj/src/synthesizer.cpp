#include "mdpval/synthesizer.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "mdpval/roots.hpp"

namespace mdpval {

namespace {

Mdp degenerate_shell(std::vector<std::string> states) {
    Mdp m;
    const size_t n = states.size();
    m.states = std::move(states);
    m.actions.assign(n, {"a"});
    m.payoff.assign(n, {Rational(0)});
    m.transition.assign(n, {ProbRow{}});
    m.initial.assign(n, Rational(0));
    return m;
}

void ensure_unique_names(Mdp& m) {
    std::set<std::string> seen;
    for (auto& name : m.states) {
        if (!seen.insert(name).second) {
            name = unique_state_name(m.states, name);
            seen.insert(name);
        }
    }
}

}  // namespace

DegenerateMdp mk_const(const Rational& a) {
    Mdp m = degenerate_shell({"v", "end"});
    m.payoff[0][0] = a;
    m.transition[0][0] = {{1, Rational(1)}};
    m.transition[1][0] = {{1, Rational(1)}};
    m.initial[0] = Rational(1);
    return DegenerateMdp(std::move(m));
}

DegenerateMdp mk_geometric() {
    Mdp m = degenerate_shell({"g"});
    m.payoff[0][0] = Rational(1);
    m.transition[0][0] = {{0, Rational(1)}};
    m.initial[0] = Rational(1);
    return DegenerateMdp(std::move(m));
}

DegenerateMdp scale(const DegenerateMdp& m, const Rational& a) {
    Mdp out = m.mdp();
    for (auto& pay : out.payoff) pay[0] *= a;
    return DegenerateMdp(std::move(out));
}

DegenerateMdp alternate_negate(const DegenerateMdp& m) {
    const int n = m.n_states();
    std::vector<std::string> names;
    names.reserve(2 * n);
    for (int s = 0; s < n; ++s) names.push_back(m.state_name(s));
    for (int s = 0; s < n; ++s) names.push_back("~" + m.state_name(s));
    Mdp out = degenerate_shell(std::move(names));
    for (int s = 0; s < n; ++s) {
        out.payoff[s][0] = m.payoff(s);
        out.payoff[n + s][0] = -m.payoff(s);
        // odd stages in the original copy, even stages in the negated copy
        for (const auto& [t, p] : m.row(s)) {
            out.transition[s][0].emplace_back(n + t, p);
            out.transition[n + s][0].emplace_back(t, p);
        }
        out.initial[s] = m.initial()[s];
    }
    ensure_unique_names(out);
    return DegenerateMdp(std::move(out));
}

DegenerateMdp shift(const DegenerateMdp& m) {
    Mdp out = m.mdp();
    const int idx = out.n_states();
    out.states.push_back(unique_state_name(out.states, "sh"));
    out.actions.push_back({"a"});
    out.payoff.push_back({Rational(0)});
    ProbRow row;
    for (int s = 0; s < idx; ++s)
        if (!out.initial[s].is_zero()) row.emplace_back(s, out.initial[s]);
    out.transition.push_back({std::move(row)});
    out.initial.assign(idx + 1, Rational(0));
    out.initial[idx] = Rational(1);
    return DegenerateMdp(std::move(out));
}

DegenerateMdp contract(const DegenerateMdp& m, const Rational& c) {
    if (c.sign() < 0 || c > Rational(1))
        throw std::invalid_argument("contract: c must lie in [0, 1]");
    Mdp out = m.mdp();
    const int sink = out.n_states();
    const Rational leak = Rational(1) - c;
    for (int s = 0; s < sink; ++s) {
        ProbRow row = scale_row(out.transition[s][0], c);
        if (!leak.is_zero()) row.emplace_back(sink, leak);
        out.transition[s][0] = normalize_row(std::move(row));
    }
    out.states.push_back(unique_state_name(out.states, "end"));
    out.actions.push_back({"a"});
    out.payoff.push_back({Rational(0)});
    out.transition.push_back({ProbRow{{sink, Rational(1)}}});
    out.initial.push_back(Rational(0));
    return DegenerateMdp(std::move(out));
}

DegenerateMdp add(const DegenerateMdp& mf, const DegenerateMdp& mg) {
    const int nf = mf.n_states(), ng = mg.n_states();
    std::vector<std::string> names;
    names.reserve(nf + ng);
    for (int s = 0; s < nf; ++s) names.push_back("l:" + mf.state_name(s));
    for (int s = 0; s < ng; ++s) names.push_back("r:" + mg.state_name(s));
    Mdp out = degenerate_shell(std::move(names));
    const Rational half(1, 2);
    for (int s = 0; s < nf; ++s) {
        // prior mixes the two chains half/half; doubling payoffs restores f+g
        out.payoff[s][0] = Rational(2) * mf.payoff(s);
        out.transition[s][0] = mf.row(s);
        out.initial[s] = half * mf.initial()[s];
    }
    for (int s = 0; s < ng; ++s) {
        out.payoff[nf + s][0] = Rational(2) * mg.payoff(s);
        for (const auto& [t, p] : mg.row(s)) out.transition[nf + s][0].emplace_back(nf + t, p);
        out.initial[nf + s] = half * mg.initial()[s];
    }
    ensure_unique_names(out);
    return DegenerateMdp(std::move(out));
}

DegenerateMdp power(const DegenerateMdp& m, long n) {
    if (n < 1) throw std::invalid_argument("power: n must be >= 1");
    if (n == 1) return m;
    const int nf = m.n_states();
    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(nf) * n);
    for (long k = 1; k <= n; ++k)
        for (int s = 0; s < nf; ++s) names.push_back(m.state_name(s) + "@" + std::to_string(k));
    Mdp out = degenerate_shell(std::move(names));
    auto idx = [&](long k, int s) { return static_cast<int>((k - 1) * nf + s); };
    for (int s = 0; s < nf; ++s) {
        out.payoff[idx(1, s)][0] = m.payoff(s);
        out.initial[idx(1, s)] = m.initial()[s];
        for (long k = 1; k < n; ++k) out.transition[idx(k, s)][0] = {{idx(k + 1, s), Rational(1)}};
        for (const auto& [t, p] : m.row(s)) out.transition[idx(n, s)][0].emplace_back(idx(1, t), p);
    }
    ensure_unique_names(out);
    return DegenerateMdp(std::move(out));
}

DegenerateMdp product_contract(const DegenerateMdp& mf, const DegenerateMdp& mg, const Rational& c) {
    if (c.sign() <= 0 || c >= Rational(1))
        throw std::invalid_argument("product_contract: c must lie in (0, 1)");
    const int nf = mf.n_states(), ng = mg.n_states();

    // Distribution of the second stage of mf, and its expected first payoff.
    ProbRow second_stage;
    Rational first_payoff;
    for (int s = 0; s < nf; ++s) {
        const Rational& mu = mf.initial()[s];
        if (mu.is_zero()) continue;
        first_payoff += mu * mf.payoff(s);
        for (const auto& [t, p] : mf.row(s)) second_stage.emplace_back(t, mu * p);
    }
    second_stage = normalize_row(std::move(second_stage));

    std::vector<std::string> names;
    names.reserve(static_cast<size_t>(ng) * (nf + 1));
    for (int sg = 0; sg < ng; ++sg) names.push_back(mg.state_name(sg));
    for (int sg = 0; sg < ng; ++sg)
        for (int sf = 0; sf < nf; ++sf) names.push_back(mg.state_name(sg) + "×" + mf.state_name(sf));
    Mdp out = degenerate_shell(std::move(names));
    auto copy_idx = [&](int sg, int sf) { return ng + sg * nf + sf; };

    const Rational leak = Rational(1) - c;
    for (int sg = 0; sg < ng; ++sg) {
        out.payoff[sg][0] = leak * mg.payoff(sg) * first_payoff;
        out.initial[sg] = mg.initial()[sg];
        ProbRow row = scale_row(mg.row(sg), c);
        for (const auto& [sf, p] : second_stage) row.emplace_back(copy_idx(sg, sf), leak * p);
        out.transition[sg][0] = normalize_row(std::move(row));
        for (int sf = 0; sf < nf; ++sf) {
            out.payoff[copy_idx(sg, sf)][0] = mg.payoff(sg) * mf.payoff(sf);
            for (const auto& [t, p] : mf.row(sf))
                out.transition[copy_idx(sg, sf)][0].emplace_back(copy_idx(sg, t), p);
        }
    }
    ensure_unique_names(out);
    // The raw construction carries value (1-c)*g(c*x)*f(x); rescale.
    return scale(DegenerateMdp(std::move(out)), Rational(1) / leak);
}

DegenerateMdp mul_by_poly(const DegenerateMdp& m, const Polynomial& p) {
    if (p.is_zero()) return mk_const(Rational(0));
    std::optional<DegenerateMdp> acc;
    DegenerateMdp shifted = m;
    for (int i = 0; i <= p.degree(); ++i) {
        if (i > 0) shifted = shift(shifted);
        if (p.coeff(i).is_zero()) continue;
        DegenerateMdp term = scale(shifted, p.coeff(i));
        acc = acc ? add(*acc, term) : term;
    }
    return *acc;
}

DegenerateMdp inv_cyclotomic(const std::vector<long>& indices) {
    if (indices.empty()) return mk_const(Rational(1));
    std::set<long> seen;
    for (long d : indices) {
        if (d < 1) throw std::invalid_argument("inv_cyclotomic: indices must be positive");
        if (!seen.insert(d).second) throw std::invalid_argument("inv_cyclotomic: duplicate index");
    }
    long n = 1;
    for (long d : indices) {
        n = std::lcm(n, d);
        if (n > 100000) throw std::invalid_argument("inv_cyclotomic: lcm of indices is impractically large");
    }
    Polynomial prod = Polynomial::constant(Rational(1));
    for (long d : indices) prod = prod * cyclotomic(d);
    // 1 - x^n = -(x^n - 1) is an exact multiple of the requested product.
    Polynomial cofactor = (Rational(-1) * Polynomial::power_minus_one(n)).divexact(prod);
    return mul_by_poly(power(mk_geometric(), n), cofactor);
}

Polynomial GadgetCertificate::cycle_denominator() const {
    std::vector<Rational> c(static_cast<size_t>(m) + 1);
    c[0] = Rational(1);
    c[static_cast<size_t>(k)] -= alpha[0];
    c[static_cast<size_t>(l)] -= alpha[1];
    c[static_cast<size_t>(m)] -= alpha[2];
    return Polynomial(std::move(c));
}

GadgetCertificate gadget_search(const Rational& b, const Rational& c, long bound) {
    if (!(b * b < Rational(4) * c))
        throw std::invalid_argument("gadget_search: requires b^2 < 4c (complex conjugate pair)");
    if (!(c > Rational(1)))
        throw std::invalid_argument("gadget_search: requires c > 1 (roots outside the unit disk)");
    if (bound < 3) throw GadgetSearchExhausted(bound);

    // Powers of the root stay inside the quadratic extension: w^j = u_j + v_j*w
    // with w^2 = -b*w - c.
    std::vector<Rational> u(static_cast<size_t>(bound) + 1), v(static_cast<size_t>(bound) + 1);
    u[0] = Rational(1);
    for (long j = 0; j < bound; ++j) {
        u[j + 1] = -c * v[j];
        v[j + 1] = u[j] - b * v[j];
    }

    const Polynomial target({c, b, Rational(1)});
    for (long k = 1; k + 2 <= bound; ++k) {
        for (long l = k + 1; l + 1 <= bound; ++l) {
            for (long m = l + 1; m <= bound; ++m) {
                // Solve u-row = 1, v-row = 0, sum = 1 by Cramer's rule.
                const Rational& uk = u[k];
                const Rational& ul = u[l];
                const Rational& um = u[m];
                const Rational& vk = v[k];
                const Rational& vl = v[l];
                const Rational& vm = v[m];
                Rational det = uk * (vl - vm) - ul * (vk - vm) + um * (vk - vl);
                if (det.is_zero()) continue;
                Rational a1 = ((vl - vm) + ul * vm - um * vl) / det;
                Rational a2 = (-(vk - vm) - uk * vm + um * vk) / det;
                Rational a3 = ((vk - vl) + uk * vl - ul * vk) / det;
                if (a1.sign() < 0 || a2.sign() < 0 || a3.sign() < 0) continue;

                GadgetCertificate cert{k, l, m, {a1, a2, a3}};
                if (!cert.cycle_denominator().divrem(target).second.is_zero())
                    throw std::logic_error("gadget_search: certificate failed the divisibility check");
                return cert;
            }
        }
    }
    throw GadgetSearchExhausted(bound);
}

DegenerateMdp inv_quadratic(const Rational& b, const Rational& c, long bound,
                            GadgetCertificate* certificate) {
    GadgetCertificate cert = gadget_search(b, c, bound);
    const long m = cert.m;
    std::vector<std::string> names;
    for (long j = 1; j <= m; ++j) names.push_back("q" + std::to_string(j));
    Mdp cycle = degenerate_shell(std::move(names));
    for (long j = 0; j + 1 < m; ++j) cycle.transition[j][0] = {{static_cast<int>(j + 1), Rational(1)}};
    ProbRow back;
    if (!cert.alpha[0].is_zero()) back.emplace_back(static_cast<int>(m - cert.k), cert.alpha[0]);
    if (!cert.alpha[1].is_zero()) back.emplace_back(static_cast<int>(m - cert.l), cert.alpha[1]);
    if (!cert.alpha[2].is_zero()) back.emplace_back(0, cert.alpha[2]);
    cycle.transition[m - 1][0] = normalize_row(std::move(back));
    cycle.payoff[m - 1][0] = Rational(1);
    cycle.initial[m - 1] = Rational(1);

    Polynomial cofactor = cert.cycle_denominator().divexact(Polynomial({c, b, Rational(1)}));
    if (certificate) *certificate = cert;
    return mul_by_poly(DegenerateMdp(std::move(cycle)), cofactor);
}

DegenerateMdp inv_linear(const Rational& omega) {
    if (!(omega.abs() > Rational(1)))
        throw std::invalid_argument("inv_linear: requires |omega| > 1");
    if (omega.sign() > 0) {
        Rational inv = Rational(1) / omega;
        return scale(contract(mk_geometric(), inv), inv);
    }
    DegenerateMdp positive = inv_linear(-omega);           // 1/(|w| - x)
    return scale(alternate_negate(positive), Rational(-1));  // 1/(w - x)
}

Polynomial FactoredDenominator::expanded() const {
    Polynomial prod = Polynomial::constant(Rational(1));
    for (long d : cyclotomic_indices) prod = prod * cyclotomic(d);
    for (const auto& q : quadratics)
        for (long i = 0; i < q.multiplicity; ++i) prod = prod * Polynomial({q.c, q.b, Rational(1)});
    for (const auto& r : real_roots)
        for (long i = 0; i < r.multiplicity; ++i) prod = prod * Polynomial({r.root, Rational(-1)});
    return prod;
}

std::vector<std::string> FactoredDenominator::check() const {
    std::vector<std::string> out;
    std::set<long> seen;
    for (long d : cyclotomic_indices) {
        if (d < 1) out.push_back("cyclotomic index " + std::to_string(d) + " must be positive");
        else if (!seen.insert(d).second)
            out.push_back("duplicate cyclotomic index " + std::to_string(d) +
                          " (unit roots must have multiplicity 1)");
    }
    for (const auto& r : real_roots) {
        if (!(r.root.abs() > Rational(1)))
            out.push_back("real root " + r.root.to_string() + " must satisfy |root| > 1");
        if (r.multiplicity < 1) out.push_back("real root multiplicity must be >= 1");
    }
    for (const auto& q : quadratics) {
        if (!(q.b * q.b < Rational(4) * q.c))
            out.push_back("quadratic (b=" + q.b.to_string() + ", c=" + q.c.to_string() +
                          ") must satisfy b^2 < 4c");
        if (!(q.c > Rational(1)))
            out.push_back("quadratic (b=" + q.b.to_string() + ", c=" + q.c.to_string() +
                          ") must satisfy c > 1 (root modulus^2 = c)");
        if (q.multiplicity < 1) out.push_back("quadratic multiplicity must be >= 1");
    }
    return out;
}

std::vector<std::string> MaxFSpec::check() const {
    std::vector<std::string> out;
    if (branches.empty()) out.push_back("spec must have at least one branch");
    for (size_t i = 0; i < branches.size(); ++i)
        for (const auto& msg : branches[i].denominator.check())
            out.push_back("branch " + std::to_string(i) + ": " + msg);
    return out;
}

namespace {

// Largest t/10^k with (t/10^k)^2 <= c; precision grows until the bound
// clears 1, which it must since c > 1.
Rational rational_sqrt_below(const Rational& c) {
    mpz_class prec(1000);
    for (int tries = 0; tries < 12; ++tries) {
        mpz_class scaled_num = c.num() * prec * prec;
        mpz_class floor_val;
        mpz_fdiv_q(floor_val.get_mpz_t(), scaled_num.get_mpz_t(), c.den().get_mpz_t());
        mpz_class root;
        mpz_sqrt(root.get_mpz_t(), floor_val.get_mpz_t());
        Rational s(mpq_class(root) / mpq_class(prec));
        if (s > Rational(1)) return s;
        prec *= 1000;
    }
    throw std::logic_error("rational_sqrt_below: failed to clear 1; is c > 1?");
}

void log_step(SynthesisReport* report, const std::string& op, const DegenerateMdp& m,
              const std::optional<GadgetCertificate>& cert = std::nullopt) {
    if (!report) return;
    report->steps.push_back({op, m.n_states(), cert});
    report->state_count = m.n_states();
}

}  // namespace

DegenerateMdp synth_branch(const Polynomial& numerator, const FactoredDenominator& den,
                           long gadget_bound, SynthesisReport* report) {
    auto violations = den.check();
    if (!violations.empty()) throw std::invalid_argument("synth_branch: " + violations.front());

    DegenerateMdp m = inv_cyclotomic(den.cyclotomic_indices);
    log_step(report, "inv_cyclotomic", m);

    for (const auto& q : den.quadratics) {
        for (long rep = 0; rep < q.multiplicity; ++rep) {
            // Rational contraction constant strictly between 1 and the root
            // modulus sqrt(c); the rescaled factor is checked exactly.
            Rational s = rational_sqrt_below(q.c);
            Rational ct = (Rational(1) + s) / Rational(2);
            if (!(ct > Rational(1)) || !(ct * ct < q.c))
                throw std::logic_error("synth_branch: contraction constant out of range");
            GadgetCertificate cert;
            DegenerateMdp gadget = inv_quadratic(q.b / ct, q.c / (ct * ct), gadget_bound, &cert);
            m = scale(product_contract(m, gadget, Rational(1) / ct), Rational(1) / (ct * ct));
            log_step(report, "fold_quadratic(b=" + q.b.to_string() + ",c=" + q.c.to_string() + ")", m, cert);
        }
    }
    for (const auto& r : den.real_roots) {
        for (long rep = 0; rep < r.multiplicity; ++rep) {
            Rational ct = (Rational(1) + r.root.abs()) / Rational(2);
            DegenerateMdp gadget = inv_linear(r.root / ct);
            m = scale(product_contract(m, gadget, Rational(1) / ct), Rational(1) / ct);
            log_step(report, "fold_real_root(" + r.root.to_string() + ")", m);
        }
    }
    m = mul_by_poly(m, numerator);
    log_step(report, "mul_numerator", m);
    return m;
}

Mdp synth_max(const std::vector<DegenerateMdp>& branches) {
    if (branches.empty()) throw std::invalid_argument("synth_max: at least one branch required");

    Mdp out;
    out.states.push_back("choice");
    out.actions.emplace_back();
    out.payoff.emplace_back();
    out.transition.emplace_back();

    std::vector<int> offset(branches.size());
    for (size_t i = 0; i < branches.size(); ++i) {
        offset[i] = static_cast<int>(out.states.size());
        const Mdp& bm = branches[i].mdp();
        for (int s = 0; s < bm.n_states(); ++s) {
            out.states.push_back("b" + std::to_string(i) + ":" + bm.states[s]);
            out.actions.push_back(bm.actions[s]);
            out.payoff.push_back(bm.payoff[s]);
            ProbRow row;
            for (const auto& [t, p] : bm.transition[s][0]) row.emplace_back(offset[i] + t, p);
            out.transition.push_back({std::move(row)});
        }
    }
    // One action per branch at the choice state: expected first-stage payoff
    // and expected post-first-stage transitions of that branch.
    for (size_t i = 0; i < branches.size(); ++i) {
        const DegenerateMdp& b = branches[i];
        Rational pay;
        ProbRow row;
        for (int s = 0; s < b.n_states(); ++s) {
            const Rational& mu = b.initial()[s];
            if (mu.is_zero()) continue;
            pay += mu * b.payoff(s);
            for (const auto& [t, p] : b.row(s)) row.emplace_back(offset[i] + t, mu * p);
        }
        out.actions[0].push_back("b" + std::to_string(i));
        out.payoff[0].push_back(pay);
        out.transition[0].push_back(normalize_row(std::move(row)));
    }
    out.initial.assign(out.states.size(), Rational(0));
    out.initial[0] = Rational(1);
    return out;
}

Mdp synth_spec(const MaxFSpec& spec, long gadget_bound, SynthesisReport* report) {
    auto violations = spec.check();
    if (!violations.empty()) throw std::invalid_argument("synth_spec: " + violations.front());

    std::vector<DegenerateMdp> branch_mdps;
    for (size_t i = 0; i < spec.branches.size(); ++i) {
        SynthesisReport sub;
        branch_mdps.push_back(synth_branch(spec.branches[i].numerator, spec.branches[i].denominator,
                                           gadget_bound, report ? &sub : nullptr));
        if (report) {
            for (auto& step : sub.steps) {
                step.op = "b" + std::to_string(i) + ":" + step.op;
                report->steps.push_back(std::move(step));
            }
        }
    }
    Mdp out = synth_max(branch_mdps);
    if (report) {
        report->steps.push_back({"synth_max", out.n_states(), std::nullopt});
        report->state_count = out.n_states();
    }
    return out;
}

}  // namespace mdpval
