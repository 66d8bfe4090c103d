#include "mdpval/json_io.hpp"

#include <algorithm>

namespace mdpval {

namespace {

Rational parse_rational(const Json& j, const std::string& where) {
    try {
        if (j.is_string()) return Rational::parse(j.get<std::string>());
        if (j.is_number_integer()) return Rational(j.get<long>());
        if (j.is_number_float()) return Rational::from_double(j.get<double>());
    } catch (const std::exception& e) {
        throw ParseError(where + ": " + e.what());
    }
    throw ParseError(where + ": expected a rational as \"num/den\" string");
}

const Json& require(const Json& j, const std::string& key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(where + ": missing key '" + key + "'");
    return *it;
}

}  // namespace

Json rational_to_json(const Rational& r) { return r.to_string(); }

Rational rational_from_json(const Json& j) { return parse_rational(j, "rational"); }

Json polynomial_to_json(const Polynomial& p) {
    Json arr = Json::array();
    for (int i = 0; i <= p.degree(); ++i) arr.push_back(p.coeff(static_cast<size_t>(i)).to_string());
    return arr;
}

Polynomial polynomial_from_json(const Json& j) {
    if (!j.is_array()) throw ParseError("polynomial: expected an array of coefficient strings");
    std::vector<Rational> c;
    for (const auto& e : j) c.push_back(parse_rational(e, "polynomial coefficient"));
    return Polynomial(std::move(c));
}

Json mdp_to_json(const Mdp& m) {
    Json j;
    j["states"] = m.states;
    Json actions = Json::object();
    for (int s = 0; s < m.n_states(); ++s) actions[m.states[s]] = m.actions[s];
    j["actions"] = std::move(actions);
    Json payoff = Json::object();
    for (int s = 0; s < m.n_states(); ++s)
        for (int a = 0; a < m.n_actions(s); ++a)
            payoff[m.states[s] + "|" + m.actions[s][a]] = m.payoff[s][a].to_string();
    j["payoff"] = std::move(payoff);
    Json transition = Json::object();
    for (int s = 0; s < m.n_states(); ++s) {
        for (int a = 0; a < m.n_actions(s); ++a) {
            Json row = Json::object();
            for (const auto& [t, p] : m.transition[s][a]) row[m.states[t]] = p.to_string();
            transition[m.states[s] + "|" + m.actions[s][a]] = std::move(row);
        }
    }
    j["transition"] = std::move(transition);
    Json initial = Json::object();
    for (int s = 0; s < m.n_states(); ++s)
        if (!m.initial[s].is_zero()) initial[m.states[s]] = m.initial[s].to_string();
    j["initial"] = std::move(initial);
    return j;
}

LoadedMdp mdp_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("mdp: expected an object");
    LoadedMdp out;
    Mdp& m = out.mdp;

    const Json& states = require(j, "states", "mdp");
    if (!states.is_array()) throw ParseError("mdp.states: expected an array");
    for (const auto& s : states) m.states.push_back(s.get<std::string>());
    const int n = m.n_states();
    m.actions.resize(n);
    m.payoff.resize(n);
    m.transition.resize(n);
    m.initial.assign(n, Rational(0));

    const Json& actions = require(j, "actions", "mdp");
    for (int s = 0; s < n; ++s) {
        auto it = actions.find(m.states[s]);
        if (it == actions.end()) {
            out.issues.push_back({"actions[" + m.states[s] + "]", "missing (totality)"});
            continue;
        }
        for (const auto& a : *it) m.actions[s].push_back(a.get<std::string>());
    }
    for (const auto& [key, val] : actions.items()) {
        if (m.find_state(key) == -1)
            out.issues.push_back({"actions[" + key + "]", "unknown state"});
        (void)val;
    }

    for (int s = 0; s < n; ++s) {
        m.payoff[s].assign(m.actions[s].size(), Rational(0));
        m.transition[s].assign(m.actions[s].size(), ProbRow{});
    }

    const Json& payoff = require(j, "payoff", "mdp");
    std::vector<std::vector<bool>> payoff_seen(n);
    for (int s = 0; s < n; ++s) payoff_seen[s].assign(m.actions[s].size(), false);
    for (const auto& [key, val] : payoff.items()) {
        auto bar = key.find('|');
        int s = bar == std::string::npos ? -1 : m.find_state(key.substr(0, bar));
        if (s == -1) {
            out.issues.push_back({"payoff[" + key + "]", "unknown state|action key"});
            continue;
        }
        std::string an = key.substr(bar + 1);
        auto it = std::find(m.actions[s].begin(), m.actions[s].end(), an);
        if (it == m.actions[s].end()) {
            out.issues.push_back({"payoff[" + key + "]", "unknown action"});
            continue;
        }
        size_t a = static_cast<size_t>(it - m.actions[s].begin());
        m.payoff[s][a] = parse_rational(val, "payoff[" + key + "]");
        payoff_seen[s][a] = true;
    }
    for (int s = 0; s < n; ++s)
        for (size_t a = 0; a < payoff_seen[s].size(); ++a)
            if (!payoff_seen[s][a])
                out.issues.push_back(
                    {"payoff[" + m.states[s] + "|" + m.actions[s][a] + "]", "missing (totality)"});

    const Json& transition = require(j, "transition", "mdp");
    std::vector<std::vector<bool>> row_seen(n);
    for (int s = 0; s < n; ++s) row_seen[s].assign(m.actions[s].size(), false);
    for (const auto& [key, val] : transition.items()) {
        auto bar = key.find('|');
        int s = bar == std::string::npos ? -1 : m.find_state(key.substr(0, bar));
        if (s == -1) {
            out.issues.push_back({"transition[" + key + "]", "unknown state|action key"});
            continue;
        }
        std::string an = key.substr(bar + 1);
        auto it = std::find(m.actions[s].begin(), m.actions[s].end(), an);
        if (it == m.actions[s].end()) {
            out.issues.push_back({"transition[" + key + "]", "unknown action"});
            continue;
        }
        size_t a = static_cast<size_t>(it - m.actions[s].begin());
        ProbRow row;
        for (const auto& [target, prob] : val.items()) {
            int t = m.find_state(target);
            if (t == -1) {
                out.issues.push_back({"transition[" + key + "]", "unknown target state '" + target + "'"});
                continue;
            }
            row.emplace_back(t, parse_rational(prob, "transition[" + key + "][" + target + "]"));
        }
        m.transition[s][a] = normalize_row(std::move(row));
        row_seen[s][a] = true;
    }
    for (int s = 0; s < n; ++s)
        for (size_t a = 0; a < row_seen[s].size(); ++a)
            if (!row_seen[s][a])
                out.issues.push_back(
                    {"transition[" + m.states[s] + "|" + m.actions[s][a] + "]", "missing (totality)"});

    const Json& initial = require(j, "initial", "mdp");
    for (const auto& [key, val] : initial.items()) {
        int s = m.find_state(key);
        if (s == -1) {
            out.issues.push_back({"initial[" + key + "]", "unknown state"});
            continue;
        }
        m.initial[s] = parse_rational(val, "initial[" + key + "]");
    }
    return out;
}

bool SpecDocument::has_raw() const {
    return std::any_of(branches.begin(), branches.end(),
                       [](const SpecBranchDoc& b) { return b.raw.has_value(); });
}

MaxFSpec SpecDocument::to_spec() const {
    MaxFSpec spec;
    for (const auto& b : branches) {
        if (!b.factored)
            throw ParseError("spec: raw polynomial denominator requires --approx-factor");
        spec.branches.push_back({b.numerator, *b.factored});
    }
    return spec;
}

SpecDocument spec_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("spec: expected an object");
    SpecDocument out;
    const Json& branches = require(j, "branches", "spec");
    if (!branches.is_array()) throw ParseError("spec.branches: expected an array");
    for (size_t i = 0; i < branches.size(); ++i) {
        const Json& bj = branches[i];
        const std::string where = "spec.branches[" + std::to_string(i) + "]";
        SpecBranchDoc doc;
        doc.numerator = polynomial_from_json(require(bj, "numerator", where));
        const Json& den = require(bj, "denominator", where);
        if (den.contains("poly")) {
            doc.raw = polynomial_from_json(den["poly"]);
            if (doc.raw->is_zero()) throw ParseError(where + ": zero denominator polynomial");
        } else {
            FactoredDenominator fd;
            if (den.contains("cyclotomic"))
                for (const auto& d : den["cyclotomic"]) fd.cyclotomic_indices.push_back(d.get<long>());
            if (den.contains("real_roots")) {
                for (const auto& rr : den["real_roots"]) {
                    if (!rr.is_array() || rr.size() != 2)
                        throw ParseError(where + ".real_roots: expected [root, multiplicity] pairs");
                    fd.real_roots.push_back({parse_rational(rr[0], where + ".real_roots"), rr[1].get<long>()});
                }
            }
            if (den.contains("quadratics")) {
                for (const auto& qq : den["quadratics"]) {
                    if (!qq.is_array() || qq.size() != 3)
                        throw ParseError(where + ".quadratics: expected [b, c, multiplicity] triples");
                    fd.quadratics.push_back({parse_rational(qq[0], where + ".quadratics"),
                                             parse_rational(qq[1], where + ".quadratics"),
                                             qq[2].get<long>()});
                }
            }
            doc.factored = std::move(fd);
        }
        out.branches.push_back(std::move(doc));
    }
    return out;
}

Json spec_to_json(const MaxFSpec& spec) {
    Json branches = Json::array();
    for (const auto& b : spec.branches) {
        Json den;
        den["cyclotomic"] = b.denominator.cyclotomic_indices;
        Json reals = Json::array();
        for (const auto& r : b.denominator.real_roots)
            reals.push_back(Json::array({r.root.to_string(), r.multiplicity}));
        den["real_roots"] = std::move(reals);
        Json quads = Json::array();
        for (const auto& q : b.denominator.quadratics)
            quads.push_back(Json::array({q.b.to_string(), q.c.to_string(), q.multiplicity}));
        den["quadratics"] = std::move(quads);
        Json bj;
        bj["numerator"] = polynomial_to_json(b.numerator);
        bj["denominator"] = std::move(den);
        branches.push_back(std::move(bj));
    }
    Json j;
    j["branches"] = std::move(branches);
    return j;
}

Json certificate_to_json(const GadgetCertificate& cert) {
    Json j;
    j["k"] = cert.k;
    j["l"] = cert.l;
    j["m"] = cert.m;
    j["alpha"] = Json::array(
        {cert.alpha[0].to_string(), cert.alpha[1].to_string(), cert.alpha[2].to_string()});
    return j;
}

Json synthesis_report_to_json(const SynthesisReport& report) {
    Json steps = Json::array();
    for (const auto& s : report.steps) {
        Json sj;
        sj["op"] = s.op;
        sj["states"] = s.states;
        if (s.certificate) sj["certificate"] = certificate_to_json(*s.certificate);
        steps.push_back(std::move(sj));
    }
    Json j;
    j["steps"] = std::move(steps);
    j["state_count"] = report.state_count;
    return j;
}

Json ratfunc_to_json(const RationalFunction& f) {
    Json j;
    j["num"] = polynomial_to_json(f.numerator());
    j["den"] = polynomial_to_json(f.denominator());
    return j;
}

Json interval_to_json(const RationalInterval& iv) {
    return Json::array({iv.lo.to_string(), iv.hi.to_string()});
}

Json envelope_to_json(const Mdp& m, const EnvelopeReport& report) {
    Json branches = Json::array();
    for (const auto& br : report.branches) {
        Json bj;
        Json policy = Json::object();
        for (int s = 0; s < m.n_states(); ++s)
            policy[m.states[s]] = m.actions[s][br.policy.choice[s]];
        bj["policy"] = std::move(policy);
        bj["value"] = ratfunc_to_json(br.value);
        bj["admissibility"] = admissibility_string(br.admissibility);
        branches.push_back(std::move(bj));
    }
    Json switchpoints = Json::array();
    for (const auto& iv : report.switchpoints) switchpoints.push_back(interval_to_json(iv));
    Json j;
    j["branches"] = std::move(branches);
    j["switchpoints"] = std::move(switchpoints);
    return j;
}

Json analysis_to_json(const Mdp& m, const AnalysisReport& report) {
    Json j = envelope_to_json(m, report.envelope);
    Json diag = Json::array();
    for (const auto& d : report.per_branch) {
        Json dj;
        Json roots = Json::array();
        for (const auto& r : d.remainder_roots) roots.push_back(Json::array({r.real(), r.imag()}));
        dj["remainder_roots"] = std::move(roots);
        if (!d.root_finder_note.empty()) dj["note"] = d.root_finder_note;
        diag.push_back(std::move(dj));
    }
    j["diagnostics"] = std::move(diag);
    j["all_admissible"] = report.all_admissible;
    return j;
}

Json exact_verification_to_json(const ExactVerification& v) {
    Json j;
    j["tier"] = "exact";
    j["verdict"] = v.pass ? "pass" : "fail";
    if (!v.pass) {
        Json w;
        w["actual"] = ratfunc_to_json(v.actual);
        w["expected"] = ratfunc_to_json(v.expected);
        w["difference"] = ratfunc_to_json(v.actual - v.expected);
        j["witness"] = std::move(w);
    }
    return j;
}

Json numeric_verification_to_json(const NumericVerification& v) {
    Json j;
    j["tier"] = "numeric";
    j["verdict"] = v.pass ? "pass" : "fail";
    j["max_deviation"] = v.max_deviation;
    j["certified_eps"] = v.certified_eps;
    j["tol"] = v.tol;
    j["grid_points"] = v.grid_points;
    return j;
}

}  // namespace mdpval
