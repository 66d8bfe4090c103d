// mdpval: bidirectional toolkit for discounted MDP value functions.
//
// Subcommands: check-spec, synth, value, analyze, verify, roundtrip.
// Exit codes: 0 pass, 1 verification failure, 2 invalid input,
// 3 parse error, 4 gadget search exhaustion, 5 policy cap exceeded.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mdpval/analyzer.hpp"
#include "mdpval/json_io.hpp"
#include "mdpval/mdp.hpp"
#include "mdpval/solver.hpp"
#include "mdpval/synthesizer.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitParse = 3;
constexpr int kExitGadget = 4;
constexpr int kExitCap = 5;

using mdpval::Json;

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mdpval::ParseError("cannot open file: " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw mdpval::ParseError(std::string("json parse error in ") + path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

void stamp(Json& j, bool timestamps) {
    if (!timestamps) return;
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::ostringstream os;
    os << std::put_time(std::gmtime(&t), "%FT%TZ");
    j["timestamp"] = os.str();
}

struct SpecLoadResult {
    mdpval::MaxFSpec spec;
    std::vector<size_t> approximated_branches;
    // Original numerator/denominator pairs, aligned with approximated_branches.
    std::vector<mdpval::Polynomial> raw_numerators;
    std::vector<mdpval::Polynomial> raw_denominators;
};

// Loads a spec document; raw polynomial denominators are admitted only when
// approx is set, in which case they are factored numerically and the branch
// numerator is rescaled by the leading-coefficient mismatch.
SpecLoadResult load_spec(const std::string& path, bool approx, long max_denominator = 1000000) {
    Json j = read_json_file(path);
    mdpval::SpecDocument doc = mdpval::spec_from_json(j);
    SpecLoadResult out;
    for (size_t i = 0; i < doc.branches.size(); ++i) {
        auto& b = doc.branches[i];
        if (!b.raw) {
            out.spec.branches.push_back({b.numerator, *b.factored});
            continue;
        }
        if (!approx)
            throw std::invalid_argument("spec branch " + std::to_string(i) +
                                        ": raw polynomial denominator requires --approx-factor");
        mdpval::FactoredDenominator fd = mdpval::approx_factor(*b.raw, max_denominator);
        mdpval::Polynomial expanded = fd.expanded();
        if (expanded.is_zero() || expanded.degree() != b.raw->degree())
            throw mdpval::ParseError("spec branch " + std::to_string(i) +
                                     ": numeric factoring lost degree; cannot approximate");
        // raw = adjust * expanded up to approximation error; fold adjust into
        // the numerator so the branch stays a faithful target.
        mdpval::Rational adjust = b.raw->leading() / expanded.leading();
        mdpval::Polynomial numer = (mdpval::Rational(1) / adjust) * b.numerator;
        out.spec.branches.push_back({numer, fd});
        out.approximated_branches.push_back(i);
        out.raw_numerators.push_back(b.numerator);
        out.raw_denominators.push_back(*b.raw);
    }
    return out;
}

int report_spec_violations(const mdpval::MaxFSpec& spec) {
    auto violations = spec.check();
    if (violations.empty()) return kExitPass;
    for (const auto& v : violations) std::cerr << "violation: " << v << "\n";
    return kExitInvalid;
}

mdpval::Mdp load_mdp_strict(const std::string& path) {
    mdpval::LoadedMdp loaded = mdpval::mdp_from_json(read_json_file(path));
    auto violations = mdpval::validate(loaded.mdp);
    for (const auto& v : loaded.issues) std::cerr << "violation: " << to_string(v) << "\n";
    for (const auto& v : violations) std::cerr << "violation: " << to_string(v) << "\n";
    if (!loaded.issues.empty() || !violations.empty())
        throw std::invalid_argument("invalid MDP file: " + path);
    return loaded.mdp;
}

std::vector<mdpval::Rational> parse_grid(const std::string& s) {
    // "lo:hi:step" with rational or decimal components
    std::vector<std::string> parts;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ':')) parts.push_back(tok);
    if (parts.size() != 3) throw mdpval::ParseError("grid: expected lo:hi:step");
    mdpval::Rational lo = mdpval::Rational::parse(parts[0]);
    mdpval::Rational hi = mdpval::Rational::parse(parts[1]);
    mdpval::Rational step = mdpval::Rational::parse(parts[2]);
    if (step.sign() <= 0) throw mdpval::ParseError("grid: step must be positive");
    std::vector<mdpval::Rational> out;
    for (mdpval::Rational x = lo; x <= hi; x += step) out.push_back(x);
    return out;
}

std::vector<double> numeric_grid(const std::string& spec_str) {
    std::vector<double> g;
    if (spec_str.empty()) {
        for (int i = 1; i <= 99; ++i) g.push_back(static_cast<double>(i) / 100.0);
    } else {
        for (const auto& x : parse_grid(spec_str)) g.push_back(x.to_double());
    }
    return g;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mdpval: exact toolkit for discounted MDP value functions"};
    app.require_subcommand(1);

    bool timestamps = false;
    app.add_flag("--timestamps", timestamps, "include a timestamp in JSON reports");

    std::string spec_path, mdp_path, out_path;
    long gadget_bound = 200;
    long cap = 4096;
    double tol = 1e-9;
    bool approx = false;
    std::string lambda_str, grid_str;

    auto* check = app.add_subcommand("check-spec", "validate a target-spec file");
    check->add_option("spec", spec_path, "spec JSON file")->required();
    check->add_flag("--approx-factor", approx, "admit raw polynomial denominators (numeric factoring)");

    auto* synth = app.add_subcommand("synth", "compile a spec into an MDP");
    synth->add_option("spec", spec_path, "spec JSON file")->required();
    synth->add_option("out", out_path, "output MDP JSON file")->required();
    synth->add_option("--gadget-bound", gadget_bound, "exponent bound for the quadratic gadget search");
    synth->add_flag("--approx-factor", approx, "admit raw polynomial denominators (numeric factoring)");

    auto* value = app.add_subcommand("value", "evaluate an MDP's value");
    value->add_option("mdp", mdp_path, "MDP JSON file")->required();
    value->add_option("--lambda", lambda_str, "discount factor (rational or decimal)");
    value->add_option("--grid", grid_str, "lo:hi:step grid of discount factors");
    value->add_option("--tol", tol, "certified accuracy for the numeric path");

    auto* analyze_cmd = app.add_subcommand("analyze", "policy envelope and admissibility report");
    analyze_cmd->add_option("mdp", mdp_path, "MDP JSON file")->required();
    analyze_cmd->add_option("--cap", cap, "pure stationary policy cap");

    auto* verify = app.add_subcommand("verify", "verify an MDP against a spec");
    verify->add_option("mdp", mdp_path, "MDP JSON file")->required();
    verify->add_option("spec", spec_path, "spec JSON file")->required();
    verify->add_option("--tol", tol, "numeric tolerance");
    verify->add_option("--grid", grid_str, "lo:hi:step numeric grid");
    verify->add_flag("--approx-factor", approx, "admit raw polynomial denominators");

    auto* roundtrip = app.add_subcommand("roundtrip", "synthesize a spec and verify the result");
    roundtrip->add_option("spec", spec_path, "spec JSON file")->required();
    roundtrip->add_option("--tol", tol, "numeric tolerance");
    roundtrip->add_option("--gadget-bound", gadget_bound, "exponent bound for the gadget search");
    roundtrip->add_flag("--approx-factor", approx, "admit raw polynomial denominators");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitParse;
    }

    try {
        if (check->parsed()) {
            SpecLoadResult loaded = load_spec(spec_path, approx);
            int rc = report_spec_violations(loaded.spec);
            if (rc == kExitPass) {
                Json j;
                j["verdict"] = "valid";
                j["branches"] = loaded.spec.branches.size();
                if (!loaded.approximated_branches.empty())
                    j["approximated_branches"] = loaded.approximated_branches;
                stamp(j, timestamps);
                std::cout << j.dump(2) << "\n";
            }
            return rc;
        }

        if (synth->parsed()) {
            SpecLoadResult loaded = load_spec(spec_path, approx);
            int rc = report_spec_violations(loaded.spec);
            if (rc != kExitPass) return rc;
            mdpval::SynthesisReport report;
            mdpval::Mdp m = mdpval::synth_spec(loaded.spec, gadget_bound, &report);
            write_json_file(out_path, mdpval::mdp_to_json(m));
            Json j = mdpval::synthesis_report_to_json(report);
            j["output"] = out_path;
            if (!loaded.approximated_branches.empty()) {
                j["approximated_branches"] = loaded.approximated_branches;
                j["note"] = "spec denominators were factored numerically; exact verification targets "
                            "the approximated spec";
            }
            stamp(j, timestamps);
            std::cout << j.dump(2) << "\n";
            return kExitPass;
        }

        if (value->parsed()) {
            mdpval::Mdp m = load_mdp_strict(mdp_path);
            std::vector<mdpval::Rational> points;
            if (!lambda_str.empty()) points.push_back(mdpval::Rational::parse(lambda_str));
            if (!grid_str.empty()) {
                for (const auto& x : parse_grid(grid_str)) points.push_back(x);
            }
            if (points.empty()) throw std::invalid_argument("value: need --lambda or --grid");
            const bool exact = mdpval::is_degenerate(m);
            for (const auto& lam : points) {
                if (exact) {
                    mdpval::Rational v =
                        mdpval::degenerate_value_at(mdpval::DegenerateMdp(m), lam);
                    std::cout << lam.to_string() << " " << v.to_string() << "\n";
                } else {
                    auto vi = mdpval::value_iteration(m, lam.to_double(), tol);
                    std::cout << lam.to_string() << " " << std::setprecision(15) << vi.mu_value
                              << "\n";
                }
            }
            return kExitPass;
        }

        if (analyze_cmd->parsed()) {
            mdpval::Mdp m = load_mdp_strict(mdp_path);
            mdpval::AnalysisReport report = mdpval::analyze(m, cap);
            Json j = mdpval::analysis_to_json(m, report);
            stamp(j, timestamps);
            std::cout << j.dump(2) << "\n";
            return kExitPass;
        }

        if (verify->parsed()) {
            mdpval::Mdp m = load_mdp_strict(mdp_path);
            SpecLoadResult loaded = load_spec(spec_path, approx);
            int rc = report_spec_violations(loaded.spec);
            if (rc != kExitPass) return rc;
            Json j;
            bool pass;
            if (mdpval::is_degenerate(m) && loaded.spec.branches.size() == 1) {
                mdpval::ExactVerification v = mdpval::verify_exact(m, loaded.spec);
                j = mdpval::exact_verification_to_json(v);
                pass = v.pass;
            } else {
                std::vector<double> grid = numeric_grid(grid_str);
                mdpval::NumericVerification v = mdpval::verify_numeric(m, loaded.spec, grid, tol);
                j = mdpval::numeric_verification_to_json(v);
                pass = v.pass;
            }
            if (!loaded.approximated_branches.empty())
                j["note"] = "verified against the numerically approximated spec";
            stamp(j, timestamps);
            std::cout << j.dump(2) << "\n";
            return pass ? kExitPass : kExitVerifyFail;
        }

        if (roundtrip->parsed()) {
            SpecLoadResult loaded = load_spec(spec_path, approx);
            int rc = report_spec_violations(loaded.spec);
            if (rc != kExitPass) return rc;

            Json j;
            std::vector<mdpval::DegenerateMdp> branch_mdps;
            Json branch_reports = Json::array();
            bool all_pass = true;
            for (size_t i = 0; i < loaded.spec.branches.size(); ++i) {
                const auto& b = loaded.spec.branches[i];
                branch_mdps.push_back(mdpval::synth_branch(b.numerator, b.denominator, gadget_bound));
                mdpval::MaxFSpec single;
                single.branches.push_back(b);
                mdpval::ExactVerification v = mdpval::verify_exact(branch_mdps.back().mdp(), single);
                all_pass = all_pass && v.pass;
                branch_reports.push_back(mdpval::exact_verification_to_json(v));
            }
            j["branch_verifications"] = std::move(branch_reports);

            mdpval::Mdp full = mdpval::synth_max(branch_mdps);
            std::vector<double> grid = numeric_grid(grid_str);
            mdpval::NumericVerification nv = mdpval::verify_numeric(full, loaded.spec, grid, tol);
            all_pass = all_pass && nv.pass;
            j["envelope_verification"] = mdpval::numeric_verification_to_json(nv);

            if (!loaded.approximated_branches.empty()) {
                // The original raw denominators are only comparable numerically.
                double worst = 0.0;
                for (size_t idx = 0; idx < loaded.approximated_branches.size(); ++idx) {
                    size_t bi = loaded.approximated_branches[idx];
                    const auto& b = loaded.spec.branches[bi];
                    for (double g : grid) {
                        mdpval::Rational x = mdpval::Rational::from_double(g);
                        double approx_val = b.target().eval(x).to_double();
                        double raw_val = loaded.raw_numerators[idx].eval_double(g) /
                                         loaded.raw_denominators[idx].eval_double(g);
                        worst = std::max(worst, std::abs(approx_val - raw_val));
                    }
                }
                j["approximation"] = Json{{"branches", loaded.approximated_branches},
                                          {"max_deviation_from_raw_spec", worst},
                                          {"note", "exact verification targets the approximated spec; "
                                                   "the raw spec is compared numerically only"}};
            }
            j["verdict"] = all_pass ? "pass" : "fail";
            stamp(j, timestamps);
            std::cout << j.dump(2) << "\n";
            return all_pass ? kExitPass : kExitVerifyFail;
        }
    } catch (const mdpval::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const mdpval::GadgetSearchExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGadget;
    } catch (const mdpval::PolicyCapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 10;
    }
    return kExitPass;
}
