#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdpval/analyzer.hpp"
#include "mdpval/mdp.hpp"
#include "mdpval/solver.hpp"
#include "mdpval/synthesizer.hpp"

namespace mdpval {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rationals travel as "num" or "num/den" strings.
Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j);

// Polynomials travel as arrays of coefficient strings in ascending degree.
Json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);

Json mdp_to_json(const Mdp& m);

struct LoadedMdp {
    Mdp mdp;
    std::vector<Violation> issues;  // totality/reference problems found while loading
};
LoadedMdp mdp_from_json(const Json& j);

// Spec documents may carry either factored denominators or (behind the
// --approx-factor convenience flag) raw polynomial denominators.
struct SpecBranchDoc {
    Polynomial numerator;
    std::optional<FactoredDenominator> factored;
    std::optional<Polynomial> raw;
};

struct SpecDocument {
    std::vector<SpecBranchDoc> branches;
    bool has_raw() const;
    MaxFSpec to_spec() const;  // throws ParseError if any branch is raw
};

SpecDocument spec_from_json(const Json& j);
Json spec_to_json(const MaxFSpec& spec);

Json certificate_to_json(const GadgetCertificate& cert);
Json synthesis_report_to_json(const SynthesisReport& report);
Json ratfunc_to_json(const RationalFunction& f);
Json interval_to_json(const RationalInterval& iv);
Json envelope_to_json(const Mdp& m, const EnvelopeReport& report);
Json analysis_to_json(const Mdp& m, const AnalysisReport& report);
Json exact_verification_to_json(const ExactVerification& v);
Json numeric_verification_to_json(const NumericVerification& v);

}  // namespace mdpval
