#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "qinv/baf.hpp"

namespace qinv {

enum class SuiteStatus { pass, fail, skipped };

struct SuiteOutcome {
  std::string name;
  SuiteStatus status = SuiteStatus::pass;
  CheckReport report;
  std::string reason;  // why the suite was skipped
  nlohmann::json details = nlohmann::json::object();
  nlohmann::json to_json() const;
};

const std::vector<std::string>& suite_names();

struct SuiteOptions {
  int max_deg = -1;    // suite default when negative
  int samples = 200;   // membership-crosscheck
  unsigned seed = 1;
};

// Runs one named suite on (g, k); unknown names throw std::invalid_argument.
SuiteOutcome run_suite(const std::string& name, const ReflectionGroup& g, const Multiplicity& k,
                       const SuiteOptions& opt = {});

// [T_xi, T_eta] = 0, w T_xi w^{-1} = T_{w xi} and degree -1 homogeneity of the normal forms.
CheckReport dunkl_axioms(const ReflectionGroup& g, const Multiplicity& k);
// is_quasi_invariant against the exponent-set test on random polynomials and basis perturbations.
CheckReport membership_crosscheck(const ReflectionGroup& g, const Multiplicity& k, int samples, unsigned seed);
// Membership series equals the formula; numerator non-negative, summing to |W|.
CheckReport poincare_consistency(const ReflectionGroup& g, const Multiplicity& k, int max_deg);
// |W| generators whose degrees match the Poincare numerator.
CheckReport freeness_check(const ReflectionGroup& g, const Multiplicity& k);
// L_{p,k} keyed by multiplicity text and invariant index, reusable across calls on one group.
using CalogeroMoserCache = std::map<std::pair<std::string, int>, DiffOp>;
// L_{p,target} S = S L_{p,source} for every elementary raising shift at k, p of the two lowest degrees.
CheckReport intertwining_check(const ReflectionGroup& g, const Multiplicity& k, CalogeroMoserCache* cache = nullptr);
// kz_0 = id, additivity along a decomposition of k into unit steps, dimension and c preservation.
CheckReport kz_additivity(const ReflectionGroup& g, const Multiplicity& k);
// Fake-degree symmetry for every twist vector.
CheckReport fake_degrees(const ReflectionGroup& g);
// Construction and all checks of the Baker-Akhiezer function; details carry P and Phi(0,0).
CheckReport baf_suite(const ReflectionGroup& g, const Multiplicity& k, nlohmann::json* details = nullptr);

// Untwisted integral multiplicities with k_{C,0} = 0 and entries in [0, max_entry].
std::vector<Multiplicity> integral_multiplicities(const ReflectionGroup& g, int max_entry);
// Untwisted multiplicity with k_{C,0} = 0 and random rational entries.
Multiplicity random_rational_multiplicity(const ReflectionGroup& g, std::mt19937& rng);

}  // namespace qinv
