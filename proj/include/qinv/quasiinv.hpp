#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qinv/dunkl.hpp"

namespace qinv {

struct IncompatibleMultiplicity : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct FreenessMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct KernelShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StabilityFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Membership {
  bool ok = true;
  int hyperplane = -1;
  int index = -1;
  int valuation = 0;  // order of the failing projection along the hyperplane
  int required = 0;
  std::string remainder;
  explicit operator bool() const { return ok; }
  nlohmann::json to_json() const;
};

// Idempotent projections and repeated division by alpha_H. Polynomial f lives on the
// variables [offset, offset + dim) of its ring.
Membership is_quasi_invariant(const ReflectionGroup& g, const Multiplicity& k, const MultiPoly& f, int offset = 0);
Membership is_quasi_invariant(const ReflectionGroup& g, const Multiplicity& k, const LocalizedPoly& f);
// (1 (x) e_{H,i+a}) phi divisible by alpha_H^{n_H k_{H,i}}.
Membership is_tau_quasi_invariant(const ReflectionGroup& g, const Multiplicity& k, const WRep& tau,
                                  const std::vector<MultiPoly>& phi);

// Exponent sets of the expansion along H, as the least element of each residue class mod n_H.
struct ExpansionSets {
  int n = 1;
  std::vector<long> s_start;  // S = union over residues rho of s_start[rho] + n Z_{>=0}
  std::vector<long> r_start;  // R = {r : r + S in S}
  bool in_s(long s) const;
  bool in_r(long r) const;
};
ExpansionSets normal_expansion_sets(const ReflectionGroup& g, const Multiplicity& k, int h);
// Membership by expanding f along every hyperplane and testing exponents against S.
Membership s_set_member(const ReflectionGroup& g, const Multiplicity& k, const MultiPoly& f);
// k' with A_k = Q_{k'}.
Multiplicity compute_ak(const ReflectionGroup& g, const Multiplicity& k);

// Elements of degree d are numerator / delta^r with numerator of degree d + r |A|.
struct GradedBasis {
  Multiplicity k;
  int r = 0;
  int tau_dim = 1;
  std::string tau_name;
  int max_deg = 0;
  std::map<int, std::vector<std::vector<MultiPoly>>> per_degree;

  int min_deg() const { return per_degree.empty() ? 0 : per_degree.begin()->first; }
  int dim(int d) const;
  std::vector<MultiPoly> scalars(int d) const;
  nlohmann::json to_json(const ReflectionGroup& g) const;
};

// r large enough that Q_k(tau) is contained in delta^{-r} C[V] (x) tau.
int pole_bound(const ReflectionGroup& g, const Multiplicity& k);
// r with delta^r C[V] (x) tau contained in Q_k(tau).
int sandwich_exponent(const ReflectionGroup& g, const Multiplicity& k);

// Degreewise kernels; parallel over degrees when parallel is set. r < 0 selects pole_bound.
GradedBasis compute_basis(const ReflectionGroup& g, const Multiplicity& k, int max_deg, int r = -1,
                          bool parallel = true);
GradedBasis tau_quasi_invariants(const ReflectionGroup& g, const Multiplicity& k, const WRep& tau, int max_deg,
                                 int r = -1, bool parallel = true, int min_deg = 0);
// Basis of (Q_k(tau))_d only.
std::vector<std::vector<MultiPoly>> tau_degree_basis(const ReflectionGroup& g, const Multiplicity& k,
                                                     const WRep& tau, int d, int r = 0);
WRep trivial_rep(const ReflectionGroup& g);
WRep regular_rep(const ReflectionGroup& g);

// True when the spans of the two bases agree in every degree from lo to hi.
bool same_spaces(const ReflectionGroup& g, const GradedBasis& a, const GradedBasis& b, int lo, int hi);

struct StabilityReport {
  bool ok = true;
  int checked = 0;
  std::string witness;
  nlohmann::json to_json() const;
};
// T_xi maps Q_k(tau)_d into Q_k(tau)_{d-1}.
StabilityReport dunkl_stability(const ReflectionGroup& g, const GradedBasis& b, const WRep& tau);
// L_{p,k} maps Q_k into itself for W-invariant p.
StabilityReport cm_stability(const ReflectionGroup& g, const GradedBasis& b, const std::vector<MultiPoly>& ps);

// Power series and rational functions in t with cyclotomic coefficients, low degree first.
using TPoly = std::vector<CycNumber>;
TPoly tpoly_mul(const TPoly& a, const TPoly& b);
TPoly tpoly_add(const TPoly& a, const TPoly& b);
TPoly tpoly_shift(const TPoly& a, int s);
// Exact quotient; throws when b does not divide a.
TPoly tpoly_divexact(const TPoly& a, const TPoly& b);
void tpoly_trim(TPoly& a);
// Power series a / prod (1 - t^{e}) to degree n.
std::vector<CycNumber> series_expand(const TPoly& num, const std::vector<int>& den_degrees, int n);
std::string tpoly_to_string(const TPoly& a);
std::vector<long> tpoly_integer_coeffs(const TPoly& a);

std::vector<int> fundamental_degrees(const ReflectionGroup& g);
// Numerator N with (1/|W|) sum_w chi(w) / det(1 - t conj(w)) = N / prod(1 - t^{e_i}).
TPoly molien_numerator(const ReflectionGroup& g, const std::vector<CycNumber>& chi);

struct PoincareData {
  std::vector<long> series;  // coefficients of t^0 .. t^max_deg
  bool has_closed_form = false;
  std::vector<long> numerator;
  std::vector<int> denominator_degrees;
  nlohmann::json to_json() const;
  std::string closed_form_string() const;
};
PoincareData poincare_by_membership(const ReflectionGroup& g, const Multiplicity& k, int max_deg);
PoincareData poincare_by_formula(const ReflectionGroup& g, const Multiplicity& k, int max_deg);
// c_tau(k) as an integer; throws for non-integral values.
long c_tau_integer(const ReflectionGroup& g, const Multiplicity& k, const WRep& tau);

// Homogeneous basic invariants of C[V]^W, one per fundamental degree.
std::vector<MultiPoly> basic_invariants(const ReflectionGroup& g);
// The same for C[V*]^W under the action induced on the coordinates of V.
std::vector<MultiPoly> basic_dual_invariants(const ReflectionGroup& g);
std::vector<MultiPoly> invariants_of_degree(const ReflectionGroup& g, int d);

struct FreeGenSet {
  std::vector<MultiPoly> generators;
  std::vector<int> degrees;
  std::vector<MultiPoly> invariants;
  int certified_to = 0;
  nlohmann::json to_json() const;
};
FreeGenSet free_generators(const ReflectionGroup& g, const Multiplicity& k);

struct TwistPermutation {
  Multiplicity k;
  std::vector<int> mapping;            // mapping[tau'] = tau, that is kz_k(tau') = tau
  std::vector<long> generator_degree;  // indexed by tau
  nlohmann::json to_json(const ReflectionGroup& g) const;
};
TwistPermutation kz_twist(const ReflectionGroup& g, const Multiplicity& k);
std::vector<int> compose_permutations(const std::vector<int>& a, const std::vector<int>& b);

struct CheckReport {
  bool ok = true;
  std::vector<std::string> failures;
  int checked = 0;
  void fail(const std::string& s) {
    ok = false;
    failures.push_back(s);
  }
  nlohmann::json to_json() const;
};
// (g_C)^{n_C} = id and Q_{g_C k} = Q_k for every orbit, degrees up to max_deg.
CheckReport g_orbit_checks(const ReflectionGroup& g, const Multiplicity& k, int max_deg);
// t^{deg delta_a} chi_{eps_a (x) tau} = t^{c_tau'(k')} chi_tau'(t) with tau = kz_{k'}(tau').
CheckReport fake_degree_symmetry(const ReflectionGroup& g, const std::vector<int>& a);
// e Q_k(regular) = e (Q_k (x) 1) degreewise.
CheckReport symmetrization_check(const ReflectionGroup& g, const Multiplicity& k, int max_deg);

}  // namespace qinv
