#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qinv/shiftops.hpp"

namespace qinv {

struct DenominatorSurvived : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroLeadingTerm : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// prefactor * exp(<lambda, x>) in a ring of 2 dim variables: x_j at position j, lambda_j at dim + j.
struct ExpPolynomial {
  LocalizedPoly prefactor;
  int dim = 0;
};

// Forms of the arrangement on the x block of the joint ring.
std::shared_ptr<const LinearForms> joint_forms(const ReflectionGroup& g);
// exp(<lambda, x>) with prefactor 1.
ExpPolynomial exp_kernel(const ReflectionGroup& g);
// Joint-ring names x1.., l1...
std::vector<std::string> joint_var_names(int dim);
// p(x) or p(lambda) for p in dim variables.
MultiPoly embed_x(const MultiPoly& p, int dim);
MultiPoly embed_lambda(const MultiPoly& p, int dim);
// Exchanges the x and lambda blocks.
MultiPoly swap_blocks(const MultiPoly& p, int dim);

// D(P e^{<lambda,x>}) = (D with d_j -> lambda_j + d_j)(P) e^{<lambda,x>} for D acting in x.
ExpPolynomial apply_diffop_to_exp(const DiffOp& d, const ExpPolynomial& f);

struct BafData {
  Multiplicity k;
  ExpPolynomial psi;
  MultiPoly leading_term;  // prod_C (delta*_C(lambda) delta_C(x))^{N_C}
  CycNumber normalization;
  int top_degree = 0;      // bidegree (top_degree, top_degree) of the leading term
  std::vector<ShiftOp> chain;
  const MultiPoly& prefactor() const { return psi.prefactor.numerator(); }
  nlohmann::json to_json(const ReflectionGroup& g) const;
};

// N_C = sum_i k_{C,i}.
std::vector<int> orbit_weights(const ReflectionGroup& g, const Multiplicity& k);
MultiPoly baf_leading_term(const ReflectionGroup& g, const Multiplicity& k);
// Applies the raising chain from 0 to k to the exponential and rescales to the leading term.
BafData construct_baf(const ReflectionGroup& g, const Multiplicity& k);

// Component of bidegree (a, a) for every a; false when some term has unequal degrees.
bool is_bidegree_zero(const MultiPoly& p, int dim);

// L_{p,k} psi = p(lambda) psi for p invariant in dim dual variables.
bool eigen_check(const ReflectionGroup& g, const BafData& b, const MultiPoly& p);
// L_p L_q psi = p(lambda) q(lambda) psi.
bool eigen_product_check(const ReflectionGroup& g, const BafData& b, const MultiPoly& p, const MultiPoly& q);

// Degree d Taylor component of psi in the x block (x_first) or in the lambda block.
MultiPoly taylor_component(const BafData& b, int d, bool x_first);
// Diagonal action P(w^{-1} x, w^{-1} lambda) with w acting on lambda through the dual group.
MultiPoly diagonal_act(const ReflectionGroup& g, const ReflectionGroup& dual, int w, const MultiPoly& p);

// Taylor components in x lie in Q_k, in lambda in Q_k of the dual group; P is invariant under the
// diagonal action, which is the exchange symmetry psi(w lambda, x) = psi(lambda, w^{-1} x).
CheckReport membership_checks(const ReflectionGroup& g, const BafData& b, int max_deg);
int default_truncation(const ReflectionGroup& g, const Multiplicity& k);

// The construction for the dual group with the same k, blocks exchanged, equals P.
bool bispectral_check(const ReflectionGroup& g, const BafData& b);

struct PhiReport {
  CheckReport checks;
  CycNumber at_origin;
  std::vector<MultiPoly> components;  // Phi_i for i = 0 .. max_order
  nlohmann::json to_json(const ReflectionGroup& g) const;
};
// Phi = sum_w psi(w lambda, x): bi-invariance and bihomogeneity of Phi_i, Phi(0,0) != 0 and
// T_{p,k} Phi_i = p(lambda) Phi_{i - deg p} for the basic invariants p.
PhiReport phi_checks(const ReflectionGroup& g, const BafData& b, int max_order);

// Matrix of (xi^a, x^b)_k over monomials of degree d.
Matrix pairing_block(const ReflectionGroup& g, const Multiplicity& k, int d);
// Every block to max_deg is nonsingular and (p, q)_k = conj((q*, p*)_k).
CheckReport pairing_checks(const ReflectionGroup& g, const Multiplicity& k, int max_deg);

struct UniquenessReport {
  bool ok = true;
  int unknowns = 0;
  int rank = 0;
  int truncation = 0;
  std::string witness;
  nlohmann::json to_json() const;
};
// Solves for all lower bidegree coefficients of a prefactor with the given leading term from the
// lambda-side quasi-invariance of the Taylor components up to max_deg; the solution must be unique
// and agree with b.
UniquenessReport uniqueness_check(const ReflectionGroup& g, const BafData& b, int max_deg);

}  // namespace qinv
