#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qinv/refgroup.hpp"

namespace qinv {

struct UnexpectedDenominator : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotInvariant : std::runtime_error {
  int witness;
  NotInvariant(const std::string& msg, int w) : std::runtime_error(msg), witness(w) {}
};

// sum_alpha c_alpha(x) d^alpha with c_alpha in C[V_reg]; normal form is coefficient then partials.
class DiffOp {
 public:
  using TermMap = std::map<Monomial, LocalizedPoly, GrLexLess>;

  DiffOp() = default;
  explicit DiffOp(std::shared_ptr<const LinearForms> forms) : forms_(std::move(forms)) {}

  static DiffOp identity(std::shared_ptr<const LinearForms> forms);
  static DiffOp multiplication(const LocalizedPoly& c);
  // p(d) for a polynomial p in dim variables standing for the partials.
  static DiffOp constant_coefficient(std::shared_ptr<const LinearForms> forms, const MultiPoly& p);
  static DiffOp partial(std::shared_ptr<const LinearForms> forms, int var);

  const std::shared_ptr<const LinearForms>& forms() const { return forms_; }
  int dim() const { return forms_->dim; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int order() const;

  void add_term(const Monomial& d, const LocalizedPoly& c);
  DiffOp& operator+=(const DiffOp& o);
  DiffOp& operator-=(const DiffOp& o);
  DiffOp& operator*=(const CycNumber& c);
  friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
  friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
  friend DiffOp operator*(DiffOp a, const CycNumber& c) { return a *= c; }
  // Composition a o b.
  friend DiffOp operator*(const DiffOp& a, const DiffOp& b);
  friend bool operator==(const DiffOp& a, const DiffOp& b);
  friend bool operator!=(const DiffOp& a, const DiffOp& b) { return !(a == b); }

  // c * D with c acting by left multiplication.
  DiffOp left_multiply(const LocalizedPoly& c) const;
  LocalizedPoly apply(const LocalizedPoly& f) const;
  LocalizedPoly apply(const MultiPoly& f) const;
  // w D w^{-1}
  DiffOp conjugate(const ReflectionGroup& g, int w) const;
  bool is_invariant(const ReflectionGroup& g, int* witness = nullptr) const;
  // Terms of top order, coefficient and multi-index.
  DiffOp top_order_part() const;
  // Substitute d_j -> d_j + omega_j, omega_j in C[V_reg].
  DiffOp shift_partials(const std::vector<LocalizedPoly>& omega) const;

  std::string to_string() const;
  nlohmann::json to_json() const;

 private:
  std::shared_ptr<const LinearForms> forms_;
  TermMap terms_;
};

// sum_w D_w w with D_w differential operators; the group element sits on the right.
class DiffReflOp {
 public:
  explicit DiffReflOp(const ReflectionGroup& g);

  static DiffReflOp group_element(const ReflectionGroup& g, int w, const CycNumber& c = CycNumber(1));
  static DiffReflOp from_diffop(const ReflectionGroup& g, const DiffOp& d);
  static DiffReflOp multiplication(const ReflectionGroup& g, const LocalizedPoly& c);
  static DiffReflOp partial(const ReflectionGroup& g, int var);

  const ReflectionGroup& group() const { return *g_; }
  const std::map<int, DiffOp>& parts() const { return parts_; }
  DiffOp part(int w) const;
  bool is_zero() const { return parts_.empty(); }

  void add(int w, const DiffOp& d);
  DiffReflOp& operator+=(const DiffReflOp& o);
  DiffReflOp& operator-=(const DiffReflOp& o);
  DiffReflOp& operator*=(const CycNumber& c);
  friend DiffReflOp operator+(DiffReflOp a, const DiffReflOp& b) { return a += b; }
  friend DiffReflOp operator-(DiffReflOp a, const DiffReflOp& b) { return a -= b; }
  friend DiffReflOp operator*(DiffReflOp a, const CycNumber& c) { return a *= c; }
  friend DiffReflOp operator*(const DiffReflOp& a, const DiffReflOp& b);
  friend bool operator==(const DiffReflOp& a, const DiffReflOp& b);
  friend bool operator!=(const DiffReflOp& a, const DiffReflOp& b) { return !(a == b); }

  LocalizedPoly apply(const LocalizedPoly& f) const;
  LocalizedPoly apply(const MultiPoly& f) const;
  MultiPoly apply_strict(const MultiPoly& f) const;
  // w L w^{-1}
  DiffReflOp conjugate(int w) const;
  bool is_invariant(int* witness = nullptr) const;
  // Sum of the parts; throws NotInvariant unless check is false.
  DiffOp res(bool check = true) const;

  std::string to_string() const;
  nlohmann::json to_json() const;

 private:
  const ReflectionGroup* g_;
  std::map<int, DiffOp> parts_;
};

// c_{H,w} = sum_i k_{H,i} det(w)^{-i} for w = stabilizer[j] of H.
CycNumber reflection_coefficient(const ReflectionGroup& g, const Multiplicity& k, int h, int j);

DiffReflOp dunkl_operator(const ReflectionGroup& g, const Multiplicity& k, const std::vector<CycNumber>& xi);
// T_p for p a polynomial in dim variables (the coordinates of xi), by composing normal forms.
DiffReflOp dunkl_polynomial(const ReflectionGroup& g, const Multiplicity& k, const MultiPoly& p);

// The module DW e, identified with D(V_reg): T_xi (D e) = (d_xi D - sum_H alpha_H(xi)/alpha_H sum_w c_w D^w) e.
class SphericalDunkl {
 public:
  SphericalDunkl(const ReflectionGroup& g, const Multiplicity& k);
  DiffOp apply(const std::vector<CycNumber>& xi, const DiffOp& d) const;
  // p(T) applied to d.
  DiffOp apply_polynomial(const MultiPoly& p, const DiffOp& d) const;
  const ReflectionGroup& group() const { return *g_; }

 private:
  const ReflectionGroup* g_;
  Multiplicity k_;
  std::vector<std::vector<CycNumber>> coeff_;  // coeff_[h][j] = c_{H, stabilizer[j]}
};

// L_{p,k} = Res(T_{p,k}) for W-invariant p; throws NotInvariant otherwise.
DiffOp calogero_moser(const ReflectionGroup& g, const Multiplicity& k, const MultiPoly& p);
// Invariance of p in C[V*] under the action induced by W on V.
bool is_dual_invariant(const ReflectionGroup& g, const MultiPoly& p);

// Dunkl operators acting on polynomials and on tau-valued polynomials.
class DunklAction {
 public:
  DunklAction(const ReflectionGroup& g, const Multiplicity& k);
  // nullopt when a denominator survives.
  std::optional<MultiPoly> apply(const std::vector<CycNumber>& xi, const MultiPoly& f) const;
  MultiPoly apply_strict(const std::vector<CycNumber>& xi, const MultiPoly& f) const;
  LocalizedPoly apply(const std::vector<CycNumber>& xi, const LocalizedPoly& f) const;
  std::optional<std::vector<MultiPoly>> apply_tau(const std::vector<CycNumber>& xi, const std::vector<MultiPoly>& f,
                                                  const WRep& tau) const;
  // apply_tau along every coordinate direction; entry j is T_{e_j} f.
  std::optional<std::vector<std::vector<MultiPoly>>> apply_tau_all(const std::vector<MultiPoly>& f,
                                                                   const WRep& tau) const;
  // T_p(q).
  MultiPoly apply_polynomial(const MultiPoly& p, const MultiPoly& q) const;
  const ReflectionGroup& group() const { return *g_; }
  const Multiplicity& multiplicity() const { return k_; }

 private:
  const ReflectionGroup* g_;
  Multiplicity k_;
  std::vector<std::vector<CycNumber>> coeff_;
};

std::vector<CycNumber> unit_vector(int dim, int j);

// E(k) = sum_i x_i T_{e_i}.
DiffReflOp euler_operator(const ReflectionGroup& g, const Multiplicity& k);
// z(k) = sum_H sum_{w in W_H} c_{H,w} w as coefficients indexed by group element.
std::vector<CycNumber> central_element(const ReflectionGroup& g, const Multiplicity& k);
DiffReflOp group_algebra_element(const ReflectionGroup& g, const std::vector<CycNumber>& coeffs);
// c_tau(k) = tr(z(k)|tau) / dim tau.
CycNumber c_tau(const ReflectionGroup& g, const Multiplicity& k, const WRep& tau);

// (p, q)_k = T_{p,k}(q)(0).
CycNumber pairing(const ReflectionGroup& g, const Multiplicity& k, const MultiPoly& p, const MultiPoly& q);

// w -> chi(w) w.
DiffReflOp twist_by_character(const DiffReflOp& l, const std::vector<CycNumber>& chi);
// d_xi -> d_xi + lambda * sum_{H in C} alpha_H(xi) / alpha_H.
DiffReflOp twist_by_one_form(const DiffReflOp& l, int orbit, const Rational& lambda);
// delta_C^a L delta_C^{-a}.
DiffReflOp conjugate_by_delta(const DiffReflOp& l, int orbit, int a);
LocalizedPoly delta_power(const ReflectionGroup& g, int orbit, int a);

// k'_{C,i} = k_{C,i+1} + 1/n_C (conjugation by delta_C).
Multiplicity delta_shift(const ReflectionGroup& g, const Multiplicity& k, int orbit);
// k'_{C,i} = k_{C,i+a} (twist by a character restricting to det^a on each W_H of C).
Multiplicity character_shift(const ReflectionGroup& g, const Multiplicity& k, int orbit, int a);
// k'_{C,i} = k_{C,i} - lambda / n_C.
Multiplicity one_form_shift(const ReflectionGroup& g, const Multiplicity& k, int orbit, const Rational& lambda);
// g_C: k'_{C,i} = k_{C,i-1} - 1/n_C + delta_{i,0}; the twist a_C decreases by one.
Multiplicity g_transform(const ReflectionGroup& g, const Multiplicity& k, int orbit);

}  // namespace qinv
