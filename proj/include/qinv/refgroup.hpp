#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "qinv/exactnum.hpp"
#include "qinv/linalg.hpp"
#include "qinv/polyring.hpp"

namespace qinv {

constexpr int kDefaultOrderCap = 200;

struct Hyperplane {
  std::vector<CycNumber> alpha;  // first nonzero coefficient is 1
  std::vector<CycNumber> v;      // conjugate of alpha, so alpha = (v, .)
  int order = 1;                 // n_H
  std::vector<int> stabilizer;   // stabilizer[j] has det = exp(2 pi i j / n_H)
  int orbit = -1;
};

// Images of monomials under group elements, keyed by element, offset, ring size and exponents.
struct ActCache {
  std::mutex mu;
  std::map<std::array<int16_t, kMaxVars + 3>, MultiPoly> images;
};

struct WRep {
  std::string name;
  int dim = 1;
  std::vector<Matrix> mats;  // one per group element
  std::vector<CycNumber> character;
};

class ReflectionGroup {
 public:
  // Closes the generators under multiplication; throws when the order exceeds cap
  // or a generator is not unitary.
  static ReflectionGroup from_generators(const std::vector<Matrix>& gens, int conductor,
                                         const std::string& label, int cap = kDefaultOrderCap);

  int dim() const { return dim_; }
  int order() const { return static_cast<int>(elements_.size()); }
  int conductor() const { return conductor_; }
  const std::string& label() const { return label_; }
  const std::string& family() const { return family_; }
  const std::vector<int>& params() const { return params_; }
  bool is_dual() const { return dual_; }

  const Matrix& element(int w) const { return elements_[w]; }
  int mult(int a, int b) const { return mult_[a][b]; }
  int inv(int w) const { return inv_[w]; }
  int det_exp(int w) const { return det_exp_[w]; }
  CycNumber det(int w) const { return CycNumber::zeta(conductor_, det_exp_[w]); }
  CycNumber zeta_pow(long e) const;
  const std::vector<int>& generators() const { return generators_; }
  int index_of(const Matrix& m) const;

  const std::vector<Hyperplane>& hyperplanes() const { return hyperplanes_; }
  int num_orbits() const { return static_cast<int>(orbits_.size()); }
  const std::vector<int>& orbit(int c) const { return orbits_[c]; }
  int orbit_order(int c) const { return hyperplanes_[orbits_[c][0]].order; }
  int hyperplane_image(int w, int h) const { return hperm_[w][h]; }
  const CycNumber& hyperplane_scale(int w, int h) const { return hscale_[w][h]; }
  // det_C(w) = zeta^e, the character by which w acts on delta_C^{-1}.
  int det_c_exp(int w, int orbit) const { return detc_exp_[orbit][w]; }
  int num_reflections() const;

  std::shared_ptr<const LinearForms> forms(int nvars, int offset) const;

  // (w . f)(x) = f(w^{-1} x) on the variables [offset, offset + dim).
  MultiPoly act(int w, const MultiPoly& f, int offset = 0) const;
  LocalizedPoly act(int w, const LocalizedPoly& f) const;
  // e_{H,i} f with e_{H,i} = (1/n_H) sum_{w in W_H} det(w)^{-i} w.
  MultiPoly idempotent_apply(int h, int i, const MultiPoly& f, int offset = 0) const;
  // rho(e_{H,i}) for a representation given on all elements.
  Matrix rep_idempotent(const WRep& rep, int h, int i) const;

  MultiPoly delta(int orbit, int nvars, int offset) const;       // prod alpha_H, orbit < 0 means all
  MultiPoly delta_star(int orbit, int nvars, int offset) const;  // prod v_H as a function on V*

  bool irreps_available() const { return irreps_complete_; }
  const std::vector<WRep>& irreps() const { return irreps_; }
  int irrep_index(const std::string& name) const;
  // Index of the irreducible character equal to chi, or -1.
  int find_irrep(const std::vector<CycNumber>& chi) const;
  CycNumber character_inner(const std::vector<CycNumber>& a, const std::vector<CycNumber>& b) const;

  // The same abstract group acting on V* through conjugate matrices.
  ReflectionGroup dual() const;

  void set_family(const std::string& family, const std::vector<int>& params) {
    family_ = family;
    params_ = params;
  }
  void set_irreps(std::vector<WRep> irreps, bool complete);
  nlohmann::json to_json() const;

 private:
  void build_arrangement();
  void build_forms();
  const MultiPoly& monomial_image(int w, const Monomial& block, int offset, int nvars) const;

  int dim_ = 0;
  int conductor_ = 1;
  std::string label_;
  std::string family_ = "generators";
  std::vector<int> params_;
  bool dual_ = false;

  std::vector<Matrix> elements_;
  std::vector<std::vector<int>> mult_;
  std::vector<int> inv_;
  std::vector<int> det_exp_;
  std::vector<int> generators_;
  std::unordered_map<std::string, int> index_;

  std::vector<Hyperplane> hyperplanes_;
  std::vector<std::vector<int>> orbits_;
  std::vector<std::vector<int>> hperm_;
  std::vector<std::vector<CycNumber>> hscale_;
  std::vector<std::vector<int>> detc_exp_;
  std::vector<std::shared_ptr<const LinearForms>> forms_cache_;
  std::shared_ptr<ActCache> act_cache_ = std::make_shared<ActCache>();

  std::vector<WRep> irreps_;
  bool irreps_complete_ = false;
};

// cyclic:n, dihedral:m:p (= G(m,p,2)), symmetric:N, G:m:p:N
ReflectionGroup builtin_group(const std::string& spec, int cap = kDefaultOrderCap);
ReflectionGroup group_from_json(const nlohmann::json& j, int cap = kDefaultOrderCap);
ReflectionGroup imprimitive_group(int m, int p, int n, int cap = kDefaultOrderCap);

// Checks the homomorphism property, sum of squared dimensions and orthonormality.
std::string validate_irreps(const ReflectionGroup& g);

// k_{C,i} for each orbit C and i mod n_C, with an optional twist a_C.
struct Multiplicity {
  std::vector<std::vector<Rational>> k;
  std::vector<int> a;

  bool twisted() const { return !a.empty(); }
  int twist(int orbit) const { return a.empty() ? 0 : a[orbit]; }
  const Rational& value(const ReflectionGroup& g, int h, int i) const;
  bool is_integral() const;
  bool is_zero() const;

  static Multiplicity zero(const ReflectionGroup& g);
  // l_{C,j}: one at (C, j), zero elsewhere.
  static Multiplicity ell(const ReflectionGroup& g, int orbit, int j);

  Multiplicity operator+(const Multiplicity& o) const;
  Multiplicity operator-(const Multiplicity& o) const;
  Multiplicity scaled(const Rational& s) const;
  bool operator==(const Multiplicity& o) const { return k == o.k && a == o.a; }

  // Throws std::invalid_argument on shape errors or a twist violating k = a/n mod Z.
  void validate(const ReflectionGroup& g) const;
  std::string to_string() const;
  nlohmann::json to_json() const;
  static Multiplicity from_json(const ReflectionGroup& g, const nlohmann::json& j);
  // "0,1,1;0,1" style lists, one per orbit; a list of n_C - 1 entries omits k_{C,0} = 0.
  static Multiplicity parse(const ReflectionGroup& g, const std::string& text, const std::string& twist = "");
};

}  // namespace qinv
