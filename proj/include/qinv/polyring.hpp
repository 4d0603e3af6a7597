#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qinv/exactnum.hpp"
#include "qinv/linalg.hpp"

namespace qinv {

constexpr int kMaxVars = 12;

struct Monomial {
  std::array<int16_t, kMaxVars> e{};

  int degree() const {
    int d = 0;
    for (auto x : e) d += x;
    return d;
  }
  int degree(int offset, int count) const {
    int d = 0;
    for (int i = offset; i < offset + count; ++i) d += e[i];
    return d;
  }
  Monomial operator*(const Monomial& o) const {
    Monomial m;
    for (int i = 0; i < kMaxVars; ++i) m.e[i] = static_cast<int16_t>(e[i] + o.e[i]);
    return m;
  }
  bool divides(const Monomial& o) const {
    for (int i = 0; i < kMaxVars; ++i) {
      if (e[i] > o.e[i]) return false;
    }
    return true;
  }
  bool operator==(const Monomial& o) const { return e == o.e; }
  bool operator!=(const Monomial& o) const { return e != o.e; }
};

// Graded lexicographic order: lower total degree first, then x_1 > x_2 > ...
struct GrLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return a.e > b.e;
  }
};

// All exponent vectors of total degree d in n variables, in graded-lex order.
std::vector<Monomial> monomials_of_degree(int nvars, int d);

// Sparse polynomial in nvars variables with cyclotomic coefficients.
class MultiPoly {
 public:
  using TermMap = std::map<Monomial, CycNumber, GrLexLess>;

  explicit MultiPoly(int nvars = 0) : nvars_(nvars) {}

  static MultiPoly constant(int nvars, const CycNumber& c);
  static MultiPoly variable(int nvars, int index);
  static MultiPoly term(int nvars, const Monomial& m, const CycNumber& c);
  // sum_j coeffs[j] x_{offset+j}
  static MultiPoly linear_form(int nvars, const std::vector<CycNumber>& coeffs, int offset = 0);

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }
  int degree() const;
  bool is_homogeneous() const;
  CycNumber coefficient(const Monomial& m) const;

  void add_term(const Monomial& m, const CycNumber& c);
  // this += c * p * x^shift.
  void add_scaled(const MultiPoly& p, const CycNumber& c, const Monomial& shift);

  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const CycNumber& c);
  MultiPoly operator-() const;
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  friend MultiPoly operator*(MultiPoly a, const CycNumber& c) { return a *= c; }
  friend MultiPoly operator*(const CycNumber& c, MultiPoly a) { return a *= c; }
  friend bool operator==(const MultiPoly& a, const MultiPoly& b);
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

  MultiPoly pow(int k) const;
  MultiPoly derivative(int var) const;
  // sum_j v_j d/dx_{offset+j}
  MultiPoly directional_derivative(const std::vector<CycNumber>& v, int offset = 0) const;
  MultiPoly homogeneous_component(int d) const;
  std::map<int, MultiPoly> homogeneous_components() const;
  // Component of degree d in the variables [offset, offset+count).
  MultiPoly partial_component(int offset, int count, int d) const;

  // Substitutes x_{offset+i} -> sum_j m[i][j] x_{offset+j}.
  MultiPoly substitute_linear(const Matrix& m, int offset = 0) const;
  // Moves variable i to position var_map[i] in a ring with new_nvars variables.
  MultiPoly remap(int new_nvars, const std::vector<int>& var_map) const;
  MultiPoly conj_coeffs() const;
  CycNumber evaluate(const std::vector<CycNumber>& point) const;
  CycNumber constant_term() const;

  std::string to_string(const std::vector<std::string>& names = {}) const;
  nlohmann::json to_json() const;
  static MultiPoly from_json(int nvars, const nlohmann::json& j);

 private:
  int nvars_;
  TermMap terms_;
};

// Exact quotient f / alpha where alpha = sum_j a_j x_{offset+j}; nullopt if not divisible.
std::optional<MultiPoly> divide_exact_linear(const MultiPoly& f, const std::vector<CycNumber>& alpha,
                                             int offset = 0);
// Largest m with alpha^m | f (f nonzero); cap bounds the search.
int linear_valuation(const MultiPoly& f, const std::vector<CycNumber>& alpha, int offset, int cap);

// Linear forms alpha_H of an arrangement embedded in a ring of nvars variables.
struct LinearForms {
  int nvars = 0;
  int offset = 0;
  int dim = 0;
  std::vector<std::vector<CycNumber>> alpha;
  std::vector<MultiPoly> poly;
};

// numerator / prod_H alpha_H^{den[H]}, kept reduced.
class LocalizedPoly {
 public:
  LocalizedPoly() = default;
  LocalizedPoly(std::shared_ptr<const LinearForms> forms, MultiPoly num, std::vector<int> den = {});

  static LocalizedPoly constant(std::shared_ptr<const LinearForms> forms, const CycNumber& c);
  // prod_H alpha_H^{powers[H]}, powers may be negative.
  static LocalizedPoly monomial_in_forms(std::shared_ptr<const LinearForms> forms,
                                         const std::vector<int>& powers);

  const MultiPoly& numerator() const { return num_; }
  const std::vector<int>& denominator() const { return den_; }
  const std::shared_ptr<const LinearForms>& forms() const { return forms_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const;
  // Degree of numerator minus degree of denominator; numerator must be homogeneous.
  int degree() const;
  bool is_homogeneous() const { return num_.is_homogeneous(); }
  MultiPoly denominator_poly() const;

  LocalizedPoly& operator+=(const LocalizedPoly& o);
  LocalizedPoly& operator-=(const LocalizedPoly& o);
  LocalizedPoly& operator*=(const CycNumber& c);
  LocalizedPoly operator-() const;
  friend LocalizedPoly operator+(LocalizedPoly a, const LocalizedPoly& b) { return a += b; }
  friend LocalizedPoly operator-(LocalizedPoly a, const LocalizedPoly& b) { return a -= b; }
  friend LocalizedPoly operator*(const LocalizedPoly& a, const LocalizedPoly& b);
  friend LocalizedPoly operator*(LocalizedPoly a, const CycNumber& c) { return a *= c; }
  friend bool operator==(const LocalizedPoly& a, const LocalizedPoly& b);
  friend bool operator!=(const LocalizedPoly& a, const LocalizedPoly& b) { return !(a == b); }

  LocalizedPoly derivative(int var) const;
  LocalizedPoly times_poly(const MultiPoly& p) const;
  // Re-express with the forms placed at another offset of a larger ring.
  LocalizedPoly embed(std::shared_ptr<const LinearForms> forms, const std::vector<int>& var_map) const;

  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  void reduce();
  void raise_to(const std::vector<int>& den);

  std::shared_ptr<const LinearForms> forms_;
  MultiPoly num_;
  std::vector<int> den_;
};

std::vector<std::string> default_var_names(int nvars, const std::string& stem = "x");

}  // namespace qinv
