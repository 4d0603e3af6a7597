#pragma once

#include <gmpxx.h>

#include <json.hpp>
#include <string>
#include <vector>

namespace qinv {

using Rational = mpq_class;

Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
nlohmann::json rational_to_json(const Rational& q);
Rational rational_from_json(const nlohmann::json& j);

int euler_phi(int n);
// Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.
std::vector<long> cyclotomic_polynomial(int n);

// Element of Q(zeta_N) stored as coefficients in the power basis 1, zeta, ...,
// zeta^{phi(N)-1}, reduced modulo Phi_N.
class CycNumber {
 public:
  CycNumber();
  CycNumber(long v);
  CycNumber(const Rational& q);

  static CycNumber zero(int conductor);
  static CycNumber rational(const Rational& q, int conductor);
  static CycNumber zeta(int conductor, long power);
  static CycNumber from_coeffs(int conductor, std::vector<Rational> coeffs);

  int conductor() const { return n_; }
  const std::vector<Rational>& coeffs() const { return c_; }

  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const;
  Rational to_rational() const;

  CycNumber promote(int conductor) const;
  CycNumber conj() const;
  CycNumber inverse() const;

  CycNumber& operator+=(const CycNumber& o);
  CycNumber& operator-=(const CycNumber& o);
  CycNumber& operator*=(const CycNumber& o);
  CycNumber& operator/=(const CycNumber& o);
  CycNumber& operator*=(const Rational& q);
  // *this += a * b without temporaries.
  CycNumber& add_product(const CycNumber& a, const CycNumber& b);
  CycNumber operator-() const;

  friend CycNumber operator+(CycNumber a, const CycNumber& b) { return a += b; }
  friend CycNumber operator-(CycNumber a, const CycNumber& b) { return a -= b; }
  friend CycNumber operator*(CycNumber a, const CycNumber& b) { return a *= b; }
  friend CycNumber operator/(CycNumber a, const CycNumber& b) { return a /= b; }
  friend CycNumber operator*(CycNumber a, const Rational& q) { return a *= q; }
  friend CycNumber operator*(const Rational& q, CycNumber a) { return a *= q; }
  friend bool operator==(const CycNumber& a, const CycNumber& b);
  friend bool operator!=(const CycNumber& a, const CycNumber& b) { return !(a == b); }

  std::string to_string() const;
  nlohmann::json to_json() const;
  static CycNumber from_json(const nlohmann::json& j);

 private:
  void unify(CycNumber& other);

  int n_;
  std::vector<Rational> c_;
};

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_zero(const CycNumber& c) { return c.is_zero(); }
inline Rational conj(const Rational& q) { return q; }
inline CycNumber conj(const CycNumber& c) { return c.conj(); }

// Returns e with zeta_N^e == c, or -1 if c is not an N-th root of unity.
int root_of_unity_exponent(const CycNumber& c, int conductor);

}  // namespace qinv
