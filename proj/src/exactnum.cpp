#include "qinv/exactnum.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qinv {

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char ch : text) {
    if (!isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) throw std::invalid_argument("empty rational");
  Rational q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + text);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

namespace {

nlohmann::json integer_to_json(const mpz_class& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

mpz_class integer_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return mpz_class(j.get<long>());
  if (j.is_string()) return mpz_class(j.get<std::string>());
  throw std::invalid_argument("expected integer");
}

}  // namespace

nlohmann::json rational_to_json(const Rational& q) {
  return nlohmann::json::array({integer_to_json(q.get_num()), integer_to_json(q.get_den())});
}

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_array() && j.size() == 2) {
    Rational q(integer_from_json(j[0]), integer_from_json(j[1]));
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
    q.canonicalize();
    return q;
  }
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw std::invalid_argument("bad rational json");
}

int euler_phi(int n) {
  int result = n;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      while (n % p == 0) n /= p;
      result -= result / p;
    }
  }
  if (n > 1) result -= result / n;
  return result;
}

std::vector<long> cyclotomic_polynomial(int n) {
  if (n < 1) throw std::invalid_argument("conductor must be positive");
  // x^n - 1 divided by Phi_d for every proper divisor d.
  std::vector<long> num(n + 1, 0);
  num[0] = -1;
  num[n] = 1;
  for (int d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    std::vector<long> den = cyclotomic_polynomial(d);
    int dn = static_cast<int>(den.size()) - 1;
    int qn = static_cast<int>(num.size()) - 1 - dn;
    std::vector<long> quot(qn + 1, 0);
    for (int i = qn; i >= 0; --i) {
      long c = num[i + dn];
      quot[i] = c;
      for (int j = 0; j <= dn; ++j) num[i + j] -= c * den[j];
    }
    num = quot;
  }
  return num;
}

namespace {

struct CycTable {
  int n = 1;
  int phi = 1;
  // pow[e] = x^e mod Phi_n for 0 <= e < size.
  std::vector<std::vector<long>> pow;
};

const CycTable& cyc_table(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<CycTable>> tables;
  std::lock_guard<std::mutex> lock(mu);
  auto it = tables.find(n);
  if (it != tables.end()) return *it->second;
  auto t = std::make_unique<CycTable>();
  t->n = n;
  std::vector<long> phi_poly = cyclotomic_polynomial(n);
  t->phi = static_cast<int>(phi_poly.size()) - 1;
  int len = std::max(n, 2 * t->phi - 1) + 1;
  std::vector<long> cur(t->phi, 0);
  cur[0] = 1;
  for (int e = 0; e < len; ++e) {
    t->pow.push_back(cur);
    long top = cur[t->phi - 1];
    for (int i = t->phi - 1; i > 0; --i) cur[i] = cur[i - 1];
    cur[0] = 0;
    if (top != 0) {
      for (int i = 0; i < t->phi; ++i) cur[i] -= top * phi_poly[i];
    }
  }
  const CycTable& ref = *t;
  tables.emplace(n, std::move(t));
  return ref;
}

}  // namespace

CycNumber::CycNumber() : n_(1), c_(1) {}

CycNumber::CycNumber(long v) : n_(1), c_(1, Rational(v)) {}

CycNumber::CycNumber(const Rational& q) : n_(1), c_(1, q) {}

CycNumber CycNumber::zero(int conductor) {
  if (conductor < 1) throw std::invalid_argument("conductor must be positive");
  CycNumber z;
  z.n_ = conductor;
  z.c_.assign(cyc_table(conductor).phi, Rational(0));
  return z;
}

CycNumber CycNumber::rational(const Rational& q, int conductor) {
  CycNumber z = zero(conductor);
  z.c_[0] = q;
  return z;
}

CycNumber CycNumber::zeta(int conductor, long power) {
  const CycTable& t = cyc_table(conductor);
  long e = ((power % conductor) + conductor) % conductor;
  CycNumber z = zero(conductor);
  for (int i = 0; i < t.phi; ++i) z.c_[i] = t.pow[e][i];
  return z;
}

CycNumber CycNumber::from_coeffs(int conductor, std::vector<Rational> coeffs) {
  const CycTable& t = cyc_table(conductor);
  CycNumber z = zero(conductor);
  for (size_t e = 0; e < coeffs.size(); ++e) {
    if (sgn(coeffs[e]) == 0) continue;
    size_t r = e % conductor;
    for (int i = 0; i < t.phi; ++i) {
      if (t.pow[r][i] != 0) z.c_[i] += coeffs[e] * t.pow[r][i];
    }
  }
  return z;
}

bool CycNumber::is_zero() const {
  for (const auto& q : c_) {
    if (sgn(q) != 0) return false;
  }
  return true;
}

bool CycNumber::is_rational() const {
  for (size_t i = 1; i < c_.size(); ++i) {
    if (sgn(c_[i]) != 0) return false;
  }
  return true;
}

bool CycNumber::is_one() const { return is_rational() && c_[0] == 1; }

Rational CycNumber::to_rational() const {
  if (!is_rational()) throw std::domain_error("cyclotomic number is not rational");
  return c_[0];
}

CycNumber CycNumber::promote(int conductor) const {
  if (conductor == n_) return *this;
  if (c_.size() == 1) return rational(c_[0], conductor);
  if (conductor % n_ != 0) throw std::invalid_argument("conductor does not divide target");
  const CycTable& t = cyc_table(conductor);
  int step = conductor / n_;
  CycNumber z = zero(conductor);
  for (size_t j = 0; j < c_.size(); ++j) {
    if (sgn(c_[j]) == 0) continue;
    const auto& p = t.pow[j * step];
    for (int i = 0; i < t.phi; ++i) {
      if (p[i] != 0) z.c_[i] += c_[j] * p[i];
    }
  }
  return z;
}

void CycNumber::unify(CycNumber& other) {
  if (n_ == other.n_) return;
  if (other.c_.size() == 1) {
    other = other.promote(n_);
    return;
  }
  if (c_.size() == 1) {
    *this = promote(other.n_);
    return;
  }
  int l = std::lcm(n_, other.n_);
  *this = promote(l);
  other = other.promote(l);
}

CycNumber CycNumber::conj() const {
  if (c_.size() == 1) return *this;
  const CycTable& t = cyc_table(n_);
  CycNumber z = zero(n_);
  for (int j = 0; j < t.phi; ++j) {
    if (sgn(c_[j]) == 0) continue;
    const auto& p = t.pow[(n_ - j) % n_];
    for (int i = 0; i < t.phi; ++i) {
      if (p[i] != 0) z.c_[i] += c_[j] * p[i];
    }
  }
  return z;
}

CycNumber& CycNumber::operator+=(const CycNumber& o) {
  if (n_ != o.n_) {
    CycNumber b = o;
    unify(b);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] += b.c_[i];
    return *this;
  }
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

CycNumber& CycNumber::operator-=(const CycNumber& o) {
  if (n_ != o.n_) {
    CycNumber b = o;
    unify(b);
    for (size_t i = 0; i < c_.size(); ++i) c_[i] -= b.c_[i];
    return *this;
  }
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

CycNumber CycNumber::operator-() const {
  CycNumber z = *this;
  for (auto& q : z.c_) q = -q;
  return z;
}

CycNumber& CycNumber::operator*=(const Rational& q) {
  for (auto& c : c_) c *= q;
  return *this;
}

CycNumber& CycNumber::add_product(const CycNumber& a, const CycNumber& b) {
  thread_local Rational tmp;
  size_t sa = a.c_.size(), sb = b.c_.size();
  if (sa == 1 && sb == 1) {
    mpq_mul(tmp.get_mpq_t(), a.c_[0].get_mpq_t(), b.c_[0].get_mpq_t());
    if (c_.size() == 1) {
      mpq_add(c_[0].get_mpq_t(), c_[0].get_mpq_t(), tmp.get_mpq_t());
      return *this;
    }
    return *this += CycNumber(tmp);
  }
  if (sa == 1 || sb == 1) {
    const CycNumber& r = sa == 1 ? a : b;
    const CycNumber& v = sa == 1 ? b : a;
    if (v.n_ != n_ && c_.size() == 1) *this = promote(v.n_);
    if (v.n_ != n_) return *this += a * b;
    if (sgn(r.c_[0]) == 0) return *this;
    for (size_t i = 0; i < c_.size(); ++i) {
      if (sgn(v.c_[i]) == 0) continue;
      mpq_mul(tmp.get_mpq_t(), r.c_[0].get_mpq_t(), v.c_[i].get_mpq_t());
      mpq_add(c_[i].get_mpq_t(), c_[i].get_mpq_t(), tmp.get_mpq_t());
    }
    return *this;
  }
  if (a.n_ == b.n_ && a.n_ != n_ && c_.size() == 1) *this = promote(a.n_);
  if (a.n_ != n_ || b.n_ != n_) return *this += a * b;
  const CycTable& t = cyc_table(n_);
  int phi = t.phi;
  thread_local std::vector<Rational> conv;
  if (conv.size() < static_cast<size_t>(2 * phi - 1)) conv.resize(2 * phi - 1);
  for (int i = 0; i < 2 * phi - 1; ++i) mpq_set_ui(conv[i].get_mpq_t(), 0, 1);
  for (int i = 0; i < phi; ++i) {
    if (sgn(a.c_[i]) == 0) continue;
    for (int j = 0; j < phi; ++j) {
      if (sgn(b.c_[j]) == 0) continue;
      mpq_mul(tmp.get_mpq_t(), a.c_[i].get_mpq_t(), b.c_[j].get_mpq_t());
      mpq_add(conv[i + j].get_mpq_t(), conv[i + j].get_mpq_t(), tmp.get_mpq_t());
    }
  }
  for (int i = 0; i < phi; ++i) mpq_add(c_[i].get_mpq_t(), c_[i].get_mpq_t(), conv[i].get_mpq_t());
  for (int e = phi; e < 2 * phi - 1; ++e) {
    if (sgn(conv[e]) == 0) continue;
    const auto& p = t.pow[e];
    for (int i = 0; i < phi; ++i) {
      if (p[i] == 0) continue;
      mpz_mul_si(mpq_numref(tmp.get_mpq_t()), mpq_numref(conv[e].get_mpq_t()), p[i]);
      mpz_set(mpq_denref(tmp.get_mpq_t()), mpq_denref(conv[e].get_mpq_t()));
      mpq_canonicalize(tmp.get_mpq_t());
      mpq_add(c_[i].get_mpq_t(), c_[i].get_mpq_t(), tmp.get_mpq_t());
    }
  }
  return *this;
}

CycNumber& CycNumber::operator*=(const CycNumber& o) {
  if (o.c_.size() == 1) {
    if (o.n_ != n_ && c_.size() == 1) n_ = o.n_;
    for (auto& c : c_) c *= o.c_[0];
    return *this;
  }
  if (c_.size() == 1) {
    Rational q = c_[0];
    *this = o;
    for (auto& c : c_) c *= q;
    return *this;
  }
  if (n_ != o.n_) {
    CycNumber b = o;
    unify(b);
    return *this *= b;
  }
  thread_local CycNumber scratch;
  scratch = *this;
  for (auto& c : c_) mpq_set_ui(c.get_mpq_t(), 0, 1);
  return add_product(scratch, o);
}

CycNumber CycNumber::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero");
  if (c_.size() == 1) {
    CycNumber z = *this;
    z.c_[0] = 1 / c_[0];
    return z;
  }
  // Solve (multiplication by *this) y = 1 over Q.
  int phi = static_cast<int>(c_.size());
  std::vector<std::vector<Rational>> m(phi, std::vector<Rational>(phi + 1));
  CycNumber col = *this;
  CycNumber z = CycNumber::zeta(n_, 1);
  for (int j = 0; j < phi; ++j) {
    for (int i = 0; i < phi; ++i) m[i][j] = col.c_[i];
    col *= z;
  }
  m[0][phi] = 1;
  for (int c = 0; c < phi; ++c) {
    int piv = c;
    while (piv < phi && sgn(m[piv][c]) == 0) ++piv;
    if (piv == phi) throw std::domain_error("singular multiplication matrix");
    std::swap(m[piv], m[c]);
    Rational inv = 1 / m[c][c];
    for (int j = c; j <= phi; ++j) m[c][j] *= inv;
    for (int r = 0; r < phi; ++r) {
      if (r == c || sgn(m[r][c]) == 0) continue;
      Rational f = m[r][c];
      for (int j = c; j <= phi; ++j) m[r][j] -= f * m[c][j];
    }
  }
  CycNumber y = zero(n_);
  for (int i = 0; i < phi; ++i) y.c_[i] = m[i][phi];
  return y;
}

CycNumber& CycNumber::operator/=(const CycNumber& o) {
  if (o.c_.size() == 1) {
    if (sgn(o.c_[0]) == 0) throw std::domain_error("division by zero");
    if (o.n_ != n_ && c_.size() == 1) n_ = o.n_;
    for (auto& c : c_) c /= o.c_[0];
    return *this;
  }
  return *this *= o.inverse();
}

bool operator==(const CycNumber& a, const CycNumber& b) {
  if (a.n_ == b.n_) return a.c_ == b.c_;
  CycNumber x = a;
  CycNumber y = b;
  x.unify(y);
  return x.c_ == y.c_;
}

std::string CycNumber::to_string() const {
  if (is_rational()) return qinv::to_string(c_[0]);
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    if (sgn(c_[i]) == 0) continue;
    if (!first) os << (sgn(c_[i]) > 0 ? " + " : " - ");
    else if (sgn(c_[i]) < 0) os << "-";
    Rational a = abs(c_[i]);
    bool unit = (a == 1);
    if (!unit || i == 0) os << a.get_str();
    if (i > 0) {
      if (!unit) os << "*";
      os << "z" << n_;
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  if (first) return "0";
  return os.str();
}

nlohmann::json CycNumber::to_json() const {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& q : c_) coeffs.push_back(rational_to_json(q));
  return {{"conductor", n_}, {"coeffs", coeffs}};
}

CycNumber CycNumber::from_json(const nlohmann::json& j) {
  if (!j.is_object()) return CycNumber(rational_from_json(j));
  int n = j.at("conductor").get<int>();
  if (n < 1) throw std::invalid_argument("conductor must be positive");
  std::vector<Rational> coeffs;
  for (const auto& c : j.at("coeffs")) coeffs.push_back(rational_from_json(c));
  return from_coeffs(n, coeffs);
}

int root_of_unity_exponent(const CycNumber& c, int conductor) {
  CycNumber z = c.promote(conductor);
  for (int e = 0; e < conductor; ++e) {
    if (CycNumber::zeta(conductor, e) == z) return e;
  }
  return -1;
}

}  // namespace qinv
