#include "qinv/polyring.hpp"

#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qinv {

namespace {

void gen_monomials(int nvars, int var, int remaining, Monomial& cur, std::vector<Monomial>& out) {
  if (var == nvars - 1) {
    cur.e[var] = static_cast<int16_t>(remaining);
    out.push_back(cur);
    cur.e[var] = 0;
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    cur.e[var] = static_cast<int16_t>(a);
    gen_monomials(nvars, var + 1, remaining - a, cur, out);
  }
  cur.e[var] = 0;
}

void check_nvars(int nvars) {
  if (nvars < 0 || nvars > kMaxVars) throw std::invalid_argument("unsupported number of variables");
}


struct ModField {
  uint64_t p = 0;
  uint64_t z = 0;  // element of multiplicative order exactly N
};

uint64_t pow_mod(uint64_t b, uint64_t e, uint64_t p) {
  uint64_t r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

ModField mod_field(int n) {
  static std::mutex mu;
  static std::map<int, ModField> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<int> primes;
  for (int q = 2, m = n; m > 1; ++q) {
    if (m % q) continue;
    primes.push_back(q);
    while (m % q == 0) m /= q;
  }
  ModField f;
  uint64_t start = (uint64_t(1) << 31) / n * n + 1;
  for (uint64_t p = start;; p += n) {
    mpz_class zp(static_cast<unsigned long>(p));
    if (!mpz_probab_prime_p(zp.get_mpz_t(), 30)) continue;
    for (uint64_t g = 2;; ++g) {
      uint64_t z = pow_mod(g, (p - 1) / n, p);
      bool primitive = true;
      for (int q : primes) {
        if (pow_mod(z, n / q, p) == 1) primitive = false;
      }
      if (primitive) {
        f = {p, z};
        break;
      }
    }
    break;
  }
  cache.emplace(n, f);
  return f;
}

// Image of c under zeta_N -> z; false when a denominator vanishes mod p.
bool reduce_mod(const CycNumber& c, int big_n, const ModField& f, uint64_t& out) {
  const auto& co = c.coeffs();
  uint64_t step = co.size() == 1 ? 0 : pow_mod(f.z, big_n / c.conductor(), f.p);
  uint64_t zpow = 1, acc = 0;
  for (const auto& q : co) {
    if (sgn(q) != 0) {
      uint64_t num = mpz_fdiv_ui(q.get_num_mpz_t(), f.p);
      uint64_t den = mpz_fdiv_ui(q.get_den_mpz_t(), f.p);
      if (den == 0) return false;
      acc = (acc + num * pow_mod(den, f.p - 2, f.p) % f.p * zpow) % f.p;
    }
    zpow = zpow * step % f.p;
  }
  out = acc;
  return true;
}

// True when f certainly does not vanish on the hyperplane alpha = 0: its value at a point of the
// hyperplane is nonzero in a prime field receiving the cyclotomic coefficients.
bool certainly_not_divisible(const MultiPoly& f, const std::vector<CycNumber>& alpha, int p, int offset) {
  int big_n = 1;
  for (const auto& a : alpha) big_n = std::lcm(big_n, a.conductor());
  for (const auto& [m, c] : f.terms()) big_n = std::lcm(big_n, c.conductor());
  ModField field = mod_field(big_n);
  int nv = f.nvars();
  std::vector<uint64_t> point(nv);
  for (int i = 0; i < nv; ++i) point[i] = 1000003u * static_cast<uint64_t>(i + 7) % field.p;
  uint64_t ap;
  if (!reduce_mod(alpha[p], big_n, field, ap) || ap == 0) return false;
  uint64_t sum = 0;
  for (int j = 0; j < static_cast<int>(alpha.size()); ++j) {
    if (j == p || alpha[j].is_zero()) continue;
    uint64_t aj;
    if (!reduce_mod(alpha[j], big_n, field, aj)) return false;
    sum = (sum + aj * point[offset + j]) % field.p;
  }
  point[offset + p] = (field.p - sum) % field.p * pow_mod(ap, field.p - 2, field.p) % field.p;
  uint64_t value = 0;
  for (const auto& [m, c] : f.terms()) {
    uint64_t t;
    if (!reduce_mod(c, big_n, field, t)) return false;
    for (int i = 0; i < nv; ++i)
      if (m.e[i]) t = t * pow_mod(point[i], m.e[i], field.p) % field.p;
    value = (value + t) % field.p;
  }
  return value != 0;
}

}  // namespace

std::vector<Monomial> monomials_of_degree(int nvars, int d) {
  std::vector<Monomial> out;
  if (d < 0) return out;
  if (nvars == 0) {
    if (d == 0) out.emplace_back();
    return out;
  }
  Monomial cur;
  gen_monomials(nvars, 0, d, cur, out);
  return out;
}

std::vector<std::string> default_var_names(int nvars, const std::string& stem) {
  std::vector<std::string> names;
  for (int i = 0; i < nvars; ++i) names.push_back(stem + std::to_string(i + 1));
  return names;
}

MultiPoly MultiPoly::constant(int nvars, const CycNumber& c) {
  check_nvars(nvars);
  MultiPoly p(nvars);
  p.add_term(Monomial{}, c);
  return p;
}

MultiPoly MultiPoly::variable(int nvars, int index) {
  check_nvars(nvars);
  MultiPoly p(nvars);
  Monomial m;
  m.e[index] = 1;
  p.add_term(m, CycNumber(1));
  return p;
}

MultiPoly MultiPoly::term(int nvars, const Monomial& m, const CycNumber& c) {
  check_nvars(nvars);
  MultiPoly p(nvars);
  p.add_term(m, c);
  return p;
}

MultiPoly MultiPoly::linear_form(int nvars, const std::vector<CycNumber>& coeffs, int offset) {
  check_nvars(nvars);
  MultiPoly p(nvars);
  for (size_t j = 0; j < coeffs.size(); ++j) {
    Monomial m;
    m.e[offset + j] = 1;
    p.add_term(m, coeffs[j]);
  }
  return p;
}

int MultiPoly::degree() const {
  if (terms_.empty()) return -1;
  return terms_.rbegin()->first.degree();
}

bool MultiPoly::is_homogeneous() const {
  if (terms_.empty()) return true;
  return terms_.begin()->first.degree() == terms_.rbegin()->first.degree();
}

CycNumber MultiPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? CycNumber(0) : it->second;
}

void MultiPoly::add_term(const Monomial& m, const CycNumber& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  if (nvars_ < o.nvars_) nvars_ = o.nvars_;
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) {
  if (nvars_ < o.nvars_) nvars_ = o.nvars_;
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

MultiPoly& MultiPoly::operator*=(const CycNumber& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& kv : terms_) kv.second *= c;
  return *this;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly p = *this;
  for (auto& kv : p.terms_) kv.second = -kv.second;
  return p;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  MultiPoly p(std::max(a.nvars_, b.nvars_));
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      auto [it, inserted] = p.terms_.try_emplace(ma * mb);
      if (inserted) {
        it->second = ca;
        it->second *= cb;
      } else {
        it->second.add_product(ca, cb);
      }
    }
  }
  std::erase_if(p.terms_, [](const auto& t) { return t.second.is_zero(); });
  return p;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  auto it = b.terms_.begin();
  for (const auto& [m, c] : a.terms_) {
    if (it->first != m || it->second != c) return false;
    ++it;
  }
  return true;
}

MultiPoly MultiPoly::pow(int k) const {
  if (k < 0) throw std::invalid_argument("negative power");
  MultiPoly result = constant(nvars_, CycNumber(1));
  MultiPoly base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

MultiPoly MultiPoly::derivative(int var) const {
  MultiPoly p(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m.e[var] == 0) continue;
    Monomial n = m;
    n.e[var] -= 1;
    p.add_term(n, c * Rational(m.e[var]));
  }
  return p;
}

MultiPoly MultiPoly::directional_derivative(const std::vector<CycNumber>& v, int offset) const {
  MultiPoly p(nvars_);
  for (size_t j = 0; j < v.size(); ++j) {
    if (v[j].is_zero()) continue;
    p += derivative(offset + static_cast<int>(j)) * v[j];
  }
  return p;
}

MultiPoly MultiPoly::homogeneous_component(int d) const {
  MultiPoly p(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m.degree() == d) p.terms_.emplace_hint(p.terms_.end(), m, c);
  }
  return p;
}

std::map<int, MultiPoly> MultiPoly::homogeneous_components() const {
  std::map<int, MultiPoly> out;
  for (const auto& [m, c] : terms_) {
    auto it = out.try_emplace(m.degree(), nvars_).first;
    it->second.terms_.emplace_hint(it->second.terms_.end(), m, c);
  }
  return out;
}

MultiPoly MultiPoly::partial_component(int offset, int count, int d) const {
  MultiPoly p(nvars_);
  for (const auto& [m, c] : terms_) {
    if (m.degree(offset, count) == d) p.terms_.emplace_hint(p.terms_.end(), m, c);
  }
  return p;
}

void MultiPoly::add_scaled(const MultiPoly& p, const CycNumber& c, const Monomial& shift) {
  if (c.is_zero()) return;
  for (const auto& [m, pc] : p.terms_) {
    auto [it, inserted] = terms_.try_emplace(m * shift);
    if (inserted) {
      it->second = pc;
      it->second *= c;
    } else {
      it->second.add_product(c, pc);
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
}

MultiPoly MultiPoly::substitute_linear(const Matrix& m, int offset) const {
  int dim = static_cast<int>(m.size());
  std::vector<MultiPoly> forms;
  for (int i = 0; i < dim; ++i) forms.push_back(linear_form(nvars_, m[i], offset));
  std::vector<std::vector<MultiPoly>> powers(dim);
  for (int i = 0; i < dim; ++i) powers[i].push_back(constant(nvars_, CycNumber(1)));
  MultiPoly out(nvars_);
  for (const auto& [mono, c] : terms_) {
    Monomial rest = mono;
    MultiPoly prod = constant(nvars_, CycNumber(1));
    bool unit = true;
    for (int i = 0; i < dim; ++i) {
      int e = mono.e[offset + i];
      rest.e[offset + i] = 0;
      if (e == 0) continue;
      while (static_cast<int>(powers[i].size()) <= e) powers[i].push_back(powers[i].back() * forms[i]);
      prod = unit ? powers[i][e] : prod * powers[i][e];
      unit = false;
    }
    for (const auto& [pm, pc] : prod.terms_) {
      auto [it, inserted] = out.terms_.try_emplace(pm * rest);
      if (inserted) {
        it->second = c;
        it->second *= pc;
      } else {
        it->second.add_product(c, pc);
      }
    }
  }
  std::erase_if(out.terms_, [](const auto& t) { return t.second.is_zero(); });
  return out;
}

MultiPoly MultiPoly::remap(int new_nvars, const std::vector<int>& var_map) const {
  check_nvars(new_nvars);
  MultiPoly p(new_nvars);
  for (const auto& [m, c] : terms_) {
    Monomial n;
    for (int i = 0; i < nvars_; ++i) {
      if (m.e[i] == 0) continue;
      n.e[var_map[i]] = static_cast<int16_t>(n.e[var_map[i]] + m.e[i]);
    }
    p.add_term(n, c);
  }
  return p;
}

MultiPoly MultiPoly::conj_coeffs() const {
  MultiPoly p(nvars_);
  for (const auto& [m, c] : terms_) p.terms_.emplace_hint(p.terms_.end(), m, c.conj());
  return p;
}

CycNumber MultiPoly::evaluate(const std::vector<CycNumber>& point) const {
  CycNumber total(0);
  for (const auto& [m, c] : terms_) {
    CycNumber v = c;
    for (int i = 0; i < nvars_; ++i) {
      for (int k = 0; k < m.e[i]; ++k) v *= point[i];
    }
    total += v;
  }
  return total;
}

CycNumber MultiPoly::constant_term() const { return coefficient(Monomial{}); }

std::string MultiPoly::to_string(const std::vector<std::string>& names_in) const {
  if (terms_.empty()) return "0";
  std::vector<std::string> names = names_in.empty() ? default_var_names(nvars_) : names_in;
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    if (!first) os << " + ";
    first = false;
    bool is_const = m.degree() == 0;
    if (c.is_rational()) {
      Rational q = c.to_rational();
      if (is_const || q != 1) {
        if (q == -1 && !is_const) os << "-";
        else os << q.get_str() << (is_const ? "" : "*");
      }
    } else {
      os << "(" << c.to_string() << ")" << (is_const ? "" : "*");
    }
    bool first_var = true;
    for (int i = 0; i < nvars_; ++i) {
      if (m.e[i] == 0) continue;
      if (!first_var) os << "*";
      first_var = false;
      os << names[i];
      if (m.e[i] > 1) os << "^" << m.e[i];
    }
  }
  return os.str();
}

nlohmann::json MultiPoly::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [m, c] : terms_) {
    nlohmann::json ev = nlohmann::json::array();
    for (int i = 0; i < nvars_; ++i) ev.push_back(m.e[i]);
    arr.push_back(nlohmann::json::array({ev, c.to_json()}));
  }
  return arr;
}

MultiPoly MultiPoly::from_json(int nvars, const nlohmann::json& j) {
  MultiPoly p(nvars);
  for (const auto& t : j) {
    Monomial m;
    const auto& ev = t.at(0);
    if (static_cast<int>(ev.size()) != nvars) throw std::invalid_argument("exponent vector length mismatch");
    for (int i = 0; i < nvars; ++i) {
      int e = ev[i].get<int>();
      if (e < 0) throw std::invalid_argument("negative exponent");
      m.e[i] = static_cast<int16_t>(e);
    }
    p.add_term(m, CycNumber::from_json(t.at(1)));
  }
  return p;
}

std::optional<MultiPoly> divide_exact_linear(const MultiPoly& f, const std::vector<CycNumber>& alpha,
                                             int offset) {
  int dim = static_cast<int>(alpha.size());
  int p = -1;
  for (int j = 0; j < dim; ++j) {
    if (!alpha[j].is_zero()) {
      p = j;
      break;
    }
  }
  if (p < 0) throw std::invalid_argument("zero linear form");
  if (f.is_zero()) return f;
  if (certainly_not_divisible(f, alpha, p, offset)) return std::nullopt;
  int pv = offset + p;
  CycNumber inv = alpha[p].inverse();
  int maxe = 0;
  for (const auto& [m, c] : f.terms()) maxe = std::max<int>(maxe, m.e[pv]);
  std::vector<std::map<Monomial, CycNumber, GrLexLess>> level(maxe + 1);
  for (const auto& [m, c] : f.terms()) level[m.e[pv]].emplace(m, c);
  MultiPoly q(f.nvars());
  for (int l = maxe; l >= 1; --l) {
    for (const auto& [m, c] : level[l]) {
      if (c.is_zero()) continue;
      Monomial base = m;
      base.e[pv] -= 1;
      CycNumber coef = c * inv;
      q.add_term(base, coef);
      for (int j = 0; j < dim; ++j) {
        if (j == p || alpha[j].is_zero()) continue;
        Monomial t = base;
        t.e[offset + j] += 1;
        auto [it, ins] = level[l - 1].try_emplace(t, CycNumber(0));
        it->second -= coef * alpha[j];
      }
    }
  }
  for (const auto& [m, c] : level[0]) {
    if (!c.is_zero()) return std::nullopt;
  }
  return q;
}

int linear_valuation(const MultiPoly& f, const std::vector<CycNumber>& alpha, int offset, int cap) {
  if (f.is_zero()) return cap;
  int v = 0;
  MultiPoly cur = f;
  while (v < cap) {
    auto q = divide_exact_linear(cur, alpha, offset);
    if (!q) break;
    cur = std::move(*q);
    ++v;
  }
  return v;
}

LocalizedPoly::LocalizedPoly(std::shared_ptr<const LinearForms> forms, MultiPoly num, std::vector<int> den)
    : forms_(std::move(forms)), num_(std::move(num)), den_(std::move(den)) {
  den_.resize(forms_->alpha.size(), 0);
  for (int d : den_) {
    if (d < 0) throw std::invalid_argument("negative denominator power");
  }
  reduce();
}

LocalizedPoly LocalizedPoly::constant(std::shared_ptr<const LinearForms> forms, const CycNumber& c) {
  int n = forms->nvars;
  return LocalizedPoly(std::move(forms), MultiPoly::constant(n, c));
}

LocalizedPoly LocalizedPoly::monomial_in_forms(std::shared_ptr<const LinearForms> forms,
                                               const std::vector<int>& powers) {
  MultiPoly num = MultiPoly::constant(forms->nvars, CycNumber(1));
  std::vector<int> den(forms->alpha.size(), 0);
  for (size_t h = 0; h < powers.size(); ++h) {
    if (powers[h] > 0) num = num * forms->poly[h].pow(powers[h]);
    else den[h] = -powers[h];
  }
  return LocalizedPoly(std::move(forms), std::move(num), std::move(den));
}

bool LocalizedPoly::is_polynomial() const {
  for (int d : den_) {
    if (d != 0) return false;
  }
  return true;
}

int LocalizedPoly::degree() const {
  int d = num_.degree();
  for (int x : den_) d -= x;
  return d;
}

MultiPoly LocalizedPoly::denominator_poly() const {
  MultiPoly p = MultiPoly::constant(forms_->nvars, CycNumber(1));
  for (size_t h = 0; h < den_.size(); ++h) {
    if (den_[h] > 0) p = p * forms_->poly[h].pow(den_[h]);
  }
  return p;
}

void LocalizedPoly::reduce() {
  if (num_.is_zero()) {
    std::fill(den_.begin(), den_.end(), 0);
    return;
  }
  for (size_t h = 0; h < den_.size(); ++h) {
    while (den_[h] > 0) {
      auto q = divide_exact_linear(num_, forms_->alpha[h], forms_->offset);
      if (!q) break;
      num_ = std::move(*q);
      --den_[h];
    }
  }
}

void LocalizedPoly::raise_to(const std::vector<int>& den) {
  for (size_t h = 0; h < den_.size(); ++h) {
    if (den[h] > den_[h]) {
      num_ = num_ * forms_->poly[h].pow(den[h] - den_[h]);
      den_[h] = den[h];
    }
  }
}

LocalizedPoly& LocalizedPoly::operator+=(const LocalizedPoly& o) {
  if (o.is_zero()) return *this;
  if (!forms_) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    reduce();
    return *this;
  }
  std::vector<int> target(den_.size());
  for (size_t h = 0; h < den_.size(); ++h) target[h] = std::max(den_[h], o.den_[h]);
  LocalizedPoly b = o;
  raise_to(target);
  b.raise_to(target);
  num_ += b.num_;
  reduce();
  return *this;
}

LocalizedPoly& LocalizedPoly::operator-=(const LocalizedPoly& o) { return *this += -o; }

LocalizedPoly& LocalizedPoly::operator*=(const CycNumber& c) {
  num_ *= c;
  if (num_.is_zero()) std::fill(den_.begin(), den_.end(), 0);
  return *this;
}

LocalizedPoly LocalizedPoly::operator-() const {
  LocalizedPoly p = *this;
  p.num_ = -p.num_;
  return p;
}

LocalizedPoly operator*(const LocalizedPoly& a, const LocalizedPoly& b) {
  if (!a.forms_) return a;
  if (!b.forms_) return b;
  std::vector<int> den(a.den_.size());
  for (size_t h = 0; h < den.size(); ++h) den[h] = a.den_[h] + b.den_[h];
  return LocalizedPoly(a.forms_, a.num_ * b.num_, std::move(den));
}

bool operator==(const LocalizedPoly& a, const LocalizedPoly& b) {
  if (a.den_ == b.den_) return a.num_ == b.num_;
  return (a - b).is_zero();
}

LocalizedPoly LocalizedPoly::derivative(int var) const {
  int off = forms_->offset;
  int local = var - off;
  bool in_range = local >= 0 && local < forms_->dim;
  std::vector<int> active;
  for (size_t h = 0; h < den_.size(); ++h) {
    if (den_[h] > 0) active.push_back(static_cast<int>(h));
  }
  if (active.empty() || !in_range) {
    std::vector<int> den = den_;
    return LocalizedPoly(forms_, num_.derivative(var), den);
  }
  MultiPoly prod_all = MultiPoly::constant(forms_->nvars, CycNumber(1));
  for (int h : active) prod_all = prod_all * forms_->poly[h];
  MultiPoly num = num_.derivative(var) * prod_all;
  for (int h : active) {
    const CycNumber& a = forms_->alpha[h][local];
    if (a.is_zero()) continue;
    MultiPoly others = MultiPoly::constant(forms_->nvars, a * CycNumber(den_[h]));
    for (int g : active) {
      if (g != h) others = others * forms_->poly[g];
    }
    num -= num_ * others;
  }
  std::vector<int> den = den_;
  for (int h : active) den[h] += 1;
  return LocalizedPoly(forms_, std::move(num), std::move(den));
}

LocalizedPoly LocalizedPoly::times_poly(const MultiPoly& p) const {
  return LocalizedPoly(forms_, num_ * p, den_);
}

LocalizedPoly LocalizedPoly::embed(std::shared_ptr<const LinearForms> forms,
                                   const std::vector<int>& var_map) const {
  int n = forms->nvars;
  return LocalizedPoly(std::move(forms), num_.remap(n, var_map), den_);
}

std::string LocalizedPoly::to_string(const std::vector<std::string>& names) const {
  std::string s = "(" + num_.to_string(names) + ")";
  if (is_polynomial()) return s;
  s += " / (";
  bool first = true;
  for (size_t h = 0; h < den_.size(); ++h) {
    if (den_[h] == 0) continue;
    if (!first) s += "*";
    first = false;
    s += "a" + std::to_string(h);
    if (den_[h] > 1) s += "^" + std::to_string(den_[h]);
  }
  return s + ")";
}

}  // namespace qinv
