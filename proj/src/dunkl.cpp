#include "qinv/dunkl.hpp"

#include <functional>
#include <sstream>

namespace qinv {

namespace {

Rational binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

// All mu <= alpha componentwise, with the product of binomials.
void sub_indices(const Monomial& alpha, int dim, int var, Monomial& cur, Rational coef,
                 std::vector<std::pair<Monomial, Rational>>& out) {
  if (var == dim) {
    out.emplace_back(cur, coef);
    return;
  }
  for (int m = 0; m <= alpha.e[var]; ++m) {
    cur.e[var] = static_cast<int16_t>(m);
    sub_indices(alpha, dim, var + 1, cur, coef * binomial(alpha.e[var], m), out);
  }
  cur.e[var] = 0;
}

Monomial minus(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (int i = 0; i < kMaxVars; ++i) m.e[i] = static_cast<int16_t>(a.e[i] - b.e[i]);
  return m;
}

LocalizedPoly derivative_multi(const LocalizedPoly& c, const Monomial& mu, int dim,
                               std::map<Monomial, LocalizedPoly, GrLexLess>& cache) {
  auto it = cache.find(mu);
  if (it != cache.end()) return it->second;
  int var = -1;
  for (int i = 0; i < dim; ++i) {
    if (mu.e[i] > 0) {
      var = i;
      break;
    }
  }
  LocalizedPoly r;
  if (var < 0) {
    r = c;
  } else {
    Monomial prev = mu;
    prev.e[var] -= 1;
    r = derivative_multi(c, prev, dim, cache).derivative(c.forms()->offset + var);
  }
  cache.emplace(mu, r);
  return r;
}

// Sums of coefficient terms numerator / prod alpha_H^{den[H]}, grouped by denominator and
// brought to a common denominator once per partial monomial.
class TermAccumulator {
 public:
  explicit TermAccumulator(const LinearForms& lf) : lf_(lf) {}

  void add(const Monomial& m, const MultiPoly& num, const std::vector<int>& den) {
    if (num.is_zero()) return;
    auto [it, inserted] = raw_[m].try_emplace(den, lf_.nvars);
    it->second += num;
  }

  DiffOp finish(const std::shared_ptr<const LinearForms>& forms) {
    size_t nh = lf_.alpha.size();
    DiffOp out(forms);
    for (auto& [m, parts] : raw_) {
      std::vector<int> target(nh, 0);
      for (const auto& part : parts)
        if (!part.second.is_zero())
          for (size_t h = 0; h < nh; ++h) target[h] = std::max(target[h], part.first[h]);
      MultiPoly sum(lf_.nvars);
      for (auto& [den, num] : parts) {
        if (num.is_zero()) continue;
        std::vector<int> gap(nh);
        for (size_t h = 0; h < nh; ++h) gap[h] = target[h] - den[h];
        sum += num * lift(gap);
      }
      if (!sum.is_zero()) out.add_term(m, LocalizedPoly(forms, std::move(sum), std::move(target)));
    }
    raw_.clear();
    return out;
  }

 private:
  const MultiPoly& lift(const std::vector<int>& gap) {
    auto it = lifts_.find(gap);
    if (it != lifts_.end()) return it->second;
    MultiPoly l = MultiPoly::constant(lf_.nvars, CycNumber(1));
    for (size_t h = 0; h < gap.size(); ++h)
      if (gap[h] > 0) l = l * lf_.poly[h].pow(gap[h]);
    return lifts_.emplace(gap, std::move(l)).first->second;
  }

  const LinearForms& lf_;
  std::map<Monomial, std::map<std::vector<int>, MultiPoly>, GrLexLess> raw_;
  std::map<std::vector<int>, MultiPoly> lifts_;
};

std::shared_ptr<const LinearForms> common_forms(const std::shared_ptr<const LinearForms>& a,
                                                const std::shared_ptr<const LinearForms>& b) {
  return a ? a : b;
}

}  // namespace

DiffOp DiffOp::identity(std::shared_ptr<const LinearForms> forms) {
  DiffOp d(forms);
  d.add_term(Monomial{}, LocalizedPoly::constant(forms, CycNumber(1)));
  return d;
}

DiffOp DiffOp::multiplication(const LocalizedPoly& c) {
  DiffOp d(c.forms());
  d.add_term(Monomial{}, c);
  return d;
}

DiffOp DiffOp::constant_coefficient(std::shared_ptr<const LinearForms> forms, const MultiPoly& p) {
  DiffOp d(forms);
  for (const auto& [m, c] : p.terms()) d.add_term(m, LocalizedPoly::constant(forms, c));
  return d;
}

DiffOp DiffOp::partial(std::shared_ptr<const LinearForms> forms, int var) {
  DiffOp d(forms);
  Monomial m;
  m.e[var] = 1;
  d.add_term(m, LocalizedPoly::constant(forms, CycNumber(1)));
  return d;
}

int DiffOp::order() const {
  int o = -1;
  for (const auto& [m, c] : terms_) o = std::max(o, m.degree());
  return o;
}

void DiffOp::add_term(const Monomial& d, const LocalizedPoly& c) {
  if (c.is_zero()) return;
  if (!forms_) forms_ = c.forms();
  auto [it, inserted] = terms_.try_emplace(d, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  if (!forms_) forms_ = o.forms_;
  return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  if (!forms_) forms_ = o.forms_;
  return *this;
}

DiffOp& DiffOp::operator*=(const CycNumber& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, x] : terms_) x *= c;
  return *this;
}

DiffOp operator*(const DiffOp& a, const DiffOp& b) {
  auto forms = common_forms(a.forms_, b.forms_);
  if (a.is_zero() || b.is_zero()) return DiffOp(forms);
  int dim = forms->dim;
  size_t nh = forms->alpha.size();
  TermAccumulator acc(*forms);
  std::vector<int> den(nh);
  for (const auto& [beta, cb] : b.terms_) {
    std::map<Monomial, LocalizedPoly, GrLexLess> cache;
    for (const auto& [alpha, ca] : a.terms_) {
      std::vector<std::pair<Monomial, Rational>> mus;
      Monomial cur;
      sub_indices(alpha, dim, 0, cur, Rational(1), mus);
      for (const auto& [mu, binom] : mus) {
        LocalizedPoly d = derivative_multi(cb, mu, dim, cache);
        if (d.is_zero()) continue;
        for (size_t h = 0; h < nh; ++h) den[h] = ca.denominator()[h] + d.denominator()[h];
        MultiPoly num = ca.numerator() * d.numerator();
        num *= CycNumber(binom);
        acc.add(minus(alpha, mu) * beta, num, den);
      }
    }
  }
  return acc.finish(forms);
}

bool operator==(const DiffOp& a, const DiffOp& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  auto it = b.terms_.begin();
  for (const auto& [m, c] : a.terms_) {
    if (it->first != m || it->second != c) return false;
    ++it;
  }
  return true;
}

DiffOp DiffOp::left_multiply(const LocalizedPoly& c) const {
  DiffOp out(forms_);
  if (c.is_zero()) return out;
  for (const auto& [m, x] : terms_) out.add_term(m, c * x);
  return out;
}

LocalizedPoly DiffOp::apply(const LocalizedPoly& f) const {
  LocalizedPoly out = LocalizedPoly::constant(f.forms(), CycNumber(0));
  std::map<Monomial, LocalizedPoly, GrLexLess> cache;
  for (const auto& [m, c] : terms_) {
    LocalizedPoly d = derivative_multi(f, m, dim(), cache);
    if (!d.is_zero()) out += c * d;
  }
  return out;
}

LocalizedPoly DiffOp::apply(const MultiPoly& f) const { return apply(LocalizedPoly(forms_, f)); }

DiffOp DiffOp::conjugate(const ReflectionGroup& g, int w) const {
  if (w == 0) return *this;
  int n = dim();
  const Matrix& mw = g.element(w);
  Matrix mt(n, std::vector<CycNumber>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mt[j][i] = mw[i][j];
  DiffOp out(forms_);
  for (const auto& [m, c] : terms_) {
    LocalizedPoly wc = g.act(w, c);
    MultiPoly q = MultiPoly::term(n, m, CycNumber(1)).substitute_linear(mt);
    for (const auto& [mm, qc] : q.terms()) out.add_term(mm, wc * qc);
  }
  return out;
}

bool DiffOp::is_invariant(const ReflectionGroup& g, int* witness) const {
  for (int s : g.generators()) {
    if (conjugate(g, s) != *this) {
      if (witness) *witness = s;
      return false;
    }
  }
  return true;
}

DiffOp DiffOp::top_order_part() const {
  DiffOp out(forms_);
  int o = order();
  for (const auto& [m, c] : terms_) {
    if (m.degree() == o) out.add_term(m, c);
  }
  return out;
}

DiffOp DiffOp::shift_partials(const std::vector<LocalizedPoly>& omega) const {
  int n = dim();
  std::vector<DiffOp> shifted;
  for (int j = 0; j < n; ++j) shifted.push_back(partial(forms_, j) + multiplication(omega[j]));
  DiffOp out(forms_);
  for (const auto& [m, c] : terms_) {
    DiffOp prod = multiplication(c);
    for (int j = 0; j < n; ++j)
      for (int r = 0; r < m.e[j]; ++r) prod = prod * shifted[j];
    out += prod;
  }
  return out;
}

std::string DiffOp::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  auto names = default_var_names(dim());
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) s += " + ";
    first = false;
    s += it->second.to_string(names);
    for (int j = 0; j < dim(); ++j) {
      if (it->first.e[j] == 0) continue;
      s += "*d" + std::to_string(j + 1);
      if (it->first.e[j] > 1) s += "^" + std::to_string(it->first.e[j]);
    }
  }
  return s;
}

nlohmann::json DiffOp::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [m, c] : terms_) {
    std::vector<int> e(m.e.begin(), m.e.begin() + dim());
    arr.push_back({{"partial", e}, {"numerator", c.numerator().to_json()}, {"denominator", c.denominator()}});
  }
  return arr;
}

DiffReflOp::DiffReflOp(const ReflectionGroup& g) : g_(&g) {}

DiffReflOp DiffReflOp::group_element(const ReflectionGroup& g, int w, const CycNumber& c) {
  DiffReflOp op(g);
  auto forms = g.forms(g.dim(), 0);
  op.add(w, DiffOp::identity(forms) * c);
  return op;
}

DiffReflOp DiffReflOp::from_diffop(const ReflectionGroup& g, const DiffOp& d) {
  DiffReflOp op(g);
  op.add(0, d);
  return op;
}

DiffReflOp DiffReflOp::multiplication(const ReflectionGroup& g, const LocalizedPoly& c) {
  return from_diffop(g, DiffOp::multiplication(c));
}

DiffReflOp DiffReflOp::partial(const ReflectionGroup& g, int var) {
  return from_diffop(g, DiffOp::partial(g.forms(g.dim(), 0), var));
}

DiffOp DiffReflOp::part(int w) const {
  auto it = parts_.find(w);
  if (it == parts_.end()) return DiffOp(g_->forms(g_->dim(), 0));
  return it->second;
}

void DiffReflOp::add(int w, const DiffOp& d) {
  if (d.is_zero()) return;
  auto [it, inserted] = parts_.try_emplace(w, d);
  if (!inserted) {
    it->second += d;
    if (it->second.is_zero()) parts_.erase(it);
  }
}

DiffReflOp& DiffReflOp::operator+=(const DiffReflOp& o) {
  for (const auto& [w, d] : o.parts_) add(w, d);
  return *this;
}

DiffReflOp& DiffReflOp::operator-=(const DiffReflOp& o) {
  for (const auto& [w, d] : o.parts_) add(w, d * CycNumber(-1));
  return *this;
}

DiffReflOp& DiffReflOp::operator*=(const CycNumber& c) {
  if (c.is_zero()) {
    parts_.clear();
    return *this;
  }
  for (auto& [w, d] : parts_) d *= c;
  return *this;
}

DiffReflOp operator*(const DiffReflOp& a, const DiffReflOp& b) {
  DiffReflOp out(*a.g_);
  for (const auto& [w1, d1] : a.parts_) {
    for (const auto& [w2, d2] : b.parts_) out.add(a.g_->mult(w1, w2), d1 * d2.conjugate(*a.g_, w1));
  }
  return out;
}

bool operator==(const DiffReflOp& a, const DiffReflOp& b) { return a.parts_ == b.parts_; }

LocalizedPoly DiffReflOp::apply(const LocalizedPoly& f) const {
  LocalizedPoly out = LocalizedPoly::constant(f.forms(), CycNumber(0));
  for (const auto& [w, d] : parts_) out += d.apply(g_->act(w, f));
  return out;
}

LocalizedPoly DiffReflOp::apply(const MultiPoly& f) const { return apply(LocalizedPoly(g_->forms(g_->dim(), 0), f)); }

MultiPoly DiffReflOp::apply_strict(const MultiPoly& f) const {
  LocalizedPoly r = apply(f);
  if (!r.is_polynomial()) throw UnexpectedDenominator("operator output has a denominator: " + r.to_string());
  return r.numerator();
}

DiffReflOp DiffReflOp::conjugate(int w) const {
  DiffReflOp out(*g_);
  int wi = g_->inv(w);
  for (const auto& [v, d] : parts_) out.add(g_->mult(g_->mult(w, v), wi), d.conjugate(*g_, w));
  return out;
}

bool DiffReflOp::is_invariant(int* witness) const {
  for (int s : g_->generators()) {
    if (conjugate(s) != *this) {
      if (witness) *witness = s;
      return false;
    }
  }
  return true;
}

DiffOp DiffReflOp::res(bool check) const {
  int witness = -1;
  if (check && !is_invariant(&witness)) {
    throw NotInvariant("operator is not W-invariant (generator " + std::to_string(witness) + ")", witness);
  }
  DiffOp out(g_->forms(g_->dim(), 0));
  for (const auto& [w, d] : parts_) out += d;
  return out;
}

std::string DiffReflOp::to_string() const {
  if (parts_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [w, d] : parts_) {
    if (!first) s += " + ";
    first = false;
    s += "[" + d.to_string() + "]*g" + std::to_string(w);
  }
  return s;
}

nlohmann::json DiffReflOp::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [w, d] : parts_) arr.push_back({{"element", w}, {"op", d.to_json()}});
  return arr;
}

CycNumber reflection_coefficient(const ReflectionGroup& g, const Multiplicity& k, int h, int j) {
  const Hyperplane& hp = g.hyperplanes()[h];
  int step = g.conductor() / hp.order;
  CycNumber c(0);
  for (int i = 0; i < hp.order; ++i) {
    const Rational& ki = k.value(g, h, i);
    if (sgn(ki) == 0) continue;
    c += g.zeta_pow(-static_cast<long>(i) * j * step) * CycNumber(ki);
  }
  return c;
}

namespace {

std::vector<std::vector<CycNumber>> reflection_coefficients(const ReflectionGroup& g, const Multiplicity& k) {
  k.validate(g);
  std::vector<std::vector<CycNumber>> out;
  for (size_t h = 0; h < g.hyperplanes().size(); ++h) {
    std::vector<CycNumber> row;
    for (int j = 0; j < g.hyperplanes()[h].order; ++j)
      row.push_back(reflection_coefficient(g, k, static_cast<int>(h), j));
    out.push_back(row);
  }
  return out;
}

CycNumber pair_form(const std::vector<CycNumber>& alpha, const std::vector<CycNumber>& xi) {
  CycNumber s(0);
  for (size_t i = 0; i < alpha.size(); ++i) s += alpha[i] * xi[i];
  return s;
}

LocalizedPoly inverse_form(const std::shared_ptr<const LinearForms>& forms, int h) {
  std::vector<int> powers(forms->alpha.size(), 0);
  powers[h] = -1;
  return LocalizedPoly::monomial_in_forms(forms, powers);
}

}  // namespace

std::vector<CycNumber> unit_vector(int dim, int j) {
  std::vector<CycNumber> v(dim, CycNumber(0));
  v[j] = CycNumber(1);
  return v;
}

DiffReflOp dunkl_operator(const ReflectionGroup& g, const Multiplicity& k, const std::vector<CycNumber>& xi) {
  auto coeff = reflection_coefficients(g, k);
  auto forms = g.forms(g.dim(), 0);
  DiffReflOp op(g);
  DiffOp d(forms);
  for (int j = 0; j < g.dim(); ++j) {
    if (!xi[j].is_zero()) d += DiffOp::partial(forms, j) * xi[j];
  }
  op.add(0, d);
  for (size_t h = 0; h < g.hyperplanes().size(); ++h) {
    const Hyperplane& hp = g.hyperplanes()[h];
    CycNumber a = pair_form(hp.alpha, xi);
    if (a.is_zero()) continue;
    LocalizedPoly inv = inverse_form(forms, static_cast<int>(h));
    for (int j = 0; j < hp.order; ++j) {
      CycNumber c = coeff[h][j] * a;
      if (c.is_zero()) continue;
      op.add(hp.stabilizer[j], DiffOp::multiplication(inv * (-c)));
    }
  }
  return op;
}

DiffReflOp dunkl_polynomial(const ReflectionGroup& g, const Multiplicity& k, const MultiPoly& p) {
  std::vector<DiffReflOp> t;
  for (int j = 0; j < g.dim(); ++j) t.push_back(dunkl_operator(g, k, unit_vector(g.dim(), j)));
  std::map<Monomial, DiffReflOp, GrLexLess> memo;
  memo.emplace(Monomial{}, DiffReflOp::group_element(g, 0));
  std::function<const DiffReflOp&(const Monomial&)> get = [&](const Monomial& m) -> const DiffReflOp& {
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;
    int var = 0;
    while (m.e[var] == 0) ++var;
    Monomial prev = m;
    prev.e[var] -= 1;
    DiffReflOp r = t[var] * get(prev);
    return memo.emplace(m, std::move(r)).first->second;
  };
  DiffReflOp out(g);
  for (const auto& [m, c] : p.terms()) out += get(m) * c;
  return out;
}

SphericalDunkl::SphericalDunkl(const ReflectionGroup& g, const Multiplicity& k)
    : g_(&g), k_(k), coeff_(reflection_coefficients(g, k)) {}

DiffOp SphericalDunkl::apply(const std::vector<CycNumber>& xi, const DiffOp& d) const {
  auto forms = g_->forms(g_->dim(), 0);
  TermAccumulator acc(*forms);
  for (int j = 0; j < g_->dim(); ++j) {
    if (xi[j].is_zero()) continue;
    DiffOp pd = DiffOp::partial(forms, j) * d;
    for (const auto& [m, c] : pd.terms()) acc.add(m, c.numerator() * xi[j], c.denominator());
  }
  std::map<int, DiffOp> conj_cache;
  for (size_t h = 0; h < g_->hyperplanes().size(); ++h) {
    const Hyperplane& hp = g_->hyperplanes()[h];
    CycNumber a = pair_form(hp.alpha, xi);
    if (a.is_zero()) continue;
    for (int j = 0; j < hp.order; ++j) {
      if (coeff_[h][j].is_zero()) continue;
      int w = hp.stabilizer[j];
      auto it = conj_cache.find(w);
      if (it == conj_cache.end()) it = conj_cache.emplace(w, d.conjugate(*g_, w)).first;
      CycNumber scale = -(coeff_[h][j] * a);
      for (const auto& [m, c] : it->second.terms()) {
        std::vector<int> den = c.denominator();
        den[h] += 1;
        acc.add(m, c.numerator() * scale, den);
      }
    }
  }
  return acc.finish(forms);
}

DiffOp SphericalDunkl::apply_polynomial(const MultiPoly& p, const DiffOp& d) const {
  int n = g_->dim();
  std::map<Monomial, DiffOp, GrLexLess> memo;
  memo.emplace(Monomial{}, d);
  std::function<const DiffOp&(const Monomial&)> get = [&](const Monomial& m) -> const DiffOp& {
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;
    int var = 0;
    while (m.e[var] == 0) ++var;
    Monomial prev = m;
    prev.e[var] -= 1;
    DiffOp r = apply(unit_vector(n, var), get(prev));
    return memo.emplace(m, std::move(r)).first->second;
  };
  DiffOp out(d.forms());
  for (const auto& [m, c] : p.terms()) out += get(m) * c;
  return out;
}

bool is_dual_invariant(const ReflectionGroup& g, const MultiPoly& p) {
  int n = g.dim();
  for (int s : g.generators()) {
    const Matrix& m = g.element(s);
    Matrix mt(n, std::vector<CycNumber>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) mt[j][i] = m[i][j];
    if (p.substitute_linear(mt) != p) return false;
  }
  return true;
}

DiffOp calogero_moser(const ReflectionGroup& g, const Multiplicity& k, const MultiPoly& p) {
  if (!is_dual_invariant(g, p)) throw NotInvariant("p is not W-invariant", -1);
  SphericalDunkl sd(g, k);
  return sd.apply_polynomial(p, DiffOp::identity(g.forms(g.dim(), 0)));
}

DunklAction::DunklAction(const ReflectionGroup& g, const Multiplicity& k)
    : g_(&g), k_(k), coeff_(reflection_coefficients(g, k)) {}

std::optional<MultiPoly> DunklAction::apply(const std::vector<CycNumber>& xi, const MultiPoly& f) const {
  MultiPoly out = f.directional_derivative(xi);
  for (size_t h = 0; h < g_->hyperplanes().size(); ++h) {
    const Hyperplane& hp = g_->hyperplanes()[h];
    CycNumber a = pair_form(hp.alpha, xi);
    if (a.is_zero()) continue;
    MultiPoly s(f.nvars());
    for (int j = 0; j < hp.order; ++j) {
      if (coeff_[h][j].is_zero()) continue;
      s += g_->act(hp.stabilizer[j], f) * coeff_[h][j];
    }
    if (s.is_zero()) continue;
    auto q = divide_exact_linear(s, hp.alpha);
    if (!q) return std::nullopt;
    out -= *q * a;
  }
  return out;
}

MultiPoly DunklAction::apply_strict(const std::vector<CycNumber>& xi, const MultiPoly& f) const {
  auto r = apply(xi, f);
  if (!r) throw UnexpectedDenominator("Dunkl operator produced a pole on " + f.to_string());
  return *r;
}

LocalizedPoly DunklAction::apply(const std::vector<CycNumber>& xi, const LocalizedPoly& f) const {
  LocalizedPoly out = LocalizedPoly::constant(f.forms(), CycNumber(0));
  for (int j = 0; j < g_->dim(); ++j) {
    if (!xi[j].is_zero()) out += f.derivative(f.forms()->offset + j) * xi[j];
  }
  for (size_t h = 0; h < g_->hyperplanes().size(); ++h) {
    const Hyperplane& hp = g_->hyperplanes()[h];
    CycNumber a = pair_form(hp.alpha, xi);
    if (a.is_zero()) continue;
    LocalizedPoly s = LocalizedPoly::constant(f.forms(), CycNumber(0));
    for (int j = 0; j < hp.order; ++j) {
      if (coeff_[h][j].is_zero()) continue;
      s += g_->act(hp.stabilizer[j], f) * coeff_[h][j];
    }
    out -= s * inverse_form(f.forms(), static_cast<int>(h)) * a;
  }
  return out;
}

std::optional<std::vector<MultiPoly>> DunklAction::apply_tau(const std::vector<CycNumber>& xi,
                                                             const std::vector<MultiPoly>& f,
                                                             const WRep& tau) const {
  int d = tau.dim;
  std::vector<MultiPoly> out;
  for (int r = 0; r < d; ++r) out.push_back(f[r].directional_derivative(xi));
  for (size_t h = 0; h < g_->hyperplanes().size(); ++h) {
    const Hyperplane& hp = g_->hyperplanes()[h];
    CycNumber a = pair_form(hp.alpha, xi);
    if (a.is_zero()) continue;
    std::vector<MultiPoly> s(d, MultiPoly(f[0].nvars()));
    for (int j = 0; j < hp.order; ++j) {
      if (coeff_[h][j].is_zero()) continue;
      int w = hp.stabilizer[j];
      const Matrix& rho = tau.mats[w];
      std::vector<MultiPoly> wf;
      for (int c = 0; c < d; ++c) wf.push_back(g_->act(w, f[c]));
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
          if (rho[r][c].is_zero() || wf[c].is_zero()) continue;
          s[r] += wf[c] * (rho[r][c] * coeff_[h][j]);
        }
      }
    }
    for (int r = 0; r < d; ++r) {
      if (s[r].is_zero()) continue;
      auto q = divide_exact_linear(s[r], hp.alpha);
      if (!q) return std::nullopt;
      out[r] -= *q * a;
    }
  }
  return out;
}

std::optional<std::vector<std::vector<MultiPoly>>> DunklAction::apply_tau_all(const std::vector<MultiPoly>& f,
                                                                              const WRep& tau) const {
  int d = tau.dim;
  int n = g_->dim();
  std::vector<std::vector<MultiPoly>> out(n);
  for (int j = 0; j < n; ++j)
    for (int r = 0; r < d; ++r) out[j].push_back(f[r].derivative(j));
  for (size_t h = 0; h < g_->hyperplanes().size(); ++h) {
    const Hyperplane& hp = g_->hyperplanes()[h];
    std::vector<MultiPoly> s(d, MultiPoly(f[0].nvars()));
    for (int j = 0; j < hp.order; ++j) {
      if (coeff_[h][j].is_zero()) continue;
      int w = hp.stabilizer[j];
      const Matrix& rho = tau.mats[w];
      std::vector<MultiPoly> wf;
      for (int c = 0; c < d; ++c) wf.push_back(g_->act(w, f[c]));
      for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) {
          if (rho[r][c].is_zero() || wf[c].is_zero()) continue;
          s[r] += wf[c] * (rho[r][c] * coeff_[h][j]);
        }
      }
    }
    for (int r = 0; r < d; ++r) {
      if (s[r].is_zero()) continue;
      auto q = divide_exact_linear(s[r], hp.alpha);
      if (!q) return std::nullopt;
      for (int j = 0; j < n; ++j) {
        if (hp.alpha[j].is_zero()) continue;
        out[j][r] -= *q * hp.alpha[j];
      }
    }
  }
  return out;
}

MultiPoly DunklAction::apply_polynomial(const MultiPoly& p, const MultiPoly& q) const {
  int n = g_->dim();
  std::map<Monomial, MultiPoly, GrLexLess> memo;
  memo.emplace(Monomial{}, q);
  std::function<const MultiPoly&(const Monomial&)> get = [&](const Monomial& m) -> const MultiPoly& {
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;
    int var = 0;
    while (m.e[var] == 0) ++var;
    Monomial prev = m;
    prev.e[var] -= 1;
    MultiPoly r = apply_strict(unit_vector(n, var), get(prev));
    return memo.emplace(m, std::move(r)).first->second;
  };
  MultiPoly out(q.nvars());
  for (const auto& [m, c] : p.terms()) out += get(m) * c;
  return out;
}

DiffReflOp euler_operator(const ReflectionGroup& g, const Multiplicity& k) {
  auto forms = g.forms(g.dim(), 0);
  DiffReflOp out(g);
  for (int i = 0; i < g.dim(); ++i) {
    LocalizedPoly xi(forms, MultiPoly::variable(g.dim(), i));
    out += DiffReflOp::multiplication(g, xi) * dunkl_operator(g, k, unit_vector(g.dim(), i));
  }
  return out;
}

std::vector<CycNumber> central_element(const ReflectionGroup& g, const Multiplicity& k) {
  auto coeff = reflection_coefficients(g, k);
  std::vector<CycNumber> z(g.order(), CycNumber(0));
  for (size_t h = 0; h < g.hyperplanes().size(); ++h) {
    const Hyperplane& hp = g.hyperplanes()[h];
    for (int j = 0; j < hp.order; ++j) z[hp.stabilizer[j]] += coeff[h][j];
  }
  return z;
}

DiffReflOp group_algebra_element(const ReflectionGroup& g, const std::vector<CycNumber>& coeffs) {
  DiffReflOp out(g);
  for (int w = 0; w < g.order(); ++w) {
    if (!coeffs[w].is_zero()) out += DiffReflOp::group_element(g, w, coeffs[w]);
  }
  return out;
}

CycNumber c_tau(const ReflectionGroup& g, const Multiplicity& k, const WRep& tau) {
  auto z = central_element(g, k);
  CycNumber tr(0);
  for (int w = 0; w < g.order(); ++w) {
    if (!z[w].is_zero()) tr += z[w] * tau.character[w];
  }
  return tr * CycNumber(Rational(1, tau.dim));
}

CycNumber pairing(const ReflectionGroup& g, const Multiplicity& k, const MultiPoly& p, const MultiPoly& q) {
  DunklAction act(g, k);
  return act.apply_polynomial(p, q).constant_term();
}

DiffReflOp twist_by_character(const DiffReflOp& l, const std::vector<CycNumber>& chi) {
  DiffReflOp out(l.group());
  for (const auto& [w, d] : l.parts()) out.add(w, d * chi[w]);
  return out;
}

DiffReflOp twist_by_one_form(const DiffReflOp& l, int orbit, const Rational& lambda) {
  const ReflectionGroup& g = l.group();
  auto forms = g.forms(g.dim(), 0);
  std::vector<LocalizedPoly> omega;
  for (int j = 0; j < g.dim(); ++j) {
    LocalizedPoly s = LocalizedPoly::constant(forms, CycNumber(0));
    for (int h : g.orbit(orbit)) {
      const CycNumber& a = g.hyperplanes()[h].alpha[j];
      if (!a.is_zero()) s += inverse_form(forms, h) * a;
    }
    omega.push_back(s * CycNumber(lambda));
  }
  DiffReflOp out(g);
  for (const auto& [w, d] : l.parts()) out.add(w, d.shift_partials(omega));
  return out;
}

LocalizedPoly delta_power(const ReflectionGroup& g, int orbit, int a) {
  auto forms = g.forms(g.dim(), 0);
  std::vector<int> powers(g.hyperplanes().size(), 0);
  for (int h : g.orbit(orbit)) powers[h] = a;
  return LocalizedPoly::monomial_in_forms(forms, powers);
}

DiffReflOp conjugate_by_delta(const DiffReflOp& l, int orbit, int a) {
  const ReflectionGroup& g = l.group();
  return DiffReflOp::multiplication(g, delta_power(g, orbit, a)) * l *
         DiffReflOp::multiplication(g, delta_power(g, orbit, -a));
}

Multiplicity delta_shift(const ReflectionGroup& g, const Multiplicity& k, int orbit) {
  Multiplicity out = k;
  int n = g.orbit_order(orbit);
  for (int i = 0; i < n; ++i) out.k[orbit][i] = k.k[orbit][(i + 1) % n] + Rational(1, n);
  if (out.twisted()) out.a[orbit] += 1;
  return out;
}

Multiplicity character_shift(const ReflectionGroup& g, const Multiplicity& k, int orbit, int a) {
  Multiplicity out = k;
  int n = g.orbit_order(orbit);
  for (int i = 0; i < n; ++i) out.k[orbit][i] = k.k[orbit][(((i + a) % n) + n) % n];
  return out;
}

Multiplicity one_form_shift(const ReflectionGroup& g, const Multiplicity& k, int orbit, const Rational& lambda) {
  Multiplicity out = k;
  int n = g.orbit_order(orbit);
  for (int i = 0; i < n; ++i) out.k[orbit][i] = k.k[orbit][i] - lambda / n;
  return out;
}

Multiplicity g_transform(const ReflectionGroup& g, const Multiplicity& k, int orbit) {
  Multiplicity out = k;
  int n = g.orbit_order(orbit);
  for (int i = 0; i < n; ++i) {
    out.k[orbit][i] = k.k[orbit][(i - 1 + n) % n] - Rational(1, n) + (i == 0 ? 1 : 0);
  }
  if (out.twisted()) out.a[orbit] -= 1;
  return out;
}

}  // namespace qinv
