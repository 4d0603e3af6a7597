#include "qinv/refgroup.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qinv {

namespace {

std::string matrix_key(const Matrix& m, int conductor) {
  std::string key;
  for (const auto& row : m) {
    for (const auto& x : row) {
      CycNumber y = x.promote(conductor);
      for (const auto& q : y.coeffs()) {
        key += q.get_str();
        key += ',';
      }
      key += ';';
    }
  }
  return key;
}

Matrix promote_matrix(const Matrix& m, int conductor) {
  Matrix out = m;
  for (auto& row : out)
    for (auto& x : row) x = x.promote(conductor);
  return out;
}

CycNumber determinant(Matrix m) {
  int n = static_cast<int>(m.size());
  CycNumber det(1);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r) {
      if (!m[r][c].is_zero()) {
        piv = r;
        break;
      }
    }
    if (piv < 0) return CycNumber(0);
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    CycNumber inv = m[c][c].inverse();
    for (int r = c + 1; r < n; ++r) {
      if (m[r][c].is_zero()) continue;
      CycNumber f = m[r][c] * inv;
      for (int j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

long mod(long a, long n) { return ((a % n) + n) % n; }

}  // namespace

CycNumber ReflectionGroup::zeta_pow(long e) const { return CycNumber::zeta(conductor_, mod(e, conductor_)); }

ReflectionGroup ReflectionGroup::from_generators(const std::vector<Matrix>& gens_in, int conductor,
                                                 const std::string& label, int cap) {
  if (gens_in.empty()) throw std::invalid_argument("no generators");
  ReflectionGroup g;
  g.label_ = label;
  g.dim_ = static_cast<int>(gens_in[0].size());
  if (g.dim_ < 1 || 2 * g.dim_ > kMaxVars) throw std::invalid_argument("unsupported dimension");
  int n = std::lcm(2, conductor);
  for (const auto& m : gens_in) {
    for (const auto& row : m)
      for (const auto& x : row) n = std::lcm(n, x.conductor() == 1 ? 2 : x.conductor());
  }
  g.conductor_ = n;
  std::vector<Matrix> gens;
  for (const auto& m : gens_in) {
    if (static_cast<int>(m.size()) != g.dim_) throw std::invalid_argument("generator size mismatch");
    for (const auto& row : m) {
      if (static_cast<int>(row.size()) != g.dim_) throw std::invalid_argument("generator not square");
    }
    Matrix pm = promote_matrix(m, n);
    if (matmul(conj_transpose(pm), pm) != identity_matrix<CycNumber>(g.dim_)) {
      throw std::invalid_argument("generator is not unitary for the standard Hermitian form");
    }
    gens.push_back(pm);
  }
  Matrix id = promote_matrix(identity_matrix<CycNumber>(g.dim_), n);
  g.elements_.push_back(id);
  g.index_[matrix_key(id, n)] = 0;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int w = queue.front();
    queue.pop_front();
    for (const auto& s : gens) {
      Matrix p = matmul(s, g.elements_[w]);
      std::string key = matrix_key(p, n);
      if (g.index_.count(key)) continue;
      if (static_cast<int>(g.elements_.size()) >= cap) {
        throw std::invalid_argument("group order exceeds cap of " + std::to_string(cap));
      }
      int idx = static_cast<int>(g.elements_.size());
      g.index_[key] = idx;
      g.elements_.push_back(std::move(p));
      queue.push_back(idx);
    }
  }
  for (const auto& s : gens) g.generators_.push_back(g.index_.at(matrix_key(s, n)));
  int ord = g.order();
  g.mult_.assign(ord, std::vector<int>(ord, -1));
  for (int a = 0; a < ord; ++a) {
    for (int b = 0; b < ord; ++b) g.mult_[a][b] = g.index_.at(matrix_key(matmul(g.elements_[a], g.elements_[b]), n));
  }
  g.inv_.assign(ord, -1);
  for (int a = 0; a < ord; ++a) {
    for (int b = 0; b < ord; ++b) {
      if (g.mult_[a][b] == 0) g.inv_[a] = b;
    }
  }
  for (int a = 0; a < ord; ++a) {
    int e = root_of_unity_exponent(determinant(g.elements_[a]), n);
    if (e < 0) throw std::logic_error("determinant is not a root of unity");
    g.det_exp_.push_back(e);
  }
  g.build_arrangement();
  g.build_forms();
  return g;
}

int ReflectionGroup::index_of(const Matrix& m) const {
  auto it = index_.find(matrix_key(m, conductor_));
  return it == index_.end() ? -1 : it->second;
}

void ReflectionGroup::build_arrangement() {
  int n = dim_;
  hyperplanes_.clear();
  for (int w = 1; w < order(); ++w) {
    Matrix m = elements_[w];
    for (int i = 0; i < n; ++i) m[i][i] -= CycNumber(1);
    if (rank(m, n) != 1) continue;
    int col = -1;
    for (int j = 0; j < n && col < 0; ++j) {
      for (int i = 0; i < n; ++i) {
        if (!m[i][j].is_zero()) {
          col = j;
          break;
        }
      }
    }
    std::vector<CycNumber> a(n);
    for (int i = 0; i < n; ++i) a[i] = m[i][col].conj();
    int p = 0;
    while (a[p].is_zero()) ++p;
    CycNumber s = a[p].inverse();
    for (auto& x : a) x *= s;
    int found = -1;
    for (size_t h = 0; h < hyperplanes_.size(); ++h) {
      if (hyperplanes_[h].alpha == a) found = static_cast<int>(h);
    }
    if (found < 0) {
      Hyperplane hp;
      hp.alpha = a;
      for (const auto& x : a) hp.v.push_back(x.conj());
      hp.stabilizer.push_back(0);
      hyperplanes_.push_back(hp);
      found = static_cast<int>(hyperplanes_.size()) - 1;
    }
    hyperplanes_[found].stabilizer.push_back(w);
  }
  for (auto& hp : hyperplanes_) {
    hp.order = static_cast<int>(hp.stabilizer.size());
    std::vector<int> ordered(hp.order, -1);
    int step = conductor_ / hp.order;
    for (int w : hp.stabilizer) {
      int e = det_exp_[w];
      if (e % step != 0) throw std::logic_error("stabilizer determinant has unexpected order");
      ordered[e / step] = w;
    }
    for (int w : ordered) {
      if (w < 0) throw std::logic_error("stabilizer is not cyclic");
    }
    hp.stabilizer = ordered;
  }
  int nh = static_cast<int>(hyperplanes_.size());
  hperm_.assign(order(), std::vector<int>(nh, -1));
  hscale_.assign(order(), std::vector<CycNumber>(nh));
  for (int w = 0; w < order(); ++w) {
    const Matrix& wi = elements_[inv_[w]];
    for (int h = 0; h < nh; ++h) {
      std::vector<CycNumber> a(n, CycNumber(0));
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) a[j] += hyperplanes_[h].alpha[i] * wi[i][j];
      }
      for (int t = 0; t < nh; ++t) {
        const auto& b = hyperplanes_[t].alpha;
        int p = 0;
        while (b[p].is_zero()) ++p;
        CycNumber c = a[p];
        if (c.is_zero()) continue;
        bool ok = true;
        for (int j = 0; j < n && ok; ++j) ok = (a[j] == c * b[j]);
        if (ok) {
          hperm_[w][h] = t;
          hscale_[w][h] = c;
          break;
        }
      }
      if (hperm_[w][h] < 0) throw std::logic_error("arrangement is not stable");
    }
  }
  orbits_.clear();
  for (int h = 0; h < nh; ++h) {
    if (hyperplanes_[h].orbit >= 0) continue;
    int id = static_cast<int>(orbits_.size());
    std::vector<int> members{h};
    hyperplanes_[h].orbit = id;
    for (size_t q = 0; q < members.size(); ++q) {
      for (int s : generators_) {
        int t = hperm_[s][members[q]];
        if (hyperplanes_[t].orbit < 0) {
          hyperplanes_[t].orbit = id;
          members.push_back(t);
        }
      }
    }
    std::sort(members.begin(), members.end());
    orbits_.push_back(members);
  }
  detc_exp_.assign(orbits_.size(), std::vector<int>(order(), 0));
  for (size_t c = 0; c < orbits_.size(); ++c) {
    for (int w = 0; w < order(); ++w) {
      CycNumber prod(1);
      for (int h : orbits_[c]) prod *= hscale_[w][h];
      int e = root_of_unity_exponent(prod, conductor_);
      if (e < 0) throw std::logic_error("det_C is not a root of unity");
      detc_exp_[c][w] = static_cast<int>(mod(-e, conductor_));
    }
  }
}

void ReflectionGroup::build_forms() {
  forms_cache_.clear();
  for (auto [nv, off] : std::vector<std::pair<int, int>>{{dim_, 0}, {2 * dim_, dim_}, {2 * dim_, 0}}) {
    auto f = std::make_shared<LinearForms>();
    f->nvars = nv;
    f->offset = off;
    f->dim = dim_;
    for (const auto& hp : hyperplanes_) {
      f->alpha.push_back(hp.alpha);
      f->poly.push_back(MultiPoly::linear_form(nv, hp.alpha, off));
    }
    forms_cache_.push_back(f);
  }
}

std::shared_ptr<const LinearForms> ReflectionGroup::forms(int nvars, int offset) const {
  for (const auto& f : forms_cache_) {
    if (f->nvars == nvars && f->offset == offset) return f;
  }
  auto f = std::make_shared<LinearForms>();
  f->nvars = nvars;
  f->offset = offset;
  f->dim = dim_;
  for (const auto& hp : hyperplanes_) {
    f->alpha.push_back(hp.alpha);
    f->poly.push_back(MultiPoly::linear_form(nvars, hp.alpha, offset));
  }
  return f;
}

int ReflectionGroup::num_reflections() const {
  int r = 0;
  for (const auto& hp : hyperplanes_) r += hp.order - 1;
  return r;
}

const MultiPoly& ReflectionGroup::monomial_image(int w, const Monomial& block, int offset, int nvars) const {
  std::array<int16_t, kMaxVars + 3> key{};
  key[0] = static_cast<int16_t>(w);
  key[1] = static_cast<int16_t>(offset);
  key[2] = static_cast<int16_t>(nvars);
  std::copy(block.e.begin(), block.e.end(), key.begin() + 3);
  ActCache& cache = *act_cache_;
  {
    std::lock_guard<std::mutex> lock(cache.mu);
    auto it = cache.images.find(key);
    if (it != cache.images.end()) return it->second;
  }
  MultiPoly img = MultiPoly::term(nvars, block, CycNumber(1)).substitute_linear(elements_[inv_[w]], offset);
  std::lock_guard<std::mutex> lock(cache.mu);
  return cache.images.emplace(key, std::move(img)).first->second;
}

MultiPoly ReflectionGroup::act(int w, const MultiPoly& f, int offset) const {
  if (w == 0) return f;
  MultiPoly out(f.nvars());
  for (const auto& [m, c] : f.terms()) {
    Monomial block, rest = m;
    for (int i = offset; i < offset + dim_; ++i) {
      block.e[i] = m.e[i];
      rest.e[i] = 0;
    }
    out.add_scaled(monomial_image(w, block, offset, f.nvars()), c, rest);
  }
  return out;
}

LocalizedPoly ReflectionGroup::act(int w, const LocalizedPoly& f) const {
  if (w == 0 || f.is_zero()) return f;
  MultiPoly num = act(w, f.numerator(), f.forms()->offset);
  const auto& den = f.denominator();
  std::vector<int> nd(den.size(), 0);
  CycNumber scale(1);
  for (size_t h = 0; h < den.size(); ++h) {
    if (den[h] == 0) continue;
    nd[hperm_[w][h]] = den[h];
    for (int k = 0; k < den[h]; ++k) scale *= hscale_[w][h];
  }
  if (!scale.is_one()) num *= scale.inverse();
  return LocalizedPoly(f.forms(), std::move(num), std::move(nd));
}

MultiPoly ReflectionGroup::idempotent_apply(int h, int i, const MultiPoly& f, int offset) const {
  const Hyperplane& hp = hyperplanes_[h];
  int step = conductor_ / hp.order;
  MultiPoly out(f.nvars());
  for (int j = 0; j < hp.order; ++j) {
    out += act(hp.stabilizer[j], f, offset) * zeta_pow(-static_cast<long>(i) * j * step);
  }
  out *= CycNumber(Rational(1, hp.order));
  return out;
}

Matrix ReflectionGroup::rep_idempotent(const WRep& rep, int h, int i) const {
  const Hyperplane& hp = hyperplanes_[h];
  int step = conductor_ / hp.order;
  Matrix out(rep.dim, std::vector<CycNumber>(rep.dim, CycNumber(0)));
  for (int j = 0; j < hp.order; ++j) {
    CycNumber c = zeta_pow(-static_cast<long>(i) * j * step) * CycNumber(Rational(1, hp.order));
    const Matrix& m = rep.mats[hp.stabilizer[j]];
    for (int r = 0; r < rep.dim; ++r)
      for (int s = 0; s < rep.dim; ++s) out[r][s] += c * m[r][s];
  }
  return out;
}

MultiPoly ReflectionGroup::delta(int orbit, int nvars, int offset) const {
  MultiPoly p = MultiPoly::constant(nvars, CycNumber(1));
  for (size_t h = 0; h < hyperplanes_.size(); ++h) {
    if (orbit >= 0 && hyperplanes_[h].orbit != orbit) continue;
    p = p * MultiPoly::linear_form(nvars, hyperplanes_[h].alpha, offset);
  }
  return p;
}

MultiPoly ReflectionGroup::delta_star(int orbit, int nvars, int offset) const {
  MultiPoly p = MultiPoly::constant(nvars, CycNumber(1));
  for (size_t h = 0; h < hyperplanes_.size(); ++h) {
    if (orbit >= 0 && hyperplanes_[h].orbit != orbit) continue;
    p = p * MultiPoly::linear_form(nvars, hyperplanes_[h].v, offset);
  }
  return p;
}

void ReflectionGroup::set_irreps(std::vector<WRep> irreps, bool complete) {
  for (auto& r : irreps) {
    r.character.clear();
    for (const auto& m : r.mats) r.character.push_back(trace(m));
  }
  irreps_ = std::move(irreps);
  irreps_complete_ = complete;
}

int ReflectionGroup::irrep_index(const std::string& name) const {
  for (size_t i = 0; i < irreps_.size(); ++i) {
    if (irreps_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int ReflectionGroup::find_irrep(const std::vector<CycNumber>& chi) const {
  for (size_t i = 0; i < irreps_.size(); ++i) {
    if (irreps_[i].character == chi) return static_cast<int>(i);
  }
  return -1;
}

CycNumber ReflectionGroup::character_inner(const std::vector<CycNumber>& a,
                                           const std::vector<CycNumber>& b) const {
  CycNumber s(0);
  for (int w = 0; w < order(); ++w) s += a[w] * b[w].conj();
  return s * CycNumber(Rational(1, order()));
}

ReflectionGroup ReflectionGroup::dual() const {
  ReflectionGroup d = *this;
  d.act_cache_ = std::make_shared<ActCache>();
  d.dual_ = !dual_;
  d.index_.clear();
  for (int w = 0; w < order(); ++w) {
    for (auto& row : d.elements_[w])
      for (auto& x : row) x = x.conj();
    d.index_[matrix_key(d.elements_[w], conductor_)] = w;
    d.det_exp_[w] = static_cast<int>(mod(-det_exp_[w], conductor_));
  }
  for (auto& hp : d.hyperplanes_) {
    for (auto& x : hp.alpha) x = x.conj();
    for (auto& x : hp.v) x = x.conj();
    std::vector<int> st(hp.order);
    for (int j = 0; j < hp.order; ++j) st[j] = hp.stabilizer[mod(-j, hp.order)];
    hp.stabilizer = st;
  }
  for (auto& row : d.hscale_)
    for (auto& x : row) x = x.conj();
  for (auto& row : d.detc_exp_)
    for (auto& e : row) e = static_cast<int>(mod(-e, conductor_));
  d.build_forms();
  d.label_ = label_ + (dual_ ? "" : "*");
  if (dual_) d.label_ = label_.substr(0, label_.size() - 1);
  return d;
}

nlohmann::json ReflectionGroup::to_json() const {
  nlohmann::json j;
  j["label"] = label_;
  j["family"] = family_;
  j["params"] = params_;
  j["order"] = order();
  j["dim"] = dim_;
  j["conductor"] = conductor_;
  j["numReflections"] = num_reflections();
  nlohmann::json hs = nlohmann::json::array();
  for (const auto& hp : hyperplanes_) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : hp.alpha) a.push_back(x.to_json());
    hs.push_back({{"alpha", a}, {"order", hp.order}, {"orbit", hp.orbit}});
  }
  j["hyperplanes"] = hs;
  nlohmann::json os = nlohmann::json::array();
  for (size_t c = 0; c < orbits_.size(); ++c) {
    os.push_back({{"id", c}, {"size", orbits_[c].size()}, {"order", orbit_order(static_cast<int>(c))},
                  {"hyperplanes", orbits_[c]}});
  }
  j["orbits"] = os;
  nlohmann::json irr = nlohmann::json::array();
  for (const auto& r : irreps_) irr.push_back({{"name", r.name}, {"dim", r.dim}});
  j["irreps"] = irr;
  j["irrepsComplete"] = irreps_complete_;
  return j;
}

namespace {

struct MonomialShape {
  std::vector<int> perm;  // perm[j] = row of the nonzero entry in column j
  std::vector<int> row_exp;  // exponent of the nonzero entry in row i, in units of zeta_conductor
};

MonomialShape monomial_shape(const Matrix& w, int conductor) {
  int n = static_cast<int>(w.size());
  MonomialShape s;
  s.perm.assign(n, -1);
  s.row_exp.assign(n, 0);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (w[i][j].is_zero()) continue;
      s.perm[j] = i;
      s.row_exp[i] = root_of_unity_exponent(w[i][j], conductor);
    }
  }
  return s;
}

Matrix scalar_matrix(const CycNumber& c) { return Matrix{{c}}; }

// Standard representation of S_n on span(e_i - e_n).
Matrix standard_rep(const std::vector<int>& perm) {
  int n = static_cast<int>(perm.size());
  Matrix m(n - 1, std::vector<CycNumber>(n - 1, CycNumber(0)));
  for (int i = 0; i < n - 1; ++i) {
    if (perm[i] != n - 1) m[perm[i]][i] += CycNumber(1);
    if (perm[n - 1] != n - 1) m[perm[n - 1]][i] -= CycNumber(1);
  }
  return m;
}

int perm_sign(const std::vector<int>& perm) {
  int s = 1;
  for (size_t i = 0; i < perm.size(); ++i)
    for (size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) s = -s;
  return s;
}

std::vector<WRep> cyclic_irreps(const ReflectionGroup& g, int order) {
  std::vector<WRep> reps;
  for (int j = 0; j < order; ++j) {
    WRep r;
    r.name = "sigma_" + std::to_string(j);
    for (int w = 0; w < g.order(); ++w) r.mats.push_back(scalar_matrix(g.zeta_pow(static_cast<long>(j) * g.det_exp(w))));
    reps.push_back(r);
  }
  return reps;
}

std::vector<WRep> g_m12_irreps(const ReflectionGroup& g, int m) {
  int q = g.conductor() / m;
  std::vector<MonomialShape> shapes;
  for (int w = 0; w < g.order(); ++w) shapes.push_back(monomial_shape(g.element(w), g.conductor()));
  std::vector<WRep> reps;
  for (int c = 0; c < m; ++c) {
    for (int eps : {1, -1}) {
      WRep r;
      r.name = "chi_" + std::to_string(c) + (eps > 0 ? "+" : "-");
      if (c == 0 && eps > 0) r.name = "triv";
      for (int w = 0; w < g.order(); ++w) {
        const auto& s = shapes[w];
        CycNumber v = g.zeta_pow(static_cast<long>(c) * (s.row_exp[0] + s.row_exp[1]));
        if (s.perm[0] != 0 && eps < 0) v = -v;
        r.mats.push_back(scalar_matrix(v));
      }
      reps.push_back(r);
    }
  }
  for (int b = 0; b < m; ++b) {
    for (int c = b + 1; c < m; ++c) {
      WRep r;
      r.name = "rho_" + std::to_string(b) + "_" + std::to_string(c);
      r.dim = 2;
      for (int w = 0; w < g.order(); ++w) {
        const auto& s = shapes[w];
        long d1 = s.row_exp[0] / q, d2 = s.row_exp[1] / q;
        Matrix dm = {{g.zeta_pow(q * (b * d1 + c * d2)), CycNumber(0)},
                     {CycNumber(0), g.zeta_pow(q * (c * d1 + b * d2))}};
        Matrix pm = s.perm[0] == 0 ? identity_matrix<CycNumber>(2)
                                   : Matrix{{CycNumber(0), CycNumber(1)}, {CycNumber(1), CycNumber(0)}};
        r.mats.push_back(matmul(dm, pm));
      }
      reps.push_back(r);
    }
  }
  return reps;
}

std::vector<WRep> g_mm2_irreps(const ReflectionGroup& g, int m) {
  int q = g.conductor() / m;
  std::vector<MonomialShape> shapes;
  for (int w = 0; w < g.order(); ++w) shapes.push_back(monomial_shape(g.element(w), g.conductor()));
  std::vector<WRep> reps;
  auto linear = [&](const std::string& name, bool use_parity, int eps) {
    WRep r;
    r.name = name;
    for (int w = 0; w < g.order(); ++w) {
      const auto& s = shapes[w];
      long d1 = s.row_exp[0] / q;
      int v = 1;
      if (use_parity && (d1 % 2 != 0)) v = -v;
      if (s.perm[0] != 0 && eps < 0) v = -v;
      r.mats.push_back(scalar_matrix(CycNumber(v)));
    }
    reps.push_back(r);
  };
  linear("triv", false, 1);
  linear("sign", false, -1);
  if (m % 2 == 0) {
    linear("psi+", true, 1);
    linear("psi-", true, -1);
  }
  for (int j = 1; 2 * j < m; ++j) {
    WRep r;
    r.name = "rho_" + std::to_string(j);
    r.dim = 2;
    for (int w = 0; w < g.order(); ++w) {
      const auto& s = shapes[w];
      long d1 = s.row_exp[0] / q, d2 = s.row_exp[1] / q;
      Matrix dm = {{g.zeta_pow(q * j * d2), CycNumber(0)}, {CycNumber(0), g.zeta_pow(q * j * d1)}};
      Matrix pm = s.perm[0] == 0 ? identity_matrix<CycNumber>(2)
                                 : Matrix{{CycNumber(0), CycNumber(1)}, {CycNumber(1), CycNumber(0)}};
      r.mats.push_back(matmul(dm, pm));
    }
    reps.push_back(r);
  }
  return reps;
}

std::vector<WRep> symmetric_irreps(const ReflectionGroup& g, int n) {
  std::vector<std::vector<int>> perms;
  for (int w = 0; w < g.order(); ++w) perms.push_back(monomial_shape(g.element(w), g.conductor()).perm);
  std::vector<WRep> reps;
  WRep triv{"triv", 1, {}, {}}, sign{"sign", 1, {}, {}}, std_rep{"std", n - 1, {}, {}};
  for (const auto& p : perms) {
    triv.mats.push_back(scalar_matrix(CycNumber(1)));
    sign.mats.push_back(scalar_matrix(CycNumber(perm_sign(p))));
    std_rep.mats.push_back(standard_rep(p));
  }
  reps = {triv, sign, std_rep};
  if (n == 4) {
    WRep std_sign{"std_sign", 3, {}, {}}, pair{"pair", 2, {}, {}};
    for (size_t w = 0; w < perms.size(); ++w) {
      Matrix m = std_rep.mats[w];
      int s = perm_sign(perms[w]);
      for (auto& row : m)
        for (auto& x : row) x *= CycNumber(s);
      std_sign.mats.push_back(m);
      // action on the three pairings {0,k+1 | rest}, k = 0, 1, 2
      std::vector<int> induced(3);
      for (int k = 0; k < 3; ++k) {
        int a = perms[w][0], b = perms[w][k + 1];
        int partner_of_zero = (a == 0) ? b : (b == 0 ? a : -1);
        if (partner_of_zero < 0) {
          std::vector<int> rest;
          for (int t = 0; t < 4; ++t) {
            if (t != a && t != b) rest.push_back(t);
          }
          partner_of_zero = rest[0] == 0 ? rest[1] : rest[0];
        }
        induced[k] = partner_of_zero - 1;
      }
      pair.mats.push_back(standard_rep(induced));
    }
    reps.push_back(std_sign);
    reps.push_back(pair);
  }
  return reps;
}

}  // namespace

ReflectionGroup imprimitive_group(int m, int p, int n, int cap) {
  if (m < 1 || p < 1 || n < 1 || m % p != 0) throw std::invalid_argument("invalid G(m,p,N) parameters");
  if (n == 1 && p != 1) throw std::invalid_argument("G(m,p,1) requires p = 1");
  if (2 * n > kMaxVars) throw std::invalid_argument("rank too large");
  long ord = 1;
  for (int i = 0; i < n; ++i) ord *= m;
  for (int i = 2; i <= n; ++i) ord *= i;
  ord /= p;
  if (ord > cap) throw std::invalid_argument("group order " + std::to_string(ord) + " exceeds cap");
  if (ord == 1) throw std::invalid_argument("trivial group has no reflections");
  int cond = std::lcm(2, m);
  CycNumber z = CycNumber::zeta(cond, cond / m);
  std::vector<Matrix> gens;
  auto zero = [&]() { return Matrix(n, std::vector<CycNumber>(n, CycNumber(0))); };
  if (n == 1) {
    gens.push_back(Matrix{{z}});
  } else {
    for (int i = 0; i + 1 < n; ++i) {
      Matrix s = identity_matrix<CycNumber>(n);
      s[i][i] = s[i + 1][i + 1] = CycNumber(0);
      s[i][i + 1] = s[i + 1][i] = CycNumber(1);
      gens.push_back(s);
    }
    if (m > 1) {
      Matrix s = identity_matrix<CycNumber>(n);
      s[0][0] = s[1][1] = CycNumber(0);
      s[0][1] = z.inverse();
      s[1][0] = z;
      gens.push_back(s);
    }
    if (p < m) {
      Matrix t = identity_matrix<CycNumber>(n);
      CycNumber zp(1);
      for (int i = 0; i < p; ++i) zp *= z;
      t[0][0] = zp;
      gens.push_back(t);
    }
  }
  (void)zero;
  std::string label = "G(" + std::to_string(m) + "," + std::to_string(p) + "," + std::to_string(n) + ")";
  ReflectionGroup g = ReflectionGroup::from_generators(gens, cond, label, cap);
  g.set_family("G", {m, p, n});
  if (n == 1) {
    g.set_irreps(cyclic_irreps(g, m), true);
  } else if (n == 2 && p == 1) {
    g.set_irreps(g_m12_irreps(g, m), true);
  } else if (n == 2 && p == m) {
    g.set_irreps(g_mm2_irreps(g, m), true);
  } else if (m == 1 && (n == 3 || n == 4)) {
    g.set_irreps(symmetric_irreps(g, n), true);
  }
  return g;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

int parse_int(const std::string& s) {
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad integer: " + s);
  }
  if (pos != s.size()) throw std::invalid_argument("bad integer: " + s);
  return v;
}

}  // namespace

ReflectionGroup builtin_group(const std::string& spec, int cap) {
  auto parts = split(spec, ':');
  const std::string& fam = parts[0];
  if (fam == "cyclic" && parts.size() == 2) {
    int n = parse_int(parts[1]);
    if (n < 2) throw std::invalid_argument("cyclic group needs n >= 2");
    ReflectionGroup g = imprimitive_group(n, 1, 1, cap);
    g.set_family("cyclic", {n});
    return g;
  }
  if (fam == "dihedral" && parts.size() == 3) {
    int m = parse_int(parts[1]), p = parse_int(parts[2]);
    ReflectionGroup g = imprimitive_group(m, p, 2, cap);
    g.set_family("dihedral", {m, p});
    return g;
  }
  if (fam == "symmetric" && parts.size() == 2) {
    int n = parse_int(parts[1]);
    if (n < 2) throw std::invalid_argument("symmetric group needs N >= 2");
    ReflectionGroup g = imprimitive_group(1, 1, n, cap);
    g.set_family("symmetric", {n});
    return g;
  }
  if (fam == "G" && parts.size() == 4) {
    return imprimitive_group(parse_int(parts[1]), parse_int(parts[2]), parse_int(parts[3]), cap);
  }
  throw std::invalid_argument("unknown group spec: " + spec);
}

ReflectionGroup group_from_json(const nlohmann::json& j, int cap) {
  std::string fam = j.at("family").get<std::string>();
  if (fam == "G") {
    return imprimitive_group(j.at("m").get<int>(), j.at("p").get<int>(), j.at("N").get<int>(), cap);
  }
  if (fam == "cyclic") return builtin_group("cyclic:" + std::to_string(j.at("n").get<int>()), cap);
  if (fam == "dihedral") {
    return builtin_group("dihedral:" + std::to_string(j.at("m").get<int>()) + ":" +
                             std::to_string(j.at("p").get<int>()),
                         cap);
  }
  if (fam == "symmetric") return builtin_group("symmetric:" + std::to_string(j.at("N").get<int>()), cap);
  if (fam == "generators") {
    std::vector<Matrix> gens;
    int cond = 1;
    for (const auto& gj : j.at("generators")) {
      Matrix m;
      for (const auto& row : gj) {
        std::vector<CycNumber> r;
        for (const auto& x : row) {
          r.push_back(CycNumber::from_json(x));
          cond = std::lcm(cond, r.back().conductor());
        }
        m.push_back(r);
      }
      gens.push_back(m);
    }
    return ReflectionGroup::from_generators(gens, cond, j.value("label", std::string("explicit")), cap);
  }
  throw std::invalid_argument("unknown group family: " + fam);
}

std::string validate_irreps(const ReflectionGroup& g) {
  int total = 0;
  const auto& reps = g.irreps();
  for (const auto& r : reps) {
    total += r.dim * r.dim;
    if (!(r.mats[0] == identity_matrix<CycNumber>(r.dim))) return r.name + ": identity not mapped to I";
    for (int s : g.generators()) {
      for (int w = 0; w < g.order(); ++w) {
        if (matmul(r.mats[s], r.mats[w]) != r.mats[g.mult(s, w)]) return r.name + ": not a homomorphism";
      }
    }
  }
  if (total != g.order()) return "sum of squared dimensions " + std::to_string(total) + " != |W|";
  for (size_t a = 0; a < reps.size(); ++a) {
    for (size_t b = 0; b < reps.size(); ++b) {
      CycNumber ip = g.character_inner(reps[a].character, reps[b].character);
      if (ip != CycNumber(a == b ? 1 : 0)) return "characters not orthonormal: " + reps[a].name + ", " + reps[b].name;
    }
  }
  return "";
}

const Rational& Multiplicity::value(const ReflectionGroup& g, int h, int i) const {
  const Hyperplane& hp = g.hyperplanes()[h];
  return k[hp.orbit][((i % hp.order) + hp.order) % hp.order];
}

bool Multiplicity::is_integral() const {
  for (const auto& row : k)
    for (const auto& q : row)
      if (q.get_den() != 1) return false;
  return true;
}

bool Multiplicity::is_zero() const {
  for (const auto& row : k)
    for (const auto& q : row)
      if (sgn(q) != 0) return false;
  return true;
}

Multiplicity Multiplicity::zero(const ReflectionGroup& g) {
  Multiplicity m;
  for (int c = 0; c < g.num_orbits(); ++c) m.k.push_back(std::vector<Rational>(g.orbit_order(c), Rational(0)));
  return m;
}

Multiplicity Multiplicity::ell(const ReflectionGroup& g, int orbit, int j) {
  Multiplicity m = zero(g);
  int n = g.orbit_order(orbit);
  m.k[orbit][((j % n) + n) % n] = 1;
  return m;
}

Multiplicity Multiplicity::operator+(const Multiplicity& o) const {
  Multiplicity m = *this;
  for (size_t c = 0; c < k.size(); ++c)
    for (size_t i = 0; i < k[c].size(); ++i) m.k[c][i] += o.k[c][i];
  return m;
}

Multiplicity Multiplicity::operator-(const Multiplicity& o) const { return *this + o.scaled(Rational(-1)); }

Multiplicity Multiplicity::scaled(const Rational& s) const {
  Multiplicity m = *this;
  for (auto& row : m.k)
    for (auto& q : row) q *= s;
  return m;
}

void Multiplicity::validate(const ReflectionGroup& g) const {
  if (static_cast<int>(k.size()) != g.num_orbits()) {
    throw std::invalid_argument("multiplicity has " + std::to_string(k.size()) + " orbits, group has " +
                                std::to_string(g.num_orbits()));
  }
  for (int c = 0; c < g.num_orbits(); ++c) {
    if (static_cast<int>(k[c].size()) != g.orbit_order(c)) {
      throw std::invalid_argument("orbit " + std::to_string(c) + " needs " + std::to_string(g.orbit_order(c)) +
                                  " values");
    }
  }
  if (twisted()) {
    if (static_cast<int>(a.size()) != g.num_orbits()) throw std::invalid_argument("twist needs one value per orbit");
    for (int c = 0; c < g.num_orbits(); ++c) {
      int n = g.orbit_order(c);
      for (const auto& q : k[c]) {
        Rational d = q - Rational(a[c], n);
        d.canonicalize();
        if (d.get_den() != 1) {
          throw std::invalid_argument("k_{C,i} - a_C/n_C must be an integer on orbit " + std::to_string(c));
        }
      }
    }
  }
}

std::string Multiplicity::to_string() const {
  std::string s;
  for (size_t c = 0; c < k.size(); ++c) {
    if (c) s += ";";
    for (size_t i = 0; i < k[c].size(); ++i) {
      if (i) s += ",";
      s += k[c][i].get_str();
    }
  }
  if (twisted()) {
    s += " a=";
    for (size_t c = 0; c < a.size(); ++c) {
      if (c) s += ",";
      s += std::to_string(a[c]);
    }
  }
  return s;
}

nlohmann::json Multiplicity::to_json() const {
  nlohmann::json orbits = nlohmann::json::object();
  for (size_t c = 0; c < k.size(); ++c) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& q : k[c]) {
      if (q.get_den() == 1 && q.get_num().fits_slong_p()) row.push_back(q.get_num().get_si());
      else row.push_back(q.get_str());
    }
    orbits[std::to_string(c)] = row;
  }
  nlohmann::json j = {{"orbits", orbits}};
  if (twisted()) {
    nlohmann::json aj = nlohmann::json::object();
    for (size_t c = 0; c < a.size(); ++c) aj[std::to_string(c)] = a[c];
    j["a"] = aj;
  }
  return j;
}

Multiplicity Multiplicity::from_json(const ReflectionGroup& g, const nlohmann::json& j) {
  Multiplicity m = zero(g);
  const auto& orbits = j.at("orbits");
  for (auto it = orbits.begin(); it != orbits.end(); ++it) {
    int c = parse_int(it.key());
    if (c < 0 || c >= g.num_orbits()) throw std::invalid_argument("orbit id out of range");
    std::vector<Rational> row;
    for (const auto& x : it.value()) {
      if (x.is_string()) row.push_back(parse_rational(x.get<std::string>()));
      else row.push_back(rational_from_json(x));
    }
    if (static_cast<int>(row.size()) == g.orbit_order(c) - 1) row.insert(row.begin(), Rational(0));
    m.k[c] = row;
  }
  if (j.contains("a")) {
    m.a.assign(g.num_orbits(), 0);
    for (auto it = j["a"].begin(); it != j["a"].end(); ++it) {
      int c = parse_int(it.key());
      if (c < 0 || c >= g.num_orbits()) throw std::invalid_argument("orbit id out of range");
      m.a[c] = it.value().get<int>();
    }
  }
  m.validate(g);
  return m;
}

Multiplicity Multiplicity::parse(const ReflectionGroup& g, const std::string& text, const std::string& twist) {
  Multiplicity m = zero(g);
  auto orbit_parts = split(text, ';');
  if (static_cast<int>(orbit_parts.size()) != g.num_orbits()) {
    throw std::invalid_argument("expected " + std::to_string(g.num_orbits()) + " orbit lists in k");
  }
  for (int c = 0; c < g.num_orbits(); ++c) {
    std::vector<Rational> row;
    for (const auto& tok : split(orbit_parts[c], ',')) row.push_back(parse_rational(tok));
    if (static_cast<int>(row.size()) == g.orbit_order(c) - 1) row.insert(row.begin(), Rational(0));
    m.k[c] = row;
  }
  if (!twist.empty()) {
    for (const auto& tok : split(twist, ',')) m.a.push_back(parse_int(tok));
  }
  m.validate(g);
  return m;
}

}  // namespace qinv
