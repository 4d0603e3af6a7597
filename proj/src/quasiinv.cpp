#include "qinv/quasiinv.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include <gmpxx.h>
#include <omp.h>

namespace qinv {

namespace {

long mod(long a, long n) { return ((a % n) + n) % n; }

long ceil_rational(const Rational& q) {
  mpz_class c;
  mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return c.get_si();
}

// ceil(n_H k_{H,i})
long required_order(const ReflectionGroup& g, const Multiplicity& k, int h, int i) {
  return ceil_rational(Rational(g.hyperplanes()[h].order) * k.value(g, h, i));
}

void check_multiplicity(const ReflectionGroup& g, const Multiplicity& k) {
  try {
    k.validate(g);
  } catch (const std::invalid_argument& e) {
    throw IncompatibleMultiplicity(e.what());
  }
  if (!k.twisted() && !k.is_integral()) {
    throw IncompatibleMultiplicity("fractional multiplicity requires a twist");
  }
}

LocalizedPoly idempotent_local(const ReflectionGroup& g, int h, int i, const LocalizedPoly& f) {
  const Hyperplane& hp = g.hyperplanes()[h];
  int step = g.conductor() / hp.order;
  LocalizedPoly out(f.forms(), MultiPoly(f.forms()->nvars));
  for (int j = 0; j < hp.order; ++j) {
    out += g.act(hp.stabilizer[j], f) * g.zeta_pow(-static_cast<long>(i) * j * step);
  }
  out *= CycNumber(Rational(1, hp.order));
  return out;
}

// Coordinates x = q + t v_H with t stored in the pivot variable p of alpha_H.
Matrix normal_coordinates(const Hyperplane& hp, int dim, int* pivot) {
  int p = 0;
  while (hp.alpha[p].is_zero()) ++p;
  Matrix m(dim, std::vector<CycNumber>(dim, CycNumber(0)));
  for (int j = 0; j < dim; ++j) {
    if (j == p) {
      for (int l = 0; l < dim; ++l) m[p][l] = l == p ? hp.v[p] : -hp.alpha[l];
    } else {
      m[j][j] = CycNumber(1);
      m[j][p] = hp.v[j];
    }
  }
  *pivot = p;
  return m;
}

// Truncated expansion of monomials along one hyperplane: keeps t-exponents below tmax.
struct Expander {
  int dim = 0;
  int p = 0;
  int tmax = 0;
  std::vector<CycNumber> v;
  std::vector<MultiPoly> lpow;  // (-sum_{j != p} alpha_j q_j)^e

  Expander(const ReflectionGroup& g, int h, int tmax_in, int max_deg) : dim(g.dim()), tmax(tmax_in) {
    const Hyperplane& hp = g.hyperplanes()[h];
    normal_coordinates(hp, dim, &p);
    v = hp.v;
    std::vector<CycNumber> lc(dim, CycNumber(0));
    for (int j = 0; j < dim; ++j)
      if (j != p) lc[j] = -hp.alpha[j];
    MultiPoly l = MultiPoly::linear_form(dim, lc);
    lpow.push_back(MultiPoly::constant(dim, CycNumber(1)));
    for (int e = 1; e <= max_deg; ++e) lpow.push_back(lpow.back() * l);
  }

  MultiPoly image(const Monomial& m) const {
    MultiPoly out(dim);
    int ep = m.e[p];
    mpz_class bin;
    CycNumber vp(1);
    for (int b = 0; b <= ep && b < tmax; ++b) {
      mpz_bin_uiui(bin.get_mpz_t(), ep, b);
      CycNumber c = vp * CycNumber(Rational(bin));
      for (const auto& [mu, cm] : lpow[ep - b].terms()) {
        Monomial nm = mu;
        nm.e[p] = static_cast<int16_t>(b);
        out.add_term(nm, cm * c);
      }
      vp *= v[p];
    }
    for (int j = 0; j < dim; ++j) {
      if (j == p || m.e[j] == 0) continue;
      int e = m.e[j];
      MultiPoly next(dim);
      CycNumber vj(1);
      for (int a = 0; a <= e && a < tmax; ++a) {
        if (a > 0 && v[j].is_zero()) break;
        mpz_bin_uiui(bin.get_mpz_t(), e, a);
        CycNumber c = vj * CycNumber(Rational(bin));
        for (const auto& [mu, cm] : out.terms()) {
          if (mu.e[p] + a >= tmax) continue;
          Monomial nm = mu;
          nm.e[p] = static_cast<int16_t>(nm.e[p] + a);
          nm.e[j] = static_cast<int16_t>(nm.e[j] + e - a);
          next.add_term(nm, cm * c);
        }
        vj *= v[j];
      }
      out = std::move(next);
    }
    return out;
  }
};

// Linear conditions along one hyperplane: rows[s] restricts the coefficient of t^s.
struct HyperplaneConditions {
  int h = 0;
  std::vector<Matrix> rows;
};

struct SolveContext {
  int dim = 0;
  int tau_dim = 1;
  std::vector<HyperplaneConditions> conds;
  std::vector<Expander> expanders;
};

bool all_rational(const Matrix& m) {
  for (const auto& row : m)
    for (const auto& x : row)
      if (!x.is_rational()) return false;
  return true;
}

template <class F>
F field_value(const CycNumber& c);
template <>
Rational field_value<Rational>(const CycNumber& c) {
  return c.to_rational();
}
template <>
CycNumber field_value<CycNumber>(const CycNumber& c) {
  return c;
}
CycNumber to_cyc(const Rational& q) { return CycNumber(q); }
CycNumber to_cyc(const CycNumber& c) { return c; }

template <class F>
Matrix kernel_in_field(const std::vector<Matrix>& blocks, int ncols) {
  MatrixT<F> echelon;
  for (const auto& block : blocks) {
    for (const auto& row : block) {
      std::vector<F> r(ncols);
      for (int c = 0; c < ncols; ++c) r[c] = field_value<F>(row[c]);
      echelon.push_back(std::move(r));
    }
    echelon = rref(std::move(echelon), ncols).rows;
  }
  MatrixT<F> ker = kernel(echelon, ncols);
  Matrix out;
  for (const auto& v : ker) {
    std::vector<CycNumber> w;
    w.reserve(v.size());
    for (const auto& x : v) w.push_back(to_cyc(x));
    out.push_back(std::move(w));
  }
  return out;
}

// Kernel of the conditions on numerators of degree nd; columns run over (monomial, component)
// in reverse graded-lex order so each kernel vector has leading coefficient one.
std::vector<std::vector<MultiPoly>> solve_degree(const SolveContext& ctx, int nd) {
  std::vector<std::vector<MultiPoly>> basis;
  if (nd < 0) return basis;
  auto mons = monomials_of_degree(ctx.dim, nd);
  int nm = static_cast<int>(mons.size());
  int td = ctx.tau_dim;
  int ncols = nm * td;
  auto col = [&](int mi, int c) { return ncols - 1 - (mi * td + c); };
  std::vector<Matrix> blocks;
  bool rational = true;
  for (size_t hi = 0; hi < ctx.conds.size(); ++hi) {
    const auto& hc = ctx.conds[hi];
    const auto& ex = ctx.expanders[hi];
    if (ex.tmax == 0) continue;
    std::map<Monomial, int, GrLexLess> row_of;
    Matrix block;
    for (int mi = 0; mi < nm; ++mi) {
      MultiPoly img = ex.image(mons[mi]);
      for (const auto& [mu, cm] : img.terms()) {
        int s = mu.e[ex.p];
        const Matrix& p = hc.rows[s];
        if (p.empty()) continue;
        auto it = row_of.find(mu);
        int base;
        if (it == row_of.end()) {
          base = static_cast<int>(block.size());
          row_of.emplace(mu, base);
          block.resize(block.size() + p.size(), std::vector<CycNumber>(ncols, CycNumber(0)));
        } else {
          base = it->second;
        }
        for (size_t pr = 0; pr < p.size(); ++pr) {
          for (int c = 0; c < td; ++c) {
            if (p[pr][c].is_zero()) continue;
            block[base + pr][col(mi, c)] += cm * p[pr][c];
          }
        }
      }
    }
    if (rational && !all_rational(block)) rational = false;
    blocks.push_back(std::move(block));
  }
  Matrix ker = rational ? kernel_in_field<Rational>(blocks, ncols) : kernel_in_field<CycNumber>(blocks, ncols);
  // Largest leading monomial first.
  std::reverse(ker.begin(), ker.end());
  for (const auto& v : ker) {
    std::vector<MultiPoly> elem(td, MultiPoly(ctx.dim));
    for (int mi = 0; mi < nm; ++mi)
      for (int c = 0; c < td; ++c) {
        const CycNumber& x = v[col(mi, c)];
        if (!x.is_zero()) elem[c].add_term(mons[mi], x);
      }
    basis.push_back(std::move(elem));
  }
  return basis;
}

Matrix row_basis(const Matrix& m, int ncols) {
  if (m.empty()) return m;
  return rref(m, ncols).rows;
}

// Scalar conditions: residue s = i + a + r mod n_H must reach n_H k_{H,i} + r.
SolveContext scalar_context(const ReflectionGroup& g, const Multiplicity& k, int r, int max_nd) {
  SolveContext ctx;
  ctx.dim = g.dim();
  for (size_t h = 0; h < g.hyperplanes().size(); ++h) {
    const Hyperplane& hp = g.hyperplanes()[h];
    int a = k.twist(hp.orbit);
    long tmax = 0;
    for (int i = 0; i < hp.order; ++i) tmax = std::max(tmax, required_order(g, k, h, i) + r);
    HyperplaneConditions hc;
    hc.h = static_cast<int>(h);
    hc.rows.resize(tmax);
    for (long s = 0; s < tmax; ++s) {
      int i = static_cast<int>(mod(s - a - r, hp.order));
      if (s < required_order(g, k, h, i) + r) hc.rows[s] = Matrix{{CycNumber(1)}};
    }
    ctx.conds.push_back(std::move(hc));
    ctx.expanders.emplace_back(g, static_cast<int>(h), static_cast<int>(tmax), std::max(max_nd, 0));
  }
  return ctx;
}

// tau-valued conditions: rho(e_{H,i+a}) c_s = 0 for s < n_H k_{H,i} + r.
SolveContext tau_context(const ReflectionGroup& g, const Multiplicity& k, const WRep& tau, int r, int max_nd) {
  SolveContext ctx;
  ctx.dim = g.dim();
  ctx.tau_dim = tau.dim;
  for (size_t h = 0; h < g.hyperplanes().size(); ++h) {
    const Hyperplane& hp = g.hyperplanes()[h];
    int a = k.twist(hp.orbit);
    long tmax = 0;
    std::vector<Matrix> proj;
    std::vector<long> req;
    for (int i = 0; i < hp.order; ++i) {
      req.push_back(required_order(g, k, static_cast<int>(h), i) + r);
      tmax = std::max(tmax, req.back());
      proj.push_back(row_basis(g.rep_idempotent(tau, static_cast<int>(h), i + a), tau.dim));
    }
    HyperplaneConditions hc;
    hc.h = static_cast<int>(h);
    hc.rows.resize(tmax);
    for (long s = 0; s < tmax; ++s) {
      Matrix stacked;
      for (int i = 0; i < hp.order; ++i)
        if (s < req[i]) stacked.insert(stacked.end(), proj[i].begin(), proj[i].end());
      hc.rows[s] = row_basis(stacked, tau.dim);
    }
    ctx.conds.push_back(std::move(hc));
    ctx.expanders.emplace_back(g, static_cast<int>(h), static_cast<int>(tmax), std::max(max_nd, 0));
  }
  return ctx;
}

GradedBasis solve_range(const SolveContext& ctx, const ReflectionGroup& g, int r, int min_deg, int max_deg,
                        bool parallel) {
  GradedBasis out;
  out.r = r;
  out.tau_dim = ctx.tau_dim;
  out.max_deg = max_deg;
  int shift = r * static_cast<int>(g.hyperplanes().size());
  int lo = std::max(min_deg, -shift);
  int count = max_deg - lo + 1;
  std::vector<std::vector<std::vector<MultiPoly>>> slices(std::max(count, 0));
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
  for (int idx = 0; idx < count; ++idx) slices[idx] = solve_degree(ctx, lo + idx + shift);
  for (int idx = 0; idx < count; ++idx) out.per_degree[lo + idx] = std::move(slices[idx]);
  return out;
}

std::string poly_text(const MultiPoly& f) { return f.to_string(); }

}  // namespace

nlohmann::json Membership::to_json() const {
  nlohmann::json j;
  j["member"] = ok;
  if (!ok) {
    j["hyperplane"] = hyperplane;
    j["index"] = index;
    j["valuation"] = valuation;
    j["required"] = required;
    j["remainder"] = remainder;
  }
  return j;
}

Membership is_quasi_invariant(const ReflectionGroup& g, const Multiplicity& k, const MultiPoly& f, int offset) {
  check_multiplicity(g, k);
  Membership res;
  if (f.is_zero()) return res;
  for (size_t h = 0; h < g.hyperplanes().size(); ++h) {
    const Hyperplane& hp = g.hyperplanes()[h];
    int a = k.twist(hp.orbit);
    for (int i = 0; i < hp.order; ++i) {
      long req = required_order(g, k, static_cast<int>(h), i);
      if (req <= 0) continue;
      MultiPoly e = g.idempotent_apply(static_cast<int>(h), -i - a, f, offset);
      if (e.is_zero()) continue;
      int val = linear_valuation(e, hp.alpha, offset, static_cast<int>(req));
      if (val < req) {
        res.ok = false;
        res.hyperplane = static_cast<int>(h);
        res.index = i;
        res.valuation = val;
        res.required = static_cast<int>(req);
        res.remainder = poly_text(e);
        return res;
      }
    }
  }
  return res;
}

Membership is_quasi_invariant(const ReflectionGroup& g, const Multiplicity& k, const LocalizedPoly& f) {
  check_multiplicity(g, k);
  Membership res;
  if (f.is_zero()) return res;
  int offset = f.forms()->offset;
  for (size_t h = 0; h < g.hyperplanes().size(); ++h) {
    const Hyperplane& hp = g.hyperplanes()[h];
    int a = k.twist(hp.orbit);
    for (int i = 0; i < hp.order; ++i) {
      long req = required_order(g, k, static_cast<int>(h), i);
      LocalizedPoly e = idempotent_local(g, static_cast<int>(h), -i - a, f);
      if (e.is_zero()) continue;
      int den = e.denominator().empty() ? 0 : e.denominator()[h];
      if (req + den <= 0) continue;
      int val = linear_valuation(e.numerator(), hp.alpha, offset, static_cast<int>(req + den)) - den;
      if (val < req) {
        res.ok = false;
        res.hyperplane = static_cast<int>(h);
        res.index = i;
        res.valuation = val;
        res.required = static_cast<int>(req);
        res.remainder = e.to_string();
        return res;
      }
    }
  }
  return res;
}

Membership is_tau_quasi_invariant(const ReflectionGroup& g, const Multiplicity& k, const WRep& tau,
                                  const std::vector<MultiPoly>& phi) {
  check_multiplicity(g, k);
  Membership res;
  for (size_t h = 0; h < g.hyperplanes().size(); ++h) {
    const Hyperplane& hp = g.hyperplanes()[h];
    int a = k.twist(hp.orbit);
    for (int i = 0; i < hp.order; ++i) {
      long req = required_order(g, k, static_cast<int>(h), i);
      if (req <= 0) continue;
      Matrix p = g.rep_idempotent(tau, static_cast<int>(h), i + a);
      for (int row = 0; row < tau.dim; ++row) {
        MultiPoly comp(phi[0].nvars());
        for (int c = 0; c < tau.dim; ++c)
          if (!p[row][c].is_zero()) comp += phi[c] * p[row][c];
        if (comp.is_zero()) continue;
        int val = linear_valuation(comp, hp.alpha, 0, static_cast<int>(req));
        if (val < req) {
          res.ok = false;
          res.hyperplane = static_cast<int>(h);
          res.index = i;
          res.valuation = val;
          res.required = static_cast<int>(req);
          res.remainder = poly_text(comp);
          return res;
        }
      }
    }
  }
  return res;
}

bool ExpansionSets::in_s(long s) const { return s >= 0 && s >= s_start[mod(s, n)]; }
bool ExpansionSets::in_r(long r) const { return r >= 0 && r >= r_start[mod(r, n)]; }

ExpansionSets normal_expansion_sets(const ReflectionGroup& g, const Multiplicity& k, int h) {
  check_multiplicity(g, k);
  const Hyperplane& hp = g.hyperplanes()[h];
  int n = hp.order;
  int a = k.twist(hp.orbit);
  ExpansionSets out;
  out.n = n;
  for (int rho = 0; rho < n; ++rho) {
    long req = std::max(0L, required_order(g, k, h, rho - a));
    long s = rho;
    while (s < req) s += n;
    out.s_start.push_back(s);
  }
  for (int rho = 0; rho < n; ++rho) {
    long need = 0;
    for (int sigma = 0; sigma < n; ++sigma) {
      need = std::max(need, out.s_start[(sigma + rho) % n] - out.s_start[sigma]);
    }
    long r = rho;
    while (r < need) r += n;
    out.r_start.push_back(r);
  }
  return out;
}

Membership s_set_member(const ReflectionGroup& g, const Multiplicity& k, const MultiPoly& f) {
  check_multiplicity(g, k);
  Membership res;
  for (size_t h = 0; h < g.hyperplanes().size(); ++h) {
    ExpansionSets sets = normal_expansion_sets(g, k, static_cast<int>(h));
    int p;
    Matrix sub = normal_coordinates(g.hyperplanes()[h], g.dim(), &p);
    MultiPoly e = f.substitute_linear(sub);
    for (const auto& [mu, c] : e.terms()) {
      if (sets.in_s(mu.e[p])) continue;
      res.ok = false;
      res.hyperplane = static_cast<int>(h);
      res.valuation = mu.e[p];
      res.index = static_cast<int>(mod(mu.e[p] - k.twist(g.hyperplanes()[h].orbit), sets.n));
      res.required = static_cast<int>(sets.s_start[mod(mu.e[p], sets.n)]);
      res.remainder = "t^" + std::to_string(mu.e[p]) + " term";
      return res;
    }
  }
  return res;
}

Multiplicity compute_ak(const ReflectionGroup& g, const Multiplicity& k) {
  check_multiplicity(g, k);
  Multiplicity out = Multiplicity::zero(g);
  for (int c = 0; c < g.num_orbits(); ++c) {
    int h = g.orbit(c)[0];
    ExpansionSets sets = normal_expansion_sets(g, k, h);
    for (int i = 0; i < sets.n; ++i) {
      out.k[c][i] = Rational(sets.r_start[i] - i, sets.n);
      out.k[c][i].canonicalize();
    }
  }
  return out;
}

int GradedBasis::dim(int d) const {
  auto it = per_degree.find(d);
  return it == per_degree.end() ? 0 : static_cast<int>(it->second.size());
}

std::vector<MultiPoly> GradedBasis::scalars(int d) const {
  std::vector<MultiPoly> out;
  auto it = per_degree.find(d);
  if (it == per_degree.end()) return out;
  for (const auto& v : it->second) out.push_back(v[0]);
  return out;
}

nlohmann::json GradedBasis::to_json(const ReflectionGroup& g) const {
  nlohmann::json j;
  j["k"] = k.to_json();
  j["deltaPower"] = r;
  j["maxDeg"] = max_deg;
  j["tauDim"] = tau_dim;
  if (!tau_name.empty()) j["tau"] = tau_name;
  nlohmann::json degs = nlohmann::json::array();
  auto names = default_var_names(g.dim());
  for (const auto& [d, elems] : per_degree) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : elems) {
      if (tau_dim == 1) {
        arr.push_back(v[0].to_string(names));
      } else {
        nlohmann::json comps = nlohmann::json::array();
        for (const auto& c : v) comps.push_back(c.to_string(names));
        arr.push_back(comps);
      }
    }
    degs.push_back({{"degree", d}, {"dim", elems.size()}, {"basis", arr}});
  }
  j["perDegree"] = degs;
  return j;
}

int pole_bound(const ReflectionGroup& g, const Multiplicity& k) {
  long r = 0;
  for (size_t h = 0; h < g.hyperplanes().size(); ++h)
    for (int i = 0; i < g.hyperplanes()[h].order; ++i)
      r = std::max(r, -required_order(g, k, static_cast<int>(h), i));
  return static_cast<int>(r);
}

int sandwich_exponent(const ReflectionGroup& g, const Multiplicity& k) {
  long r = 0;
  for (size_t h = 0; h < g.hyperplanes().size(); ++h)
    for (int i = 0; i < g.hyperplanes()[h].order; ++i)
      r = std::max(r, required_order(g, k, static_cast<int>(h), i));
  return static_cast<int>(std::max<long>(r, pole_bound(g, k)));
}

GradedBasis compute_basis(const ReflectionGroup& g, const Multiplicity& k, int max_deg, int r, bool parallel) {
  check_multiplicity(g, k);
  if (r < 0) r = pole_bound(g, k);
  int shift = r * static_cast<int>(g.hyperplanes().size());
  SolveContext ctx = scalar_context(g, k, r, max_deg + shift);
  GradedBasis out = solve_range(ctx, g, r, -shift, max_deg, parallel);
  out.k = k;
  return out;
}

GradedBasis tau_quasi_invariants(const ReflectionGroup& g, const Multiplicity& k, const WRep& tau, int max_deg,
                                 int r, bool parallel, int min_deg) {
  check_multiplicity(g, k);
  if (r < 0) r = pole_bound(g, k);
  int shift = r * static_cast<int>(g.hyperplanes().size());
  SolveContext ctx = tau_context(g, k, tau, r, max_deg + shift);
  GradedBasis out = solve_range(ctx, g, r, std::max(min_deg, -shift), max_deg, parallel);
  out.k = k;
  out.tau_name = tau.name;
  return out;
}

std::vector<std::vector<MultiPoly>> tau_degree_basis(const ReflectionGroup& g, const Multiplicity& k,
                                                     const WRep& tau, int d, int r) {
  check_multiplicity(g, k);
  int shift = r * static_cast<int>(g.hyperplanes().size());
  SolveContext ctx = tau_context(g, k, tau, r, d + shift);
  return solve_degree(ctx, d + shift);
}

WRep trivial_rep(const ReflectionGroup& g) {
  WRep rep;
  rep.name = "triv";
  rep.dim = 1;
  for (int w = 0; w < g.order(); ++w) {
    rep.mats.push_back(Matrix{{CycNumber(1)}});
    rep.character.push_back(CycNumber(1));
  }
  return rep;
}

WRep regular_rep(const ReflectionGroup& g) {
  WRep rep;
  rep.name = "regular";
  int n = g.order();
  rep.dim = n;
  for (int w = 0; w < n; ++w) {
    Matrix m(n, std::vector<CycNumber>(n, CycNumber(0)));
    for (int c = 0; c < n; ++c) m[g.mult(w, c)][c] = CycNumber(1);
    rep.mats.push_back(std::move(m));
    rep.character.push_back(CycNumber(w == 0 ? n : 0));
  }
  return rep;
}


namespace {

// Coordinates of vectors of polynomials on a shared monomial index.
struct CoordinateSpace {
  std::map<std::pair<Monomial, int>, int, std::function<bool(const std::pair<Monomial, int>&,
                                                             const std::pair<Monomial, int>&)>>
      index{[](const std::pair<Monomial, int>& a, const std::pair<Monomial, int>& b) {
        if (a.first != b.first) return GrLexLess()(a.first, b.first);
        return a.second < b.second;
      }};

  void add(const std::vector<MultiPoly>& v) {
    for (size_t c = 0; c < v.size(); ++c)
      for (const auto& [m, x] : v[c].terms()) index.emplace(std::make_pair(m, static_cast<int>(c)), 0);
  }
  int finalize() {
    int i = 0;
    for (auto& [key, val] : index) val = i++;
    return i;
  }
  std::vector<CycNumber> coords(const std::vector<MultiPoly>& v) const {
    std::vector<CycNumber> out(index.size(), CycNumber(0));
    for (size_t c = 0; c < v.size(); ++c)
      for (const auto& [m, x] : v[c].terms()) out[index.at(std::make_pair(m, static_cast<int>(c)))] = x;
    return out;
  }
};

int span_rank(const std::vector<std::vector<MultiPoly>>& vs) {
  if (vs.empty()) return 0;
  CoordinateSpace space;
  for (const auto& v : vs) space.add(v);
  int n = space.finalize();
  Matrix m;
  for (const auto& v : vs) m.push_back(space.coords(v));
  return rank(m, n);
}

std::vector<MultiPoly> scaled_by_delta(const ReflectionGroup& g, const std::vector<MultiPoly>& v, int power) {
  if (power == 0) return v;
  MultiPoly d = g.delta(-1, g.dim(), 0).pow(power);
  std::vector<MultiPoly> out;
  for (const auto& c : v) out.push_back(c * d);
  return out;
}

LocalizedPoly as_localized(const ReflectionGroup& g, const MultiPoly& num, int r) {
  auto forms = g.forms(g.dim(), 0);
  return LocalizedPoly(forms, num, std::vector<int>(g.hyperplanes().size(), r));
}


}  // namespace


bool same_spaces(const ReflectionGroup& g, const GradedBasis& a, const GradedBasis& b, int lo, int hi) {
  int r = std::max(a.r, b.r);
  for (int d = lo; d <= hi; ++d) {
    std::vector<std::vector<MultiPoly>> va, vb;
    auto ia = a.per_degree.find(d);
    if (ia != a.per_degree.end())
      for (const auto& v : ia->second) va.push_back(scaled_by_delta(g, v, r - a.r));
    auto ib = b.per_degree.find(d);
    if (ib != b.per_degree.end())
      for (const auto& v : ib->second) vb.push_back(scaled_by_delta(g, v, r - b.r));
    int ra = span_rank(va), rb = span_rank(vb);
    if (ra != rb) return false;
    std::vector<std::vector<MultiPoly>> all = va;
    all.insert(all.end(), vb.begin(), vb.end());
    if (span_rank(all) != ra) return false;
  }
  return true;
}

nlohmann::json StabilityReport::to_json() const {
  nlohmann::json j{{"ok", ok}, {"checked", checked}};
  if (!ok) j["witness"] = witness;
  return j;
}

StabilityReport dunkl_stability(const ReflectionGroup& g, const GradedBasis& b, const WRep& tau) {
  if (b.r != 0) throw std::invalid_argument("Dunkl stability check needs r = 0");
  StabilityReport rep;
  DunklAction act(g, b.k);
  int n = g.dim();
  for (const auto& [d, elems] : b.per_degree) {
    std::vector<std::vector<MultiPoly>> lower;
    auto it = b.per_degree.find(d - 1);
    if (it != b.per_degree.end()) lower = it->second;
    int base = span_rank(lower);
    for (size_t e = 0; e < elems.size(); ++e) {
      for (int j = 0; j < n; ++j) {
        auto image = act.apply_tau(unit_vector(n, j), elems[e], tau);
        ++rep.checked;
        if (!image) {
          rep.ok = false;
          rep.witness = "pole in T_" + std::to_string(j) + " of degree " + std::to_string(d) + " element " +
                        std::to_string(e);
          return rep;
        }
        bool zero = std::all_of(image->begin(), image->end(), [](const MultiPoly& p) { return p.is_zero(); });
        if (zero) continue;
        auto all = lower;
        all.push_back(*image);
        if (span_rank(all) != base) {
          rep.ok = false;
          rep.witness = "T_" + std::to_string(j) + " of degree " + std::to_string(d) + " element " +
                        std::to_string(e) + " leaves the module";
          return rep;
        }
      }
    }
  }
  return rep;
}

StabilityReport cm_stability(const ReflectionGroup& g, const GradedBasis& b, const std::vector<MultiPoly>& ps) {
  StabilityReport rep;
  for (const auto& p : ps) {
    DiffOp l = calogero_moser(g, b.k, p);
    for (const auto& [d, elems] : b.per_degree) {
      for (const auto& v : elems) {
        LocalizedPoly f = as_localized(g, v[0], b.r);
        LocalizedPoly out = l.apply(f);
        ++rep.checked;
        Membership m = b.r == 0 && !out.is_polynomial() ? Membership{false, -1, -1, 0, 0, "pole"}
                                                         : is_quasi_invariant(g, b.k, out);
        if (!m) {
          rep.ok = false;
          rep.witness = "L_p applied to " + f.to_string() + " gives " + out.to_string();
          return rep;
        }
      }
    }
  }
  return rep;
}

void tpoly_trim(TPoly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

TPoly tpoly_mul(const TPoly& a, const TPoly& b) {
  if (a.empty() || b.empty()) return {};
  TPoly out(a.size() + b.size() - 1, CycNumber(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j)
      if (!b[j].is_zero()) out[i + j] += a[i] * b[j];
  }
  tpoly_trim(out);
  return out;
}

TPoly tpoly_add(const TPoly& a, const TPoly& b) {
  TPoly out(std::max(a.size(), b.size()), CycNumber(0));
  for (size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  tpoly_trim(out);
  return out;
}

TPoly tpoly_shift(const TPoly& a, int s) {
  if (a.empty()) return a;
  TPoly out(s, CycNumber(0));
  out.insert(out.end(), a.begin(), a.end());
  return out;
}

TPoly tpoly_divexact(const TPoly& a_in, const TPoly& b_in) {
  TPoly a = a_in, b = b_in;
  tpoly_trim(a);
  tpoly_trim(b);
  if (b.empty()) throw std::domain_error("division by zero polynomial");
  if (a.empty()) return {};
  if (a.size() < b.size()) throw std::domain_error("inexact polynomial division");
  TPoly q(a.size() - b.size() + 1, CycNumber(0));
  CycNumber lead_inv = b.back().inverse();
  for (size_t i = q.size(); i-- > 0;) {
    CycNumber c = a[i + b.size() - 1] * lead_inv;
    q[i] = c;
    if (c.is_zero()) continue;
    for (size_t j = 0; j < b.size(); ++j) a[i + j] -= c * b[j];
  }
  for (const auto& x : a)
    if (!x.is_zero()) throw std::domain_error("inexact polynomial division");
  tpoly_trim(q);
  return q;
}

std::vector<CycNumber> series_expand(const TPoly& num, const std::vector<int>& den_degrees, int n) {
  std::vector<CycNumber> s(n + 1, CycNumber(0));
  for (size_t i = 0; i < num.size() && static_cast<int>(i) <= n; ++i) s[i] = num[i];
  for (int e : den_degrees)
    for (int i = e; i <= n; ++i) s[i] += s[i - e];
  return s;
}

std::string tpoly_to_string(const TPoly& a) {
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    std::string c = a[i].to_string();
    bool neg = !c.empty() && c[0] == '-';
    if (neg) c = c.substr(1);
    if (!first) os << (neg ? " - " : " + ");
    else if (neg) os << "-";
    bool unit = c == "1";
    if (i == 0) os << c;
    else {
      if (!unit) os << c << "*";
      os << "t";
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

std::vector<long> tpoly_integer_coeffs(const TPoly& a) {
  std::vector<long> out;
  for (const auto& x : a) {
    if (!x.is_rational() || x.to_rational().get_den() != 1) {
      throw std::domain_error("non-integral coefficient " + x.to_string());
    }
    out.push_back(x.to_rational().get_num().get_si());
  }
  return out;
}

namespace {

// det(1 - t m) by the Faddeev-LeVerrier recursion.
TPoly det_one_minus_t(const Matrix& m) {
  int n = static_cast<int>(m.size());
  TPoly c{CycNumber(1)};
  Matrix nk = identity_matrix<CycNumber>(n);
  for (int k = 1; k <= n; ++k) {
    Matrix mn = matmul(m, nk);
    CycNumber ck = trace(mn) * CycNumber(Rational(-1, k));
    c.push_back(ck);
    nk = mn;
    for (int i = 0; i < n; ++i) nk[i][i] += ck;
  }
  tpoly_trim(c);
  return c;
}

int element_order(const ReflectionGroup& g, int w) {
  int o = 1;
  int x = w;
  while (x != 0) {
    x = g.mult(x, w);
    ++o;
  }
  return o;
}

TPoly one_minus_t_pow(int e) {
  TPoly p(e + 1, CycNumber(0));
  p[0] = CycNumber(1);
  p[e] = p[e] - CycNumber(1);
  return p;
}

// (1/|W|) sum_w chi(w) / det(1 - t conj(w)) = s / (1 - t^L)^dim.
struct CommonMolien {
  TPoly s;
  int l = 1;
};

CommonMolien molien_common(const ReflectionGroup& g, const std::vector<CycNumber>& chi) {
  int n = g.dim();
  std::vector<int> orders(g.order());
  int l = 1;
  for (int w = 0; w < g.order(); ++w) {
    orders[w] = element_order(g, w);
    l = std::lcm(l, orders[w]);
  }
  CommonMolien out;
  out.l = l;
  for (int w = 0; w < g.order(); ++w) {
    if (chi[w].is_zero()) continue;
    Matrix cw = g.element(w);
    for (auto& row : cw)
      for (auto& x : row) x = x.conj();
    TPoly den = det_one_minus_t(cw);
    int o = orders[w];
    TPoly num{CycNumber(1)};
    for (int i = 0; i < n; ++i) num = tpoly_mul(num, one_minus_t_pow(o));
    TPoly q = tpoly_divexact(num, den);
    TPoly lift(l - o + 1, CycNumber(0));
    for (int i = 0; i <= l - o; i += o) lift[i] = CycNumber(1);
    for (int i = 0; i < n; ++i) q = tpoly_mul(q, lift);
    for (auto& x : q) x *= chi[w];
    out.s = tpoly_add(out.s, q);
  }
  for (auto& x : out.s) x *= CycNumber(Rational(1, g.order()));
  tpoly_trim(out.s);
  return out;
}

}  // namespace

std::vector<int> fundamental_degrees(const ReflectionGroup& g) {
  std::vector<CycNumber> triv(g.order(), CycNumber(1));
  CommonMolien m = molien_common(g, triv);
  int n = g.dim();
  int bound = g.order() + 1;
  auto target = series_expand(m.s, std::vector<int>(n, m.l), bound);
  std::vector<CycNumber> cur(bound + 1, CycNumber(0));
  cur[0] = CycNumber(1);
  std::vector<int> degs;
  for (int d = 1; d <= bound && static_cast<int>(degs.size()) < n; ++d) {
    CycNumber diff = target[d] - cur[d];
    long cnt = tpoly_integer_coeffs({diff})[0];
    if (cnt < 0) throw std::runtime_error("invariant ring is not polynomial");
    for (long c = 0; c < cnt; ++c) {
      degs.push_back(d);
      for (int i = d; i <= bound; ++i) cur[i] += cur[i - d];
    }
  }
  if (static_cast<int>(degs.size()) != n) throw std::runtime_error("fundamental degrees not found");
  return degs;
}

TPoly molien_numerator(const ReflectionGroup& g, const std::vector<CycNumber>& chi) {
  CommonMolien m = molien_common(g, chi);
  TPoly num = m.s;
  for (int e : fundamental_degrees(g)) num = tpoly_mul(num, one_minus_t_pow(e));
  TPoly den{CycNumber(1)};
  for (int i = 0; i < g.dim(); ++i) den = tpoly_mul(den, one_minus_t_pow(m.l));
  return tpoly_divexact(num, den);
}

nlohmann::json PoincareData::to_json() const {
  nlohmann::json j;
  j["series"] = series;
  if (has_closed_form) {
    j["numerator"] = numerator;
    j["denominatorDegrees"] = denominator_degrees;
    j["closedForm"] = closed_form_string();
  }
  return j;
}

std::string PoincareData::closed_form_string() const {
  TPoly num;
  for (long c : numerator) num.push_back(CycNumber(c));
  std::string den;
  for (size_t i = 0; i < denominator_degrees.size(); ++i) {
    if (i) den += "*";
    int e = denominator_degrees[i];
    den += e == 1 ? "(1 - t)" : "(1 - t^" + std::to_string(e) + ")";
  }
  if (denominator_degrees.size() > 1) den = "(" + den + ")";
  return "(" + tpoly_to_string(num) + ")/" + den;
}

PoincareData poincare_by_membership(const ReflectionGroup& g, const Multiplicity& k, int max_deg) {
  GradedBasis b = compute_basis(g, k, max_deg);
  PoincareData out;
  for (int d = 0; d <= max_deg; ++d) out.series.push_back(b.dim(d));
  return out;
}

long c_tau_integer(const ReflectionGroup& g, const Multiplicity& k, const WRep& tau) {
  CycNumber c = c_tau(g, k, tau);
  return tpoly_integer_coeffs({c})[0];
}

PoincareData poincare_by_formula(const ReflectionGroup& g, const Multiplicity& k, int max_deg) {
  if (!k.is_integral()) throw IncompatibleMultiplicity("closed form needs integral multiplicity");
  if (!g.irreps_available()) throw std::invalid_argument("irreducible representations unavailable for " + g.label());
  TPoly total;
  for (const auto& tau : g.irreps()) {
    long c = c_tau_integer(g, k, tau);
    if (c < 0) throw IncompatibleMultiplicity("negative generator degree");
    TPoly n = tpoly_shift(molien_numerator(g, tau.character), static_cast<int>(c));
    for (auto& x : n) x *= CycNumber(tau.dim);
    total = tpoly_add(total, n);
  }
  PoincareData out;
  out.has_closed_form = true;
  out.numerator = tpoly_integer_coeffs(total);
  out.denominator_degrees = fundamental_degrees(g);
  auto s = series_expand(total, out.denominator_degrees, max_deg);
  out.series = tpoly_integer_coeffs(s);
  return out;
}

namespace {

std::vector<CycNumber> poly_coords(const MultiPoly& f, const std::vector<Monomial>& mons) {
  std::vector<CycNumber> out;
  out.reserve(mons.size());
  for (const auto& m : mons) out.push_back(f.coefficient(m));
  return out;
}

// All products of the given homogeneous polynomials with total degree d.
std::vector<MultiPoly> products_of_degree(const std::vector<MultiPoly>& gens, const std::vector<int>& degs, int d,
                                          int nvars) {
  std::vector<MultiPoly> out;
  std::function<void(size_t, int, const MultiPoly&)> rec = [&](size_t start, int left, const MultiPoly& acc) {
    if (left == 0) {
      out.push_back(acc);
      return;
    }
    for (size_t i = start; i < gens.size(); ++i)
      if (degs[i] <= left) rec(i, left - degs[i], acc * gens[i]);
  };
  rec(0, d, MultiPoly::constant(nvars, CycNumber(1)));
  return out;
}

}  // namespace

std::vector<MultiPoly> invariants_of_degree(const ReflectionGroup& g, int d) {
  int n = g.dim();
  auto mons = monomials_of_degree(n, d);
  int nm = static_cast<int>(mons.size());
  auto col = [&](int mi) { return nm - 1 - mi; };
  std::vector<Monomial> rev(mons.rbegin(), mons.rend());
  Matrix rows;
  for (int w : g.generators()) {
    Matrix block(nm, std::vector<CycNumber>(nm, CycNumber(0)));
    for (int mi = 0; mi < nm; ++mi) {
      MultiPoly diff = g.act(w, MultiPoly::term(n, mons[mi], CycNumber(1))) - MultiPoly::term(n, mons[mi], CycNumber(1));
      for (const auto& [m, c] : diff.terms()) {
        int ri = static_cast<int>(std::find(mons.begin(), mons.end(), m) - mons.begin());
        block[ri][col(mi)] += c;
      }
    }
    rows.insert(rows.end(), block.begin(), block.end());
  }
  Matrix ker = kernel(rows, nm);
  std::reverse(ker.begin(), ker.end());
  std::vector<MultiPoly> out;
  for (const auto& v : ker) {
    MultiPoly f(n);
    for (int mi = 0; mi < nm; ++mi)
      if (!v[col(mi)].is_zero()) f.add_term(mons[mi], v[col(mi)]);
    out.push_back(f);
  }
  return out;
}

std::vector<MultiPoly> basic_invariants(const ReflectionGroup& g) {
  auto degs = fundamental_degrees(g);
  int n = g.dim();
  std::vector<MultiPoly> chosen;
  std::vector<int> chosen_deg;
  for (size_t i = 0; i < degs.size();) {
    int d = degs[i];
    size_t need = 0;
    while (i + need < degs.size() && degs[i + need] == d) ++need;
    auto mons = monomials_of_degree(n, d);
    Matrix span;
    for (const auto& p : products_of_degree(chosen, chosen_deg, d, n)) span.push_back(poly_coords(p, mons));
    int r = rank(span, static_cast<int>(mons.size()));
    size_t added = 0;
    for (const auto& f : invariants_of_degree(g, d)) {
      if (added == need) break;
      span.push_back(poly_coords(f, mons));
      int r2 = rank(span, static_cast<int>(mons.size()));
      if (r2 > r) {
        r = r2;
        chosen.push_back(f);
        chosen_deg.push_back(d);
        ++added;
      } else {
        span.pop_back();
      }
    }
    if (added != need) throw std::runtime_error("basic invariants not found in degree " + std::to_string(d));
    i += need;
  }
  return chosen;
}

std::vector<MultiPoly> basic_dual_invariants(const ReflectionGroup& g) { return basic_invariants(g.dual()); }

nlohmann::json FreeGenSet::to_json() const {
  nlohmann::json j;
  j["degrees"] = degrees;
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& f : generators) gens.push_back(f.to_string());
  j["generators"] = gens;
  nlohmann::json inv = nlohmann::json::array();
  for (const auto& f : invariants) inv.push_back(f.to_string());
  j["basicInvariants"] = inv;
  j["certifiedToDegree"] = certified_to;
  j["count"] = generators.size();
  return j;
}

FreeGenSet free_generators(const ReflectionGroup& g, const Multiplicity& k) {
  check_multiplicity(g, k);
  if (!k.is_integral()) throw IncompatibleMultiplicity("free generators need integral multiplicity");
  Multiplicity ku = k;
  for (int a : ku.a)
    if (a != 0) throw IncompatibleMultiplicity("free generators need an untwisted multiplicity");
  ku.a.clear();
  PoincareData pf = poincare_by_formula(g, ku, 0);
  long total = 0;
  for (long c : pf.numerator) {
    if (c < 0) throw FreenessMismatch("negative coefficient in " + pf.closed_form_string());
    total += c;
  }
  if (total != g.order()) throw FreenessMismatch("numerator sums to " + std::to_string(total));
  int top = static_cast<int>(pf.numerator.size()) - 1;
  auto edeg = fundamental_degrees(g);
  int cert = top + *std::max_element(edeg.begin(), edeg.end());
  GradedBasis basis = compute_basis(g, ku, cert);
  FreeGenSet out;
  out.invariants = basic_invariants(g);
  int n = g.dim();
  std::vector<std::vector<MultiPoly>> inv_products(cert + 1);
  for (int d = 0; d <= cert; ++d) inv_products[d] = products_of_degree(out.invariants, edeg, d, n);
  for (int d = 0; d <= cert; ++d) {
    auto mons = monomials_of_degree(n, d);
    int nm = static_cast<int>(mons.size());
    Matrix rows;
    for (size_t l = 0; l < out.generators.size(); ++l) {
      int rest = d - out.degrees[l];
      if (rest < 0) continue;
      for (const auto& p : inv_products[rest]) rows.push_back(poly_coords(p * out.generators[l], mons));
    }
    int r = rank(rows, nm);
    if (r != static_cast<int>(rows.size())) {
      throw FreenessMismatch("dependent products in degree " + std::to_string(d));
    }
    long need = d < static_cast<int>(pf.numerator.size()) ? pf.numerator[d] : 0;
    long added = 0;
    for (const auto& f : basis.scalars(d)) {
      if (added == need) break;
      rows.push_back(poly_coords(f, mons));
      int r2 = rank(rows, nm);
      if (r2 > r) {
        r = r2;
        out.generators.push_back(f);
        out.degrees.push_back(d);
        ++added;
      } else {
        rows.pop_back();
      }
    }
    if (added != need) throw FreenessMismatch("missing generators in degree " + std::to_string(d));
    if (r != basis.dim(d)) {
      throw FreenessMismatch("products span " + std::to_string(r) + " of " + std::to_string(basis.dim(d)) +
                             " dimensions in degree " + std::to_string(d));
    }
  }
  out.certified_to = cert;
  return out;
}

nlohmann::json TwistPermutation::to_json(const ReflectionGroup& g) const {
  nlohmann::json j;
  j["k"] = k.to_json();
  nlohmann::json arr = nlohmann::json::array();
  for (size_t t = 0; t < mapping.size(); ++t) {
    arr.push_back({{"from", g.irreps()[t].name},
                   {"to", g.irreps()[mapping[t]].name},
                   {"degree", generator_degree[mapping[t]]}});
  }
  j["mapping"] = arr;
  return j;
}

std::vector<int> compose_permutations(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(b.size());
  for (size_t i = 0; i < b.size(); ++i) out[i] = a[b[i]];
  return out;
}

namespace {

std::vector<MultiPoly> act_tau(const ReflectionGroup& g, const WRep& tau, int w, const std::vector<MultiPoly>& phi) {
  std::vector<MultiPoly> moved;
  for (const auto& c : phi) moved.push_back(g.act(w, c));
  std::vector<MultiPoly> out(tau.dim, MultiPoly(g.dim()));
  for (int r = 0; r < tau.dim; ++r)
    for (int c = 0; c < tau.dim; ++c)
      if (!tau.mats[w][r][c].is_zero() && !moved[c].is_zero()) out[r] += moved[c] * tau.mats[w][r][c];
  return out;
}

// Character of W on the span of independent vectors phi.
std::vector<CycNumber> span_character(const ReflectionGroup& g, const WRep& tau,
                                      const std::vector<std::vector<MultiPoly>>& phi) {
  CoordinateSpace space;
  for (const auto& v : phi) space.add(v);
  for (int w = 0; w < g.order(); ++w)
    for (const auto& v : phi) space.add(act_tau(g, tau, w, v));
  int nc = space.finalize();
  int m = static_cast<int>(phi.size());
  // Columns of the coordinate matrix are the phi; pick m independent coordinates.
  Matrix cols;
  for (const auto& v : phi) cols.push_back(space.coords(v));
  auto e = rref(cols, nc);
  Matrix square(m, std::vector<CycNumber>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) square[i][j] = cols[j][e.pivots[i]];
  Matrix inv = inverse(square);
  std::vector<CycNumber> chi;
  for (int w = 0; w < g.order(); ++w) {
    CycNumber t(0);
    for (int l = 0; l < m; ++l) {
      auto c = space.coords(act_tau(g, tau, w, phi[l]));
      std::vector<CycNumber> sub(m);
      for (int i = 0; i < m; ++i) sub[i] = c[e.pivots[i]];
      auto x = matvec(inv, sub);
      t += x[l];
    }
    chi.push_back(t);
  }
  return chi;
}

}  // namespace

TwistPermutation kz_twist(const ReflectionGroup& g, const Multiplicity& k) {
  check_multiplicity(g, k);
  if (!k.is_integral()) throw IncompatibleMultiplicity("KZ twist needs integral multiplicity");
  if (pole_bound(g, k) > 0) throw IncompatibleMultiplicity("KZ twist needs non-negative multiplicity");
  if (!g.irreps_available()) throw std::invalid_argument("irreducible representations unavailable for " + g.label());
  const auto& irreps = g.irreps();
  int nt = static_cast<int>(irreps.size());
  TwistPermutation out;
  out.k = k;
  out.mapping.assign(nt, -1);
  for (const auto& tau : irreps) out.generator_degree.push_back(c_tau_integer(g, k, tau));
  long maxc = *std::max_element(out.generator_degree.begin(), out.generator_degree.end());
  DunklAction act(g, k);
  int n = g.dim();
  for (int t = 0; t < nt; ++t) {
    const WRep& tau = irreps[t];
    GradedBasis b = tau_quasi_invariants(g, k, tau, static_cast<int>(maxc), 0);
    std::vector<std::vector<MultiPoly>> found;
    int found_deg = -1;
    for (const auto& [d, elems] : b.per_degree) {
      if (elems.empty()) continue;
      std::vector<std::vector<std::vector<MultiPoly>>> images(elems.size());
      CoordinateSpace space;
      for (size_t e = 0; e < elems.size(); ++e) {
        auto imgs = act.apply_tau_all(elems[e], tau);
        if (!imgs) throw StabilityFailure("Dunkl operator leaves Q_k(" + tau.name + ")");
        for (int j = 0; j < n; ++j) {
          std::vector<MultiPoly> wide(static_cast<size_t>(n) * tau.dim, MultiPoly(n));
          for (int c = 0; c < tau.dim; ++c) wide[j * tau.dim + c] = std::move((*imgs)[j][c]);
          images[e].push_back(wide);
          space.add(wide);
        }
      }
      int nc = space.finalize();
      int ne = static_cast<int>(elems.size());
      Matrix m(nc, std::vector<CycNumber>(ne, CycNumber(0)));
      for (int e = 0; e < ne; ++e) {
        for (const auto& wide : images[e]) {
          auto c = space.coords(wide);
          for (int i = 0; i < nc; ++i)
            if (!c[i].is_zero()) m[i][e] += c[i];
        }
      }
      Matrix ker = kernel(m, ne);
      if (ker.empty()) continue;
      if (found_deg >= 0) {
        throw KernelShapeError("singular vectors in degrees " + std::to_string(found_deg) + " and " +
                               std::to_string(d) + " for " + tau.name);
      }
      found_deg = d;
      for (const auto& v : ker) {
        std::vector<MultiPoly> phi(tau.dim, MultiPoly(n));
        for (int e = 0; e < ne; ++e)
          if (!v[e].is_zero())
            for (int c = 0; c < tau.dim; ++c) phi[c] += elems[e][c] * v[e];
        found.push_back(phi);
      }
    }
    if (found_deg != out.generator_degree[t] || static_cast<int>(found.size()) != tau.dim) {
      throw KernelShapeError("kernel of dimension " + std::to_string(found.size()) + " in degree " +
                             std::to_string(found_deg) + " for " + tau.name + ", expected " +
                             std::to_string(tau.dim) + " in degree " + std::to_string(out.generator_degree[t]));
    }
    int tp = g.find_irrep(span_character(g, tau, found));
    if (tp < 0) throw KernelShapeError("kernel of " + tau.name + " is not irreducible");
    if (out.mapping[tp] >= 0) throw KernelShapeError("twist is not injective at " + irreps[tp].name);
    out.mapping[tp] = t;
  }
  return out;
}

nlohmann::json CheckReport::to_json() const {
  return nlohmann::json{{"ok", ok}, {"checked", checked}, {"failures", failures}};
}

CheckReport g_orbit_checks(const ReflectionGroup& g, const Multiplicity& k_in, int max_deg) {
  Multiplicity k = k_in;
  if (!k.twisted()) k.a.assign(g.num_orbits(), 0);
  check_multiplicity(g, k);
  CheckReport rep;
  GradedBasis base = compute_basis(g, k, max_deg);
  for (int c = 0; c < g.num_orbits(); ++c) {
    Multiplicity it = k;
    for (int s = 0; s < g.orbit_order(c); ++s) it = g_transform(g, it, c);
    ++rep.checked;
    if (!(it.k == k.k)) rep.fail("g_C^n_C differs from identity on orbit " + std::to_string(c));
    Multiplicity k2 = g_transform(g, k, c);
    GradedBasis other = compute_basis(g, k2, max_deg);
    int lo = std::min(base.min_deg(), other.min_deg());
    ++rep.checked;
    if (!same_spaces(g, base, other, lo, max_deg)) {
      rep.fail("Q_{g_C k} differs from Q_k for orbit " + std::to_string(c) + " with g_C k = " + k2.to_string());
    }
  }
  return rep;
}

CheckReport fake_degree_symmetry(const ReflectionGroup& g, const std::vector<int>& a) {
  if (static_cast<int>(a.size()) != g.num_orbits()) throw std::invalid_argument("one twist per orbit expected");
  Multiplicity k = Multiplicity::zero(g);
  k.a = a;
  int deg_delta = 0;
  for (int c = 0; c < g.num_orbits(); ++c) {
    int n = g.orbit_order(c);
    if (a[c] < 0 || a[c] >= n) throw std::invalid_argument("twist out of range");
    for (auto& x : k.k[c]) {
      x = Rational(a[c], n);
      x.canonicalize();
    }
    deg_delta += a[c] * static_cast<int>(g.orbit(c).size());
  }
  Multiplicity kp = k;
  for (int c = 0; c < g.num_orbits(); ++c)
    for (int s = 0; s < a[c]; ++s) kp = g_transform(g, kp, c);
  kp.a.clear();
  CheckReport rep;
  TwistPermutation tw = kz_twist(g, kp);
  const auto& irreps = g.irreps();
  for (size_t tp = 0; tp < irreps.size(); ++tp) {
    const WRep& tau = irreps[tw.mapping[tp]];
    std::vector<CycNumber> chi;
    for (int w = 0; w < g.order(); ++w) {
      long e = 0;
      for (int c = 0; c < g.num_orbits(); ++c) e -= static_cast<long>(a[c]) * g.det_c_exp(w, c);
      chi.push_back(g.zeta_pow(e) * tau.character[w]);
    }
    TPoly left = tpoly_shift(molien_numerator(g, chi), deg_delta);
    TPoly right = tpoly_shift(molien_numerator(g, irreps[tp].character),
                              static_cast<int>(c_tau_integer(g, kp, irreps[tp])));
    tpoly_trim(left);
    tpoly_trim(right);
    ++rep.checked;
    if (left != right) {
      rep.fail(irreps[tp].name + ": " + tpoly_to_string(left) + " vs " + tpoly_to_string(right));
    }
  }
  return rep;
}

CheckReport symmetrization_check(const ReflectionGroup& g, const Multiplicity& k, int max_deg) {
  check_multiplicity(g, k);
  CheckReport rep;
  WRep reg = regular_rep(g);
  GradedBasis fat = tau_quasi_invariants(g, k, reg, max_deg, 0);
  GradedBasis thin = compute_basis(g, k, max_deg, 0);
  auto symmetrize = [&](const std::vector<MultiPoly>& phi) {
    std::vector<MultiPoly> out(reg.dim, MultiPoly(g.dim()));
    for (int w = 0; w < g.order(); ++w) {
      auto moved = act_tau(g, reg, w, phi);
      for (int c = 0; c < reg.dim; ++c) out[c] += moved[c];
    }
    for (auto& c : out) c *= CycNumber(Rational(1, g.order()));
    return out;
  };
  for (int d = 0; d <= max_deg; ++d) {
    std::vector<std::vector<MultiPoly>> left, right;
    for (const auto& phi : fat.per_degree[d]) left.push_back(symmetrize(phi));
    for (const auto& f : thin.scalars(d)) {
      std::vector<MultiPoly> phi(reg.dim, MultiPoly(g.dim()));
      phi[0] = f;
      right.push_back(symmetrize(phi));
    }
    int rl = span_rank(left), rr = span_rank(right);
    auto all = left;
    all.insert(all.end(), right.begin(), right.end());
    ++rep.checked;
    if (rl != rr || span_rank(all) != rl) {
      rep.fail("degree " + std::to_string(d) + ": ranks " + std::to_string(rl) + " and " + std::to_string(rr));
    }
  }
  return rep;
}

}  // namespace qinv
