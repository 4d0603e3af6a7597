#include "qinv/baf.hpp"

#include <algorithm>

namespace qinv {

namespace {

Rational binomial(int n, int k) {
  Rational r(1);
  for (int i = 1; i <= k; ++i) r = r * Rational(n - k + i, i);
  r.canonicalize();
  return r;
}

Rational inverse_factorial(int n) {
  Rational r(1);
  for (int i = 2; i <= n; ++i) r /= Rational(i);
  return r;
}

// sum_j x_j lambda_j
MultiPoly kernel_form(int n) {
  MultiPoly out(2 * n);
  for (int j = 0; j < n; ++j) {
    Monomial m;
    m.e[j] = 1;
    m.e[n + j] = 1;
    out.add_term(m, CycNumber(1));
  }
  return out;
}

// kernel_form^j / j! for j = 0 .. top
std::vector<MultiPoly> kernel_powers(int n, int top) {
  std::vector<MultiPoly> out;
  MultiPoly k = kernel_form(n);
  MultiPoly p = MultiPoly::constant(2 * n, CycNumber(1));
  for (int j = 0; j <= top; ++j) {
    out.push_back(p * CycNumber(inverse_factorial(j)));
    p = p * k;
  }
  return out;
}

// Multi-indices mu <= alpha in the first n entries.
std::vector<Monomial> lower_indices(const Monomial& alpha, int n) {
  std::vector<Monomial> out{Monomial{}};
  for (int j = 0; j < n; ++j) {
    std::vector<Monomial> next;
    for (const auto& m : out) {
      for (int t = 0; t <= alpha.e[j]; ++t) {
        Monomial mm = m;
        mm.e[j] = static_cast<int16_t>(t);
        next.push_back(mm);
      }
    }
    out = std::move(next);
  }
  return out;
}

class DerivativeCache {
 public:
  explicit DerivativeCache(const LocalizedPoly& p) { cache_.emplace(Monomial{}, p); }

  const LocalizedPoly& get(const Monomial& mu) {
    auto it = cache_.find(mu);
    if (it != cache_.end()) return it->second;
    int j = 0;
    while (mu.e[j] == 0) ++j;
    Monomial lower = mu;
    --lower.e[j];
    LocalizedPoly d = get(lower).derivative(j);
    return cache_.emplace(mu, std::move(d)).first->second;
  }

 private:
  std::map<Monomial, LocalizedPoly, GrLexLess> cache_;
};

std::vector<int> identity_map(int n) {
  std::vector<int> m(n);
  for (int i = 0; i < n; ++i) m[i] = i;
  return m;
}

bool bihomogeneous(const MultiPoly& p, int n, int i) {
  for (const auto& [m, c] : p.terms()) {
    if (m.degree(0, n) != i || m.degree(n, n) != i) return false;
  }
  return true;
}

Matrix coefficient_rows(const std::vector<MultiPoly>& polys, const std::vector<Monomial>& basis) {
  std::map<Monomial, int, GrLexLess> index;
  for (size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<int>(i);
  Matrix rows;
  for (const auto& p : polys) {
    std::vector<CycNumber> row(basis.size(), CycNumber(0));
    for (const auto& [m, c] : p.terms()) row[index.at(m)] = c;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::shared_ptr<const LinearForms> joint_forms(const ReflectionGroup& g) { return g.forms(2 * g.dim(), 0); }

ExpPolynomial exp_kernel(const ReflectionGroup& g) {
  return ExpPolynomial{LocalizedPoly::constant(joint_forms(g), CycNumber(1)), g.dim()};
}

std::vector<std::string> joint_var_names(int dim) {
  std::vector<std::string> names;
  for (int j = 0; j < dim; ++j) names.push_back("x" + std::to_string(j + 1));
  for (int j = 0; j < dim; ++j) names.push_back("l" + std::to_string(j + 1));
  return names;
}

MultiPoly embed_x(const MultiPoly& p, int dim) { return p.remap(2 * dim, identity_map(dim)); }

MultiPoly embed_lambda(const MultiPoly& p, int dim) {
  std::vector<int> m(dim);
  for (int j = 0; j < dim; ++j) m[j] = dim + j;
  return p.remap(2 * dim, m);
}

MultiPoly swap_blocks(const MultiPoly& p, int dim) {
  std::vector<int> m(2 * dim);
  for (int j = 0; j < dim; ++j) {
    m[j] = dim + j;
    m[dim + j] = j;
  }
  return p.remap(2 * dim, m);
}

ExpPolynomial apply_diffop_to_exp(const DiffOp& d, const ExpPolynomial& f) {
  int n = f.dim;
  const auto& jf = f.prefactor.forms();
  std::vector<int> var_map = identity_map(n);
  DerivativeCache derivs(f.prefactor);
  LocalizedPoly out = LocalizedPoly::constant(jf, CycNumber(0));
  for (const auto& [alpha, c] : d.terms()) {
    LocalizedPoly inner = LocalizedPoly::constant(jf, CycNumber(0));
    for (const auto& mu : lower_indices(alpha, n)) {
      const LocalizedPoly& dp = derivs.get(mu);
      if (dp.is_zero()) continue;
      Rational coeff(1);
      Monomial lam;
      for (int j = 0; j < n; ++j) {
        coeff *= binomial(alpha.e[j], mu.e[j]);
        lam.e[n + j] = static_cast<int16_t>(alpha.e[j] - mu.e[j]);
      }
      inner += dp.times_poly(MultiPoly::term(2 * n, lam, CycNumber(coeff)));
    }
    if (inner.is_zero()) continue;
    out += c.embed(jf, var_map) * inner;
  }
  return ExpPolynomial{out, n};
}

nlohmann::json BafData::to_json(const ReflectionGroup& g) const {
  auto names = joint_var_names(psi.dim);
  nlohmann::json j;
  j["group"] = g.label();
  j["k"] = k.to_json();
  j["variables"] = names;
  j["prefactor"] = prefactor().to_json();
  j["prefactorText"] = prefactor().to_string(names);
  j["leadingTerm"] = leading_term.to_json();
  j["leadingTermText"] = leading_term.to_string(names);
  j["normalization"] = normalization.to_json();
  j["topBidegree"] = top_degree;
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : chain) steps.push_back({{"orbit", s.orbit}, {"a", s.a}, {"targetK", s.target.to_json()}});
  j["chain"] = steps;
  return j;
}

std::vector<int> orbit_weights(const ReflectionGroup& g, const Multiplicity& k) {
  std::vector<int> out;
  for (int c = 0; c < g.num_orbits(); ++c) {
    Rational s(0);
    for (const auto& q : k.k[c]) s += q;
    if (s.get_den() != 1) throw std::invalid_argument("orbit weight is not integral");
    out.push_back(static_cast<int>(s.get_num().get_si()));
  }
  return out;
}

MultiPoly baf_leading_term(const ReflectionGroup& g, const Multiplicity& k) {
  int n = g.dim();
  auto weights = orbit_weights(g, k);
  MultiPoly out = MultiPoly::constant(2 * n, CycNumber(1));
  for (int c = 0; c < g.num_orbits(); ++c) {
    if (weights[c] == 0) continue;
    MultiPoly f = g.delta_star(c, 2 * n, n) * g.delta(c, 2 * n, 0);
    out = out * f.pow(weights[c]);
  }
  return out;
}

bool is_bidegree_zero(const MultiPoly& p, int dim) {
  for (const auto& [m, c] : p.terms()) {
    if (m.degree(0, dim) != m.degree(dim, dim)) return false;
  }
  return true;
}

BafData construct_baf(const ReflectionGroup& g, const Multiplicity& k) {
  if (!k.is_integral()) throw std::invalid_argument("the Baker-Akhiezer construction needs integral k");
  for (const auto& row : k.k) {
    for (const auto& q : row) {
      if (sgn(q) < 0) throw std::invalid_argument("the Baker-Akhiezer construction needs k >= 0");
    }
  }
  BafData b;
  b.k = k;
  b.chain = compose_chain(g, k);
  b.psi = exp_kernel(g);
  for (const auto& s : b.chain) {
    b.psi = apply_diffop_to_exp(s.op, b.psi);
    if (!b.psi.prefactor.is_polynomial()) {
      throw DenominatorSurvived("denominator " + b.psi.prefactor.to_string(joint_var_names(g.dim())) +
                                " after shift on orbit " + std::to_string(s.orbit));
    }
  }
  int n = g.dim();
  b.leading_term = baf_leading_term(g, k);
  b.top_degree = b.leading_term.degree() / 2;
  const MultiPoly& p = b.prefactor();
  if (p.is_zero()) throw ZeroLeadingTerm("the chain annihilates the exponential");
  const auto& [m0, c0] = *b.leading_term.terms().begin();
  CycNumber top = p.coefficient(m0);
  if (top.is_zero() || p.degree() != 2 * b.top_degree) {
    throw ZeroLeadingTerm("prefactor has no term " + b.leading_term.to_string(joint_var_names(n)));
  }
  b.normalization = c0 / top;
  b.psi.prefactor *= b.normalization;
  if (b.prefactor().homogeneous_component(2 * b.top_degree) != b.leading_term) {
    throw ZeroLeadingTerm("top component differs from the leading term");
  }
  if (!is_bidegree_zero(b.prefactor(), n)) throw std::logic_error("prefactor has nonzero bidegree");
  return b;
}

bool eigen_check(const ReflectionGroup& g, const BafData& b, const MultiPoly& p) {
  DiffOp l = calogero_moser(g, b.k, p);
  ExpPolynomial r = apply_diffop_to_exp(l, b.psi);
  LocalizedPoly expected = b.psi.prefactor.times_poly(embed_lambda(p, g.dim()));
  return r.prefactor == expected;
}

bool eigen_product_check(const ReflectionGroup& g, const BafData& b, const MultiPoly& p, const MultiPoly& q) {
  DiffOp lp = calogero_moser(g, b.k, p), lq = calogero_moser(g, b.k, q);
  ExpPolynomial r = apply_diffop_to_exp(lp, apply_diffop_to_exp(lq, b.psi));
  LocalizedPoly expected = b.psi.prefactor.times_poly(embed_lambda(p * q, g.dim()));
  return r.prefactor == expected;
}

MultiPoly taylor_component(const BafData& b, int d, bool x_first) {
  int n = b.psi.dim;
  int off = x_first ? 0 : n;
  auto powers = kernel_powers(n, d);
  MultiPoly out(2 * n);
  for (int a = 0; a <= std::min(d, b.top_degree); ++a) {
    MultiPoly pa = b.prefactor().partial_component(off, n, a);
    if (!pa.is_zero()) out += pa * powers[d - a];
  }
  return out;
}

MultiPoly diagonal_act(const ReflectionGroup& g, const ReflectionGroup& dual, int w, const MultiPoly& p) {
  return dual.act(w, g.act(w, p, 0), g.dim());
}

int default_truncation(const ReflectionGroup& g, const Multiplicity& k) {
  Rational mx(0);
  for (int c = 0; c < g.num_orbits(); ++c) {
    for (const auto& q : k.k[c]) mx = std::max(mx, Rational(q * g.orbit_order(c)));
  }
  mpz_class up = mx.get_num() / mx.get_den();
  if (up * mx.get_den() < mx.get_num()) up += 1;
  return 2 * (1 + static_cast<int>(up.get_si()));
}

CheckReport membership_checks(const ReflectionGroup& g, const BafData& b, int max_deg) {
  CheckReport rep;
  int n = g.dim();
  ReflectionGroup dual = g.dual();
  auto names = joint_var_names(n);
  for (int d = 0; d <= max_deg; ++d) {
    MultiPoly cx = taylor_component(b, d, true);
    Membership mx = is_quasi_invariant(g, b.k, cx, 0);
    ++rep.checked;
    if (!mx) rep.fail("x-component of degree " + std::to_string(d) + " not in Q_k: " + mx.to_json().dump());
    MultiPoly cl = taylor_component(b, d, false);
    Membership ml = is_quasi_invariant(dual, b.k, cl, n);
    ++rep.checked;
    if (!ml) rep.fail("lambda-component of degree " + std::to_string(d) + " not in Q_k*: " + ml.to_json().dump());
  }
  MultiPoly kf = kernel_form(n);
  for (int w = 0; w < g.order(); ++w) {
    ++rep.checked;
    if (diagonal_act(g, dual, w, kf) != kf) rep.fail("pairing not invariant under element " + std::to_string(w));
    ++rep.checked;
    if (diagonal_act(g, dual, w, b.prefactor()) != b.prefactor()) {
      rep.fail("exchange symmetry fails for element " + std::to_string(w));
    }
  }
  return rep;
}

bool bispectral_check(const ReflectionGroup& g, const BafData& b) {
  ReflectionGroup dual = g.dual();
  BafData bd = construct_baf(dual, b.k);
  return swap_blocks(bd.prefactor(), g.dim()) == b.prefactor();
}

nlohmann::json PhiReport::to_json(const ReflectionGroup& g) const {
  auto names = joint_var_names(g.dim());
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : components) comps.push_back(c.to_string(names));
  return nlohmann::json{{"checks", checks.to_json()}, {"atOrigin", at_origin.to_json()}, {"components", comps}};
}

PhiReport phi_checks(const ReflectionGroup& g, const BafData& b, int max_order) {
  PhiReport rep;
  int n = g.dim();
  ReflectionGroup dual = g.dual();
  auto powers = kernel_powers(n, max_order);
  std::vector<MultiPoly> parts;
  for (int a = 0; a <= b.top_degree; ++a) parts.push_back(b.prefactor().partial_component(0, n, a));
  for (int i = 0; i <= max_order; ++i) {
    MultiPoly psi_i(2 * n);
    for (int a = 0; a <= std::min(i, b.top_degree); ++a) {
      if (!parts[a].is_zero()) psi_i += parts[a] * powers[i - a];
    }
    MultiPoly phi(2 * n);
    for (int w = 0; w < g.order(); ++w) phi += dual.act(w, psi_i, n);
    rep.components.push_back(phi);
  }
  auto& ck = rep.checks;
  for (int i = 0; i <= max_order; ++i) {
    const MultiPoly& phi = rep.components[i];
    ++ck.checked;
    if (!bihomogeneous(phi, n, i)) ck.fail("Phi_" + std::to_string(i) + " is not bihomogeneous");
    for (int w : g.generators()) {
      ++ck.checked;
      if (g.act(w, phi, 0) != phi) ck.fail("Phi_" + std::to_string(i) + " not invariant in x");
      ++ck.checked;
      if (dual.act(w, phi, n) != phi) ck.fail("Phi_" + std::to_string(i) + " not invariant in lambda");
    }
  }
  rep.at_origin = rep.components[0].constant_term();
  ++ck.checked;
  if (rep.at_origin.is_zero()) ck.fail("Phi(0,0) = 0");
  DunklAction act(g, b.k);
  for (const auto& p : basic_dual_invariants(g)) {
    int dp = p.degree();
    MultiPoly pl = embed_lambda(p, n);
    for (int i = 0; i <= max_order; ++i) {
      MultiPoly lhs = act.apply_polynomial(p, rep.components[i]);
      MultiPoly rhs = i >= dp ? pl * rep.components[i - dp] : MultiPoly(2 * n);
      ++ck.checked;
      if (lhs != rhs) ck.fail("T_p Phi_" + std::to_string(i) + " differs from p(lambda) Phi for p = " + p.to_string());
    }
  }
  return rep;
}

Matrix pairing_block(const ReflectionGroup& g, const Multiplicity& k, int d) {
  int n = g.dim();
  DunklAction act(g, k);
  auto mons = monomials_of_degree(n, d);
  Matrix m(mons.size(), std::vector<CycNumber>(mons.size(), CycNumber(0)));
  for (size_t a = 0; a < mons.size(); ++a) {
    MultiPoly p = MultiPoly::term(n, mons[a], CycNumber(1));
    for (size_t c = 0; c < mons.size(); ++c) {
      MultiPoly q = MultiPoly::term(n, mons[c], CycNumber(1));
      m[a][c] = act.apply_polynomial(p, q).constant_term();
    }
  }
  return m;
}

CheckReport pairing_checks(const ReflectionGroup& g, const Multiplicity& k, int max_deg) {
  CheckReport rep;
  for (int d = 0; d <= max_deg; ++d) {
    Matrix m = pairing_block(g, k, d);
    int size = static_cast<int>(m.size());
    ++rep.checked;
    if (rank(m, size) != size) rep.fail("pairing block of degree " + std::to_string(d) + " is degenerate");
    for (int a = 0; a < size; ++a) {
      for (int c = 0; c < size; ++c) {
        ++rep.checked;
        if (m[a][c] != m[c][a].conj()) {
          rep.fail("adjoint relation fails in degree " + std::to_string(d) + " at (" + std::to_string(a) + "," +
                   std::to_string(c) + ")");
        }
      }
    }
  }
  return rep;
}

nlohmann::json UniquenessReport::to_json() const {
  nlohmann::json j{{"ok", ok}, {"unknowns", unknowns}, {"rank", rank}, {"truncation", truncation}};
  if (!witness.empty()) j["witness"] = witness;
  return j;
}

UniquenessReport uniqueness_check(const ReflectionGroup& g, const BafData& b, int max_deg) {
  UniquenessReport rep;
  rep.truncation = max_deg;
  int n = g.dim();
  ReflectionGroup dual = g.dual();
  std::vector<Monomial> unknowns;
  for (int a = 0; a < b.top_degree; ++a) {
    for (const auto& lam : monomials_of_degree(n, a)) {
      for (const auto& x : monomials_of_degree(n, a)) {
        Monomial m;
        for (int j = 0; j < n; ++j) {
          m.e[j] = x.e[j];
          m.e[n + j] = lam.e[j];
        }
        unknowns.push_back(m);
      }
    }
  }
  int nu = static_cast<int>(unknowns.size());
  rep.unknowns = nu;
  GradedBasis qb = compute_basis(dual, b.k, max_deg);
  auto powers = kernel_powers(n, max_deg);
  // Column nu holds the contribution of the fixed leading term.
  std::map<std::pair<int, std::vector<int>>, std::vector<CycNumber>> rows;
  for (int d = 0; d <= max_deg; ++d) {
    auto mons = monomials_of_degree(n, d);
    Matrix basis = coefficient_rows(qb.scalars(d), mons);
    Matrix ann = kernel(basis, static_cast<int>(mons.size()));
    if (ann.empty()) continue;
    std::map<Monomial, int, GrLexLess> index;
    for (size_t i = 0; i < mons.size(); ++i) index[mons[i]] = static_cast<int>(i);
    auto add_contribution = [&](const MultiPoly& t, int col) {
      for (const auto& [m, c] : t.terms()) {
        Monomial lam;
        std::vector<int> key{d};
        for (int j = 0; j < n; ++j) {
          lam.e[j] = m.e[n + j];
          key.push_back(m.e[j]);
        }
        int li = index.at(lam);
        for (size_t r = 0; r < ann.size(); ++r) {
          if (ann[r][li].is_zero()) continue;
          auto& row = rows[{static_cast<int>(r), key}];
          if (row.empty()) row.assign(nu + 1, CycNumber(0));
          row[col] += c * ann[r][li];
        }
      }
    };
    for (int u = 0; u < nu; ++u) {
      int a = unknowns[u].degree(n, n);
      if (a > d) continue;
      add_contribution(MultiPoly::term(2 * n, unknowns[u], CycNumber(1)) * powers[d - a], u);
    }
    if (d >= b.top_degree) add_contribution(b.leading_term * powers[d - b.top_degree], nu);
  }
  Matrix a;
  std::vector<CycNumber> rhs;
  for (auto& [key, row] : rows) {
    rhs.push_back(-row[nu]);
    row.pop_back();
    a.push_back(std::move(row));
  }
  rep.rank = a.empty() ? 0 : rank(a, nu);
  if (rep.rank < nu) {
    rep.ok = false;
    rep.witness = "lower terms not determined: rank " + std::to_string(rep.rank) + " of " + std::to_string(nu);
    return rep;
  }
  std::vector<CycNumber> sol;
  try {
    sol = solve(a, rhs, nu);
  } catch (const std::domain_error& e) {
    rep.ok = false;
    rep.witness = e.what();
    return rep;
  }
  for (int u = 0; u < nu; ++u) {
    if (sol[u] != b.prefactor().coefficient(unknowns[u])) {
      rep.ok = false;
      rep.witness = "coefficient " + std::to_string(u) + " differs: " + sol[u].to_string();
      return rep;
    }
  }
  return rep;
}

}  // namespace qinv
