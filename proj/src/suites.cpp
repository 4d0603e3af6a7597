#include "qinv/suites.hpp"

#include <algorithm>

namespace qinv {

namespace {

MultiPoly random_homogeneous(int n, int d, std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  MultiPoly f(n);
  for (const auto& m : monomials_of_degree(n, d)) {
    int c = coef(rng);
    if (c != 0) f.add_term(m, CycNumber(c));
  }
  return f;
}

MultiPoly random_member(const GradedBasis& b, int d, std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> coef(-3, 3);
  MultiPoly f(n);
  for (const auto& v : b.per_degree.at(d)) f += v[0] * CycNumber(coef(rng));
  return f;
}

std::vector<MultiPoly> lowest_invariants(const ReflectionGroup& g, size_t count) {
  auto ps = basic_dual_invariants(g);
  std::stable_sort(ps.begin(), ps.end(), [](const MultiPoly& a, const MultiPoly& b) { return a.degree() < b.degree(); });
  if (ps.size() > count) ps.resize(count);
  return ps;
}

std::string status_name(SuiteStatus s) {
  switch (s) {
    case SuiteStatus::pass:
      return "pass";
    case SuiteStatus::fail:
      return "fail";
    default:
      return "skipped";
  }
}

void check_twist_entries(const ReflectionGroup& g, const Multiplicity& k, const std::string& what) {
  if (!k.is_integral()) throw IncompatibleMultiplicity(what + " needs integral multiplicity");
  for (int c = 0; c < g.num_orbits(); ++c) {
    if (k.twist(c) != 0) throw IncompatibleMultiplicity(what + " needs an untwisted multiplicity");
    for (const auto& q : k.k[c]) {
      if (sgn(q) < 0) throw IncompatibleMultiplicity(what + " needs non-negative multiplicity");
    }
  }
}

}  // namespace

nlohmann::json SuiteOutcome::to_json() const {
  nlohmann::json j{{"suite", name}, {"status", status_name(status)}};
  if (status == SuiteStatus::skipped) {
    j["reason"] = reason;
  } else {
    j["report"] = report.to_json();
  }
  if (!details.empty()) j["details"] = details;
  return j;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"dunkl-axioms", "membership-crosscheck", "poincare",
                                                 "freeness",     "intertwining",          "kz-additivity",
                                                 "baf",          "fake-degrees"};
  return names;
}

CheckReport dunkl_axioms(const ReflectionGroup& g, const Multiplicity& k) {
  CheckReport rep;
  int n = g.dim();
  std::vector<DiffReflOp> t;
  for (int j = 0; j < n; ++j) t.push_back(dunkl_operator(g, k, unit_vector(n, j)));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      ++rep.checked;
      if (t[a] * t[b] != t[b] * t[a]) rep.fail("T_" + std::to_string(a) + " and T_" + std::to_string(b) + " do not commute");
    }
  }
  for (int w : g.generators()) {
    for (int j = 0; j < n; ++j) {
      std::vector<CycNumber> wxi(n);
      for (int i = 0; i < n; ++i) wxi[i] = g.element(w)[i][j];
      ++rep.checked;
      if (t[j].conjugate(w) != dunkl_operator(g, k, wxi)) {
        rep.fail("equivariance fails for element " + std::to_string(w) + " and T_" + std::to_string(j));
      }
    }
  }
  for (int j = 0; j < n; ++j) {
    for (const auto& [w, d] : t[j].parts()) {
      for (const auto& [alpha, c] : d.terms()) {
        ++rep.checked;
        if (!c.is_homogeneous() || c.degree() - alpha.degree() != -1) {
          rep.fail("T_" + std::to_string(j) + " has a term of degree other than -1 in part " + std::to_string(w));
        }
      }
    }
  }
  return rep;
}

CheckReport membership_crosscheck(const ReflectionGroup& g, const Multiplicity& k, int samples, unsigned seed) {
  CheckReport rep;
  const int max_deg = 8;
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> deg(0, max_deg);
  GradedBasis b = compute_basis(g, k, max_deg);
  int n = g.dim();
  int members = 0;
  for (int t = 0; t < samples; ++t) {
    int d = deg(rng);
    MultiPoly f = random_homogeneous(n, d, rng);
    if (t % 2 == 1 && b.dim(d) > 0) {
      f = random_member(b, d, rng, n);
      if (t % 4 == 3) f += random_homogeneous(n, d, rng) * CycNumber(Rational(1, 7));
    }
    bool a = is_quasi_invariant(g, k, f).ok;
    bool s = s_set_member(g, k, f).ok;
    members += a ? 1 : 0;
    ++rep.checked;
    if (a != s) rep.fail("membership tests disagree on " + f.to_string());
  }
  if (members == 0 || members == samples) rep.fail("sample does not contain both members and non-members");
  return rep;
}

CheckReport poincare_consistency(const ReflectionGroup& g, const Multiplicity& k, int max_deg) {
  CheckReport rep;
  PoincareData m = poincare_by_membership(g, k, max_deg);
  PoincareData f = poincare_by_formula(g, k, max_deg);
  ++rep.checked;
  if (m.series != f.series) rep.fail("membership and formula series differ");
  ++rep.checked;
  if (!f.has_closed_form) {
    rep.fail("formula has no closed form");
    return rep;
  }
  long sum = 0;
  for (long c : f.numerator) {
    ++rep.checked;
    if (c < 0) rep.fail("negative numerator coefficient " + std::to_string(c));
    sum += c;
  }
  ++rep.checked;
  if (sum != g.order()) rep.fail("numerator sums to " + std::to_string(sum) + " instead of |W|");
  std::vector<long> prod = m.series;
  for (int e : f.denominator_degrees) {
    for (int i = static_cast<int>(prod.size()) - 1; i >= e; --i) prod[i] -= prod[i - e];
  }
  for (int i = 0; i <= max_deg; ++i) {
    long want = i < static_cast<int>(f.numerator.size()) ? f.numerator[i] : 0;
    ++rep.checked;
    if (prod[i] != want) rep.fail("series times prod(1 - t^e) differs in degree " + std::to_string(i));
  }
  return rep;
}

CheckReport freeness_check(const ReflectionGroup& g, const Multiplicity& k) {
  CheckReport rep;
  FreeGenSet f = free_generators(g, k);
  ++rep.checked;
  if (static_cast<int>(f.generators.size()) != g.order()) {
    rep.fail(std::to_string(f.generators.size()) + " generators for a group of order " + std::to_string(g.order()));
  }
  int top = f.degrees.empty() ? 0 : *std::max_element(f.degrees.begin(), f.degrees.end());
  PoincareData p = poincare_by_formula(g, k, top);
  std::vector<long> counts(std::max<size_t>(p.numerator.size(), top + 1), 0);
  for (int d : f.degrees) ++counts[d];
  std::vector<long> num = p.numerator;
  num.resize(counts.size(), 0);
  ++rep.checked;
  if (counts != num) rep.fail("generator degrees do not match the Poincare numerator");
  ++rep.checked;
  if (f.certified_to < top) rep.fail("generation certified only to degree " + std::to_string(f.certified_to));
  return rep;
}

CheckReport intertwining_check(const ReflectionGroup& g, const Multiplicity& k, CalogeroMoserCache* cache) {
  CheckReport rep;
  auto ps = lowest_invariants(g, 2);
  CalogeroMoserCache local;
  if (!cache) cache = &local;
  auto l_of = [&](const Multiplicity& m, int i) -> const DiffOp& {
    auto key = std::make_pair(m.to_string(), i);
    auto it = cache->find(key);
    if (it == cache->end()) it = cache->emplace(key, calogero_moser(g, m, ps[i])).first;
    return it->second;
  };
  for (int c = 0; c < g.num_orbits(); ++c) {
    for (int a = 1; a < g.orbit_order(c); ++a) {
      ShiftOp s = elementary_shift(g, k, c, a);
      for (size_t i = 0; i < ps.size(); ++i) {
        ++rep.checked;
        IntertwineResult r = intertwine_check(s, l_of(s.source, static_cast<int>(i)), l_of(s.target, static_cast<int>(i)));
        if (!r.ok) {
          rep.fail("orbit " + std::to_string(c) + " a = " + std::to_string(a) + " p = " + ps[i].to_string() +
                   ": " + r.difference.to_string());
        }
      }
    }
  }
  return rep;
}

CheckReport kz_additivity(const ReflectionGroup& g, const Multiplicity& k) {
  check_twist_entries(g, k, "KZ additivity");
  CheckReport rep;
  TwistPermutation id = kz_twist(g, Multiplicity::zero(g));
  for (size_t t = 0; t < id.mapping.size(); ++t) {
    ++rep.checked;
    if (id.mapping[t] != static_cast<int>(t)) rep.fail("kz_0 is not the identity");
  }
  std::vector<Multiplicity> steps;
  for (int c = 0; c < g.num_orbits(); ++c) {
    for (int i = 0; i < g.orbit_order(c); ++i) {
      long times = k.k[c][i].get_num().get_si();
      for (long r = 0; r < times; ++r) steps.push_back(Multiplicity::ell(g, c, i));
    }
  }
  std::vector<TwistPermutation> twists{id};
  Multiplicity cur = Multiplicity::zero(g);
  std::map<std::string, TwistPermutation> unit;
  for (const auto& s : steps) {
    auto key = s.to_string();
    if (!unit.count(key)) unit.emplace(key, kz_twist(g, s));
    cur = cur + s;
    TwistPermutation next = kz_twist(g, cur);
    ++rep.checked;
    if (compose_permutations(twists.back().mapping, unit.at(key).mapping) != next.mapping) {
      rep.fail("kz additivity fails at " + cur.to_string());
    }
    twists.push_back(std::move(next));
  }
  for (const auto& [key, tw] : unit) twists.push_back(tw);
  for (const auto& tw : twists) {
    for (size_t tp = 0; tp < tw.mapping.size(); ++tp) {
      const WRep& src = g.irreps()[tp];
      const WRep& dst = g.irreps()[tw.mapping[tp]];
      ++rep.checked;
      if (src.dim != dst.dim) rep.fail("kz at " + tw.k.to_string() + " changes dimension of " + src.name);
      ++rep.checked;
      if (c_tau(g, tw.k, src) != c_tau(g, tw.k, dst)) rep.fail("kz at " + tw.k.to_string() + " changes c of " + src.name);
    }
  }
  return rep;
}

CheckReport fake_degrees(const ReflectionGroup& g) {
  CheckReport rep;
  std::vector<int> a(g.num_orbits(), 0);
  while (true) {
    CheckReport r = fake_degree_symmetry(g, a);
    rep.checked += r.checked;
    for (const auto& f : r.failures) rep.fail(f);
    int c = 0;
    while (c < g.num_orbits() && ++a[c] == g.orbit_order(c)) a[c++] = 0;
    if (c == g.num_orbits()) break;
  }
  return rep;
}

CheckReport baf_suite(const ReflectionGroup& g, const Multiplicity& k, nlohmann::json* details) {
  check_twist_entries(g, k, "the Baker-Akhiezer suite");
  CheckReport rep;
  BafData b = construct_baf(g, k);
  auto names = joint_var_names(g.dim());
  auto record = [&rep](bool ok, const std::string& what) {
    ++rep.checked;
    if (!ok) rep.fail(what);
  };
  record(b.prefactor().homogeneous_component(2 * b.top_degree) == b.leading_term, "leading term");
  record(is_bidegree_zero(b.prefactor(), g.dim()), "bidegree zero");
  auto ps = lowest_invariants(g, 2);
  for (const auto& p : ps) record(eigen_check(g, b, p), "eigen relation for p = " + p.to_string());
  if (ps.size() == 2) record(eigen_product_check(g, b, ps[0], ps[1]), "eigenvalue multiplicativity");
  int trunc = default_truncation(g, k);
  CheckReport mem = membership_checks(g, b, trunc);
  record(mem.ok, "membership and exchange symmetry");
  for (const auto& f : mem.failures) rep.failures.push_back(f);
  record(bispectral_check(g, b), "bispectrality");
  PhiReport ph = phi_checks(g, b, b.top_degree + 2);
  record(ph.checks.ok, "symmetrized function");
  for (const auto& f : ph.checks.failures) rep.failures.push_back(f);
  CheckReport pair = pairing_checks(g, k, 6);
  record(pair.ok, "pairing blocks to degree 6");
  for (const auto& f : pair.failures) rep.failures.push_back(f);
  UniquenessReport u = uniqueness_check(g, b, trunc);
  record(u.ok, "uniqueness: " + u.witness);
  if (details) {
    *details = b.to_json(g);
    (*details)["phiAtOrigin"] = ph.at_origin.to_json();
    (*details)["membershipTruncation"] = trunc;
    (*details)["uniqueness"] = u.to_json();
    (*details)["certificates"] = {{"membership", mem.to_json()},
                                  {"phi", ph.checks.to_json()},
                                  {"pairing", pair.to_json()}};
  }
  return rep;
}

SuiteOutcome run_suite(const std::string& name, const ReflectionGroup& g, const Multiplicity& k,
                       const SuiteOptions& opt) {
  SuiteOutcome out;
  out.name = name;
  try {
    if (name == "dunkl-axioms") {
      out.report = dunkl_axioms(g, k);
    } else if (name == "membership-crosscheck") {
      out.report = membership_crosscheck(g, k, opt.samples, opt.seed);
    } else if (name == "poincare") {
      out.report = poincare_consistency(g, k, opt.max_deg < 0 ? 25 : opt.max_deg);
    } else if (name == "freeness") {
      out.report = freeness_check(g, k);
    } else if (name == "intertwining") {
      out.report = intertwining_check(g, k);
    } else if (name == "kz-additivity") {
      out.report = kz_additivity(g, k);
    } else if (name == "baf") {
      out.report = baf_suite(g, k, &out.details);
    } else if (name == "fake-degrees") {
      out.report = fake_degrees(g);
    } else {
      throw std::invalid_argument("unknown suite " + name);
    }
    out.status = out.report.ok ? SuiteStatus::pass : SuiteStatus::fail;
  } catch (const IncompatibleMultiplicity& e) {
    out.status = SuiteStatus::skipped;
    out.reason = e.what();
  } catch (const UnreachableTarget& e) {
    out.status = SuiteStatus::skipped;
    out.reason = e.what();
  } catch (const std::invalid_argument& e) {
    if (std::string(e.what()).rfind("unknown suite", 0) == 0) throw;
    out.status = SuiteStatus::skipped;
    out.reason = e.what();
  } catch (const std::exception& e) {
    out.status = SuiteStatus::fail;
    out.report.fail(std::string("exception: ") + e.what());
  }
  return out;
}

std::vector<Multiplicity> integral_multiplicities(const ReflectionGroup& g, int max_entry) {
  std::vector<std::pair<int, int>> slots;
  for (int c = 0; c < g.num_orbits(); ++c) {
    for (int i = 1; i < g.orbit_order(c); ++i) slots.emplace_back(c, i);
  }
  std::vector<Multiplicity> out;
  std::vector<int> digits(slots.size(), 0);
  while (true) {
    Multiplicity k = Multiplicity::zero(g);
    for (size_t s = 0; s < slots.size(); ++s) k.k[slots[s].first][slots[s].second] = digits[s];
    out.push_back(k);
    size_t s = 0;
    while (s < slots.size() && ++digits[s] > max_entry) digits[s++] = 0;
    if (s == slots.size()) break;
  }
  return out;
}

Multiplicity random_rational_multiplicity(const ReflectionGroup& g, std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
  Multiplicity k = Multiplicity::zero(g);
  for (auto& row : k.k) {
    for (size_t i = 1; i < row.size(); ++i) {
      row[i] = Rational(num(rng), den(rng));
      row[i].canonicalize();
    }
  }
  return k;
}

}  // namespace qinv
