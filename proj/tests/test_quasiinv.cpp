#include <doctest.h>

#include <random>

#include "qinv/quasiinv.hpp"

using namespace qinv;

namespace {

MultiPoly x_pow(int n, int i, int e) { return MultiPoly::variable(n, i).pow(e); }

MultiPoly random_poly(int n, int max_deg, std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-3, 3), deg(0, max_deg);
  MultiPoly f(n);
  int d = deg(rng);
  for (const auto& m : monomials_of_degree(n, d)) {
    int c = coef(rng);
    if (c != 0) f.add_term(m, CycNumber(c));
  }
  return f;
}

// Random element of (Q_k)_d as a combination of basis vectors.
MultiPoly random_member(const GradedBasis& b, int d, std::mt19937& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  MultiPoly f(0);
  bool first = true;
  for (const auto& v : b.per_degree.at(d)) {
    MultiPoly t = v[0] * CycNumber(coef(rng));
    if (first) f = t;
    else f += t;
    first = false;
  }
  return f;
}

long binomial(long n, long k) {
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Exponents d with x^d in Q_k for the cyclic group of order n: d >= n k_i for d = i mod n.
bool cyclic_member(const std::vector<int>& k, int d) {
  int n = static_cast<int>(k.size());
  return d >= n * k[d % n];
}

}  // namespace

TEST_CASE("rank one membership examples") {
  ReflectionGroup g = builtin_group("cyclic:2");
  Multiplicity k = Multiplicity::parse(g, "1");
  CHECK(is_quasi_invariant(g, k, x_pow(1, 0, 2)).ok);
  CHECK(is_quasi_invariant(g, k, x_pow(1, 0, 3)).ok);
  Membership m = is_quasi_invariant(g, k, x_pow(1, 0, 1));
  CHECK_FALSE(m.ok);
  CHECK(m.index == 1);
  CHECK(m.valuation == 1);
  CHECK(m.required == 2);
  CHECK_FALSE(s_set_member(g, k, x_pow(1, 0, 1)).ok);
}

TEST_CASE("zero multiplicity admits every polynomial") {
  std::mt19937 rng(7);
  for (const char* name : {"cyclic:3", "dihedral:3:3", "dihedral:4:1", "symmetric:3"}) {
    ReflectionGroup g = builtin_group(name);
    Multiplicity k = Multiplicity::zero(g);
    for (int t = 0; t < 10; ++t) CHECK(is_quasi_invariant(g, k, random_poly(g.dim(), 5, rng)).ok);
    GradedBasis b = compute_basis(g, k, 6);
    for (int d = 0; d <= 6; ++d) CHECK(b.dim(d) == binomial(d + g.dim() - 1, g.dim() - 1));
  }
}

TEST_CASE("square of the discriminant is quasi-invariant") {
  ReflectionGroup g = builtin_group("dihedral:3:3");
  Multiplicity k = Multiplicity::parse(g, "1");
  MultiPoly d = g.delta(-1, 2, 0);
  CHECK(is_quasi_invariant(g, k, d * d).ok);
  CHECK(s_set_member(g, k, d * d).ok);
  CHECK_FALSE(is_quasi_invariant(g, k, MultiPoly::variable(2, 0)).ok);
}

TEST_CASE("normal expansion sets") {
  ReflectionGroup g = builtin_group("cyclic:2");
  ExpansionSets s = normal_expansion_sets(g, Multiplicity::parse(g, "2"), 0);
  CHECK(s.s_start == std::vector<long>{0, 5});
  CHECK(s.r_start == std::vector<long>{0, 5});
  for (long x : {0, 2, 4, 5, 7, 9}) CHECK(s.in_s(x));
  for (long x : {1, 3}) CHECK_FALSE(s.in_s(x));
  for (long x : {0, 2, 4, 5, 6, 7}) CHECK(s.in_r(x));
  for (long x : {1, 3}) CHECK_FALSE(s.in_r(x));
  // Brute force r + S in S over a window.
  for (long r = 0; r <= 20; ++r) {
    bool ok = true;
    for (long x = 0; x <= 40; ++x)
      if (s.in_s(x) && !s.in_s(x + r)) ok = false;
    CHECK(ok == s.in_r(r));
  }
  ExpansionSets z = normal_expansion_sets(g, Multiplicity::zero(g), 0);
  for (long x = 0; x < 6; ++x) {
    CHECK(z.in_s(x));
    CHECK(z.in_r(x));
  }
  Multiplicity ak = compute_ak(g, Multiplicity::parse(g, "2"));
  CHECK(ak.k[0][0] == 0);
  CHECK(ak.k[0][1] == 2);
  CHECK(compute_ak(g, Multiplicity::zero(g)).is_zero());
}

TEST_CASE("algebra of quasi-invariants acts on Q_k") {
  struct Case {
    const char* group;
    const char* k;
  };
  for (Case c : {Case{"cyclic:3", "0,1,1"}, Case{"cyclic:4", "0,2,1,0"}, Case{"dihedral:3:3", "1"},
                 Case{"dihedral:4:1", "1;0,1,2"}}) {
    ReflectionGroup g = builtin_group(c.group);
    Multiplicity k = Multiplicity::parse(g, c.k);
    Multiplicity ak = compute_ak(g, k);
    GradedBasis qa = compute_basis(g, ak, 8);
    GradedBasis qk = compute_basis(g, k, 8);
    for (int d1 = 0; d1 <= 8; ++d1)
      for (int d2 = 0; d1 + d2 <= 8; ++d2)
        for (const auto& f : qa.scalars(d1))
          for (const auto& h : qk.scalars(d2)) CHECK(is_quasi_invariant(g, k, f * h).ok);
  }
}

TEST_CASE("cyclic bases are the monomials of the exponent set") {
  ReflectionGroup g = builtin_group("cyclic:3");
  GradedBasis b = compute_basis(g, Multiplicity::parse(g, "0,1,1"), 8);
  std::vector<int> dims;
  for (int d = 0; d <= 8; ++d) dims.push_back(b.dim(d));
  CHECK(dims == std::vector<int>{1, 0, 0, 1, 1, 1, 1, 1, 1});
  for (int n : {2, 3, 4}) {
    ReflectionGroup c = builtin_group("cyclic:" + std::to_string(n));
    std::vector<int> k(n, 0);
    std::mt19937 rng(n);
    for (int t = 0; t < 4; ++t) {
      for (int i = 1; i < n; ++i) k[i] = static_cast<int>(rng() % 3);
      Multiplicity m = Multiplicity::zero(c);
      for (int i = 0; i < n; ++i) m.k[0][i] = k[i];
      GradedBasis q = compute_basis(c, m, 20);
      for (int d = 0; d <= 20; ++d) {
        if (cyclic_member(k, d)) {
          REQUIRE(q.dim(d) == 1);
          CHECK(q.scalars(d)[0] == x_pow(1, 0, d));
        } else {
          CHECK(q.dim(d) == 0);
        }
      }
    }
  }
}

TEST_CASE("product group dimensions") {
  ReflectionGroup g = builtin_group("dihedral:2:2");
  REQUIRE(g.num_orbits() == 2);
  GradedBasis b = compute_basis(g, Multiplicity::parse(g, "1;1"), 12);
  // (1 + t^3) / (1 - t^2) in each factor.
  std::vector<long> one(13, 0);
  for (int d = 0; d <= 12; ++d) one[d] = d == 1 ? 0 : 1;
  for (int d = 0; d <= 12; ++d) {
    long expect = 0;
    for (int a = 0; a <= d; ++a) expect += one[a] * one[d - a];
    CHECK(b.dim(d) == expect);
  }
}

TEST_CASE("basis elements are members and normalized") {
  ReflectionGroup g = builtin_group("dihedral:4:1");
  Multiplicity k = Multiplicity::parse(g, "1;1,0,2");
  GradedBasis b = compute_basis(g, k, 12);
  for (const auto& [d, elems] : b.per_degree) {
    for (const auto& v : elems) {
      CHECK(is_quasi_invariant(g, k, v[0]).ok);
      CHECK(v[0].terms().begin()->second.is_one());
    }
  }
  GradedBasis serial = compute_basis(g, k, 12, -1, false);
  for (int d = 0; d <= 12; ++d) CHECK(serial.per_degree[d] == b.per_degree[d]);
}

TEST_CASE("membership agrees with the exponent-set test") {
  std::mt19937 rng(11);
  struct Case {
    const char* group;
    const char* k;
  };
  for (Case c : {Case{"cyclic:2", "2"}, Case{"cyclic:3", "0,1,2"}, Case{"cyclic:4", "0,1,0,2"},
                 Case{"dihedral:3:3", "2"}, Case{"dihedral:4:1", "1;2,0,1"}, Case{"dihedral:3:1", "1;1,2"},
                 Case{"symmetric:3", "1"}}) {
    ReflectionGroup g = builtin_group(c.group);
    Multiplicity k = Multiplicity::parse(g, c.k);
    GradedBasis b = compute_basis(g, k, 8);
    for (int t = 0; t < 40; ++t) {
      MultiPoly f = random_poly(g.dim(), 8, rng);
      CHECK(is_quasi_invariant(g, k, f).ok == s_set_member(g, k, f).ok);
    }
    for (int d = 0; d <= 8; ++d) {
      if (b.dim(d) == 0) continue;
      MultiPoly f = random_member(b, d, rng);
      CHECK(s_set_member(g, k, f).ok);
      MultiPoly bad = f + random_poly(g.dim(), 8, rng);
      CHECK(is_quasi_invariant(g, k, bad).ok == s_set_member(g, k, bad).ok);
    }
  }
}

TEST_CASE("invariants, powers of delta and W-stability") {
  for (const char* name : {"dihedral:3:3", "dihedral:4:1", "cyclic:4"}) {
    ReflectionGroup g = builtin_group(name);
    Multiplicity k = Multiplicity::zero(g);
    for (auto& row : k.k)
      for (size_t i = 1; i < row.size(); ++i) row[i] = static_cast<long>(i % 3);
    for (const auto& f : basic_invariants(g)) CHECK(is_quasi_invariant(g, k, f).ok);
    int n_max = sandwich_exponent(g, k);
    MultiPoly dn = g.delta(-1, g.dim(), 0).pow(n_max);
    for (int i = 0; i < g.dim(); ++i) CHECK(is_quasi_invariant(g, k, dn * MultiPoly::variable(g.dim(), i)).ok);
    GradedBasis b = compute_basis(g, k, 7);
    for (const auto& [d, elems] : b.per_degree)
      for (const auto& v : elems)
        for (int w : g.generators()) CHECK(is_quasi_invariant(g, k, g.act(w, v[0])).ok);
  }
}

TEST_CASE("twisted quasi-invariants with poles") {
  ReflectionGroup g = builtin_group("cyclic:2");
  Multiplicity k = Multiplicity::parse(g, "1/2,1/2", "1");
  GradedBasis b = compute_basis(g, k, 6);
  CHECK(b.r == 0);
  CHECK(b.dim(0) == 0);
  for (int d = 1; d <= 6; ++d) CHECK(b.dim(d) == 1);
  Multiplicity neg = Multiplicity::parse(g, "-1/2,-1/2", "1");
  GradedBasis c = compute_basis(g, neg, 4);
  CHECK(c.r == 1);
  CHECK(c.min_deg() == -1);
  CHECK(c.dim(-1) == 1);
  for (int d = 0; d <= 4; ++d) CHECK(c.dim(d) == 1);
  auto forms = g.forms(1, 0);
  CHECK(is_quasi_invariant(g, neg, LocalizedPoly::monomial_in_forms(forms, {-1})).ok);
  CHECK_FALSE(is_quasi_invariant(g, neg, LocalizedPoly::monomial_in_forms(forms, {-2})).ok);
  Multiplicity bad = k;
  bad.a = {0};
  CHECK_THROWS_AS(is_quasi_invariant(g, bad, x_pow(1, 0, 1)), IncompatibleMultiplicity);
}

TEST_CASE("tau-valued quasi-invariants") {
  ReflectionGroup g = builtin_group("cyclic:3");
  Multiplicity k = Multiplicity::parse(g, "0,1,2");
  for (int j = 0; j < 3; ++j) {
    const WRep& tau = g.irreps()[g.irrep_index("sigma_" + std::to_string(j))];
    GradedBasis b = tau_quasi_invariants(g, k, tau, 10);
    int start = 3 * (j == 0 ? 0 : j);
    for (int d = 0; d <= 10; ++d) {
      CHECK(b.dim(d) == (d >= start ? 1 : 0));
      if (d >= start) CHECK(b.per_degree[d][0][0] == x_pow(1, 0, d));
    }
    CHECK(dunkl_stability(g, b, tau).ok);
  }
  ReflectionGroup d3 = builtin_group("dihedral:3:3");
  for (const auto& tau : d3.irreps()) {
    GradedBasis z = tau_quasi_invariants(d3, Multiplicity::zero(d3), tau, 4);
    for (int d = 0; d <= 4; ++d) CHECK(z.dim(d) == (d + 1) * tau.dim);
    Multiplicity k1 = Multiplicity::parse(d3, "1");
    GradedBasis b = tau_quasi_invariants(d3, k1, tau, 6);
    for (const auto& [deg, elems] : b.per_degree)
      for (const auto& v : elems) CHECK(is_tau_quasi_invariant(d3, k1, tau, v).ok);
    CHECK(dunkl_stability(d3, b, tau).ok);
    int r = sandwich_exponent(d3, k1);
    MultiPoly dr = d3.delta(-1, 2, 0).pow(r);
    for (int c = 0; c < tau.dim; ++c) {
      std::vector<MultiPoly> v(tau.dim, MultiPoly(2));
      v[c] = dr * MultiPoly::variable(2, 1);
      CHECK(is_tau_quasi_invariant(d3, k1, tau, v).ok);
    }
  }
}

TEST_CASE("Dunkl and Calogero-Moser stability") {
  ReflectionGroup g = builtin_group("cyclic:2");
  Multiplicity k = Multiplicity::parse(g, "1");
  GradedBasis b = compute_basis(g, k, 8);
  // T does not preserve scalar quasi-invariants: T(x^2) = 2x.
  DunklAction t(g, k);
  CHECK(t.apply_strict(unit_vector(1, 0), x_pow(1, 0, 2)) == x_pow(1, 0, 1) * CycNumber(2));
  CHECK(cm_stability(g, b, {x_pow(1, 0, 2)}).ok);
  DiffOp l = calogero_moser(g, k, x_pow(1, 0, 2));
  CHECK(l.apply(x_pow(1, 0, 2)).numerator() == MultiPoly::constant(1, CycNumber(-2)));
  CHECK(l.apply(x_pow(1, 0, 3)).is_zero());
  for (const char* name : {"dihedral:3:3", "dihedral:4:1", "cyclic:3"}) {
    ReflectionGroup h = builtin_group(name);
    Multiplicity m = Multiplicity::zero(h);
    for (auto& row : m.k) row.back() = 1;
    GradedBasis q = compute_basis(h, m, 7);
    auto ps = basic_dual_invariants(h);
    CHECK(cm_stability(h, q, {ps[0]}).ok);
  }
  GradedBasis neg = compute_basis(g, Multiplicity::parse(g, "-1/2,-1/2", "1"), 5);
  CHECK(cm_stability(g, neg, {x_pow(1, 0, 2)}).ok);
}

TEST_CASE("Molien series and fundamental degrees") {
  CHECK(fundamental_degrees(builtin_group("cyclic:3")) == std::vector<int>{3});
  CHECK(fundamental_degrees(builtin_group("dihedral:3:3")) == std::vector<int>{2, 3});
  CHECK(fundamental_degrees(builtin_group("dihedral:4:1")) == std::vector<int>{4, 8});
  CHECK(fundamental_degrees(builtin_group("dihedral:4:4")) == std::vector<int>{2, 4});
  CHECK(fundamental_degrees(builtin_group("dihedral:2:2")) == std::vector<int>{2, 2});
  CHECK(fundamental_degrees(builtin_group("symmetric:3")) == std::vector<int>{1, 2, 3});
  CHECK(fundamental_degrees(builtin_group("G:2:1:3")) == std::vector<int>{2, 4, 6});
  for (int n : {2, 3, 4}) {
    ReflectionGroup g = builtin_group("cyclic:" + std::to_string(n));
    for (int j = 0; j < n; ++j) {
      const WRep& tau = g.irreps()[g.irrep_index("sigma_" + std::to_string(j))];
      TPoly expect(j + 1, CycNumber(0));
      expect[j] = CycNumber(1);
      CHECK(molien_numerator(g, tau.character) == expect);
    }
  }
  // Fake degrees of a Coxeter group sum to the regular representation.
  ReflectionGroup s3 = builtin_group("dihedral:3:3");
  TPoly total;
  for (const auto& tau : s3.irreps()) {
    TPoly n = molien_numerator(s3, tau.character);
    for (auto& x : n) x *= CycNumber(tau.dim);
    total = tpoly_add(total, n);
  }
  CHECK(tpoly_integer_coeffs(total) == std::vector<long>{1, 2, 2, 1});
}

TEST_CASE("Poincare series by membership and by formula") {
  ReflectionGroup g = builtin_group("cyclic:3");
  PoincareData f = poincare_by_formula(g, Multiplicity::parse(g, "0,1,1"), 12);
  CHECK(f.numerator == std::vector<long>{1, 0, 0, 0, 1, 1});
  CHECK(f.denominator_degrees == std::vector<int>{3});
  CHECK(f.closed_form_string() == "(1 + t^4 + t^5)/(1 - t^3)");
  CHECK(poincare_by_membership(g, Multiplicity::parse(g, "0,1,1"), 12).series == f.series);
  ReflectionGroup s = builtin_group("symmetric:3");
  PoincareData z = poincare_by_formula(s, Multiplicity::zero(s), 6);
  CHECK(z.series == std::vector<long>{1, 3, 6, 10, 15, 21, 28});
  struct Case {
    const char* group;
    const char* k;
  };
  for (Case c : {Case{"dihedral:3:3", "1"}, Case{"dihedral:4:1", "1;0,1,2"}, Case{"dihedral:4:4", "1;2"},
                 Case{"dihedral:3:1", "2;1,0"}, Case{"symmetric:3", "1"}, Case{"cyclic:4", "0,2,0,1"}}) {
    ReflectionGroup h = builtin_group(c.group);
    Multiplicity k = Multiplicity::parse(h, c.k);
    CHECK(poincare_by_formula(h, k, 12).series == poincare_by_membership(h, k, 12).series);
  }
}

TEST_CASE("free generators") {
  ReflectionGroup z2 = builtin_group("cyclic:2");
  FreeGenSet a = free_generators(z2, Multiplicity::parse(z2, "1"));
  CHECK(a.degrees == std::vector<int>{0, 3});
  for (int n : {3, 4}) {
    ReflectionGroup g = builtin_group("cyclic:" + std::to_string(n));
    Multiplicity k = Multiplicity::zero(g);
    for (int i = 1; i < n; ++i) k.k[0][i] = i % 3;
    FreeGenSet f = free_generators(g, k);
    std::vector<int> expect;
    for (int i = 0; i < n; ++i) expect.push_back(n * (i % 3) + i);
    std::sort(expect.begin(), expect.end());
    CHECK(f.degrees == expect);
    for (size_t j = 0; j < f.generators.size(); ++j) CHECK(f.generators[j] == x_pow(1, 0, f.degrees[j]));
  }
  ReflectionGroup s3 = builtin_group("dihedral:3:3");
  FreeGenSet c = free_generators(s3, Multiplicity::zero(s3));
  CHECK(c.degrees == std::vector<int>{0, 1, 1, 2, 2, 3});
  FreeGenSet d = free_generators(s3, Multiplicity::parse(s3, "1"));
  CHECK(d.generators.size() == 6);
  CHECK(d.certified_to >= d.degrees.back());
}

TEST_CASE("KZ twists") {
  for (const char* name : {"cyclic:3", "dihedral:3:3", "dihedral:4:1", "dihedral:4:4"}) {
    ReflectionGroup g = builtin_group(name);
    TwistPermutation id = kz_twist(g, Multiplicity::zero(g));
    for (size_t t = 0; t < id.mapping.size(); ++t) CHECK(id.mapping[t] == static_cast<int>(t));
  }
  ReflectionGroup c3 = builtin_group("cyclic:3");
  TwistPermutation cyc = kz_twist(c3, Multiplicity::parse(c3, "0,1,2"));
  for (size_t t = 0; t < cyc.mapping.size(); ++t) CHECK(cyc.mapping[t] == static_cast<int>(t));
  ReflectionGroup g = builtin_group("dihedral:4:1");
  Multiplicity k1 = Multiplicity::parse(g, "1;0,1,0");
  Multiplicity k2 = Multiplicity::parse(g, "0;1,0,1");
  TwistPermutation a = kz_twist(g, k1);
  TwistPermutation b = kz_twist(g, k2);
  TwistPermutation ab = kz_twist(g, k1 + k2);
  CHECK(compose_permutations(a.mapping, b.mapping) == ab.mapping);
  for (const auto* tw : {&a, &b, &ab}) {
    for (size_t tp = 0; tp < tw->mapping.size(); ++tp) {
      const WRep& src = g.irreps()[tp];
      const WRep& dst = g.irreps()[tw->mapping[tp]];
      CHECK(src.dim == dst.dim);
      CHECK(c_tau(g, tw->k, src) == c_tau(g, tw->k, dst));
    }
  }
}

TEST_CASE("G-orbit checks") {
  ReflectionGroup z2 = builtin_group("cyclic:2");
  CHECK(g_orbit_checks(z2, Multiplicity::parse(z2, "1/2,1/2", "1"), 8).ok);
  CHECK(g_orbit_checks(z2, Multiplicity::parse(z2, "-1/2,-1/2", "1"), 8).ok);
  ReflectionGroup c3 = builtin_group("cyclic:3");
  CHECK(g_orbit_checks(c3, Multiplicity::parse(c3, "1/3,4/3,-2/3", "1"), 10).ok);
  ReflectionGroup d3 = builtin_group("dihedral:3:3");
  CHECK(g_orbit_checks(d3, Multiplicity::parse(d3, "1"), 10).ok);
  ReflectionGroup d4 = builtin_group("dihedral:4:4");
  CHECK(g_orbit_checks(d4, Multiplicity::parse(d4, "1/2,1/2;3/2,-1/2", "1,1"), 8).ok);
}

TEST_CASE("fake degree symmetry") {
  ReflectionGroup c3 = builtin_group("cyclic:3");
  for (int a : {0, 1, 2}) CHECK(fake_degree_symmetry(c3, {a}).ok);
  ReflectionGroup d4 = builtin_group("dihedral:4:4");
  CHECK(fake_degree_symmetry(d4, {1, 1}).ok);
  CHECK(fake_degree_symmetry(d4, {1, 0}).ok);
}

TEST_CASE("symmetrization of the regular representation") {
  ReflectionGroup c3 = builtin_group("cyclic:3");
  CHECK(symmetrization_check(c3, Multiplicity::parse(c3, "0,1,1"), 6).ok);
  ReflectionGroup d3 = builtin_group("dihedral:3:3");
  CHECK(symmetrization_check(d3, Multiplicity::parse(d3, "1"), 5).ok);
}
