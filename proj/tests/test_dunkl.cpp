#include <doctest.h>

#include <random>

#include "qinv/dunkl.hpp"

using namespace qinv;

namespace {

Multiplicity random_k(const ReflectionGroup& g, std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
  Multiplicity k = Multiplicity::zero(g);
  for (auto& row : k.k)
    for (size_t i = 1; i < row.size(); ++i) {
      row[i] = Rational(num(rng), den(rng));
      row[i].canonicalize();
    }
  return k;
}

MultiPoly x_var(int n, int i) { return MultiPoly::variable(n, i); }

}  // namespace

TEST_CASE("rank one Dunkl operator values") {
  ReflectionGroup g = builtin_group("cyclic:2");
  Multiplicity k = Multiplicity::parse(g, "1");
  DunklAction t(g, k);
  auto e = unit_vector(1, 0);
  MultiPoly x = x_var(1, 0);
  CHECK(t.apply_strict(e, x) == MultiPoly::constant(1, CycNumber(-1)));
  CHECK(t.apply_strict(e, x * x) == x * CycNumber(2));
  CHECK(t.apply_strict(e, MultiPoly::constant(1, CycNumber(1))).is_zero());
  DiffReflOp op = dunkl_operator(g, k, e);
  CHECK(op.apply_strict(x * x * x) == t.apply_strict(e, x * x * x));
  CHECK((op * op).apply_strict(x * x * x) == t.apply_strict(e, t.apply_strict(e, x * x * x)));
  // T = d - k/x + (k/x) s
  auto forms = g.forms(1, 0);
  LocalizedPoly inv_x = LocalizedPoly::monomial_in_forms(forms, {-1});
  DiffReflOp expect = DiffReflOp::partial(g, 0) - DiffReflOp::multiplication(g, inv_x) +
                      DiffReflOp::multiplication(g, inv_x) * DiffReflOp::group_element(g, 1);
  CHECK(op == expect);
}

TEST_CASE("identity coefficient for cyclic(3)") {
  ReflectionGroup g = builtin_group("cyclic:3");
  Multiplicity k = Multiplicity::parse(g, "0,1,1");
  DiffReflOp op = dunkl_operator(g, k, unit_vector(1, 0));
  auto forms = g.forms(1, 0);
  DiffOp id_part = op.part(0);
  Monomial none;
  CHECK(id_part.terms().at(none) == LocalizedPoly::monomial_in_forms(forms, {-1}) * CycNumber(-2));
}

TEST_CASE("normal ordering relations") {
  ReflectionGroup g = builtin_group("cyclic:2");
  auto forms = g.forms(1, 0);
  DiffReflOp d = DiffReflOp::partial(g, 0);
  DiffReflOp x = DiffReflOp::multiplication(g, LocalizedPoly(forms, x_var(1, 0)));
  CHECK(d * x - x * d == DiffReflOp::group_element(g, 0));
  DiffReflOp s = DiffReflOp::group_element(g, 1);
  CHECK(s * x == x * s * CycNumber(-1));
  CHECK(s * d == d * s * CycNumber(-1));
}

TEST_CASE("Dunkl axioms on small groups") {
  std::mt19937 rng(17);
  for (std::string spec : {"cyclic:3", "dihedral:3:3", "dihedral:2:1", "symmetric:3"}) {
    CAPTURE(spec);
    ReflectionGroup g = builtin_group(spec);
    Multiplicity k = random_k(g, rng);
    int n = g.dim();
    std::vector<DiffReflOp> t;
    for (int j = 0; j < n; ++j) t.push_back(dunkl_operator(g, k, unit_vector(n, j)));
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) CHECK(t[a] * t[b] == t[b] * t[a]);
    for (int w : g.generators()) {
      for (int j = 0; j < n; ++j) {
        std::vector<CycNumber> wxi(n);
        for (int i = 0; i < n; ++i) wxi[i] = g.element(w)[i][j];
        CHECK(t[j].conjugate(w) == dunkl_operator(g, k, wxi));
      }
    }
    DiffReflOp e = euler_operator(g, k);
    DiffReflOp e0 = euler_operator(g, Multiplicity::zero(g));
    CHECK(e == e0 - group_algebra_element(g, central_element(g, k)));
  }
}

TEST_CASE("Res and the spherical fast path agree") {
  std::mt19937 rng(4);
  for (std::string spec : {"cyclic:2", "cyclic:3", "dihedral:3:3", "dihedral:2:1"}) {
    CAPTURE(spec);
    ReflectionGroup g = builtin_group(spec);
    Multiplicity k = random_k(g, rng);
    int n = g.dim();
    MultiPoly p(n);
    if (spec == "cyclic:3") {
      p = x_var(1, 0).pow(3);
    } else if (spec == "dihedral:3:3") {
      p = x_var(2, 0) * x_var(2, 1);
    } else {
      for (int j = 0; j < n; ++j) p += x_var(n, j).pow(2);
    }
    if (spec == "cyclic:2" || spec == "dihedral:2:1" || spec == "dihedral:3:3") REQUIRE(is_dual_invariant(g, p));
    DiffOp slow = dunkl_polynomial(g, k, p).res();
    DiffOp fast = calogero_moser(g, k, p);
    CHECK(slow == fast);
  }
  ReflectionGroup g = builtin_group("cyclic:2");
  Multiplicity k = Multiplicity::parse(g, "3/7");
  auto forms = g.forms(1, 0);
  DiffOp l = calogero_moser(g, k, x_var(1, 0).pow(2));
  Monomial d1, d2;
  d1.e[0] = 1;
  d2.e[0] = 2;
  DiffOp expect = DiffOp::partial(forms, 0) * DiffOp::partial(forms, 0) -
                  DiffOp::multiplication(LocalizedPoly::monomial_in_forms(forms, {-1}) * CycNumber(Rational(6, 7))) *
                      DiffOp::partial(forms, 0);
  CHECK(l == expect);
  CHECK_THROWS_AS(calogero_moser(g, k, x_var(1, 0)), NotInvariant);
}

TEST_CASE("central element and c_tau") {
  ReflectionGroup c4 = builtin_group("cyclic:4");
  Multiplicity k = Multiplicity::parse(c4, "1,2,1/3");
  for (int j = 0; j < 4; ++j) {
    CHECK(c_tau(c4, k, c4.irreps()[j]) == CycNumber(k.k[0][j] * 4));
  }
  ReflectionGroup s3 = builtin_group("dihedral:3:3");
  Multiplicity ks = Multiplicity::parse(s3, "2/5");
  CHECK(c_tau(s3, ks, s3.irreps()[s3.irrep_index("triv")]) == CycNumber(0));
  CHECK(c_tau(s3, ks, s3.irreps()[s3.irrep_index("sign")]) == CycNumber(Rational(12, 5)));
  CHECK(c_tau(s3, ks, s3.irreps()[s3.irrep_index("rho_1")]) == CycNumber(Rational(6, 5)));
  auto z = central_element(s3, ks);
  for (int w = 0; w < s3.order(); ++w) {
    for (int v = 0; v < s3.order(); ++v) CHECK(z[s3.mult(s3.mult(w, v), s3.inv(w))] == z[v]);
  }
}

TEST_CASE("pairing values") {
  ReflectionGroup g = builtin_group("cyclic:2");
  Multiplicity k = Multiplicity::parse(g, "2");
  MultiPoly one = MultiPoly::constant(1, CycNumber(1)), x = x_var(1, 0);
  CHECK(pairing(g, k, one, one) == CycNumber(1));
  CHECK(pairing(g, k, x, x) == CycNumber(-3));
  CHECK(pairing(g, k, x, x * x).is_zero());
}

TEST_CASE("twist automorphisms") {
  std::mt19937 rng(23);
  for (std::string spec : {"cyclic:2", "cyclic:3", "dihedral:3:1"}) {
    CAPTURE(spec);
    ReflectionGroup g = builtin_group(spec);
    Multiplicity k = random_k(g, rng);
    for (int c = 0; c < g.num_orbits(); ++c) {
      for (int j = 0; j < g.dim(); ++j) {
        DiffReflOp t = dunkl_operator(g, k, unit_vector(g.dim(), j));
        DiffReflOp conj = conjugate_by_delta(t, c, 1);
        CHECK(conj == dunkl_operator(g, delta_shift(g, k, c), unit_vector(g.dim(), j)));
        std::vector<CycNumber> chi;
        for (int w = 0; w < g.order(); ++w) chi.push_back(g.zeta_pow(g.det_c_exp(w, c)));
        CHECK(conj == twist_by_one_form(twist_by_character(t, chi), c, Rational(-1)));
        CHECK(twist_by_one_form(t, c, Rational(0)) == t);
      }
    }
  }
}

TEST_CASE("G-orbit invariance of the Calogero-Moser operator") {
  ReflectionGroup g = builtin_group("cyclic:2");
  Multiplicity k = Multiplicity::parse(g, "0,1/2");
  Multiplicity k2 = g_transform(g, k, 0);
  CHECK(k2.k[0] == std::vector<Rational>{Rational(1), Rational(-1, 2)});
  MultiPoly p = x_var(1, 0).pow(2);
  CHECK(calogero_moser(g, k, p) == calogero_moser(g, k2, p));
  CHECK(g_transform(g, k2, 0).k == k.k);
  Multiplicity t = Multiplicity::parse(g, "1/2,-1/2", "1");
  Multiplicity t2 = g_transform(g, t, 0);
  CHECK(t2.a == std::vector<int>{0});
  CHECK_NOTHROW(t2.validate(g));
  CHECK(calogero_moser(g, t, p) == calogero_moser(g, t2, p));
}
