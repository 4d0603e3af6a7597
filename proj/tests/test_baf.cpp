#include <doctest.h>

#include "qinv/baf.hpp"

using namespace qinv;

namespace {

MultiPoly lx_power(int j) {
  Monomial m;
  m.e[0] = static_cast<int16_t>(j);
  m.e[1] = static_cast<int16_t>(j);
  return MultiPoly::term(2, m, CycNumber(1));
}

Rational factorial(int n) {
  Rational r(1);
  for (int i = 2; i <= n; ++i) r *= Rational(i);
  return r;
}

// Reverse Bessel polynomial in z = lambda x: sum_j (-1)^{k-j} (2k-j)! / (j! (k-j)! 2^{k-j}) z^j.
MultiPoly bessel_prefactor(int k) {
  MultiPoly out(2);
  for (int j = 0; j <= k; ++j) {
    Rational c = factorial(2 * k - j) / (factorial(j) * factorial(k - j));
    for (int t = 0; t < k - j; ++t) c /= Rational(2);
    if ((k - j) % 2) c = -c;
    out += lx_power(j) * CycNumber(c);
  }
  return out;
}

BafData perturbed(const BafData& b, const MultiPoly& extra) {
  BafData p = b;
  p.psi.prefactor = LocalizedPoly(b.psi.prefactor.forms(), b.prefactor() + extra);
  return p;
}

}  // namespace

TEST_CASE("exponential conjugation rule") {
  ReflectionGroup g = builtin_group("cyclic:2");
  auto f1 = g.forms(1, 0);
  ExpPolynomial e = exp_kernel(g);
  MultiPoly x = MultiPoly::variable(2, 0), l = MultiPoly::variable(2, 1);
  CHECK(apply_diffop_to_exp(DiffOp::partial(f1, 0), e).prefactor.numerator() == l);
  DiffOp euler = DiffOp::multiplication(LocalizedPoly(f1, MultiPoly::variable(1, 0))) * DiffOp::partial(f1, 0) -
                 DiffOp::identity(f1);
  CHECK(apply_diffop_to_exp(euler, e).prefactor.numerator() == x * l - MultiPoly::constant(2, CycNumber(1)));
  ReflectionGroup d = builtin_group("dihedral:3:3");
  MultiPoly p = MultiPoly::variable(2, 0).pow(3) + MultiPoly::variable(2, 1) * CycNumber(Rational(2, 5));
  ExpPolynomial r = apply_diffop_to_exp(DiffOp::constant_coefficient(d.forms(2, 0), p), exp_kernel(d));
  CHECK(r.prefactor.numerator() == embed_lambda(p, 2));
}

TEST_CASE("zero multiplicity gives the bare exponential") {
  for (const char* spec : {"cyclic:3", "dihedral:4:4"}) {
    ReflectionGroup g = builtin_group(spec);
    BafData b = construct_baf(g, Multiplicity::zero(g));
    CHECK(b.prefactor() == MultiPoly::constant(2 * g.dim(), CycNumber(1)));
    PhiReport ph = phi_checks(g, b, 3);
    CHECK(ph.checks.ok);
    CHECK(ph.at_origin == CycNumber(g.order()));
  }
}

TEST_CASE("rank one prefactors are reverse Bessel polynomials") {
  ReflectionGroup g = builtin_group("cyclic:2");
  for (int k = 1; k <= 4; ++k) {
    BafData b = construct_baf(g, Multiplicity::parse(g, std::to_string(k)));
    CHECK(b.prefactor() == bessel_prefactor(k));
    CHECK(b.leading_term == lx_power(k));
    CHECK(b.top_degree == k);
  }
  BafData b1 = construct_baf(g, Multiplicity::parse(g, "1"));
  CHECK(b1.normalization == CycNumber(1));
  CHECK(b1.prefactor().to_string(joint_var_names(1)) == "x1*l1 + -1");
}

TEST_CASE("leading term and bidegree") {
  struct Case {
    const char* group;
    const char* k;
  };
  for (const Case& c : {Case{"cyclic:3", "0,1,1"}, Case{"cyclic:4", "0,0,1,0"}, Case{"dihedral:2:2", "1;1"},
                        Case{"dihedral:3:3", "1"}, Case{"dihedral:4:1", "1;0,1,0"}}) {
    ReflectionGroup g = builtin_group(c.group);
    Multiplicity k = Multiplicity::parse(g, c.k);
    BafData b = construct_baf(g, k);
    int n = g.dim();
    CHECK(is_bidegree_zero(b.prefactor(), n));
    CHECK(b.prefactor().degree() == 2 * b.top_degree);
    CHECK(b.prefactor().homogeneous_component(2 * b.top_degree) == b.leading_term);
    MultiPoly p0 = MultiPoly::constant(2 * n, CycNumber(1));
    for (int h = 0; h < static_cast<int>(g.hyperplanes().size()); ++h) {
      const Hyperplane& hp = g.hyperplanes()[h];
      Rational s(0);
      for (const auto& q : k.k[hp.orbit]) s += q;
      MultiPoly f = MultiPoly::linear_form(2 * n, hp.v, n) * MultiPoly::linear_form(2 * n, hp.alpha, 0);
      p0 = p0 * f.pow(static_cast<int>(s.get_num().get_si()));
    }
    CHECK(b.leading_term == p0);
  }
  ReflectionGroup c3 = builtin_group("cyclic:3");
  CHECK(construct_baf(c3, Multiplicity::parse(c3, "0,1,1")).leading_term == lx_power(2));
}

TEST_CASE("construction rejects non-integral or negative k") {
  ReflectionGroup g = builtin_group("cyclic:2");
  CHECK_THROWS_AS(construct_baf(g, Multiplicity::parse(g, "1/2", "1")), std::invalid_argument);
  CHECK_THROWS_AS(construct_baf(g, Multiplicity::parse(g, "-1")), std::invalid_argument);
}

TEST_CASE("eigenfunction of the Calogero-Moser operators") {
  for (const char* spec : {"cyclic:2;3", "cyclic:3;0,1,1", "dihedral:2:2;1;1", "dihedral:3:3;1", "cyclic:4;0,1,0,1"}) {
    std::string s(spec);
    auto cut = s.find(';');
    ReflectionGroup g = builtin_group(s.substr(0, cut));
    BafData b = construct_baf(g, Multiplicity::parse(g, s.substr(cut + 1)));
    auto ps = basic_dual_invariants(g);
    for (const auto& p : ps) CHECK(eigen_check(g, b, p));
    if (ps.size() >= 2) CHECK(eigen_product_check(g, b, ps[0], ps[1]));
    CHECK(eigen_product_check(g, b, ps[0], ps[0]));
    CHECK_FALSE(eigen_check(g, perturbed(b, lx_power(0).remap(2 * g.dim(), {0, 1})), ps[0]));
  }
}

TEST_CASE("rank one eigen relation by hand") {
  ReflectionGroup g = builtin_group("cyclic:2");
  for (int k = 1; k <= 3; ++k) {
    MultiPoly p = bessel_prefactor(k);
    MultiPoly x = MultiPoly::variable(2, 0), l = MultiPoly::variable(2, 1);
    // x (P'' + 2 l P' + l^2 P) - 2k (P' + l P) = l^2 x P
    MultiPoly d1 = p.derivative(0), d2 = d1.derivative(0);
    MultiPoly lhs = x * (d2 + l * d1 * CycNumber(2)) - (d1 + l * p) * CycNumber(2 * k);
    CHECK(lhs.is_zero());
  }
}

TEST_CASE("membership and exchange symmetry") {
  ReflectionGroup g = builtin_group("cyclic:2");
  BafData b = construct_baf(g, Multiplicity::parse(g, "1"));
  CheckReport r = membership_checks(g, b, 8);
  CHECK(r.ok);
  CHECK(taylor_component(b, 3, true) == lx_power(3) * CycNumber(Rational(1, 3)));
  CHECK_FALSE(membership_checks(g, perturbed(b, lx_power(0)), 8).ok);
  for (const char* spec : {"cyclic:3;0,1,0", "dihedral:2:2;1;1", "dihedral:4:4;1;1"}) {
    std::string s(spec);
    auto cut = s.find(';');
    ReflectionGroup h = builtin_group(s.substr(0, cut));
    Multiplicity k = Multiplicity::parse(h, s.substr(cut + 1));
    BafData bh = construct_baf(h, k);
    CHECK(membership_checks(h, bh, default_truncation(h, k)).ok);
  }
  ReflectionGroup d = builtin_group("dihedral:3:3");
  BafData bd = construct_baf(d, Multiplicity::parse(d, "1"));
  MultiPoly skew = MultiPoly::variable(4, 0) * MultiPoly::variable(4, 3);
  CheckReport bad = membership_checks(d, perturbed(bd, skew), 2);
  CHECK_FALSE(bad.ok);
}

TEST_CASE("bispectral symmetry") {
  for (const char* spec : {"cyclic:2;2", "cyclic:3;0,0,1", "dihedral:2:2;1;1", "dihedral:3:3;1"}) {
    std::string s(spec);
    auto cut = s.find(';');
    ReflectionGroup g = builtin_group(s.substr(0, cut));
    BafData b = construct_baf(g, Multiplicity::parse(g, s.substr(cut + 1)));
    CHECK(bispectral_check(g, b));
  }
}

TEST_CASE("symmetrized function") {
  ReflectionGroup g = builtin_group("cyclic:2");
  BafData b = construct_baf(g, Multiplicity::parse(g, "1"));
  PhiReport ph = phi_checks(g, b, 6);
  CHECK(ph.checks.ok);
  CHECK(ph.at_origin == CycNumber(-2));
  // (z-1)e^z + (-z-1)e^{-z} has z^i coefficient (1 + (-1)^i)(1/(i-1)! - 1/i!) for i >= 1.
  for (int i = 1; i <= 6; ++i) {
    Rational c = i % 2 ? Rational(0) : Rational(2) * (Rational(1) / factorial(i - 1) - Rational(1) / factorial(i));
    CHECK(ph.components[i] == lx_power(i) * CycNumber(c));
  }
  for (const char* spec : {"cyclic:3;0,1,1", "dihedral:2:2;1;1"}) {
    std::string s(spec);
    auto cut = s.find(';');
    ReflectionGroup h = builtin_group(s.substr(0, cut));
    BafData bh = construct_baf(h, Multiplicity::parse(h, s.substr(cut + 1)));
    PhiReport p = phi_checks(h, bh, 5);
    CHECK(p.checks.ok);
    CHECK(p.at_origin == bh.prefactor().constant_term() * CycNumber(h.order()));
    CHECK_FALSE(p.at_origin.is_zero());
  }
}

TEST_CASE("pairing blocks") {
  ReflectionGroup g = builtin_group("cyclic:2");
  for (int k = 0; k <= 3; ++k) {
    Multiplicity mk = Multiplicity::parse(g, std::to_string(k));
    for (int m = 0; m <= 6; ++m) {
      Rational expected(1);
      for (int j = 1; j <= m; ++j) expected *= Rational(j % 2 ? j - 2 * k : j);
      CHECK(pairing_block(g, mk, m)[0][0] == CycNumber(expected));
    }
  }
  for (const char* spec : {"cyclic:3;0,1,1", "dihedral:2:2;1;1", "dihedral:3:3;1"}) {
    std::string s(spec);
    auto cut = s.find(';');
    ReflectionGroup h = builtin_group(s.substr(0, cut));
    CHECK(pairing_checks(h, Multiplicity::parse(h, s.substr(cut + 1)), 6).ok);
  }
  Multiplicity half = Multiplicity::zero(g);
  half.k[0][1] = Rational(1, 2);
  CHECK_FALSE(pairing_checks(g, half, 2).ok);
}

TEST_CASE("uniqueness from lambda-side quasi-invariance") {
  for (const char* spec : {"cyclic:2;3", "cyclic:3;0,1,1", "dihedral:2:2;1;1", "dihedral:4:4;1;1"}) {
    std::string s(spec);
    auto cut = s.find(';');
    ReflectionGroup g = builtin_group(s.substr(0, cut));
    Multiplicity k = Multiplicity::parse(g, s.substr(cut + 1));
    BafData b = construct_baf(g, k);
    UniquenessReport r = uniqueness_check(g, b, default_truncation(g, k));
    CHECK(r.ok);
    CHECK(r.rank == r.unknowns);
    UniquenessReport bad = uniqueness_check(g, perturbed(b, lx_power(0).remap(2 * g.dim(), {0, 1})), r.truncation);
    CHECK_FALSE(bad.ok);
  }
}
