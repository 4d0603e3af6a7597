#include <doctest.h>

#include <algorithm>
#include <random>

#include "qinv/shiftops.hpp"

using namespace qinv;

namespace {

MultiPoly xi_pow(int n, int i, int e) { return MultiPoly::variable(n, i).pow(e); }

// x d - c on the line.
DiffOp euler_minus(const ReflectionGroup& g, long c) {
  auto forms = g.forms(1, 0);
  DiffOp d = DiffOp::partial(forms, 0).left_multiply(LocalizedPoly(forms, MultiPoly::variable(1, 0)));
  return d - DiffOp::identity(forms) * CycNumber(c);
}

// d^2 - 2k x^{-1} d on the line.
DiffOp rank_one_cm(const ReflectionGroup& g, long k) {
  auto forms = g.forms(1, 0);
  DiffOp d2 = DiffOp::constant_coefficient(forms, xi_pow(1, 0, 2));
  DiffOp d1 = DiffOp::partial(forms, 0).left_multiply(LocalizedPoly::monomial_in_forms(forms, {-1}));
  return d2 - d1 * CycNumber(2 * k);
}

Multiplicity random_rational_k(const ReflectionGroup& g, std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-6, 6), den(1, 5);
  Multiplicity k = Multiplicity::zero(g);
  for (auto& row : k.k)
    for (size_t i = 1; i < row.size(); ++i) {
      row[i] = Rational(num(rng), den(rng));
      row[i].canonicalize();
    }
  return k;
}

std::vector<MultiPoly> lowest_invariants(const ReflectionGroup& g, int count) {
  auto inv = basic_dual_invariants(g);
  std::sort(inv.begin(), inv.end(), [](const MultiPoly& a, const MultiPoly& b) { return a.degree() < b.degree(); });
  if (static_cast<int>(inv.size()) > count) inv.resize(count);
  return inv;
}

}  // namespace

TEST_CASE("rank one shift operators in closed form") {
  ReflectionGroup g = builtin_group("cyclic:2");
  for (int k = 0; k <= 3; ++k) {
    Multiplicity mk = Multiplicity::parse(g, std::to_string(k));
    ShiftOp s = elementary_shift(g, mk, 0, 1, ShiftDirection::raising, true);
    CHECK(s.op == euler_minus(g, 2 * k + 1));
    CHECK(s.target == Multiplicity::parse(g, std::to_string(k + 1)));
    ShiftOp lo = elementary_shift(g, mk, 0, 1, ShiftDirection::lowering, true);
    auto forms = g.forms(1, 0);
    DiffOp expected = DiffOp::partial(forms, 0).left_multiply(LocalizedPoly::monomial_in_forms(forms, {-1}));
    CHECK(lo.op == expected);
  }
}

TEST_CASE("rank one intertwining by hand") {
  ReflectionGroup g = builtin_group("cyclic:2");
  for (int k = 0; k <= 2; ++k) {
    DiffOp s = euler_minus(g, 2 * k + 1);
    CHECK(rank_one_cm(g, k + 1) * s == s * rank_one_cm(g, k));
    CHECK(calogero_moser(g, Multiplicity::parse(g, std::to_string(k)), xi_pow(1, 0, 2)) == rank_one_cm(g, k));
    ShiftOp so = elementary_shift(g, Multiplicity::parse(g, std::to_string(k)), 0, 1);
    CHECK(intertwine_check(g, so, xi_pow(1, 0, 2)).ok);
    CHECK(intertwine_check(g, so, MultiPoly::constant(1, CycNumber(1))).ok);
    ShiftOp lo = elementary_shift(g, Multiplicity::parse(g, std::to_string(k)), 0, 1, ShiftDirection::lowering);
    CHECK(intertwine_check(g, lo, xi_pow(1, 0, 2)).ok);
  }
}

TEST_CASE("wrong target is detected") {
  ReflectionGroup g = builtin_group("cyclic:2");
  ShiftOp s = elementary_shift(g, Multiplicity::parse(g, "1"), 0, 1);
  s.target = Multiplicity::parse(g, "3");
  IntertwineResult r = intertwine_check(g, s, xi_pow(1, 0, 2));
  CHECK_FALSE(r.ok);
  CHECK_FALSE(r.difference.is_zero());
}

TEST_CASE("shift index out of range") {
  ReflectionGroup g = builtin_group("cyclic:3");
  Multiplicity k = Multiplicity::zero(g);
  CHECK_THROWS_AS(elementary_shift(g, k, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(elementary_shift(g, k, 0, 3), std::invalid_argument);
  CHECK_THROWS_AS(elementary_shift(g, k, 1, 1), std::invalid_argument);
}

TEST_CASE("principal symbols and the group algebra route") {
  for (const char* spec : {"cyclic:3", "cyclic:4", "dihedral:3:3", "dihedral:4:1"}) {
    ReflectionGroup g = builtin_group(spec);
    bool verify = g.order() <= 6;
    std::mt19937 rng(7);
    Multiplicity k = random_rational_k(g, rng);
    for (int c = 0; c < g.num_orbits(); ++c)
      for (int a = 1; a < g.orbit_order(c); ++a)
        for (auto dir : {ShiftDirection::raising, ShiftDirection::lowering}) {
          ShiftOp s = elementary_shift(g, k, c, a, dir, verify);
          CHECK(s.op.top_order_part() == expected_symbol(g, s));
          CHECK(s.target - s.source == Multiplicity::ell(g, c, g.orbit_order(c) - a));
        }
  }
}

TEST_CASE("cyclic three at k zero has order one") {
  ReflectionGroup g = builtin_group("cyclic:3");
  ShiftOp s = elementary_shift(g, Multiplicity::zero(g), 0, 1);
  CHECK(s.op.order() == 1);
  CHECK(s.op.top_order_part() == expected_symbol(g, s));
  CHECK(intertwine_check(g, s, xi_pow(1, 0, 3)).ok);
}

TEST_CASE("intertwining on cyclic and dihedral groups") {
  std::mt19937 rng(11);
  for (const char* spec : {"cyclic:3", "cyclic:4", "dihedral:2:2", "dihedral:3:3", "dihedral:4:4"}) {
    ReflectionGroup g = builtin_group(spec);
    auto ps = lowest_invariants(g, 2);
    std::vector<Multiplicity> ks = {Multiplicity::zero(g), random_rational_k(g, rng)};
    for (const auto& k : ks)
      for (int c = 0; c < g.num_orbits(); ++c)
        for (int a = 1; a < g.orbit_order(c); ++a)
          for (auto dir : {ShiftDirection::raising, ShiftDirection::lowering}) {
            ShiftOp s = elementary_shift(g, k, c, a, dir);
            for (const auto& p : ps) {
              INFO(spec, " k=", k.to_string(), " orbit ", c, " a=", a);
              CHECK(intertwine_check(g, s, p).ok);
            }
          }
  }
}

TEST_CASE("Calogero-Moser operators commute") {
  std::mt19937 rng(5);
  for (const char* spec : {"dihedral:3:3", "dihedral:4:1", "cyclic:3"}) {
    ReflectionGroup g = builtin_group(spec);
    Multiplicity k = random_rational_k(g, rng);
    auto ps = lowest_invariants(g, 2);
    DiffOp lp = calogero_moser(g, k, ps.front());
    DiffOp lq = calogero_moser(g, k, ps.back());
    CHECK((lp * lq - lq * lp).is_zero());
  }
}

TEST_CASE("G-orbit and conjugation identities") {
  SUBCASE("cyclic three") {
    ReflectionGroup g = builtin_group("cyclic:3");
    CheckReport r = calogero_moser_equalities(g, Multiplicity::parse(g, "0,1,1"), xi_pow(1, 0, 3), 0, 1);
    CHECK(r.ok);
    CHECK(r.checked == 2);
  }
  SUBCASE("cyclic two with a twist") {
    ReflectionGroup g = builtin_group("cyclic:2");
    Multiplicity k = Multiplicity::parse(g, "1/2,-1/2", "1");
    CHECK(calogero_moser_equalities(g, k, xi_pow(1, 0, 2), 0, 1).ok);
  }
  SUBCASE("dihedral four") {
    ReflectionGroup g = builtin_group("dihedral:4:4");
    Multiplicity k = Multiplicity::parse(g, "1/2,1/2;3/2,-1/2", "1,1");
    for (const auto& p : lowest_invariants(g, 2))
      for (int c = 0; c < 2; ++c) CHECK(calogero_moser_equalities(g, k, p, c, 1).ok);
  }
  SUBCASE("a equal to zero is the identity conjugation") {
    ReflectionGroup g = builtin_group("cyclic:3");
    Multiplicity k = Multiplicity::parse(g, "0,1,1");
    CHECK(conjugated_calogero_moser(g, k, xi_pow(1, 0, 3), 0, 0) == calogero_moser(g, k, xi_pow(1, 0, 3)));
  }
}

TEST_CASE("shift chains") {
  SUBCASE("empty") {
    ReflectionGroup g = builtin_group("cyclic:3");
    CHECK(compose_chain(g, Multiplicity::zero(g)).empty());
  }
  SUBCASE("rank one") {
    ReflectionGroup g = builtin_group("cyclic:2");
    auto chain = compose_chain(g, Multiplicity::parse(g, "2"));
    REQUIRE(chain.size() == 2);
    CHECK(chain[0].op == euler_minus(g, 1));
    CHECK(chain[1].op == euler_minus(g, 3));
  }
  SUBCASE("cyclic three") {
    ReflectionGroup g = builtin_group("cyclic:3");
    Multiplicity target = Multiplicity::parse(g, "0,1,1");
    auto chain = compose_chain(g, target);
    REQUIRE(chain.size() == 2);
    CHECK(chain[0].a == 1);
    CHECK(chain[0].target == Multiplicity::ell(g, 0, 2));
    CHECK(chain[1].a == 2);
    CHECK(chain[1].target == target);
    for (const auto& s : chain) CHECK(intertwine_check(g, s, xi_pow(1, 0, 3)).ok);
    DiffOp total = chain_operator(chain);
    DiffOp l0 = calogero_moser(g, Multiplicity::zero(g), xi_pow(1, 0, 3));
    DiffOp lt = calogero_moser(g, target, xi_pow(1, 0, 3));
    CHECK(lt * total == total * l0);
  }
  SUBCASE("dihedral") {
    ReflectionGroup g = builtin_group("dihedral:4:1");
    Multiplicity target = Multiplicity::parse(g, "1;0,1,1");
    auto chain = compose_chain(g, target);
    CHECK(chain.size() == 3);
    CHECK(chain.back().target == target);
    DiffOp total = chain_operator(chain);
    for (const auto& p : lowest_invariants(g, 2)) {
      CHECK(calogero_moser(g, target, p) * total == total * calogero_moser(g, Multiplicity::zero(g), p));
    }
  }
  SUBCASE("unreachable") {
    ReflectionGroup g = builtin_group("cyclic:2");
    CHECK_THROWS_AS(compose_chain(g, Multiplicity::parse(g, "1/2")), UnreachableTarget);
    CHECK_THROWS_AS(compose_chain(g, Multiplicity::parse(g, "-1")), UnreachableTarget);
  }
}

TEST_CASE("shift operators preserve quasi-invariants") {
  SUBCASE("rank one image") {
    ReflectionGroup g = builtin_group("cyclic:2");
    ShiftOp s = elementary_shift(g, Multiplicity::zero(g), 0, 1);
    CHECK(s.op.apply(xi_pow(1, 0, 2)).numerator() == xi_pow(1, 0, 2));
    CHECK(shift_preserves_q(g, s, 10).ok);
  }
  SUBCASE("cyclic three chain") {
    ReflectionGroup g = builtin_group("cyclic:3");
    for (const auto& s : compose_chain(g, Multiplicity::parse(g, "0,1,1"))) {
      StabilityReport r = shift_preserves_q(g, s, 9);
      CHECK(r.ok);
      CHECK(r.checked > 0);
    }
  }
  SUBCASE("dihedral raising and lowering") {
    ReflectionGroup g = builtin_group("dihedral:3:3");
    Multiplicity k = Multiplicity::parse(g, "1");
    for (auto dir : {ShiftDirection::raising, ShiftDirection::lowering}) {
      StabilityReport r = shift_preserves_q(g, elementary_shift(g, k, 0, 1, dir), 7);
      INFO(r.witness);
      CHECK(r.ok);
    }
  }
}
