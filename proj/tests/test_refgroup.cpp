#include <doctest.h>

#include "qinv/refgroup.hpp"

using namespace qinv;

TEST_CASE("group orders and arrangements") {
  struct Case {
    std::string spec;
    int order, hyperplanes, orbits, reflections;
  };
  std::vector<Case> cases = {
      {"cyclic:2", 2, 1, 1, 1},          {"cyclic:3", 3, 1, 1, 2},         {"cyclic:4", 4, 1, 1, 3},
      {"dihedral:2:1", 8, 4, 2, 4},      {"dihedral:2:2", 4, 2, 2, 2},     {"dihedral:3:3", 6, 3, 1, 3},
      {"dihedral:3:1", 18, 5, 2, 7},     {"dihedral:4:4", 8, 4, 2, 4},     {"dihedral:4:2", 16, 6, 3, 6},
      {"symmetric:3", 6, 3, 1, 3},       {"symmetric:4", 24, 6, 1, 6},     {"G:2:1:3", 48, 9, 2, 9},
  };
  for (const auto& c : cases) {
    CAPTURE(c.spec);
    ReflectionGroup g = builtin_group(c.spec);
    CHECK(g.order() == c.order);
    CHECK(static_cast<int>(g.hyperplanes().size()) == c.hyperplanes);
    CHECK(g.num_orbits() == c.orbits);
    CHECK(g.num_reflections() == c.reflections);
    for (int w = 0; w < g.order(); ++w) CHECK(g.mult(w, g.inv(w)) == 0);
    for (int c2 = 0; c2 < g.num_orbits(); ++c2) {
      for (int a = 0; a < g.order(); a += 3) {
        for (int b = 0; b < g.order(); b += 2) {
          int e = (g.det_c_exp(a, c2) + g.det_c_exp(b, c2)) % g.conductor();
          CHECK(g.det_c_exp(g.mult(a, b), c2) == e);
        }
      }
    }
  }
  CHECK_THROWS(builtin_group("G:3:1:4"));
  CHECK_THROWS(builtin_group("dihedral:4:3"));
  CHECK_THROWS(builtin_group("nonsense"));
}

TEST_CASE("stabilizers are ordered by determinant") {
  ReflectionGroup g = builtin_group("dihedral:3:1");
  for (const auto& hp : g.hyperplanes()) {
    CHECK(hp.stabilizer[0] == 0);
    for (int j = 0; j < hp.order; ++j) {
      CHECK(g.det(hp.stabilizer[j]) == CycNumber::zeta(hp.order, j));
      MultiPoly a = MultiPoly::linear_form(2, hp.alpha);
      // w acts on alpha_H by det(w)^{-1}
      CHECK(g.act(hp.stabilizer[j], a) == a * CycNumber::zeta(hp.order, -j));
    }
  }
}

TEST_CASE("irreducible representations validate") {
  for (std::string spec : {"cyclic:2", "cyclic:3", "cyclic:5", "dihedral:2:1", "dihedral:3:1", "dihedral:4:1",
                           "dihedral:3:3", "dihedral:4:4", "dihedral:6:6", "symmetric:3", "symmetric:4"}) {
    CAPTURE(spec);
    ReflectionGroup g = builtin_group(spec);
    REQUIRE(g.irreps_available());
    CHECK(validate_irreps(g) == "");
    CHECK(validate_irreps(g.dual()) == "");
  }
  CHECK(!builtin_group("dihedral:4:2").irreps_available());
}

TEST_CASE("idempotents on the cyclic group") {
  ReflectionGroup g = builtin_group("cyclic:3");
  MultiPoly x = MultiPoly::variable(1, 0);
  MultiPoly x2 = x * x;
  CHECK(g.idempotent_apply(0, 1, x2) == x2);
  CHECK(g.idempotent_apply(0, 2, x2).is_zero());
  CHECK(g.idempotent_apply(0, 2, x) == x);
  MultiPoly sum(1);
  for (int i = 0; i < 3; ++i) sum += g.idempotent_apply(0, i, x2 + x);
  CHECK(sum == x2 + x);
}

TEST_CASE("invariance of delta and anti-invariance data") {
  ReflectionGroup g = builtin_group("dihedral:3:1");
  for (int c = 0; c < g.num_orbits(); ++c) {
    MultiPoly d = g.delta(c, 2, 0);
    for (int w = 0; w < g.order(); ++w) {
      CHECK(g.act(w, d) == d * g.zeta_pow(-g.det_c_exp(w, c)));
    }
  }
}

TEST_CASE("dual group") {
  ReflectionGroup g = builtin_group("dihedral:3:1");
  ReflectionGroup d = g.dual();
  CHECK(d.is_dual());
  for (int w = 0; w < g.order(); ++w) {
    CHECK(d.det(w) == g.det(w).conj());
    CHECK(d.index_of(d.element(w)) == w);
  }
  for (size_t h = 0; h < g.hyperplanes().size(); ++h) {
    const auto& hp = d.hyperplanes()[h];
    for (int j = 0; j < hp.order; ++j) CHECK(d.det(hp.stabilizer[j]) == CycNumber::zeta(hp.order, j));
  }
  CHECK(d.dual().label() == g.label());
}

TEST_CASE("multiplicity parsing") {
  ReflectionGroup g = builtin_group("dihedral:2:1");
  Multiplicity k = Multiplicity::parse(g, "1;1/2");
  CHECK(k.k[0] == std::vector<Rational>{0, 1});
  CHECK(k.k[1][1] == Rational(1, 2));
  CHECK(Multiplicity::from_json(g, k.to_json()) == k);
  CHECK_THROWS(Multiplicity::parse(g, "1"));
  CHECK_THROWS(Multiplicity::parse(g, "1/2,1/2;0,1", "0,0"));
  Multiplicity t = Multiplicity::parse(g, "1/2,1/2;0,1", "1,0");
  CHECK(t.twisted());
  CHECK(Multiplicity::from_json(g, t.to_json()) == t);
}
