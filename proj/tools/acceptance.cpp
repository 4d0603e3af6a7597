#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>

#include "qinv/suites.hpp"

using namespace qinv;

namespace {

struct Criterion {
  int id;
  std::string title;
  double budget;  // seconds
  std::function<CheckReport()> run;
};

void merge(CheckReport& into, const CheckReport& r, const std::string& label) {
  into.checked += r.checked;
  for (const auto& f : r.failures) into.fail(label + ": " + f);
}

void expect(CheckReport& rep, bool ok, const std::string& what) {
  ++rep.checked;
  if (!ok) rep.fail(what);
}

const std::vector<std::string> kTestGroups = {"cyclic:2",     "cyclic:3",     "cyclic:4",     "dihedral:2:1",
                                              "dihedral:2:2", "dihedral:3:1", "dihedral:3:3", "dihedral:4:1",
                                              "dihedral:4:4", "symmetric:3"};

const std::vector<std::string> kShiftGroups = {"cyclic:2",     "cyclic:3",     "cyclic:4",     "dihedral:2:1",
                                               "dihedral:2:2", "dihedral:3:1", "dihedral:3:3", "dihedral:4:1",
                                               "dihedral:4:4"};

// Cyclic k with every entry, including k_0, in [0, max_entry].
std::vector<Multiplicity> all_cyclic_k(const ReflectionGroup& g, int max_entry) {
  std::vector<Multiplicity> out;
  int n = g.orbit_order(0);
  std::vector<int> digits(n, 0);
  while (true) {
    Multiplicity k = Multiplicity::zero(g);
    for (int i = 0; i < n; ++i) k.k[0][i] = digits[i];
    out.push_back(k);
    int s = 0;
    while (s < n && ++digits[s] > max_entry) digits[s++] = 0;
    if (s == n) break;
  }
  return out;
}

CheckReport rank_one_closed_form() {
  CheckReport rep;
  for (int n : {2, 3, 4}) {
    ReflectionGroup g = builtin_group("cyclic:" + std::to_string(n));
    for (const auto& k : all_cyclic_k(g, 2)) {
      GradedBasis b = compute_basis(g, k, 30);
      for (int d = 0; d <= 30; ++d) {
        long need = n * k.k[0][d % n].get_num().get_si();
        bool member = d >= need;
        std::string at = g.label() + " k=" + k.to_string() + " d=" + std::to_string(d);
        expect(rep, b.dim(d) == (member ? 1 : 0), "dimension at " + at);
        if (member && b.dim(d) == 1) {
          expect(rep, b.scalars(d)[0] == MultiPoly::variable(1, 0).pow(d), "basis element at " + at);
        }
      }
    }
  }
  return rep;
}

CheckReport dunkl_axiom_sweep() {
  CheckReport rep;
  std::mt19937 rng(2024);
  for (const auto& spec : kTestGroups) {
    ReflectionGroup g = builtin_group(spec);
    std::vector<Multiplicity> ks = integral_multiplicities(g, 2);
    for (int t = 0; t < 5; ++t) ks.push_back(random_rational_multiplicity(g, rng));
    for (const auto& k : ks) merge(rep, dunkl_axioms(g, k), spec + " k=" + k.to_string());
  }
  return rep;
}

CheckReport poincare_sweep() {
  CheckReport rep;
  for (const auto& spec : kTestGroups) {
    ReflectionGroup g = builtin_group(spec);
    for (const auto& k : integral_multiplicities(g, 2)) {
      std::string label = spec + " k=" + k.to_string();
      merge(rep, poincare_consistency(g, k, 25), label);
      if (g.irreps_available()) merge(rep, freeness_check(g, k), label);
    }
  }
  return rep;
}

CheckReport intertwining_sweep() {
  CheckReport rep;
  std::mt19937 rng(77);
  for (const auto& spec : kShiftGroups) {
    ReflectionGroup g = builtin_group(spec);
    std::vector<Multiplicity> ks = integral_multiplicities(g, 2);
    for (int t = 0; t < 3; ++t) ks.push_back(random_rational_multiplicity(g, rng));
    CalogeroMoserCache cache;
    for (const auto& k : ks) merge(rep, intertwining_check(g, k, &cache), spec + " k=" + k.to_string());
  }
  return rep;
}

CheckReport g_orbit_sweep() {
  CheckReport rep;
  struct Case {
    const char* group;
    const char* k;
    const char* a;
  };
  for (const Case& c : {Case{"cyclic:2", "1/2,1/2", "1"}, Case{"cyclic:2", "1/2,-1/2", "1"},
                        Case{"cyclic:3", "1/3,4/3,-2/3", "1"}, Case{"cyclic:3", "2/3,-1/3,2/3", "2"},
                        Case{"cyclic:4", "1/4,5/4,1/4,-3/4", "1"}, Case{"cyclic:3", "0,1,1", ""},
                        Case{"dihedral:3:3", "1", ""}, Case{"dihedral:3:3", "1/2,1/2", "1"},
                        Case{"dihedral:4:4", "1/2,1/2;3/2,-1/2", "1,1"}, Case{"dihedral:4:1", "1;0,1,1", ""}}) {
    ReflectionGroup g = builtin_group(c.group);
    Multiplicity k = Multiplicity::parse(g, c.k, c.a);
    std::string label = std::string(c.group) + " k=" + k.to_string();
    merge(rep, g_orbit_checks(g, k, 10), label);
    auto ps = basic_dual_invariants(g);
    std::stable_sort(ps.begin(), ps.end(), [](const MultiPoly& x, const MultiPoly& y) { return x.degree() < y.degree(); });
    if (ps.size() > 2) ps.resize(2);
    for (int orbit = 0; orbit < g.num_orbits(); ++orbit) {
      for (int a = 0; a < g.orbit_order(orbit); ++a) {
        for (const auto& p : ps) {
          merge(rep, calogero_moser_equalities(g, k, p, orbit, a),
                label + " orbit " + std::to_string(orbit) + " a=" + std::to_string(a));
        }
      }
    }
  }
  return rep;
}

CheckReport kz_sweep() {
  CheckReport rep;
  for (const char* spec : {"cyclic:2", "cyclic:3", "cyclic:4", "dihedral:2:1", "dihedral:2:2", "dihedral:3:1",
                           "dihedral:3:3", "dihedral:4:1", "dihedral:4:4"}) {
    ReflectionGroup g = builtin_group(spec);
    std::map<std::string, TwistPermutation> cache;
    auto twist = [&](const Multiplicity& k) -> const TwistPermutation& {
      auto key = k.to_string();
      auto it = cache.find(key);
      if (it == cache.end()) it = cache.emplace(key, kz_twist(g, k)).first;
      return it->second;
    };
    const TwistPermutation& id = twist(Multiplicity::zero(g));
    for (size_t t = 0; t < id.mapping.size(); ++t) {
      expect(rep, id.mapping[t] == static_cast<int>(t), std::string(spec) + " kz_0 is not the identity");
    }
    auto ks = integral_multiplicities(g, 1);
    for (const auto& k1 : ks) {
      for (const auto& k2 : ks) {
        expect(rep, compose_permutations(twist(k1).mapping, twist(k2).mapping) == twist(k1 + k2).mapping,
               std::string(spec) + " additivity for " + k1.to_string() + " + " + k2.to_string());
      }
    }
    for (const auto& [key, tw] : cache) {
      for (size_t tp = 0; tp < tw.mapping.size(); ++tp) {
        const WRep& src = g.irreps()[tp];
        const WRep& dst = g.irreps()[tw.mapping[tp]];
        expect(rep, src.dim == dst.dim, std::string(spec) + " dimension changes at k=" + key);
        expect(rep, c_tau(g, tw.k, src) == c_tau(g, tw.k, dst), std::string(spec) + " c changes at k=" + key);
      }
    }
  }
  return rep;
}

CheckReport symmetrization_sweep() {
  CheckReport rep;
  for (const char* spec : {"cyclic:3", "dihedral:3:3"}) {
    ReflectionGroup g = builtin_group(spec);
    for (const auto& k : integral_multiplicities(g, 1)) {
      merge(rep, symmetrization_check(g, k, 10), std::string(spec) + " k=" + k.to_string());
    }
  }
  return rep;
}

CheckReport baf_cases() {
  CheckReport rep;
  struct Case {
    const char* group;
    const char* k;
  };
  for (const Case& c : {Case{"cyclic:2", "1"}, Case{"cyclic:2", "2"}, Case{"cyclic:2", "3"}, Case{"cyclic:3", "0,1,1"},
                        Case{"dihedral:2:2", "1;1"}}) {
    ReflectionGroup g = builtin_group(c.group);
    Multiplicity k = Multiplicity::parse(g, c.k);
    nlohmann::json details;
    merge(rep, baf_suite(g, k, &details), std::string(c.group) + " k=" + c.k);
    expect(rep, details.at("normalization").dump().size() > 0, "normalization recorded");
  }
  ReflectionGroup z2 = builtin_group("cyclic:2");
  BafData b = construct_baf(z2, Multiplicity::parse(z2, "1"));
  expect(rep, b.prefactor().to_string(joint_var_names(1)) == "x1*l1 + -1", "Z/2 k=1 prefactor is lambda x - 1");
  expect(rep, phi_checks(z2, b, 2).at_origin == CycNumber(-2), "Z/2 k=1 Phi(0,0) = -2");
  return rep;
}

CheckReport membership_oracle() {
  CheckReport rep;
  struct Case {
    const char* group;
    const char* k;
  };
  unsigned seed = 5;
  for (const Case& c : {Case{"cyclic:2", "2"}, Case{"cyclic:3", "0,1,2"}, Case{"cyclic:4", "0,1,0,2"},
                        Case{"dihedral:2:1", "1;2"}, Case{"dihedral:2:2", "2;1"}, Case{"dihedral:3:1", "1;1,2"},
                        Case{"dihedral:3:3", "2"}, Case{"dihedral:4:1", "1;2,0,1"}, Case{"dihedral:4:4", "1;2"},
                        Case{"symmetric:3", "1"}}) {
    ReflectionGroup g = builtin_group(c.group);
    merge(rep, membership_crosscheck(g, Multiplicity::parse(g, c.k), 200, seed++), std::string(c.group) + " k=" + c.k);
  }
  return rep;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<Criterion> criteria = {
      {1, "rank-1 closed form of the exponent set", 5, rank_one_closed_form},
      {2, "Dunkl axioms", 60, dunkl_axiom_sweep},
      {3, "Poincare consistency and free generators", 300, poincare_sweep},
      {4, "shift intertwining", 120, intertwining_sweep},
      {5, "G-orbit identities", 120, g_orbit_sweep},
      {6, "KZ twist laws", 600, kz_sweep},
      {7, "symmetrization of the regular representation", 120, symmetrization_sweep},
      {8, "Baker-Akhiezer suite", 300, baf_cases},
      {9, "cross-oracle membership", 60, membership_oracle}};
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    CheckReport r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_budget = secs < c.budget;
    bool ok = r.ok && in_budget;
    failed += ok ? 0 : 1;
    std::printf("%s criterion %d: %s (%d checks, %.2f s, budget %.0f s)\n", ok ? "PASS" : "FAIL", c.id,
                c.title.c_str(), r.checked, secs, c.budget);
    if (!in_budget) std::printf("  over the runtime budget\n");
    size_t shown = 0;
    for (const auto& f : r.failures) {
      if (shown++ == 10) {
        std::printf("  ... %zu more\n", r.failures.size() - 10);
        break;
      }
      std::printf("  %s\n", f.c_str());
    }
    std::fflush(stdout);
  }
  std::printf("%s\n", failed == 0 ? "all criteria passed" : (std::to_string(failed) + " criteria failed").c_str());
  return failed == 0 ? 0 : 1;
}
