#include "qinv/shiftops.hpp"

namespace qinv {

namespace {

void check_shift_args(const ReflectionGroup& g, int orbit, int a) {
  if (orbit < 0 || orbit >= g.num_orbits()) throw std::invalid_argument("orbit out of range");
  int n = g.orbit_order(orbit);
  if (a < 1 || a > n - 1) throw std::invalid_argument("shift index a must lie in 1.." + std::to_string(n - 1));
}

DiffOp multiplication_by_delta(const ReflectionGroup& g, int orbit, int a) {
  return DiffOp::multiplication(delta_power(g, orbit, a));
}

// T_{delta_C^*} applied to d in the spherical module.
DiffOp apply_delta_star(const SphericalDunkl& sd, const ReflectionGroup& g, int orbit, DiffOp d) {
  for (int h : g.orbit(orbit)) d = sd.apply(g.hyperplanes()[h].v, d);
  return d;
}

DiffReflOp delta_star_dunkl(const ReflectionGroup& g, const Multiplicity& k, int orbit) {
  DiffReflOp out = DiffReflOp::group_element(g, 0);
  for (int h : g.orbit(orbit)) out = out * dunkl_operator(g, k, g.hyperplanes()[h].v);
  return out;
}

}  // namespace

nlohmann::json ShiftOp::to_json() const {
  nlohmann::json j;
  j["orbit"] = orbit;
  j["a"] = a;
  j["direction"] = direction == ShiftDirection::raising ? "raising" : "lowering";
  j["sourceK"] = source.to_json();
  j["targetK"] = target.to_json();
  j["order"] = op.order();
  j["normalForm"] = op.to_string();
  j["op"] = op.to_json();
  return j;
}

Multiplicity shift_intermediate(const ReflectionGroup& g, const Multiplicity& k, int orbit, int a) {
  Multiplicity out = k;
  int n = g.orbit_order(orbit);
  for (int i = 1; i <= a; ++i) out = out + Multiplicity::ell(g, orbit, n - i);
  return out;
}

ShiftOp elementary_shift(const ReflectionGroup& g, const Multiplicity& k, int orbit, int a, ShiftDirection dir,
                         bool verify) {
  check_shift_args(g, orbit, a);
  int n = g.orbit_order(orbit);
  Multiplicity kp = shift_intermediate(g, k, orbit, a);
  SphericalDunkl sd(g, kp);
  ShiftOp s;
  s.orbit = orbit;
  s.a = a;
  s.direction = dir;
  s.source = k;
  s.target = k + Multiplicity::ell(g, orbit, n - a);
  int right = dir == ShiftDirection::raising ? a : a - 1;
  int left = dir == ShiftDirection::raising ? 1 - a : -a;
  int powers = dir == ShiftDirection::raising ? 1 : n - 1;
  DiffOp d = multiplication_by_delta(g, orbit, right);
  for (int i = 0; i < powers; ++i) d = apply_delta_star(sd, g, orbit, d);
  s.op = d.left_multiply(delta_power(g, orbit, left));
  int witness = -1;
  if (!s.op.is_invariant(g, &witness)) {
    throw NotInvariant("shift operator is not W-invariant", witness);
  }
  if (verify) {
    DiffReflOp t = delta_star_dunkl(g, kp, orbit);
    DiffReflOp x = DiffReflOp::multiplication(g, delta_power(g, orbit, left));
    for (int i = 0; i < powers; ++i) x = x * t;
    x = x * DiffReflOp::multiplication(g, delta_power(g, orbit, right));
    if (!x.is_invariant(&witness)) throw NotInvariant("expression under Res is not W-invariant", witness);
    if (x.res() != s.op) throw std::logic_error("spherical module and DW constructions disagree");
  }
  return s;
}

DiffOp expected_symbol(const ReflectionGroup& g, const ShiftOp& s) {
  auto forms = g.forms(g.dim(), 0);
  MultiPoly dstar = g.delta_star(s.orbit, g.dim(), 0);
  int powers = s.direction == ShiftDirection::raising ? 1 : g.orbit_order(s.orbit) - 1;
  DiffOp sym = DiffOp::constant_coefficient(forms, dstar.pow(powers));
  return sym.left_multiply(delta_power(g, s.orbit, s.direction == ShiftDirection::raising ? 1 : -1));
}

nlohmann::json IntertwineResult::to_json() const {
  nlohmann::json j{{"ok", ok}};
  if (!ok) j["difference"] = difference.to_string();
  return j;
}

IntertwineResult intertwine_check(const ShiftOp& s, const DiffOp& l_source, const DiffOp& l_target) {
  IntertwineResult r;
  if (s.direction == ShiftDirection::raising) r.difference = l_target * s.op - s.op * l_source;
  else r.difference = l_source * s.op - s.op * l_target;
  r.ok = r.difference.is_zero();
  return r;
}

IntertwineResult intertwine_check(const ReflectionGroup& g, const ShiftOp& s, const MultiPoly& p) {
  return intertwine_check(s, calogero_moser(g, s.source, p), calogero_moser(g, s.target, p));
}

DiffOp conjugated_calogero_moser(const ReflectionGroup& g, const Multiplicity& k, const MultiPoly& p, int orbit,
                                 int a) {
  if (!is_dual_invariant(g, p)) throw NotInvariant("p is not W-invariant", -1);
  Multiplicity kp = a == 0 ? k : shift_intermediate(g, k, orbit, a);
  SphericalDunkl sd(g, kp);
  DiffOp d = sd.apply_polynomial(p, multiplication_by_delta(g, orbit, a));
  return d.left_multiply(delta_power(g, orbit, -a));
}

CheckReport calogero_moser_equalities(const ReflectionGroup& g, const Multiplicity& k, const MultiPoly& p, int orbit,
                                      int a) {
  CheckReport rep;
  DiffOp base = calogero_moser(g, k, p);
  ++rep.checked;
  if (calogero_moser(g, g_transform(g, k, orbit), p) != base) rep.fail("L_{p,k} differs from L_{p,g_C k}");
  ++rep.checked;
  if (conjugated_calogero_moser(g, k, p, orbit, a) != base) {
    rep.fail("Res T_{p,k} differs from Res(delta^-a T_{p,k'} delta^a) at a = " + std::to_string(a));
  }
  return rep;
}

std::vector<ShiftOp> compose_chain(const ReflectionGroup& g, const Multiplicity& k_target) {
  if (k_target.k.size() != static_cast<size_t>(g.num_orbits())) throw UnreachableTarget("wrong number of orbits");
  for (int c = 0; c < g.num_orbits(); ++c) {
    if (k_target.k[c].size() != static_cast<size_t>(g.orbit_order(c))) throw UnreachableTarget("wrong orbit length");
    if (sgn(k_target.k[c][0]) != 0) throw UnreachableTarget("k_{C,0} must vanish");
    for (const auto& q : k_target.k[c])
      if (q.get_den() != 1 || sgn(q) < 0) throw UnreachableTarget("target must be a non-negative integer vector");
  }
  std::vector<ShiftOp> chain;
  Multiplicity cur = Multiplicity::zero(g);
  for (int c = 0; c < g.num_orbits(); ++c) {
    int n = g.orbit_order(c);
    bool moved = true;
    while (moved) {
      moved = false;
      for (int j = n - 1; j >= 1; --j) {
        if (cur.k[c][j] < k_target.k[c][j]) {
          ShiftOp s = elementary_shift(g, cur, c, n - j);
          cur = s.target;
          chain.push_back(std::move(s));
          moved = true;
        }
      }
    }
  }
  return chain;
}

DiffOp chain_operator(const std::vector<ShiftOp>& chain) {
  if (chain.empty()) throw std::invalid_argument("empty chain");
  DiffOp out = chain.front().op;
  for (size_t i = 1; i < chain.size(); ++i) out = chain[i].op * out;
  return out;
}

StabilityReport shift_preserves_q(const ReflectionGroup& g, const ShiftOp& s, int max_deg) {
  bool raising = s.direction == ShiftDirection::raising;
  const Multiplicity& from = raising ? s.source : s.target;
  const Multiplicity& to = raising ? s.target : s.source;
  GradedBasis b = compute_basis(g, from, max_deg, 0);
  StabilityReport rep;
  for (const auto& [d, elems] : b.per_degree) {
    for (const auto& v : elems) {
      LocalizedPoly image = s.op.apply(v[0]);
      ++rep.checked;
      if (!image.is_polynomial()) {
        rep.ok = false;
        rep.witness = "pole in S(" + v[0].to_string() + ") = " + image.to_string();
        return rep;
      }
      Membership m = is_quasi_invariant(g, to, image.numerator());
      if (!m) {
        rep.ok = false;
        rep.witness = "S(" + v[0].to_string() + ") = " + image.to_string() + " is not in Q_" + to.to_string();
        return rep;
      }
    }
  }
  return rep;
}

}  // namespace qinv
