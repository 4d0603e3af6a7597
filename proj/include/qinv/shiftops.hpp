#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qinv/quasiinv.hpp"

namespace qinv {

struct UnreachableTarget : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class ShiftDirection { raising, lowering };

struct ShiftOp {
  DiffOp op;
  int orbit = 0;
  int a = 1;
  Multiplicity source;  // raising: S maps k-data to k-tilde-data
  Multiplicity target;  // source + l_{C, n_C - a}
  ShiftDirection direction = ShiftDirection::raising;
  nlohmann::json to_json() const;
};

// k' = k + sum_{i=1}^{a} l_{C, n_C - i}
Multiplicity shift_intermediate(const ReflectionGroup& g, const Multiplicity& k, int orbit, int a);

// Raising: Res(delta_C^{1-a} T_{delta_C^*, k'} delta_C^a).
// Lowering: Res(delta_C^{-a} (T_{delta_C^*, k'})^{n_C - 1} delta_C^{a-1}).
// Built in the spherical module; with verify set, also as a product in DW whose W-invariance
// is checked and whose Res must agree.
ShiftOp elementary_shift(const ReflectionGroup& g, const Multiplicity& k, int orbit, int a,
                         ShiftDirection dir = ShiftDirection::raising, bool verify = false);

// Principal symbol delta_C * delta_C^*(d) for raising, delta_C^{-1} * delta_C^*(d)^{n_C - 1} for lowering.
DiffOp expected_symbol(const ReflectionGroup& g, const ShiftOp& s);

struct IntertwineResult {
  bool ok = true;
  DiffOp difference;
  nlohmann::json to_json() const;
};
// Raising: L_{p,target} S = S L_{p,source}. Lowering: L_{p,source} S = S L_{p,target}.
IntertwineResult intertwine_check(const ReflectionGroup& g, const ShiftOp& s, const MultiPoly& p);
// The same with precomputed L_{p,source} and L_{p,target}.
IntertwineResult intertwine_check(const ShiftOp& s, const DiffOp& l_source, const DiffOp& l_target);

// Res T_{p,k} = Res T_{p, g_C k} and Res T_{p,k} = Res(delta_C^{-a} T_{p,k'} delta_C^a).
CheckReport calogero_moser_equalities(const ReflectionGroup& g, const Multiplicity& k, const MultiPoly& p, int orbit,
                                      int a);
// Res(delta_C^{-a} T_{p,k'} delta_C^a) with k' = shift_intermediate(k, orbit, a).
DiffOp conjugated_calogero_moser(const ReflectionGroup& g, const Multiplicity& k, const MultiPoly& p, int orbit,
                                 int a);

// Elementary raising shifts from 0 to k_target: orbits in order, sweeps over j = n_C - 1 .. 1.
std::vector<ShiftOp> compose_chain(const ReflectionGroup& g, const Multiplicity& k_target);
DiffOp chain_operator(const std::vector<ShiftOp>& chain);

// S maps (Q_source)_d into Q_target for d up to max_deg.
StabilityReport shift_preserves_q(const ReflectionGroup& g, const ShiftOp& s, int max_deg);

}  // namespace qinv
