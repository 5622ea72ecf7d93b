#pragma once

// Exact classical-side quantities by vertex enumeration, and local-polytope
// membership by linear programming.

#include <string>
#include <vector>

#include "bell/scenario.hpp"

namespace bell {

struct ClassicalOptimum {
  double value = 0.0;      // max(|max_value|, |min_value|)
  double max_value = 0.0;  // max over vertices of <T,D>
  double min_value = 0.0;  // min over vertices of <T,D>
  DeterministicStrategy argmax;
  DeterministicStrategy argmin;
};

/// Signed extremes of <T,.> over the local polytope. The party with fewer
/// deterministic strategies is enumerated, the other answers greedily. Ties
/// keep the lexicographically first strategy.
ClassicalOptimum classical_optimum(const BellFunctional& t, const Limits& limits = {});

/// sup over L of |<T,P>|.
double classical_value(const BellFunctional& t, const Limits& limits = {});

/// sup over incomplete local behaviors, via one abstain output per party.
double classical_value_incomplete(const BellFunctional& t, const Limits& limits = {});

/// Norm of T as a real bilinear form on l_inf^N(l_1^M) x l_inf^N(l_1^M).
double banach_norm(const BellFunctional& t, const Limits& limits = {});

enum class Verdict { local, nonlocal, undecided };

const char* to_string(Verdict v);

struct MembershipCertificate {
  Verdict verdict = Verdict::undecided;
  /// Set when local.
  LocalModel model;
  double reconstruction_error = 0.0;
  /// Set when nonlocal (or undecided with a candidate): vertex values of the
  /// separator span [-1, 1] where possible, with max exactly 1.
  BellFunctional separator;
  double separator_value = 0.0;    // <S,P>
  double max_vertex_value = 0.0;   // max over vertices of <S,D>
  std::vector<std::string> warnings;
};

/// LP over convex weights of all deterministic vertices. Requires a complete
/// behavior; signaling input is accepted with a warning.
MembershipCertificate is_local(const Behavior& p, const Limits& limits = {});

}  // namespace bell
