#pragma once

// Built-in manifold seeds, spec-file ingestion, and the ADE dimension-count
// certifier for the genus-1/genus-2 vanishing conditions.

#include <optional>
#include <string>
#include <vector>

#include "frob/frobenius.hpp"

namespace frob {

// Loads a builtin ("A2", "A3", "A4", "D4", "P1", "A2A2") or a spec file from
// disk, validating before return.
FrobeniusSpec load_manifold(const std::string& name_or_path);
std::vector<std::string> builtin_names();
bool is_builtin(const std::string& name);
// Raw spec-file text of a builtin (used by tests and `dump`).
std::string builtin_text(const std::string& name);

// ---------------------------------------------------------------- ADE data

enum class ADESeries { A, D, E };

struct ADEWeightData {
  ADESeries series;
  int n = 0;                      // A_n, D_n, E_n
  std::vector<Rational> q;        // charges of the quasi-homogeneous polynomial
  Rational c_hat;                 // central charge = sum (1 - 2 q_i)
  std::vector<Rational> degrees;  // W-degrees of the state-space basis
  std::string label;

  Rational max_degree() const;
};

// Weight/degree tables for the standard polynomials
//   A_n: x^{n+1};  D_n: x^{n-1} + x y^2;  E6: x^3+y^4;  E7: x^3+xy^3;  E8: x^3+y^5.
ADEWeightData ade_weights(ADESeries series, int n);
ADEWeightData ade_weights(const std::string& label);  // "A2", "D5", "E7", ...

// One correlator insertion: descendant level and basis-element index.
struct Insertion {
  int level = 0;
  int basis = 0;
};
using CorrelatorPattern = std::vector<Insertion>;

// Exhaustive enumeration of insertion multisets (s <= s_max, levels <=
// desc_max on at most max_desc_slots slots) satisfying the dimension
// condition 2((c_hat - 3)(1 - g) + s) = sum_i (2 l_i + deg_i).
std::vector<CorrelatorPattern> dimension_count(const ADEWeightData& w, int genus,
                                               int s_max, int desc_max,
                                               int max_desc_slots = -1);

struct ConditionCertificate {
  bool c2_certified = false;
  bool c3_certified = false;
  bool enumeration_c2_empty = false;
  bool enumeration_c3_empty = false;
  // all degrees < 2: the per-insertion deficit is negative, so emptiness up
  // to s_max extends to every s
  bool degree_bound_holds = false;
  bool c_hat_below_one = false;
  int s_max = 0, desc_max = 0;
};

ConditionCertificate certify_conditions(const ADEWeightData& w, int s_max = 12,
                                        int desc_max = 2);

}  // namespace frob
