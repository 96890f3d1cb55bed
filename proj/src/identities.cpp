#include "frob/identities.hpp"

#include <map>

namespace frob {

double identity_tolerance(const std::string& id) {
  static const std::map<std::string, double> table = {
      {"string-equation", 1e-9},
      {"theta-symmetry", 1e-9},
      {"omega-symmetry", 1e-9},
      {"genus0-4pt-pattern", 1e-9},
      {"g1-1pt-reduction", 1e-7},
      {"g1-2pt-reduction", 1e-7},
      {"h-reduction", 1e-8},
      {"sum-theta", 1e-6},
      {"pij-closed-form", 1e-7},
      {"qp-closed-form", 1e-7},
      {"g1-3pt-reduction", 1e-7},
      {"phi-iij-reduction", 1e-6},
      {"theta-triple-reduction", 1e-6},
      {"te-der-g2", 1e-6},
      {"lemma-3-1", 1e-8},
      {"o1o2-closed-form", 1e-8},
      {"genus1-constitutive-d1", 1e-6},
      {"genus1-constitutive-d2", 1e-6},
      {"q16-q15-relation", 1e-8},
      {"f2-small-dual-eval", 1e-10},
      {"f2-small-finite", 0.5},
      {"theta-v-product", 1e-10},
      {"deriv-rule-distinct", 1e-4},
      {"deriv-rule-k-eq-i", 1e-4},
      {"deriv-rule-i-eq-j", 1e-4},
      {"deriv-rule-all-eq", 1e-4},
      {"deriv-rule-theta", 1e-4},
      {"recursion-phi-ij", 1e-5},
      {"recursion-phi-ijk", 1e-4},
      {"recursion-phi-iij", 1e-4},
      {"recursion-z5", 1e-5},
      {"c1-pointwise", 1e-9},
      {"c1-spread", 1e-8},
      {"c2-vanishing", 1e-7},
      {"g2-gi", 1e-6},
      {"g2-gij", 1e-6},
      {"g2-pij-sym", 1e-6},
      {"g2-qi-pii", 1e-6},
      {"g2-total", 1e-6},
      {"g2-sec21-gij", 1e-8},
      {"wdvv-associativity", 1e-10},
      {"euler-homogeneity", 1e-12},
  };
  auto it = table.find(id);
  if (it == table.end()) throw Error("no tolerance configured for identity: " + id);
  return it->second;
}

}  // namespace frob
