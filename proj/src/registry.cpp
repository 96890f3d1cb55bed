#include "frob/registry.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace frob {

namespace {

// Prepotential term lines: "re im | powers | exp-weights".
const char* kA2 = R"(name: A2
nvars: 2
charge_d: 1/3
euler_matrix: 1 0 ; 0 2/3
euler_shift: 0 0
base_point: 0,0 1,0
prepotential:
1/2 0 | 2 1 | 0 0
1/72 0 | 0 4 | 0 0
end
)";

const char* kA3 = R"(name: A3
nvars: 3
charge_d: 1/2
euler_matrix: 1 0 0 ; 0 3/4 0 ; 0 0 1/2
euler_shift: 0 0 0
base_point: 0,0 0,0 1,0
prepotential:
1/2 0 | 2 0 1 | 0 0 0
1/2 0 | 1 2 0 | 0 0 0
1/4 0 | 0 2 2 | 0 0 0
1/60 0 | 0 0 5 | 0 0 0
end
)";

const char* kA4 = R"(name: A4
nvars: 4
charge_d: 3/5
euler_matrix: 1 0 0 0 ; 0 4/5 0 0 ; 0 0 3/5 0 ; 0 0 0 2/5
euler_shift: 0 0 0 0
base_point: 0,0 0,0 0,0 1,0
prepotential:
1/2 0 | 2 0 0 1 | 0 0 0 0
1 0 | 1 1 1 0 | 0 0 0 0
1/6 0 | 0 3 0 0 | 0 0 0 0
1/4 0 | 0 2 0 2 | 0 0 0 0
1/2 0 | 0 1 2 1 | 0 0 0 0
1/12 0 | 0 0 4 0 | 0 0 0 0
1/6 0 | 0 0 2 3 | 0 0 0 0
1/120 0 | 0 0 0 6 | 0 0 0 0
end
)";

const char* kD4 = R"(name: D4
nvars: 4
charge_d: 2/3
euler_matrix: 1 0 0 0 ; 0 2/3 0 0 ; 0 0 2/3 0 ; 0 0 0 1/3
euler_shift: 0 0 0 0
base_point: 0,0 0,0 0,0 1,0
prepotential:
1/2 0 | 2 0 0 1 | 0 0 0 0
1 0 | 1 1 1 0 | 0 0 0 0
1/6 0 | 0 3 0 1 | 0 0 0 0
1/6 0 | 0 0 3 1 | 0 0 0 0
1/6 0 | 0 1 1 3 | 0 0 0 0
1/840 0 | 0 0 0 7 | 0 0 0 0
end
)";

const char* kP1 = R"(name: P1
nvars: 2
charge_d: 1
euler_matrix: 1 0 ; 0 0
euler_shift: 0 2
base_point: 0,0 0,0
prepotential:
1/2 0 | 2 1 | 0 0
1 0 | 0 0 | 0 1
end
)";

// Direct sum of two A2 seeds, rotated so the unit field is gamma_1.
const char* kA2A2 = R"(name: A2A2
nvars: 4
charge_d: 1/3
euler_matrix: 1 0 0 0 ; 0 1 0 0 ; 0 0 2/3 0 ; 0 0 0 2/3
euler_shift: 0 0 0 0
base_point: 1/20,0 9/10,1/50 1/5,-3/100 7/5,1/10
prepotential:
1/2 0 | 2 0 0 1 | 0 0 0 0
2 0 | 1 1 1 0 | 0 0 0 0
1/2 0 | 0 2 0 1 | 0 0 0 0
1/36 0 | 0 0 4 0 | 0 0 0 0
1/24 0 | 0 0 2 2 | 0 0 0 0
1/576 0 | 0 0 0 4 | 0 0 0 0
end
)";

const std::map<std::string, const char*>& builtins() {
  static const std::map<std::string, const char*> m = {
      {"A2", kA2}, {"A3", kA3}, {"A4", kA4},
      {"D4", kD4}, {"P1", kP1}, {"A2A2", kA2A2}};
  return m;
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> v;
  for (const auto& [k, _] : builtins()) v.push_back(k);
  return v;
}

bool is_builtin(const std::string& name) { return builtins().count(name) > 0; }

std::string builtin_text(const std::string& name) {
  auto it = builtins().find(name);
  if (it == builtins().end()) throw Error("unknown builtin: " + name);
  return it->second;
}

FrobeniusSpec load_manifold(const std::string& name_or_path) {
  std::string text;
  if (is_builtin(name_or_path)) {
    text = builtin_text(name_or_path);
  } else {
    std::string path = name_or_path;
    if (!std::filesystem::exists(path)) {
      // bare names resolve against FROBCERT_MANIFOLD_PATH
      if (const char* dir = std::getenv("FROBCERT_MANIFOLD_PATH")) {
        std::filesystem::path candidate = std::filesystem::path(dir) / (name_or_path + ".fm");
        if (std::filesystem::exists(candidate)) path = candidate.string();
      }
    }
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open manifold file: " + name_or_path);
    std::ostringstream os;
    os << in.rdbuf();
    text = os.str();
  }
  FrobeniusSpec spec = FrobeniusSpec::parse(text);
  ValidationReport rep = validate_spec(spec);
  if (!rep.passed) throw ValidationFailed(spec.name() + ": " + rep.message);
  return spec;
}

// ------------------------------------------------------------------- ADE

Rational ADEWeightData::max_degree() const {
  Rational m = 0;
  for (const auto& d : degrees) m = std::max(m, d);
  return m;
}

ADEWeightData ade_weights(ADESeries series, int n) {
  ADEWeightData w;
  w.series = series;
  w.n = n;
  switch (series) {
    case ADESeries::A: {
      if (n < 1) throw Error("A_n needs n >= 1");
      w.label = "A" + std::to_string(n);
      w.q = {Rational(1, n + 1)};
      for (int a = 0; a < n; ++a) w.degrees.push_back(Rational(2 * a, n + 1));
      break;
    }
    case ADESeries::D: {
      if (n < 4) throw Error("D_n needs n >= 4");
      w.label = "D" + std::to_string(n);
      w.q = {Rational(1, n - 1), Rational(n - 2, 2 * (n - 1))};
      for (int a = 0; a <= n - 2; ++a) w.degrees.push_back(Rational(2 * a, n - 1));
      w.degrees.push_back(Rational(n - 2, n - 1));  // the y class
      break;
    }
    case ADESeries::E: {
      w.label = "E" + std::to_string(n);
      std::vector<std::pair<int, int>> basis;  // (a, b) exponents of x^a y^b
      if (n == 6) {
        w.q = {Rational(1, 3), Rational(1, 4)};
        for (int a = 0; a <= 1; ++a)
          for (int b = 0; b <= 2; ++b) basis.push_back({a, b});
      } else if (n == 7) {
        w.q = {Rational(1, 3), Rational(2, 9)};
        basis = {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 0}, {1, 1}};
      } else if (n == 8) {
        w.q = {Rational(1, 3), Rational(1, 5)};
        for (int a = 0; a <= 1; ++a)
          for (int b = 0; b <= 3; ++b) basis.push_back({a, b});
      } else {
        throw Error("E_n needs n in {6,7,8}");
      }
      for (auto [a, b] : basis)
        w.degrees.push_back(2 * (w.q[0] * a + w.q[1] * b));
      break;
    }
  }
  w.c_hat = 0;
  for (const auto& qi : w.q) w.c_hat += 1 - 2 * qi;
  std::sort(w.degrees.begin(), w.degrees.end());
  return w;
}

ADEWeightData ade_weights(const std::string& label) {
  if (label.size() < 2) throw Error("bad ADE label: " + label);
  int n = std::stoi(label.substr(1));
  switch (label[0]) {
    case 'A': return ade_weights(ADESeries::A, n);
    case 'D': return ade_weights(ADESeries::D, n);
    case 'E': return ade_weights(ADESeries::E, n);
    default: throw Error("bad ADE label: " + label);
  }
}

namespace {
void enumerate_patterns(const ADEWeightData& w, int s, const Rational& target,
                        int desc_max, int max_desc_slots,
                        std::vector<CorrelatorPattern>& out) {
  // insertion values 2l + deg, enumerated as a sorted multiset
  const int nb = int(w.degrees.size());
  CorrelatorPattern cur;
  // choices ordered by (level, basis); multiset = non-decreasing choice index
  std::vector<Insertion> choices;
  for (int l = 0; l <= desc_max; ++l)
    for (int b = 0; b < nb; ++b) choices.push_back({l, b});
  auto value = [&](const Insertion& ins) {
    return Rational(2 * ins.level) + w.degrees[ins.basis];
  };
  Rational maxval = 0;
  for (const auto& ch : choices) maxval = std::max(maxval, value(ch));

  auto rec = [&](auto&& self, int slot, int lo, Rational remaining,
                 int desc_used) -> void {
    if (slot == s) {
      if (remaining == 0) out.push_back(cur);
      return;
    }
    if (remaining < 0) return;
    if (remaining > maxval * (s - slot)) return;
    for (int c = lo; c < int(choices.size()); ++c) {
      const Insertion& ins = choices[c];
      int du = desc_used + (ins.level > 0 ? 1 : 0);
      if (max_desc_slots >= 0 && du > max_desc_slots) continue;
      cur.push_back(ins);
      self(self, slot + 1, c, remaining - value(ins), du);
      cur.pop_back();
    }
  };
  rec(rec, 0, 0, target, 0);
}
}  // namespace

std::vector<CorrelatorPattern> dimension_count(const ADEWeightData& w, int genus,
                                               int s_max, int desc_max,
                                               int max_desc_slots) {
  std::vector<CorrelatorPattern> out;
  for (int s = 1; s <= s_max; ++s) {
    Rational target = 2 * ((w.c_hat - 3) * (1 - genus) + s);
    enumerate_patterns(w, s, target, desc_max, max_desc_slots, out);
  }
  return out;
}

ConditionCertificate certify_conditions(const ADEWeightData& w, int s_max,
                                        int desc_max) {
  ConditionCertificate cert;
  cert.s_max = s_max;
  cert.desc_max = desc_max;
  cert.enumeration_c2_empty = dimension_count(w, 1, s_max, 0).empty();
  // one descendant slot of level <= desc_max covers both halves of (C3) and
  // the tau_+ shifted vanishing used for (C1)
  cert.enumeration_c3_empty = dimension_count(w, 2, s_max, desc_max, 1).empty();
  cert.degree_bound_holds = w.max_degree() < 2;
  cert.c_hat_below_one = w.c_hat < 1;
  cert.c2_certified = cert.enumeration_c2_empty && cert.degree_bound_holds;
  cert.c3_certified = cert.enumeration_c3_empty && cert.degree_bound_holds &&
                      cert.c_hat_below_one;
  return cert;
}

}  // namespace frob
