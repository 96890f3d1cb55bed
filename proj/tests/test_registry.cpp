#include <doctest.h>

#include <fstream>

#include "frob/registry.hpp"

using namespace frob;

TEST_CASE("builtins load, validate, and round-trip through the parser") {
  for (const std::string& name : builtin_names()) {
    FrobeniusSpec spec = load_manifold(name);
    CHECK(spec.name() == name);
    FrobeniusSpec back = FrobeniusSpec::parse(spec.serialize());
    CHECK(back.prepotential() == spec.prepotential());
    CHECK(back.charge_d() == spec.charge_d());
  }
  FrobeniusSpec a2 = load_manifold("A2");
  CHECK(a2.nvars() == 2);
  // E = t1 d1 + (2/3) t2 d2
  CHECK(a2.euler_matrix()[0][0] == Rational(1));
  CHECK(a2.euler_matrix()[1][1] == Rational(2, 3));
  FrobeniusSpec p1 = load_manifold("P1");
  CHECK(p1.euler_shift()[1] == Rational(2));
}

TEST_CASE("malformed files raise parse errors; invalid specs fail validation") {
  CHECK_THROWS_AS(load_manifold("/nonexistent/path.fm"), ParseError);
  {
    std::ofstream out("/tmp/broken.fm");
    out << "name: broken\nnvars: 2\ncharge_d: 0\n"
        << "euler_matrix: 1 0 ; 0 1\neuler_shift: 0 0\n"
        << "prepotential:\n1 0 | 1 oops | 0 0\nend\n";
  }
  CHECK_THROWS_AS(load_manifold("/tmp/broken.fm"), ParseError);
  {
    // nonconstant eta: F = t1^3 t2
    std::ofstream out("/tmp/nceta.fm");
    out << "name: nceta\nnvars: 2\ncharge_d: 0\n"
        << "euler_matrix: 1 0 ; 0 1\neuler_shift: 0 0\n"
        << "prepotential:\n1 0 | 3 1 | 0 0\nend\n";
  }
  CHECK_THROWS_AS(load_manifold("/tmp/nceta.fm"), NonConstantEta);
}

TEST_CASE("ADE weight tables") {
  ADEWeightData a2 = ade_weights("A2");
  CHECK(a2.q == std::vector<Rational>{Rational(1, 3)});
  CHECK(a2.c_hat == Rational(1, 3));
  CHECK(a2.degrees == std::vector<Rational>{Rational(0), Rational(2, 3)});

  ADEWeightData d4 = ade_weights("D4");
  CHECK(d4.q == std::vector<Rational>({Rational(1, 3), Rational(1, 3)}));
  CHECK(d4.c_hat == Rational(2, 3));
  CHECK(int(d4.degrees.size()) == 4);

  ADEWeightData e8 = ade_weights("E8");
  CHECK(e8.q == std::vector<Rational>({Rational(1, 3), Rational(1, 5)}));
  CHECK(e8.c_hat == Rational(14, 15));
  CHECK(int(e8.degrees.size()) == 8);
  for (const char* label : {"A2", "A3", "A4", "A5", "D4", "D5", "D6", "E6", "E7", "E8"}) {
    ADEWeightData w = ade_weights(label);
    CHECK(w.c_hat < 1);
    CHECK(w.max_degree() < 2);
  }
}

TEST_CASE("dimension count at genus 0: the 3-point selection rule") {
  ADEWeightData a2 = ade_weights("A2");
  std::vector<CorrelatorPattern> pats;
  for (const auto& p : dimension_count(a2, 0, 3, 0))
    if (p.size() == 3) pats.push_back(p);
  // admissible 3-point pattern: degrees sum to 2 c_hat = 2/3, i.e. two unit
  // insertions and one of degree 2/3 (consistent with eta_{12} != 0)
  REQUIRE(pats.size() == 1);
  std::vector<int> basis;
  for (const auto& ins : pats[0]) basis.push_back(ins.basis);
  std::sort(basis.begin(), basis.end());
  CHECK(basis == std::vector<int>({0, 0, 1}));
}

TEST_CASE("genus-1 primary and genus-2 descendant enumerations are empty") {
  for (const char* label : {"A2", "A3", "A4", "A5", "D4", "D5", "D6", "E6", "E7", "E8"}) {
    ADEWeightData w = ade_weights(label);
    INFO(label);
    CHECK(dimension_count(w, 1, 12, 0).empty());
    CHECK(dimension_count(w, 2, 12, 2, 1).empty());
    ConditionCertificate cert = certify_conditions(w);
    CHECK(cert.c2_certified);
    CHECK(cert.c3_certified);
    CHECK(cert.degree_bound_holds);
    CHECK(cert.c_hat_below_one);
  }
}

TEST_CASE("dimension count rejects impossible genus-1 patterns explicitly") {
  // at genus 1 with primaries only, every insertion contributes < 2 to a
  // target of exactly 2 per insertion, so no multiset can balance
  ADEWeightData e6 = ade_weights("E6");
  CHECK(dimension_count(e6, 1, 6, 0).empty());
  // with descendants allowed the count can be nonzero at genus 1
  CHECK(!dimension_count(e6, 1, 4, 3).empty());
}
