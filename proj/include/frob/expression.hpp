#pragma once

// Exact symbolic layer: finite sums of Gaussian-rational coefficients times
// monomials times exponentials of rational-linear forms. Just enough calculus
// for prepotentials: exact partial derivatives and pointwise evaluation.

#include <span>
#include <string>
#include <vector>

#include "frob/rational.hpp"
#include "frob/scalar.hpp"

namespace frob {

class Expression {
 public:
  struct Term {
    CRational coeff;
    std::vector<int> powers;        // t_a^{powers[a]}, powers[a] >= 0
    std::vector<Rational> expw;     // exp(sum_a expw[a] * t_a)
  };

  Expression() = default;
  explicit Expression(int nvars) : nvars_(nvars) {}

  static Expression constant(int nvars, CRational c);
  // coeff * prod t^powers * exp(sum expw t)
  static Expression term(CRational coeff, std::vector<int> powers,
                         std::vector<Rational> expw = {});

  int nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  CRational constant_value() const;  // 0 if no constant term

  Expression& operator+=(const Expression& o);
  friend Expression operator+(Expression a, const Expression& b) { return a += b; }
  friend Expression operator-(Expression a, const Expression& b);
  friend Expression operator*(const Expression& a, const CRational& s);
  Expression times_var(int var) const;  // multiply by t_var

  bool operator==(const Expression& o) const;

  // One line per term: "re im | p1 .. pN | k1 .. kN" with exact rationals.
  std::string to_term_list() const;
  static Expression parse_term_list(const std::string& text, int nvars);

  template <class C>
  C evaluate(const VecX<C>& pt) const {
    using std::exp;
    C total{};
    for (const Term& t : terms_) {
      C val = from_crational<C>(t.coeff);
      for (int a = 0; a < nvars_; ++a)
        for (int p = 0; p < t.powers[a]; ++p) val *= pt[a];
      bool has_exp = false;
      C arg{};
      for (int a = 0; a < nvars_; ++a)
        if (t.expw[a] != 0) {
          arg += C(scalar_traits<C>::from_rational(t.expw[a])) * pt[a];
          has_exp = true;
        }
      if (has_exp) val *= exp(arg);
      total += val;
    }
    return total;
  }

 private:
  void canonicalize();
  int nvars_ = 0;
  std::vector<Term> terms_;  // canonical: sorted keys, merged, no zero coeff
};

Expression differentiate(const Expression& e, int var);

// Max |coeff| over terms, as a crude symbolic-residual magnitude.
double coeff_magnitude(const Expression& e);

}  // namespace frob
