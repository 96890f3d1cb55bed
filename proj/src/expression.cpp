#include "frob/expression.hpp"

#include <algorithm>
#include <sstream>

namespace frob {

Rational parse_rational(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) {
      return Rational(boost::multiprecision::cpp_int(s));
    }
    boost::multiprecision::cpp_int num(s.substr(0, slash)), den(s.substr(slash + 1));
    if (den == 0) throw ParseError("rational with zero denominator: " + s);
    return Rational(num, den);
  } catch (const std::exception&) {
    throw ParseError("bad rational: '" + s + "'");
  }
}

std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

static bool key_less(const Expression::Term& a, const Expression::Term& b) {
  if (a.powers != b.powers) return a.powers < b.powers;
  return std::lexicographical_compare(a.expw.begin(), a.expw.end(),
                                      b.expw.begin(), b.expw.end());
}

void Expression::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), key_less);
  std::vector<Term> merged;
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().powers == t.powers &&
        merged.back().expw == t.expw) {
      merged.back().coeff = merged.back().coeff + t.coeff;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coeff.is_zero(); });
  terms_ = std::move(merged);
}

Expression Expression::constant(int nvars, CRational c) {
  return term(std::move(c), std::vector<int>(nvars, 0));
}

Expression Expression::term(CRational coeff, std::vector<int> powers,
                            std::vector<Rational> expw) {
  Expression e(int(powers.size()));
  if (expw.empty()) expw.assign(powers.size(), Rational(0));
  if (expw.size() != powers.size()) throw Error("term vector length mismatch");
  if (!coeff.is_zero()) e.terms_.push_back({std::move(coeff), std::move(powers), std::move(expw)});
  return e;
}

bool Expression::is_constant() const {
  for (const Term& t : terms_) {
    for (int p : t.powers)
      if (p != 0) return false;
    for (const Rational& k : t.expw)
      if (k != 0) return false;
  }
  return true;
}

CRational Expression::constant_value() const {
  for (const Term& t : terms_) {
    bool c = std::all_of(t.powers.begin(), t.powers.end(), [](int p) { return p == 0; }) &&
             std::all_of(t.expw.begin(), t.expw.end(), [](const Rational& k) { return k == 0; });
    if (c) return t.coeff;
  }
  return CRational();
}

Expression& Expression::operator+=(const Expression& o) {
  if (nvars_ == 0 && terms_.empty()) nvars_ = o.nvars_;
  if (o.nvars_ != nvars_) throw Error("nvars mismatch in +");
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  canonicalize();
  return *this;
}

Expression operator-(Expression a, const Expression& b) {
  return a += b * CRational(-1L);
}

Expression operator*(const Expression& a, const CRational& s) {
  Expression r(a.nvars_);
  if (s.is_zero()) return r;
  r.terms_ = a.terms_;
  for (auto& t : r.terms_) t.coeff = t.coeff * s;
  return r;
}

Expression Expression::times_var(int var) const {
  Expression r(nvars_);
  r.terms_ = terms_;
  for (auto& t : r.terms_) t.powers[var] += 1;
  r.canonicalize();
  return r;
}

bool Expression::operator==(const Expression& o) const {
  if (nvars_ != o.nvars_ || terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (!(terms_[i].coeff == o.terms_[i].coeff) ||
        terms_[i].powers != o.terms_[i].powers || terms_[i].expw != o.terms_[i].expw)
      return false;
  }
  return true;
}

Expression differentiate(const Expression& e, int var) {
  if (var < 0 || var >= e.nvars()) throw Error("differentiate: bad var index");
  Expression out(e.nvars());
  for (const auto& t : e.terms()) {
    if (t.powers[var] > 0) {
      auto nt = t;
      nt.coeff = nt.coeff * Rational(t.powers[var]);
      nt.powers[var] -= 1;
      out += Expression::term(nt.coeff, nt.powers, nt.expw);
    }
    if (t.expw[var] != 0) {
      out += Expression::term(t.coeff * t.expw[var], t.powers, t.expw);
    }
  }
  return out;
}

double coeff_magnitude(const Expression& e) {
  double m = 0;
  for (const auto& t : e.terms()) m = std::max(m, std::abs(t.coeff.to_complex()));
  return m;
}

std::string Expression::to_term_list() const {
  std::ostringstream os;
  for (const auto& t : terms_) {
    os << to_string(t.coeff.re) << ' ' << to_string(t.coeff.im) << " |";
    for (int p : t.powers) os << ' ' << p;
    os << " |";
    for (const auto& k : t.expw) os << ' ' << to_string(k);
    os << '\n';
  }
  return os.str();
}

Expression Expression::parse_term_list(const std::string& text, int nvars) {
  Expression e(nvars);
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), '|', ' ');
    std::istringstream ls(line);
    std::string re, im;
    if (!(ls >> re >> im)) throw ParseError("bad term line: " + line);
    std::vector<int> powers(nvars);
    for (int a = 0; a < nvars; ++a)
      if (!(ls >> powers[a])) throw ParseError("bad powers in term line: " + line);
    std::vector<Rational> expw(nvars);
    for (int a = 0; a < nvars; ++a) {
      std::string k;
      if (!(ls >> k)) throw ParseError("bad exp weights in term line: " + line);
      expw[a] = parse_rational(k);
    }
    for (int p : powers)
      if (p < 0) throw ParseError("negative power in term line: " + line);
    e += Expression::term({parse_rational(re), parse_rational(im)}, powers, expw);
  }
  return e;
}

}  // namespace frob
