#include "frob/frobenius.hpp"

#include <random>
#include <sstream>

namespace frob {

FrobeniusSpec::FrobeniusSpec(std::string name, int nvars, Expression F,
                             std::vector<std::vector<Rational>> euler_matrix,
                             std::vector<Rational> euler_shift, Rational charge_d,
                             std::vector<CRational> base_point)
    : name_(std::move(name)),
      N_(nvars),
      F_(std::move(F)),
      A_(std::move(euler_matrix)),
      b_(std::move(euler_shift)),
      d_(std::move(charge_d)),
      base_(std::move(base_point)) {
  if (N_ < 1) throw Error("nvars must be >= 1");
  if (F_.nvars() != N_) throw Error("prepotential nvars mismatch");
  if (int(A_.size()) != N_ || int(b_.size()) != N_)
    throw Error("euler field dimension mismatch");
  for (auto& row : A_)
    if (int(row.size()) != N_) throw Error("euler matrix not square");
  if (base_.empty()) base_.assign(N_, CRational());
  if (int(base_.size()) != N_) throw Error("base point dimension mismatch");
  precompute_partials(5);
}

void FrobeniusSpec::precompute_partials(int max_order) const {
  partials_[{}] = F_;
  std::vector<std::vector<int>> level = {{}};
  for (int ord = 1; ord <= max_order; ++ord) {
    std::vector<std::vector<int>> next;
    for (const auto& idx : level) {
      int lo = idx.empty() ? 0 : idx.back();
      for (int a = lo; a < N_; ++a) {
        auto nidx = idx;
        nidx.push_back(a);
        partials_[nidx] = differentiate(partials_.at(idx), a);
        next.push_back(std::move(nidx));
      }
    }
    level = std::move(next);
  }
}

const Expression& FrobeniusSpec::partial(std::vector<int> idx) const {
  std::sort(idx.begin(), idx.end());
  {
    std::shared_lock lock(*partials_mutex_);
    auto it = partials_.find(idx);
    if (it != partials_.end()) return it->second;
  }
  std::vector<int> base = idx;
  base.pop_back();
  const Expression& lower = partial(base);
  std::unique_lock lock(*partials_mutex_);
  auto [ins, ok] = partials_.emplace(idx, differentiate(lower, idx.back()));
  return ins->second;
}

const std::vector<std::vector<CRational>>& FrobeniusSpec::eta_exact() const {
  if (eta_) return *eta_;
  std::vector<std::vector<CRational>> m(N_, std::vector<CRational>(N_));
  for (int a = 0; a < N_; ++a)
    for (int b = a; b < N_; ++b) {
      const Expression& e = partial({0, a, b});
      if (!e.is_constant())
        throw NonConstantEta("F_{1," + std::to_string(a + 1) + "," +
                             std::to_string(b + 1) + "} is not constant");
      m[a][b] = m[b][a] = e.constant_value();
    }
  eta_ = std::move(m);
  return *eta_;
}

ValidationReport validate_spec(const FrobeniusSpec& spec, int samples, uint64_t seed) {
  const int N = spec.nvars();
  ValidationReport rep;
  rep.eta = spec.eta<cxd>();
  double det = std::abs(rep.eta.determinant());
  if (det < 1e-12)
    throw DegenerateMetric("det eta = " + std::to_string(det));

  Eigen::MatrixXcd eta_inv = rep.eta.inverse();

  // WDVV at sampled complex points
  std::mt19937_64 rng(seed);
  auto unit = [&]() {
    return 2.0 * (double(rng() >> 11) * 0x1.0p-53) - 1.0;
  };
  for (int s = 0; s < samples; ++s) {
    VecX<cxd> pt(N);
    for (int a = 0; a < N; ++a) pt[a] = cxd(unit(), unit());
    Tensor<cxd> F3 = spec.partials_at(pt, 3);
    double scale = 0.0;
    for (const auto& v : F3.v) scale = std::max(scale, std::abs(v));
    scale = std::max(scale, 1.0);
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        for (int c = 0; c < N; ++c)
          for (int d = 0; d < N; ++d) {
            cxd lhs{}, rhs{};
            for (int m = 0; m < N; ++m)
              for (int n = 0; n < N; ++n) {
                lhs += F3(a, b, m) * eta_inv(m, n) * F3(n, c, d);
                rhs += F3(d, b, m) * eta_inv(m, n) * F3(n, c, a);
              }
            rep.max_wdvv = std::max(rep.max_wdvv, std::abs(lhs - rhs) / scale);
          }
  }

  // quasi-homogeneity: E.F - (3-d) F must be polynomial of degree <= 2
  Expression EF(N);
  for (int a = 0; a < N; ++a) {
    Expression dFa = spec.partial({a});
    Expression term = dFa * CRational(spec.euler_shift()[a]);
    for (int b = 0; b < N; ++b) {
      const Rational& Aab = spec.euler_matrix()[a][b];
      if (Aab != 0) term += dFa.times_var(b) * CRational(Aab);
    }
    EF += term;
  }
  Expression resid = EF - spec.prepotential() * CRational(Rational(3) - spec.charge_d());
  Expression bad(N);
  for (const auto& t : resid.terms()) {
    int deg = 0;
    bool has_exp = false;
    for (int p : t.powers) deg += p;
    for (const auto& k : t.expw)
      if (k != 0) has_exp = true;
    if (deg > 2 || has_exp)
      bad += Expression::term(t.coeff, t.powers, t.expw);
  }
  rep.max_homogeneity = coeff_magnitude(bad);

  rep.passed = rep.max_wdvv < 1e-10 && rep.max_homogeneity < 1e-12;
  if (!rep.passed) {
    std::ostringstream os;
    os << "validation failed: max WDVV residual " << rep.max_wdvv
       << ", homogeneity residual " << rep.max_homogeneity;
    rep.message = os.str();
  }
  return rep;
}

// ----------------------------------------------------------------- parsing

namespace {
std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<Rational> parse_rational_row(const std::string& s) {
  std::istringstream is(s);
  std::vector<Rational> out;
  std::string tok;
  while (is >> tok) out.push_back(parse_rational(tok));
  return out;
}

CRational parse_crational(const std::string& tok) {
  auto comma = tok.find(',');
  if (comma == std::string::npos) return CRational(parse_rational(tok));
  return {parse_rational(tok.substr(0, comma)), parse_rational(tok.substr(comma + 1))};
}
}  // namespace

FrobeniusSpec FrobeniusSpec::parse(const std::string& text) {
  std::istringstream lines(text);
  std::string line;
  std::map<std::string, std::string> kv;
  std::string prepotential;
  bool in_prep = false;
  while (std::getline(lines, line)) {
    std::string t = trim(line);
    if (in_prep) {
      if (t == "end") { in_prep = false; continue; }
      prepotential += t + "\n";
      continue;
    }
    if (t.empty() || t[0] == '#') continue;
    auto colon = t.find(':');
    if (colon == std::string::npos) throw ParseError("expected 'key: value': " + t);
    std::string key = trim(t.substr(0, colon));
    std::string val = trim(t.substr(colon + 1));
    if (key == "prepotential") { in_prep = true; continue; }
    kv[key] = val;
  }
  if (in_prep) throw ParseError("prepotential block missing 'end'");
  for (const char* req : {"name", "nvars", "charge_d", "euler_matrix", "euler_shift"})
    if (!kv.count(req)) throw ParseError(std::string("missing field: ") + req);

  int N = 0;
  try { N = std::stoi(kv["nvars"]); } catch (...) { throw ParseError("bad nvars"); }
  if (N < 1 || N > 16) throw ParseError("nvars out of range");

  std::vector<std::vector<Rational>> A;
  {
    std::istringstream rows(kv["euler_matrix"]);
    std::string row;
    while (std::getline(rows, row, ';')) A.push_back(parse_rational_row(row));
  }
  std::vector<Rational> b = parse_rational_row(kv["euler_shift"]);
  Expression F = Expression::parse_term_list(prepotential, N);

  std::vector<CRational> base;
  if (kv.count("base_point")) {
    std::istringstream is(kv["base_point"]);
    std::string tok;
    while (is >> tok) base.push_back(parse_crational(tok));
  }
  if (int(A.size()) != N || int(b.size()) != N)
    throw ParseError("euler field dimensions do not match nvars");
  for (auto& row : A)
    if (int(row.size()) != N) throw ParseError("euler_matrix row length mismatch");
  try {
    return FrobeniusSpec(kv["name"], N, std::move(F), std::move(A), std::move(b),
                         parse_rational(kv["charge_d"]), std::move(base));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

std::string FrobeniusSpec::serialize() const {
  std::ostringstream os;
  os << "name: " << name_ << "\n";
  os << "nvars: " << N_ << "\n";
  os << "charge_d: " << to_string(d_) << "\n";
  os << "euler_matrix: ";
  for (int a = 0; a < N_; ++a) {
    if (a) os << " ; ";
    for (int b = 0; b < N_; ++b) os << (b ? " " : "") << to_string(A_[a][b]);
  }
  os << "\n";
  os << "euler_shift: ";
  for (int a = 0; a < N_; ++a) os << (a ? " " : "") << to_string(b_[a]);
  os << "\n";
  os << "base_point: ";
  for (int a = 0; a < N_; ++a)
    os << (a ? " " : "") << to_string(base_[a].re) << "," << to_string(base_[a].im);
  os << "\n";
  os << "prepotential:\n" << F_.to_term_list() << "end\n";
  return os.str();
}

}  // namespace frob
