#include "sbt/core.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

namespace sbt {

SpaceParams SpaceParams::make(int n, double t) {
  if (n < 1) throw ConstraintError("n must be >= 1");
  if (!(t > 0.0) || !std::isfinite(t)) throw ConstraintError("t must be > 0");
  return SpaceParams{n, t};
}

double DecayBudget::log_bound(double r) const {
  if (support && (r < support->lo || r > support->hi)) return -std::numeric_limits<double>::infinity();
  return std::log(constant) + poly_degree * std::log1p(r) + gaussian_rate * r * r;
}

double DecayBudget::bound(double r) const { return std::exp(log_bound(r)); }

namespace {

double norm2(std::span<const double> p) {
  double s = 0.0;
  for (double x : p) s += x * x;
  return s;
}

void require(bool ok, const char* msg) {
  if (!ok) throw ConstraintError(msg);
}

}  // namespace

SymbolSpec SymbolSpec::one() { return SymbolSpec{}; }

SymbolSpec SymbolSpec::gauss_radial(double a) {
  require(a > -1.0, "gauss-radial: a must exceed -1");
  SymbolSpec s;
  s.kind = SymbolKind::GaussRadial;
  s.a = a;
  s.decay.gaussian_rate = -a / 2;
  return s;
}

SymbolSpec SymbolSpec::poly_gauss_radial(int p, double a) {
  require(p >= 0 && p % 2 == 0, "poly-gauss-radial: p must be an even nonnegative integer");
  require(a > -1.0, "poly-gauss-radial: a must exceed -1");
  SymbolSpec s;
  s.kind = SymbolKind::PolyGaussRadial;
  s.p = p;
  s.a = a;
  s.decay.gaussian_rate = -a / 2;
  s.decay.poly_degree = p;
  return s;
}

SymbolSpec SymbolSpec::annulus(double r0, double r1) {
  require(r0 >= 0.0 && r0 < r1, "annulus: need 0 <= r0 < r1");
  SymbolSpec s;
  s.kind = SymbolKind::Annulus;
  s.r0 = r0;
  s.r1 = r1;
  s.decay.support = Support{r0, r1};
  return s;
}

SymbolSpec SymbolSpec::gauss_yv(cplx alpha, cplx beta) {
  SymbolSpec s;
  s.kind = SymbolKind::GaussYV;
  s.alpha = alpha;
  s.beta = beta;
  s.decay.gaussian_rate = std::max(alpha.real(), beta.real());
  return s;
}

SymbolSpec SymbolSpec::gauss_y(double a) {
  require(a > 0.0, "gauss-y: a must be positive");
  SymbolSpec s;
  s.kind = SymbolKind::GaussY;
  s.a = a;
  s.decay.gaussian_rate = -a;
  return s;
}

SymbolSpec SymbolSpec::gauss_h(double c) {
  require(c > 1.0, "gauss-h: c must exceed 1");
  SymbolSpec s;
  s.kind = SymbolKind::GaussH;
  s.c = c;
  s.decay.gaussian_rate = -c;
  return s;
}

SymbolSpec SymbolSpec::group_gauss(double b) {
  require(b > 0.0, "group-gauss: b must be positive");
  SymbolSpec s;
  s.kind = SymbolKind::GroupGauss;
  s.b = b;
  s.decay.gaussian_rate = -b;
  return s;
}

bool SymbolSpec::is_radial() const {
  return kind != SymbolKind::GaussYV && kind != SymbolKind::GaussY;
}

bool SymbolSpec::is_real() const {
  return kind != SymbolKind::GaussYV || (alpha.imag() == 0.0 && beta.imag() == 0.0);
}

double SymbolSpec::radial_value(double r) const {
  switch (kind) {
    case SymbolKind::One:
      return 1.0;
    case SymbolKind::GaussRadial:
      return std::exp(-a * r * r / 2);
    case SymbolKind::PolyGaussRadial:
      return std::pow(r, p) * std::exp(-a * r * r / 2);
    case SymbolKind::Annulus:
      return (r >= r0 && r < r1) ? 1.0 : 0.0;
    case SymbolKind::GaussH:
      return std::exp(-c * r * r);
    case SymbolKind::GroupGauss:
      return std::exp(-b * r * r);
    default:
      throw ConstraintError(std::string(name()) + " is not a radial symbol");
  }
}

cplx SymbolSpec::value(std::span<const double> point) const {
  switch (kind) {
    case SymbolKind::GaussYV: {
      if (point.size() % 2 != 0) throw ShapeError("gauss-yv needs an even-dimensional point (y, v)");
      std::size_t h = point.size() / 2;
      return std::exp(alpha * norm2(point.first(h)) + beta * norm2(point.subspan(h)));
    }
    case SymbolKind::GaussY:
      return std::exp(-a * norm2(point));
    default:
      return radial_value(std::sqrt(norm2(point)));
  }
}

std::string_view SymbolSpec::name() const {
  switch (kind) {
    case SymbolKind::One: return "one";
    case SymbolKind::GaussRadial: return "gauss-radial";
    case SymbolKind::PolyGaussRadial: return "poly-gauss-radial";
    case SymbolKind::Annulus: return "annulus";
    case SymbolKind::GaussYV: return "gauss-yv";
    case SymbolKind::GaussY: return "gauss-y";
    case SymbolKind::GaussH: return "gauss-h";
    case SymbolKind::GroupGauss: return "group-gauss";
  }
  return "?";
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string format_complex(cplx z) {
  std::string im = format_double(z.imag());
  if (im.front() != '-') im.insert(im.begin(), '+');
  return format_double(z.real()) + im + "i";
}

std::string SymbolSpec::render() const {
  std::string out(name());
  switch (kind) {
    case SymbolKind::One: break;
    case SymbolKind::GaussRadial: out += ":a=" + format_double(a); break;
    case SymbolKind::PolyGaussRadial: out += ":p=" + std::to_string(p) + ",a=" + format_double(a); break;
    case SymbolKind::Annulus: out += ":r0=" + format_double(r0) + ",r1=" + format_double(r1); break;
    case SymbolKind::GaussYV: out += ":alpha=" + format_complex(alpha) + ",beta=" + format_complex(beta); break;
    case SymbolKind::GaussY: out += ":a=" + format_double(a); break;
    case SymbolKind::GaussH: out += ":c=" + format_double(c); break;
    case SymbolKind::GroupGauss: out += ":b=" + format_double(b); break;
  }
  return out;
}

std::string render_symbol(const SymbolSpec& s) { return s.render(); }

namespace {

double parse_real(std::string_view tok) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v))
    throw ParseError("invalid number '" + std::string(tok) + "'");
  return v;
}

int parse_uint(std::string_view tok) {
  int v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size() || v < 0)
    throw ParseError("invalid nonnegative integer '" + std::string(tok) + "'");
  return v;
}

}  // namespace

cplx parse_complex(std::string_view tok) {
  if (tok.empty()) throw ParseError("empty complex literal");
  if (tok.back() != 'i') return {parse_real(tok), 0.0};
  std::string_view body = tok.substr(0, tok.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  try {
    if (split == std::string_view::npos) return {0.0, parse_real(body)};
    std::string_view im = body.substr(split);
    if (im.front() == '+') im.remove_prefix(1);
    return {parse_real(body.substr(0, split)), parse_real(im)};
  } catch (const ParseError&) {
    throw ParseError("invalid complex literal '" + std::string(tok) + "'");
  }
}

SymbolSpec parse_symbol(std::string_view text) {
  std::string_view head = text.substr(0, text.find(':'));
  std::map<std::string, std::string, std::less<>> kv;
  if (head.size() < text.size()) {
    std::string_view rest = text.substr(head.size() + 1);
    if (rest.empty()) throw ParseError("missing parameters after '" + std::string(head) + ":'");
    while (true) {
      std::size_t comma = rest.find(',');
      std::string_view item = rest.substr(0, comma);
      std::size_t eq = item.find('=');
      if (eq == std::string_view::npos || eq == 0)
        throw ParseError("expected key=value, got '" + std::string(item) + "'");
      auto [it, fresh] = kv.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
      if (!fresh) throw ParseError("duplicate key '" + it->first + "'");
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  }
  auto take = [&](const char* key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(std::string("missing parameter '") + key + "' for '" + std::string(head) + "'");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  SymbolSpec s;
  if (head == "one") {
    s = SymbolSpec::one();
  } else if (head == "gauss-radial") {
    s = SymbolSpec::gauss_radial(parse_real(take("a")));
  } else if (head == "poly-gauss-radial") {
    int p = parse_uint(take("p"));
    s = SymbolSpec::poly_gauss_radial(p, parse_real(take("a")));
  } else if (head == "annulus") {
    double r0 = parse_real(take("r0"));
    s = SymbolSpec::annulus(r0, parse_real(take("r1")));
  } else if (head == "gauss-yv") {
    cplx al = parse_complex(take("alpha"));
    s = SymbolSpec::gauss_yv(al, parse_complex(take("beta")));
  } else if (head == "gauss-y") {
    s = SymbolSpec::gauss_y(parse_real(take("a")));
  } else if (head == "gauss-h") {
    s = SymbolSpec::gauss_h(parse_real(take("c")));
  } else if (head == "group-gauss") {
    s = SymbolSpec::group_gauss(parse_real(take("b")));
  } else {
    throw ParseError("unknown symbol family '" + std::string(head) + "'");
  }
  if (!kv.empty()) throw ParseError("unexpected parameter '" + kv.begin()->first + "'");
  return s;
}

RadialProfile to_profile(const SymbolSpec& s) {
  if (!s.is_radial()) throw ConstraintError(std::string(s.name()) + " is not a radial symbol");
  return RadialProfile{[s](double r) { return cplx(s.radial_value(r), 0.0); }, s.decay};
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Bounded: return "Bounded";
    case Verdict::Unbounded: return "Unbounded";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

VerdictFit classify_verdict(std::span<const SequenceEntry> entries, double delta) {
  if (entries.size() < 12) throw InsufficientDataError("verdict needs at least 12 entries");
  std::size_t tail = entries.size() / 3;
  std::size_t first = entries.size() - tail;
  Eigen::MatrixXd A(tail, 3);
  Eigen::VectorXd y(tail);
  bool all_zero = true;
  for (std::size_t i = 0; i < tail; ++i) {
    const auto& e = entries[first + i];
    double mag = std::abs(e.value);
    if (mag > 0.0) all_zero = false;
    A(i, 0) = 1.0;
    A(i, 1) = std::log(std::max(e.k, 1));
    A(i, 2) = e.k;
    y(i) = std::log(std::max(mag, 1e-300));
  }
  VerdictFit fit;
  if (all_zero) {
    fit.verdict = Verdict::Bounded;
    return fit;
  }
  Eigen::Vector3d c = A.colPivHouseholderQr().solve(y);
  fit.power = c(1);
  fit.ratio = std::exp(c(2));
  double rho = fit.ratio, p = fit.power;
  if (rho < 1 - delta || (std::abs(rho - 1) <= delta && p <= delta))
    fit.verdict = Verdict::Bounded;
  else if (rho > 1 + delta || (std::abs(rho - 1) <= delta && p > 2 * delta))
    fit.verdict = Verdict::Unbounded;
  else
    fit.verdict = Verdict::Inconclusive;
  return fit;
}

SequenceReport make_report(std::vector<SequenceEntry> entries, double delta) {
  SequenceReport r;
  for (const auto& e : entries) r.sup_abs = std::max(r.sup_abs, std::abs(e.value));
  if (entries.size() >= 12) {
    VerdictFit f = classify_verdict(entries, delta);
    r.verdict = f.verdict;
    r.tail_ratio = f.ratio;
    r.tail_power = f.power;
  } else {
    r.tail_ratio = std::numeric_limits<double>::quiet_NaN();
    r.tail_power = std::numeric_limits<double>::quiet_NaN();
  }
  r.entries = std::move(entries);
  return r;
}

}  // namespace sbt
