#include "sbt/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "sbt/compact_group.hpp"
#include "sbt/fock.hpp"
#include "sbt/hermite_bergman.hpp"
#include "sbt/parallel.hpp"
#include "sbt/specfun.hpp"
#include "sbt/twisted_bergman.hpp"

namespace sbt::cli {

using nlohmann::json;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = count == 1 ? a : a + (b - a) * i / (count - 1);
  return out;
}

std::vector<int> pick_n(const VerifyOptions& o, std::vector<int> d) { return o.n ? std::vector<int>{*o.n} : d; }
std::vector<double> pick_t(const VerifyOptions& o, std::vector<double> d) {
  return o.t ? std::vector<double>{*o.t} : d;
}

CheckResult make_result(std::string name, json params, json measured, double tol, bool pass) {
  return CheckResult{std::move(name), std::move(params), std::move(measured), tol, pass};
}

// Direct and heat-flow radial sequences.
CheckResult check_lemma22(const VerifyOptions& o) {
  const double tol = o.tol.value_or(1e-6);
  const auto ns = pick_n(o, {1, 2});
  const int kmax = o.kmax.value_or(20);
  const std::vector<std::string> symbols = {"gauss-radial:a=1", "poly-gauss-radial:p=2,a=1", "annulus:r0=1,r1=2"};
  double worst = 0.0;
  for (const auto& s : symbols) {
    SymbolSpec g = parse_symbol(s);
    for (int n : ns) {
      SequenceReport d = radial_seq_direct(g, n, kmax), h = radial_seq_heatflow(g, n, kmax);
      for (int k = 0; k <= kmax; ++k) worst = std::max(worst, rel(h.entries[k].value, d.entries[k].value));
    }
  }
  return make_result("lemma22", {{"symbols", symbols}, {"n", ns}, {"kmax", kmax}}, {{"max_rel_err", worst}}, tol,
                     worst <= tol);
}

CheckResult check_identity_one(const VerifyOptions& o) {
  const double tol = o.tol.value_or(1e-10);
  const auto ns = pick_n(o, {1, 2});
  const int kmax = o.kmax.value_or(30);
  const double t = o.t.value_or(0.25);
  double worst = 0.0;
  auto scan = [&](const SequenceReport& r) {
    for (const auto& e : r.entries) worst = std::max(worst, std::abs(e.value - 1.0));
  };
  for (int n : ns) {
    scan(radial_seq_direct(SymbolSpec::one(), n, kmax));
    scan(radial_seq_heatflow(SymbolSpec::one(), n, kmax));
    scan(diag_seq(SymbolSpec::one(), SpaceParams::make(n, t), kmax));
  }
  return make_result("identity-one", {{"n", ns}, {"t", t}, {"kmax", kmax}}, {{"max_abs_dev", worst}}, tol,
                     worst <= tol);
}

// Both heat-Bergman multiplier routes and the Gaussian closed form.
CheckResult check_thm24(const VerifyOptions& o) {
  const double tol = o.tol.value_or(1e-8);
  const double closed_tol = tol / 10;
  const auto ts = pick_t(o, {0.25, 0.5});
  const std::vector<double> as = {0.5, 1.0, 2.0};
  double disc = 0.0, closed = 0.0;
  for (double a : as)
    for (double t : ts)
      for (int i = 0; i <= 20; ++i) {
        std::vector<double> xi = {-3.0 + 0.3 * i};
        SymbolSpec g = SymbolSpec::gauss_y(a);
        MultiplierRoutes r = heat_bergman_multiplier(g, t, xi);
        disc = std::max(disc, r.discrepancy);
        double c = 1 + 2 * t * a, at = 2 * t * xi[0];
        closed = std::max(closed, rel(r.tilted, std::pow(c, -0.5) * std::exp(-a * at * at / c)));
        closed = std::max(closed, rel(heat_flow(g, t / 2, xi), std::pow(c, -0.5) * std::exp(-a * xi[0] * xi[0] / c)));
      }
  return make_result("thm24", {{"a", as}, {"t", ts}, {"xi_points", 21}},
                     {{"max_route_discrepancy", disc}, {"max_closed_form_err", closed}, {"closed_form_tol", closed_tol}},
                     tol, disc <= tol && closed <= closed_tol);
}

CheckResult check_berezin(const VerifyOptions& o) {
  const double tol = o.tol.value_or(1e-5);
  const double t = o.t.value_or(0.25);
  const auto p = SpaceParams::make(1, t);
  const SymbolSpec g = parse_symbol("gauss-radial:a=1");
  std::mt19937 gen(20240611);
  auto uniform = [&] { return gen() / 4294967296.0; };
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    double r = 2 * std::sqrt(uniform()), th = 2 * M_PI * uniform();
    BerezinRoutes b = berezin(g, p, std::polar(r, th));
    worst = std::max(worst, rel(b.quadrature, b.heatflow));
  }
  return make_result("berezin", {{"n", 1}, {"t", t}, {"symbol", g.render()}, {"points", 20}},
                     {{"max_rel_err", worst}}, tol, worst <= tol);
}

CheckResult check_example36(const VerifyOptions& o) {
  const double tol = o.tol.value_or(1e-8);
  const int kmax = o.kmax.value_or(20);
  int mismatches = 0;
  double worst = 0.0;
  for (double t : linspace(0.1, 0.5, 5)) {
    const double s4 = std::sinh(4 * t);
    for (double a : linspace(-1.0, 0.5, 7)) {
      Example36Result ex = example36(a, t, 1, kmax);
      bool bounded = a * a * s4 - 2 * a >= 0;
      if (ex.verdict != (bounded ? Verdict::Bounded : Verdict::Unbounded)) ++mismatches;
      const auto& e = ex.sequence.entries;
      for (std::size_t k = 0; k + 1 < e.size(); ++k) worst = std::max(worst, rel(e[k + 1].value / e[k].value, ex.ratio));
    }
  }
  return make_result("example36", {{"alpha", "7 points in [-1, 0.5]"}, {"t", "5 points in [0.1, 0.5]"}, {"kmax", kmax}},
                     {{"verdict_mismatches", mismatches}, {"max_ratio_err", worst}}, tol,
                     mismatches == 0 && worst <= tol);
}

// Symbol map of compatible and perturbed Gaussian pairs, and the h-profile.
CheckResult check_radiality(const VerifyOptions& o) {
  const double tol = o.tol.value_or(1e-8);
  const auto ts = pick_t(o, {0.1, 0.25, 0.5});
  const auto radii = linspace(0.2, 2.0, 6);
  double good_dev = 0.0, bad_dev = INFINITY, remark_dev = INFINITY;
  bool ok = true;
  for (double t : ts) {
    auto p = SpaceParams::make(1, t);
    for (cplx alpha : {cplx(0.3), cplx(-0.1), cplx(0.2, 0.1)}) {
      cplx beta = example36(alpha, t).beta;
      auto map = [&](cplx b) {
        auto g = SymbolSpec::gauss_yv(alpha, b);
        return [g, p](std::span<const double> q) { return weyl_symbol_map(g, p, q.first(1), q.subspan(1)); };
      };
      auto good = radiality_check(map(beta), 2, radii, 32, tol);
      auto bad = radiality_check(map(1.1 * beta), 2, radii, 32, tol);
      auto remark = radiality_check(remark38_profile(alpha, 1.1 * beta, t), 2, radii, 32, tol);
      ok = ok && good.is_radial && !bad.is_radial && !remark.is_radial;
      good_dev = std::max(good_dev, good.max_rel_dev);
      bad_dev = std::min(bad_dev, bad.max_rel_dev);
      remark_dev = std::min(remark_dev, remark.max_rel_dev);
    }
  }
  return make_result("radiality", {{"t", ts}, {"alpha", {"0.3", "-0.1", "0.2+0.1i"}}, {"perturbation", 0.1}},
                     {{"max_dev_compatible", good_dev}, {"min_dev_perturbed", bad_dev}, {"min_dev_remark38", remark_dev}},
                     tol, ok);
}

CheckResult check_gutzmer_hermite(const VerifyOptions& o) {
  const double tol = o.tol.value_or(1e-4);
  using Set = std::vector<std::pair<int, cplx>>;
  const std::vector<Set> sets = {
      {{0, 1.0}},
      {{1, 1.0}},
      {{0, 1.0}, {1, 2.0}},
      {{0, cplx(0.3, -0.1)}, {2, cplx(-1.0, 0.5)}, {3, 0.7}, {6, cplx(0.0, 0.4)}},
      {{2, 1.0}, {4, -0.5}},
      {{1, cplx(0.2, 0.2)}, {5, 1.0}, {8, cplx(0.0, -0.3)}},
  };
  const std::vector<double> grid = {-1.0, 0.0, 1.0};
  double worst = 0.0;
  for (const auto& s : sets)
    for (double y : grid)
      for (double v : grid) {
        auto g = gutzmer_hermite_n1(s, y, v);
        worst = std::max(worst, std::abs(g.lhs - g.rhs) / g.rhs);
      }
  return make_result("gutzmer-hermite", {{"coefficient_sets", sets.size()}, {"grid", grid}}, {{"max_rel_err", worst}},
                     tol, worst <= tol);
}

CheckResult check_gutzmer_twisted(const VerifyOptions& o) {
  const double tol = o.tol.value_or(1e-4);
  using Set = std::vector<TwistedCoefficient>;
  const std::vector<Set> sets = {
      {{0, 0, 1.0}},
      {{0, 1, 1.0}},
      {{0, 0, 1.0}, {0, 1, 1.0}},
      {{1, 0, cplx(0.0, 0.5)}, {2, 1, 1.0}},
      {{1, 1, 1.0}, {0, 2, -0.5}},
      {{2, 2, cplx(0.3, 0.4)}, {1, 0, 1.0}, {0, 1, -1.0}},
  };
  const std::vector<double> grid = {-1.0, 0.0, 1.0};
  double worst = 0.0;
  for (const auto& s : sets)
    for (double y : grid)
      for (double v : grid) {
        auto g = gutzmer_twisted_n1(s, y, v);
        worst = std::max(worst, std::abs(g.lhs - g.rhs) / g.rhs);
      }
  return make_result("gutzmer-twisted", {{"coefficient_sets", sets.size()}, {"grid", grid}}, {{"max_rel_err", worst}},
                     tol, worst <= tol);
}

CheckResult check_identity37(const VerifyOptions& o) {
  const double tol = o.tol.value_or(1e-6);
  const double kappa_tol = tol / 100;
  const auto ns = pick_n(o, {1, 2});
  const auto ts = pick_t(o, {0.1, 0.25, 0.5});
  const int kmax = o.kmax.value_or(20);
  double worst = 0.0, spread = 0.0;
  json kappas = json::object();
  for (int n : ns) {
    double k0 = 0.0;
    for (double t : ts) {
      auto r = verify_identity_37(SpaceParams::make(n, t), kmax);
      worst = std::max(worst, r.max_rel_err);
      if (k0 == 0.0) k0 = r.kappa.kappa;
      spread = std::max(spread, std::abs(r.kappa.kappa / k0 - 1));
      kappas["n=" + std::to_string(n)] = k0;
    }
  }
  json measured = {{"max_rel_err", worst}, {"kappa_spread", spread}, {"kappa_tol", kappa_tol}};
  measured["kappa"] = ns.size() == 1 ? kappas.begin().value() : kappas;
  return make_result("identity37", {{"n", ns}, {"t", ts}, {"kmax", kmax}}, measured, tol,
                     worst <= tol && spread <= kappa_tol);
}

CheckResult check_lemma43(const VerifyOptions& o) {
  const double tol = o.tol.value_or(1e-5);
  const auto ts = pick_t(o, {0.25, 0.5});
  const int kmax = o.kmax.value_or(4);
  double worst = 0.0;
  for (double t : ts)
    for (int k = 0; k <= kmax; ++k)
      for (auto [x, u] : {std::pair{0.0, 0.0}, {1.0, 0.0}, {0.5, 0.5}}) {
        auto r = verify_lemma_43(SpaceParams::make(1, t), k, x, u);
        worst = std::max(worst, rel(r.lhs, r.rhs));
      }
  return make_result("lemma43", {{"t", ts}, {"kmax", kmax}, {"points", {{0, 0}, {1, 0}, {0.5, 0.5}}}},
                     {{"max_rel_err", worst}}, tol, worst <= tol);
}

// Twisted matrix entries on the basis {(0,0), (1,0), (0,1), (1,1)}.
CheckResult check_diagonality(const VerifyOptions& o) {
  const double tol = o.tol.value_or(1e-6);
  const double diag_tol = 10 * tol;
  const double t = o.t.value_or(0.25);
  const auto p = SpaceParams::make(1, t);
  const SymbolSpec g0 = SymbolSpec::gauss_radial(2.0);
  const std::vector<std::pair<int, int>> basis = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const double kappa = verify_identity_37(p, 0).kappa.kappa;
  auto seq = diag_seq(g0, p, 1);
  double off = 0.0, diag = 0.0;
  for (auto [a, b] : basis)
    for (auto [m, nu] : basis) {
      cplx e = matrix_entry_twisted(g0, p, a, b, m, nu);
      if (a == m && b == nu)
        diag = std::max(diag, rel(e, kappa * seq.entries[b].value));
      else
        off = std::max(off, std::abs(e));
    }
  return make_result("diagonality", {{"n", 1}, {"t", t}, {"symbol", "e^{-r^2}"}, {"basis_size", basis.size()}},
                     {{"max_off_diagonal", off}, {"max_diagonal_rel_err", diag}, {"diagonal_tol", diag_tol},
                      {"kappa", kappa}},
                     tol, off <= tol && diag <= diag_tol);
}

// Twisted-translation invariance, with an x-dependent negative control.
CheckResult check_invariance48(const VerifyOptions& o) {
  const double tol = o.tol.value_or(1e-4);
  const double control_min = 1e-2;
  const double t = o.t.value_or(0.25);
  const auto p = SpaceParams::make(1, t);
  auto g = twisted_symbol(SymbolSpec::gauss_radial(2.0));
  const std::vector<std::pair<double, double>> shifts = {{0.5, 0.3}, {-1.0, 0.8}, {0.25, -0.6}};
  double worst = 0.0;
  for (auto [a, b] : shifts) worst = std::max(worst, invariance_check_48(g, -1.0, p, a, b, 1));
  TwistedSymbol gx = [](double x, double y, double, double v) { return cplx((1 + x * x) * std::exp(-y * y - v * v)); };
  double control = invariance_check_48(gx, -1.0, p, 0.5, 0.3, 1);
  return make_result("invariance48", {{"t", t}, {"shifts", shifts}, {"max_index", 1}},
                     {{"max_deviation", worst}, {"control_deviation", control}, {"control_min", control_min}}, tol,
                     worst <= tol && control > control_min);
}

CheckResult check_group_relation(const VerifyOptions& o) {
  const double tol = o.tol.value_or(1e-8);
  const auto ts = pick_t(o, {0.25, 0.5});
  std::vector<double> lambdas;
  for (int i = 1; i <= 10; ++i) lambdas.push_back(0.5 * i);
  double spread = 0.0;
  for (double t : ts) spread = std::max(spread, verify_defining_relation(RankOneModel::make(1.0, 0.5, t), lambdas).max_rel_spread);
  return make_result("group-relation", {{"t", ts}, {"rho", 1.0}, {"lambda", lambdas}}, {{"max_rel_spread", spread}},
                     tol, spread <= tol);
}

CheckResult check_criterion55(const VerifyOptions& o) {
  const double tol = o.tol.value_or(1e-10);
  const auto ts = pick_t(o, {0.25, 0.5});
  double worst = 0.0;
  bool bounded = true;
  for (double t : ts) {
    auto m = RankOneModel::make(1.0, 0.5, t);
    auto grid = m.lattice(30);
    auto r = criterion_55(SymbolSpec::one(), m, grid);
    double expect = 4 * t * std::sqrt(8 * M_PI * t);
    for (const auto& e : r.entries) worst = std::max(worst, std::abs(e.value.real() - expect) / expect);
    bounded = bounded && r.verdict == Verdict::Bounded;
  }
  return make_result("criterion55", {{"t", ts}, {"rho", 1.0}, {"lattice_step", 0.5}, {"points", 30}, {"g0", "one"}},
                     {{"max_rel_err", worst}, {"bounded", bounded}}, tol, worst <= tol && bounded);
}

// L^1 growth exponent of the normalized Laguerre functions.
CheckResult check_laguerre_exponent(const VerifyOptions& o) {
  const double tol = o.tol.value_or(0.1);
  const std::vector<int> ks = {100, 141, 200, 283, 400, 566, 800};
  json fitted = json::object();
  double worst = 0.0;
  for (double beta : {0.0, 1.0}) {
    double e = laguerre_l1_exponent(beta, 1, ks).exponent;
    fitted["beta=" + format_double(beta)] = e;
    worst = std::max(worst, std::abs(e - (0.5 - beta / 2)));
  }
  return make_result("laguerre-exponent", {{"n", 1}, {"k", ks}}, {{"exponents", fitted}, {"max_abs_dev", worst}},
                     tol, worst <= tol);
}

using CheckFn = CheckResult (*)(const VerifyOptions&);
const std::vector<std::pair<std::string, CheckFn>>& registry() {
  static const std::vector<std::pair<std::string, CheckFn>> r = {
      {"lemma22", check_lemma22},
      {"identity-one", check_identity_one},
      {"thm24", check_thm24},
      {"berezin", check_berezin},
      {"example36", check_example36},
      {"radiality", check_radiality},
      {"gutzmer-hermite", check_gutzmer_hermite},
      {"gutzmer-twisted", check_gutzmer_twisted},
      {"identity37", check_identity37},
      {"lemma43", check_lemma43},
      {"diagonality", check_diagonality},
      {"invariance48", check_invariance48},
      {"group-relation", check_group_relation},
      {"criterion55", check_criterion55},
      {"laguerre-exponent", check_laguerre_exponent},
  };
  return r;
}

// ---- computations -------------------------------------------------------

struct Flags {
  std::string space, action;
  int n = 1;
  double t = 0.25;
  std::string symbol;
  int kmax = 20;
  std::string out;
  std::string format;
  std::optional<double> tol;
  unsigned threads = 0;
  std::string alpha = "0.1";
  std::string route = "direct";
  std::vector<std::string> only;
  double rho = 1.0;
  double step = 0.5;
  int count = 21;
  std::string z = "0.5+0.5i";
  double xi = 0.5;
  bool n_set = false, t_set = false, kmax_set = false;
};

std::string fmt_approx(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json base_params(const Flags& f) {
  json p = {{"n", f.n}, {"t", f.t}, {"kmax", f.kmax}};
  if (!f.symbol.empty()) p["symbol"] = f.symbol;
  return p;
}

struct Output {
  std::string body;
  std::string summary;
};

Output sequence_output(const Flags& f, const SequenceReport& r) {
  Output o;
  if (f.format == "json") {
    json entries = json::array();
    for (const auto& e : r.entries) entries.push_back({{"k", e.k}, {"re", e.value.real()}, {"im", e.value.imag()}});
    json j = {{"schema_version", kSchemaVersion},
              {"command", f.space + " " + f.action},
              {"params", base_params(f)},
              {"entries", entries},
              {"sup_abs", r.sup_abs},
              {"verdict", std::string(to_string(r.verdict))},
              {"tail_ratio", r.tail_ratio},
              {"tail_power", r.tail_power}};
    o.body = j.dump(2) + "\n";
  } else {
    std::string s = "k,value_re,value_im,abs\n";
    for (const auto& e : r.entries)
      s += std::to_string(e.k) + "," + format_double(e.value.real()) + "," + format_double(e.value.imag()) + "," +
           format_double(std::abs(e.value)) + "\n";
    o.body = std::move(s);
  }
  o.summary = "verdict=" + std::string(to_string(r.verdict)) + " ratio≈" + fmt_approx(r.tail_ratio);
  return o;
}

Output group_output(const Flags& f, const std::vector<double>& lambdas, const std::vector<double>& values,
                    const std::string& verdict) {
  Output o;
  const double base = std::abs(values.front());
  if (f.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < values.size(); ++i)
      rows.push_back({{"lambda", lambdas[i]}, {"value", values[i]}, {"bound_ratio", std::abs(values[i]) / base}});
    json j = {{"schema_version", kSchemaVersion},
              {"command", f.space + " " + f.action},
              {"params", {{"t", f.t}, {"rho", f.rho}, {"lattice_step", f.step}, {"count", f.count}, {"symbol", f.symbol}}},
              {"rows", rows}};
    if (!verdict.empty()) j["verdict"] = verdict;
    o.body = j.dump(2) + "\n";
  } else {
    std::string s = "lambda,value,bound_ratio\n";
    for (std::size_t i = 0; i < values.size(); ++i)
      s += format_double(lambdas[i]) + "," + format_double(values[i]) + "," + format_double(std::abs(values[i]) / base) +
           "\n";
    o.body = std::move(s);
  }
  o.summary = (verdict.empty() ? "" : "verdict=" + verdict + " ") + "last_bound_ratio≈" +
              fmt_approx(std::abs(values.back()) / base);
  return o;
}

Output json_output(json j) { return {j.dump(2) + "\n", ""}; }

Output run_fock(const Flags& f) {
  SymbolSpec g = parse_symbol(f.symbol);
  if (f.action == "radial-seq") {
    return sequence_output(f, f.route == "heatflow" ? radial_seq_heatflow(g, f.n, f.kmax)
                                                    : radial_seq_direct(g, f.n, f.kmax));
  }
  if (f.action == "cor23") {
    Cor23Result c = cor23_check(g, f.n, f.kmax);
    Output o = sequence_output(f, c.report);
    o.summary += std::string(" premise=") + (c.premise_holds ? "holds" : "fails") +
                 " consistent=" + (c.consistent ? "yes" : "no");
    return o;
  }
  if (f.action == "multiplier") {
    std::vector<double> xi(f.n, f.xi);
    MultiplierRoutes r = heat_bergman_multiplier(g, f.t, xi);
    json p = base_params(f);
    p["xi"] = xi;
    Output o = json_output({{"schema_version", kSchemaVersion},
                            {"command", "fock multiplier"},
                            {"params", p},
                            {"tilted", complex_json(r.tilted)},
                            {"convolution", complex_json(r.convolution)},
                            {"discrepancy", r.discrepancy}});
    o.summary = "discrepancy≈" + fmt_approx(r.discrepancy);
    return o;
  }
  throw ParseError("unknown fock action '" + f.action + "' (radial-seq, cor23, multiplier)");
}

Output run_hermite(const Flags& f) {
  if (f.action == "example36") {
    cplx alpha = parse_complex(f.alpha);
    Example36Result r = example36(alpha, f.t, f.n, f.kmax);
    Output o = json_output({{"schema_version", kSchemaVersion},
                            {"command", "hermite example36"},
                            {"params", {{"alpha", format_complex(alpha)}, {"t", f.t}, {"n", f.n}, {"kmax", f.kmax}}},
                            {"beta", complex_json(r.beta)},
                            {"lambda", complex_json(r.lambda)},
                            {"ratio", complex_json(r.ratio)},
                            {"abs_ratio", std::abs(r.ratio)},
                            {"verdict", std::string(to_string(r.verdict))}});
    o.summary = "verdict=" + std::string(to_string(r.verdict)) + " ratio≈" + fmt_approx(std::abs(r.ratio));
    return o;
  }
  SymbolSpec g = parse_symbol(f.symbol);
  auto p = SpaceParams::make(f.n, f.t);
  if (f.action == "multiplier") return sequence_output(f, multiplier_from_h(g, p, f.kmax).values);
  if (f.action == "berezin") {
    cplx z = parse_complex(f.z);
    BerezinRoutes b = berezin(g, p, z);
    json params = base_params(f);
    params["z"] = format_complex(z);
    Output o = json_output({{"schema_version", kSchemaVersion},
                            {"command", "hermite berezin"},
                            {"params", params},
                            {"quadrature", complex_json(b.quadrature)},
                            {"heatflow", complex_json(b.heatflow)},
                            {"rel_err", rel(b.quadrature, b.heatflow)}});
    o.summary = "rel_err≈" + fmt_approx(rel(b.quadrature, b.heatflow));
    return o;
  }
  throw ParseError("unknown hermite action '" + f.action + "' (example36, multiplier, berezin)");
}

Output run_twisted(const Flags& f) {
  if (f.action == "diag-seq")
    return sequence_output(f, diag_seq(parse_symbol(f.symbol), SpaceParams::make(f.n, f.t), f.kmax));
  throw ParseError("unknown twisted action '" + f.action + "' (diag-seq)");
}

Output run_group(const Flags& f) {
  auto model = RankOneModel::make(f.rho, f.step, f.t);
  SymbolSpec g = parse_symbol(f.symbol);
  auto lambdas = model.lattice(f.count);
  if (lambdas.empty()) throw ConstraintError("--count must be positive");
  std::vector<double> values(lambdas.size());
  if (f.action == "multiplier") {
    parallel_for(lambdas.size(), [&](std::size_t i) { values[i] = multiplier_a(g, model, lambdas[i]).real(); });
    return group_output(f, lambdas, values, "");
  }
  if (f.action == "criterion") {
    SequenceReport r = criterion_55(g, model, lambdas);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = r.entries[i].value.real();
    return group_output(f, lambdas, values, std::string(to_string(r.verdict)));
  }
  throw ParseError("unknown group action '" + f.action + "' (multiplier, criterion)");
}

int write_body(const Flags& f, const Output& o, std::ostream& out, std::ostream& err) {
  if (f.out.empty()) {
    out << o.body;
    if (!o.summary.empty()) err << o.summary << "\n";
  } else {
    std::ofstream file(f.out, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << f.out << "\n";
      return kExitUsage;
    }
    file << o.body;
    if (!o.summary.empty()) out << o.summary << "\n";
  }
  return kExitOk;
}

int run_verify(const Flags& f, std::ostream& out, std::ostream& err) {
  VerifyOptions opt;
  opt.tol = f.tol;
  if (f.n_set) opt.n = f.n;
  if (f.t_set) opt.t = f.t;
  if (f.kmax_set) opt.kmax = f.kmax;
  opt.only = f.only;
  json j;
  bool pass = false;
  std::vector<std::string> failing;
  if (f.action == "all") {
    VerifyReport r = verify_all(opt);
    j = to_json(r);
    pass = r.pass;
    for (const auto& c : r.checks)
      if (!c.pass) failing.push_back(c.name);
  } else {
    CheckResult r = run_check(f.action, opt);
    j = to_json(r);
    pass = r.pass;
    if (!pass) failing.push_back(r.name);
  }
  Output o{j.dump(2) + "\n", ""};
  if (pass) {
    o.summary = "pass";
  } else {
    o.summary = "FAIL:";
    for (const auto& name : failing) o.summary += " " + name;
  }
  int code = write_body(f, o, out, err);
  return code != kExitOk ? code : (pass ? kExitOk : kExitVerifyFailed);
}

}  // namespace

std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

CheckResult run_check(const std::string& name, const VerifyOptions& opt) {
  for (const auto& [n, fn] : registry())
    if (n == name) return fn(opt);
  throw ParseError("unknown check '" + name + "'");
}

VerifyReport verify_all(const VerifyOptions& opt) {
  for (const auto& name : opt.only) {
    bool known = false;
    for (const auto& [n, fn] : registry()) known = known || n == name;
    if (!known) throw ParseError("unknown check '" + name + "'");
  }
  VerifyReport r;
  r.pass = true;
  for (const auto& [name, fn] : registry()) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), name) == opt.only.end()) continue;
    r.checks.push_back(fn(opt));
    r.pass = r.pass && r.checks.back().pass;
  }
  return r;
}

json to_json(const CheckResult& r) {
  return {{"schema_version", kSchemaVersion}, {"check", r.name},         {"params", r.params},
          {"measured", r.measured},           {"tolerance", r.tolerance}, {"pass", r.pass}};
}

json to_json(const VerifyReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"schema_version", kSchemaVersion}, {"check", "all"}, {"checks", checks}, {"pass", r.pass}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Flags f;
  CLI::App app{"Toeplitz operators on Segal-Bargmann type spaces: sequences, identities and criteria", "sbt"};
  app.add_option("space", f.space, "fock | hermite | twisted | group | verify")
      ->required()
      ->check(CLI::IsMember({"fock", "hermite", "twisted", "group", "verify"}));
  app.add_option("action", f.action, "action, or check name / 'all' for verify")->required();
  auto* o_n = app.add_option("--n", f.n, "dimension n")->check(CLI::Range(1, 8));
  auto* o_t = app.add_option("--t", f.t, "time parameter t");
  app.add_option("--symbol", f.symbol, "symbol, e.g. gauss-radial:a=1.0");
  auto* o_k = app.add_option("--kmax", f.kmax, "largest sequence index")->check(CLI::Range(0, 100000));
  app.add_option("--out", f.out, "output path (default stdout)");
  auto* o_fmt = app.add_option("--format", f.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tol", f.tol, "tolerance override for verify")->check(CLI::PositiveNumber);
  app.add_option("--threads", f.threads, "worker cap, 0 = all cores");
  app.add_option("--alpha", f.alpha, "alpha for hermite example36 (complex literal)");
  app.add_option("--route", f.route, "direct | heatflow")->check(CLI::IsMember({"direct", "heatflow"}));
  app.add_option("--only", f.only, "comma-separated checks for verify all")->delimiter(',');
  app.add_option("--rho", f.rho, "group: rho");
  app.add_option("--step", f.step, "group: lattice step");
  app.add_option("--count", f.count, "group: number of lattice points");
  app.add_option("--z", f.z, "hermite berezin: point z (complex literal)");
  app.add_option("--xi", f.xi, "fock multiplier: every component of xi");
  app.set_config("--config", "", "file of key = value lines supplying flag defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }
  f.n_set = o_n->count() > 0;
  f.t_set = o_t->count() > 0;
  f.kmax_set = o_k->count() > 0;
  if (o_fmt->count() == 0) f.format = f.space == "verify" ? "json" : "csv";
  set_thread_count(f.threads);

  try {
    if (f.space != "verify" && f.space != "fock" && !(f.t > 0)) throw ConstraintError("--t must be positive");
    bool needs_symbol = f.space != "verify" && !(f.space == "hermite" && f.action == "example36");
    if (needs_symbol && f.symbol.empty()) throw ParseError("--symbol is required for " + f.space + " " + f.action);
    if (f.space == "verify") return run_verify(f, out, err);
    Output o;
    if (f.space == "fock") o = run_fock(f);
    else if (f.space == "hermite") o = run_hermite(f);
    else if (f.space == "twisted") o = run_twisted(f);
    else o = run_group(f);
    return write_body(f, o, out, err);
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const AccuracyError& e) {
    err << "accuracy: " << e.what() << "\n";
    return kExitVerifyFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace sbt::cli
