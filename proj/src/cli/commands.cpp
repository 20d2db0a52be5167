#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bwedge/binomial.hpp"
#include "bwedge/bwm.hpp"
#include "bwedge/cli.hpp"
#include "bwedge/cramer.hpp"
#include "bwedge/error.hpp"
#include "bwedge/montecarlo.hpp"
#include "bwedge/numeric.hpp"
#include "bwedge/report.hpp"
#include "config.hpp"
#include "output.hpp"

namespace bwedge::cli {
namespace {

using nlohmann::json;
using report::number;

constexpr const char* kDefaultDist = "family=exponential rate=1";

constexpr const char* kFooter = R"(Exit codes:
  0  success
  1  internal error
  2  configuration error (bad flag, unknown config key, malformed value)
  3  I/O error (output path not writable)
  4  domain error (illegal parameter, unsupported family or order, ...)
  5  invariant failure (a requested check did not hold)

Configuration: bwedge --config FILE <command>. FILE holds one [command]
section with key = value lines named after the long flags; every output
embeds such a block. BWEDGE_OUTPUT_DIR prefixes relative output paths.

Distribution schema: family=exponential rate=R | family=uniform lo=A hi=B |
family=gamma shape=K scale=S | family=lognormal logmean=M logsd=S |
family=normal mean=M sd=S | family=discrete atoms=a,b,.. probs=p,q,..)";

struct Io {
  std::string format = "csv";
  std::string out;
};

// Thrown when a run-time check requested by the user does not hold. The
// artifact is still written first.
struct InvariantFailure {
  std::string message;
};

void add_io(Section& s, Io& io) {
  s.add("format", io.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  s.app()->add_option("--out", io.out, "output path (stdout when omitted)");
}

std::string csv_join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ",";
    line += cells[i];
  }
  return line + "\n";
}

std::string optional_number(std::optional<double> v) { return v ? number(*v) : ""; }

void emit(const Io& io, const Provenance& prov, const std::string& table, json body, std::ostream& out) {
  write_text(io.out, io.format == "json" ? json_document(prov, std::move(body)) : csv_document(prov, table), out);
}

std::vector<double> parse_list(const std::string& text, char sep = ',') {
  std::vector<double> out;
  std::istringstream is(text);
  for (std::string item; std::getline(is, item, sep);) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      fail(ErrorCode::ConfigError, "not a number: '" + item + "'");
    }
  }
  return out;
}

std::vector<Atom> parse_atoms(const std::string& text, char sep) {
  std::vector<Atom> out;
  std::istringstream is(text);
  for (std::string item; std::getline(is, item, sep);) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(Atom::parse(item));
  }
  if (out.empty()) fail(ErrorCode::ConfigError, "empty atom list");
  return out;
}

std::vector<double> probs_or_uniform(const std::string& text, std::size_t count) {
  if (text.empty()) return std::vector<double>(count, 1.0 / static_cast<double>(count));
  auto p = parse_list(text);
  if (p.size() != count) fail(ErrorCode::ConfigError, "probs must have one entry per atom");
  return p;
}

// ---------------------------------------------------------------- expand

struct ExpandOpts {
  std::string dist = kDefaultDist;
  long n = 100;
  double p = 0.5;
  int q = 4;
  std::string grid = "-8:8:0.01";
  Io io;
};

void run_expand(const ExpandOpts& o, Provenance prov, std::ostream& out, std::ostream& err) {
  const auto prob = make_bwm_problem(DistributionSpec::parse(o.dist), BinomialParams(o.n, o.p), o.q);
  const auto grid = GridSpec::parse(o.grid).points();
  const auto cdf = bwm_edgeworth_cdf_grid(prob, grid);
  const auto star = star_polynomials(prob.cumulants, o.q, o.p);

  json polys = json::array();
  for (std::size_t j = 0; j < star.terms.size(); ++j) {
    const auto& poly = star.terms[j].poly;
    prov.meta.emplace_back("pstar_" + std::to_string(j + 1), poly.to_string());
    polys.push_back({{"index", j + 1}, {"exponent", star.terms[j].exponent}, {"coeffs", poly.coeffs()}});
    err << "p*_" << j + 1 << "(x) coefficients " << poly.to_string() << "\n";
  }
  std::string table = "x,cdf\n";
  for (std::size_t i = 0; i < grid.size(); ++i) table += number(grid[i]) + "," + number(cdf[i]) + "\n";
  emit(o.io, prov, table, {{"x", grid}, {"cdf", cdf}, {"polynomials", polys}}, out);
}

// ---------------------------------------------------------------- mixture

struct MixtureOpts {
  std::string dist = kDefaultDist;
  long n = 100;
  double p = 0.5;
  int q = 4;
  std::string grid = "-8:8:0.01";
  Io io;
};

void run_mixture(const MixtureOpts& o, Provenance prov, std::ostream& out, std::ostream& err) {
  const auto prob = make_bwm_problem(DistributionSpec::parse(o.dist), BinomialParams(o.n, o.p), o.q);
  const auto grid = GridSpec::parse(o.grid).points();
  const bool oracle = prob.dist.has_mean_cdf_oracle();
  const auto edge = mixture_cdf_grid(prob, grid, PerK::Edgeworth);
  const auto exact = oracle ? mixture_cdf_grid(prob, grid, PerK::OracleExact) : std::vector<double>{};

  const PerK mode = oracle ? PerK::OracleExact : PerK::Edgeworth;
  const double jump = mixture_cdf(prob, 0.0, mode) - mixture_cdf_left_limit(prob, 0.0, mode);
  const double atom = std::pow(1.0 - o.p, static_cast<double>(o.n));
  prov.meta.emplace_back("atomJump", number(jump));
  prov.meta.emplace_back("atomExpected", number(atom));
  err << "jump at 0: " << number(jump) << " (expected (1-p)^n = " << number(atom) << ")\n";

  std::string table = "x,edgeworthMixture,oracleMixture\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    table += number(grid[i]) + "," + number(edge[i]) + "," + (oracle ? number(exact[i]) : "") + "\n";
  }
  json body{{"x", grid}, {"edgeworthMixture", edge}, {"atomJump", jump}, {"atomExpected", atom}};
  body["oracleMixture"] = oracle ? json(exact) : json(nullptr);
  emit(o.io, prov, table, body, out);
  if (std::abs(jump - atom) > 1e-14) {
    throw InvariantFailure{"atom at 0 is " + number(jump) + ", expected " + number(atom)};
  }
}

// ---------------------------------------------------------------- convergence

struct ConvergenceOpts {
  std::string dist = kDefaultDist;
  double p = 0.3;
  int q = 4;
  std::vector<long> sizes{50, 100, 200, 400, 800, 1600};
  std::string truth = "edgeworth";
  std::string grid = "-8:8:0.01";
  bool check = false;
  Io io;
};

void run_convergence(const ConvergenceOpts& o, Provenance prov, std::ostream& out, std::ostream& err) {
  SweepSpec spec{DistributionSpec::parse(o.dist), o.p, o.q, o.sizes,
                 o.truth == "oracle" ? PerK::OracleExact : PerK::Edgeworth, GridSpec::parse(o.grid).points()};
  const auto rep = sweep_sup_error(spec);
  const report::SweepContext ctx{o.p, o.q, std::string(spec.dist.family_name())};
  prov.meta.emplace_back("fittedSlope", optional_number(rep.fitted_slope));

  std::vector<double> scaled;
  for (const auto& row : rep.rows) {
    scaled.push_back(row.scaled_error);
    err << "n=" << row.n << " supError=" << number(row.sup_error) << " scaledError=" << number(row.scaled_error)
        << "\n";
  }
  const double spread = scaled.empty() ? 0.0 : spread_ratio(scaled);
  if (rep.fitted_slope) err << "fitted slope " << number(*rep.fitted_slope) << "\n";
  emit(o.io, prov, report::sweep_csv(rep, ctx), report::sweep_json(rep, ctx), out);

  if (o.check) {
    const double target = -(o.q - 1) / 2.0;
    if (!rep.fitted_slope || std::abs(*rep.fitted_slope - target) > 0.2) {
      throw InvariantFailure{"fitted slope " + optional_number(rep.fitted_slope) + " not within 0.2 of " +
                             number(target)};
    }
    if (spread > 3.0) throw InvariantFailure{"scaled error spread " + number(spread) + " exceeds 3"};
  }
}

// ---------------------------------------------------------------- inverse-moment

struct InverseMomentOpts {
  double alpha = 1.0;
  double p = 0.5;
  int K = 3;
  std::vector<long> sizes{256, 512, 1024, 2048, 4096, 8192, 16384};
  bool check = false;
  Io io;
  std::string coeff_out;
};

void run_inverse_moment(const InverseMomentOpts& o, Provenance prov, std::ostream& out, std::ostream& err) {
  const auto table = inverse_moment_coefficients(o.alpha, o.K, o.p);
  std::vector<double> ns, residuals, scaled;
  std::string csv = "n,np,f,truncation,residual,scaledResidual\n";
  json rows = json::array();
  for (long n : o.sizes) {
    const BinomialParams b(n, o.p);
    const double f = inverse_moment(b, o.alpha);
    const double trunc = table.truncation(b.mean());
    const double res = std::abs(f - trunc);
    const double sc = res * std::pow(b.mean(), o.alpha + o.K);
    ns.push_back(static_cast<double>(n));
    residuals.push_back(res);
    scaled.push_back(sc);
    csv += csv_join({std::to_string(n), number(b.mean()), number(f), number(trunc), number(res), number(sc)});
    rows.push_back({{"n", n}, {"np", b.mean()}, {"f", f}, {"truncation", trunc}, {"residual", res},
                    {"scaledResidual", sc}});
  }
  std::optional<double> slope;
  if (ns.size() >= 2) slope = log_log_slope(ns, residuals);
  const double target = -(o.alpha + o.K);
  prov.meta.emplace_back("residualSlope", optional_number(slope));
  prov.meta.emplace_back("expectedSlope", number(target));
  for (std::size_t k = 0; k < table.C.size(); ++k) {
    prov.meta.emplace_back("C_" + std::to_string(k), number(table.C[k]));
  }
  err << "coefficients:\n" << table.to_csv();
  if (slope) err << "residual slope " << number(*slope) << " (expected " << number(target) << ")\n";

  json body{{"alpha", o.alpha}, {"p", o.p}, {"K", o.K}, {"coefficients", table.C}, {"rows", rows},
            {"expectedSlope", target}};
  body["residualSlope"] = slope ? json(*slope) : json(nullptr);
  emit(o.io, prov, csv, body, out);
  if (!o.coeff_out.empty()) write_text(o.coeff_out, table.to_csv(), out);

  if (o.check) {
    if (!slope || std::abs(*slope - target) > 0.2) {
      throw InvariantFailure{"residual slope " + optional_number(slope) + " not within 0.2 of " + number(target)};
    }
    if (spread_ratio(scaled) > 2.0) throw InvariantFailure{"scaled residual spread exceeds 2"};
  }
}

// ---------------------------------------------------------------- lattice-check

struct LatticeOpts {
  bool examples = false;
  std::string atoms;
  std::string probs;
  std::string vectors;
  std::string linear;
  std::string base = "family=normal mean=0 sd=1";
  std::string gated;
  double gate_p = 0.5;
  std::string dist;
  std::string direction;
  double r_max = 200.0;
  double step = 0.01;
  Io io;
};

struct LatticeCase {
  std::string label;
  Law law;
  std::optional<SupportSpec> support;  // absent for absolutely continuous laws
  std::optional<Verdict> expected;
};

std::vector<LatticeCase> paper_examples() {
  const auto q = [](long long a, long long b = 1) { return Atom::of(ExactReal::rational(a, b)); };
  std::vector<LatticeCase> cases;
  {
    SupportSpec s{Atoms1D{{q(0), q(1)}, {0.7, 0.3}}};
    cases.push_back({"bernoulli {0,1}", s, s, Verdict::Lattice});
  }
  {
    SupportSpec s{Atoms1D{{Atom::of(ExactReal::constant(Constant::E)), q(3), Atom::of(ExactReal::constant(Constant::Pi))},
                          {1.0 / 3, 1.0 / 3, 1.0 / 3}}};
    cases.push_back({"{e,3,pi}", s, s, Verdict::NonLattice});
  }
  {
    SupportSpec s{AtomsND{{{q(0), q(0)}, {q(0), q(1)}, {q(1), q(0)}, {q(1), q(1)}}, {0.25, 0.25, 0.25, 0.25}}};
    cases.push_back({"boolean hypercube {0,1}^2", s, s, Verdict::SemiLattice});
  }
  {
    SupportSpec s{LinearImage{{1.0, 4.0}, DistributionSpec(Normal{0.0, 1.0})}};
    cases.push_back({"(N,4N)", s, s, Verdict::SemiLattice});
  }
  {
    SupportSpec s{BernoulliGated{DistributionSpec(Exponential{1.0}), 0.5}};
    cases.push_back({"(YT,T)", s, s, Verdict::SemiLattice});
  }
  return cases;
}

std::vector<LatticeCase> user_cases(const LatticeOpts& o) {
  std::vector<LatticeCase> cases;
  if (!o.atoms.empty()) {
    auto atoms = parse_atoms(o.atoms, ',');
    SupportSpec s{Atoms1D{atoms, probs_or_uniform(o.probs, atoms.size())}};
    cases.push_back({"atoms " + o.atoms, s, s, std::nullopt});
  }
  if (!o.vectors.empty()) {
    std::vector<std::vector<Atom>> vs;
    std::istringstream is(o.vectors);
    for (std::string v; std::getline(is, v, ';');) {
      if (v.find_first_not_of(" \t") != std::string::npos) vs.push_back(parse_atoms(v, ' '));
    }
    SupportSpec s{AtomsND{vs, probs_or_uniform(o.probs, vs.size())}};
    cases.push_back({"vectors " + o.vectors, s, s, std::nullopt});
  }
  if (!o.linear.empty()) {
    SupportSpec s{LinearImage{parse_list(o.linear), DistributionSpec::parse(o.base)}};
    cases.push_back({"linear (" + o.linear + ") * W", s, s, std::nullopt});
  }
  if (!o.gated.empty()) {
    SupportSpec s{BernoulliGated{DistributionSpec::parse(o.gated), o.gate_p}};
    cases.push_back({"gated (YT,T)", s, s, std::nullopt});
  }
  if (!o.dist.empty()) {
    const auto d = DistributionSpec::parse(o.dist);
    if (d.is_continuous()) {
      cases.push_back({d.to_string(), d, std::nullopt, std::nullopt});
    } else {
      const auto s = SupportSpec::from_distribution(d);
      cases.push_back({d.to_string(), s, s, std::nullopt});
    }
  }
  return cases;
}

void run_lattice(const LatticeOpts& o, Provenance prov, std::ostream& out, std::ostream& err) {
  auto cases = o.examples ? paper_examples() : std::vector<LatticeCase>{};
  for (auto& c : user_cases(o)) cases.push_back(std::move(c));
  if (cases.empty()) fail(ErrorCode::ConfigError, "lattice-check needs --examples or a support");
  const auto user_direction = parse_list(o.direction);

  std::string table = "label,verdict,direction,offset,span,maxTailModulus,argmaxR,detectedPeriod,periodDeviation,"
                      "certified\n";
  json items = json::array();
  std::vector<std::string> failures;
  for (const auto& c : cases) {
    LatticeVerdict v;
    if (const auto* one = c.support ? std::get_if<Atoms1D>(&c.support->kind) : nullptr) {
      v = lattice_check_1d(one->atoms, one->probs);
    } else if (c.support) {
      v = semilattice_search(*c.support);
    } else {
      v.verdict = Verdict::NonLattice;
      v.evidence = "absolutely continuous law";
    }
    const int dim = c.support ? c.support->dimension() : 1;
    std::vector<double> dir = v.direction;
    if (!user_direction.empty()) dir = user_direction;
    if (dir.empty()) {
      dir.assign(static_cast<std::size_t>(dim), 0.0);
      dir[0] = 1.0;
    }
    const bool lattice_like = v.verdict == Verdict::Lattice || v.verdict == Verdict::SemiLattice;
    const std::optional<double> span =
        lattice_like && user_direction.empty() ? std::optional<double>(v.span) : std::nullopt;
    const auto scan = cramer_scan(c.law, dir, o.r_max, o.step, span);

    std::string dir_text;
    for (std::size_t i = 0; i < dir.size(); ++i) dir_text += (i ? " " : "") + number(dir[i]);
    table += "\"" + c.label + "\"," + std::string(to_string(v.verdict)) + "," + dir_text + "," + number(v.offset) +
             "," + number(v.span) + "," + number(scan.max_tail_modulus) + "," + number(scan.argmax_r) + "," +
             optional_number(scan.detected_period) + "," + number(scan.period_deviation) + "," +
             (scan.semilattice_certified ? "true" : "false") + "\n";
    auto item = report::verdict_json(v);
    item.erase("schema_version");
    item["label"] = c.label;
    item["scanDirection"] = dir;
    item["scan"] = report::scan_json(scan);
    items.push_back(item);

    err << c.label << ": " << to_string(v.verdict);
    if (!v.direction.empty()) err << " along t* = (" << dir_text << ")";
    if (lattice_like) err << ", x0 = " << number(v.offset) << ", delta = " << number(v.span);
    err << "\n  " << v.evidence << "\n  scan: " << scan.evidence << "\n";

    if (c.expected && *c.expected != v.verdict) {
      failures.push_back(c.label + " classified " + std::string(to_string(v.verdict)) + ", expected " +
                         std::string(to_string(*c.expected)));
    }
    if (span && *span > 0.0 && (!scan.detected_period || !scan.semilattice_certified)) {
      failures.push_back(c.label + " scan did not confirm period 2pi/" + number(*span));
    }
  }
  emit(o.io, prov, table, {{"items", items}}, out);
  if (!failures.empty()) {
    std::string msg;
    for (const auto& f : failures) msg += (msg.empty() ? "" : "; ") + f;
    throw InvariantFailure{msg};
  }
}

// ---------------------------------------------------------------- mc

struct McOpts {
  std::string dist = kDefaultDist;
  long n = 200;
  double p = 0.3;
  int q = 4;
  long reps = 1000000;
  std::uint64_t seed = 20240611;
  int streams = 8;
  double confidence = 0.999;
  std::string grid = "-8:8:0.01";
  Io io;
  std::string samples_out;
};

void run_mc(const McOpts& o, Provenance prov, std::ostream& out, std::ostream& err) {
  if (o.reps < 1) fail(ErrorCode::ConfigError, "reps must be positive");
  if (o.streams < 1) fail(ErrorCode::ConfigError, "streams must be positive");
  if (!(o.confidence > 0.0 && o.confidence < 1.0)) fail(ErrorCode::ConfigError, "confidence must be in (0,1)");
  const auto prob = make_bwm_problem(DistributionSpec::parse(o.dist), BinomialParams(o.n, o.p), o.q);
  const auto grid = GridSpec::parse(o.grid).points();
  const bool oracle = prob.dist.has_mean_cdf_oracle();
  const PerK mode = oracle ? PerK::OracleExact : PerK::Edgeworth;

  auto samples = sample_z(SimConfig{prob, o.reps, o.seed, o.streams});
  if (!o.samples_out.empty()) {
    const std::string path = resolve_path(o.samples_out);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".bin") == 0) {
      report::write_samples_binary(f, samples);
    } else {
      report::write_samples_csv(f, samples);
    }
    if (!f) fail(ErrorCode::IoError, "failed writing " + path);
  }
  long zeros = 0;
  for (double z : samples) zeros += z == 0.0 ? 1 : 0;
  const auto ecdf = empirical_cdf(std::move(samples));
  const auto ref = mixture_cdf_grid(prob, grid, mode);
  const double eps = dkw_band(o.reps, o.confidence);

  std::string table = "x,ecdf,reference,lower,upper,inside\n";
  std::vector<double> ev(grid.size());
  double max_dev = 0.0;
  long outside = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    ev[i] = ecdf(grid[i]);
    const double dev = std::abs(ev[i] - ref[i]);
    max_dev = std::max(max_dev, dev);
    const bool inside = dev <= eps;
    outside += inside ? 0 : 1;
    table += csv_join({number(grid[i]), number(ev[i]), number(ref[i]), number(ref[i] - eps), number(ref[i] + eps),
                       inside ? "true" : "false"});
  }
  const double atom = std::pow(1.0 - o.p, static_cast<double>(o.n));
  const double freq = static_cast<double>(zeros) / static_cast<double>(o.reps);
  const double se = std::sqrt(atom * (1.0 - atom) / static_cast<double>(o.reps));
  const double z_atom = se > 0.0 ? (freq - atom) / se : (freq == atom ? 0.0 : INFINITY);

  prov.meta.emplace_back("reference", oracle ? "oracle" : "edgeworth");
  prov.meta.emplace_back("dkwEpsilon", number(eps));
  prov.meta.emplace_back("maxDeviation", number(max_dev));
  prov.meta.emplace_back("atomFrequency", number(freq));
  prov.meta.emplace_back("atomExpected", number(atom));
  err << "max |ecdf - reference| = " << number(max_dev) << ", DKW epsilon = " << number(eps) << ", outside at "
      << outside << " of " << grid.size() << " points\n";
  err << "Z=0 frequency " << number(freq) << " vs (1-p)^n = " << number(atom) << " (" << number(z_atom)
      << " standard errors)\n";

  json body{{"x", grid},           {"ecdf", ev},           {"reference", ref},         {"dkwEpsilon", eps},
            {"maxDeviation", max_dev}, {"atomFrequency", freq}, {"atomExpected", atom},
            {"atomZScore", z_atom},    {"referenceKind", oracle ? "oracle" : "edgeworth"}};
  emit(o.io, prov, table, body, out);
  if (oracle && outside > 0) throw InvariantFailure{"empirical CDF leaves the DKW band"};
  if (std::abs(z_atom) > 5.0) throw InvariantFailure{"Z=0 frequency off by more than 5 standard errors"};
}

// ---------------------------------------------------------------- identities

struct IdentitiesOpts {
  std::vector<long> ns{1, 2, 5, 10, 50, 200};
  std::vector<double> ps{0.1, 0.3, 0.5, 0.9};
  std::vector<double> alphas{-2, -1, -0.5, 0, 0.5, 1, 2};
  std::vector<long> kl_ns{10, 50, 200};
  std::vector<double> kl_ps{0.3, 0.5};
  std::vector<double> kl_fractions{0.25, 0.5, 0.75};
  Io io;
};

void run_identities(const IdentitiesOpts& o, Provenance prov, std::ostream& out, std::ostream& err) {
  std::string table = "check,n,p,param,lhs,rhs,relError,holds\n";
  json rows = json::array();
  long bad = 0;
  double worst = 0.0;
  auto add = [&](const char* check, long n, double p, double param, double lhs, double rhs, double rel, bool ok) {
    table += csv_join({check, std::to_string(n), number(p), number(param), number(lhs), number(rhs), number(rel),
                       ok ? "true" : "false"});
    rows.push_back({{"check", check}, {"n", n}, {"p", p}, {"param", param}, {"lhs", lhs}, {"rhs", rhs},
                    {"relError", rel}, {"holds", ok}});
    bad += ok ? 0 : 1;
  };
  for (long n : o.ns) {
    for (double p : o.ps) {
      for (double a : o.alphas) {
        const BinomialParams b(n, p);
        const double lhs = bernoulli_sum(b, a);
        const double rhs = bound_o_rhs(b, a);
        const double rel = std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
        worst = std::max(worst, rel);
        add("boundO", n, p, a, lhs, rhs, rel, rel <= 1e-12);
      }
    }
  }
  for (long n : o.kl_ns) {
    for (double p : o.kl_ps) {
      for (double f : o.kl_fractions) {
        const auto t = kl_tail_bound(BinomialParams(n, p), f * p);
        add("klTail", n, p, f * p, t.exact_tail, t.bound, 0.0, t.holds());
      }
    }
  }
  prov.meta.emplace_back("maxRelError", number(worst));
  err << "boundO max relative error " << number(worst) << "; " << bad << " failing rows\n";
  emit(o.io, prov, table, {{"rows", rows}, {"maxRelError", worst}}, out);
  if (bad > 0) throw InvariantFailure{std::to_string(bad) + " identity rows failed"};
}

// ---------------------------------------------------------------- dispatch

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigError:
      return kConfigError;
    case ErrorCode::IoError:
      return kIoError;
    default:
      return kDomainError;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Edgeworth expansions for the Bernoulli weighted mean", "bwedge"};
  app.footer(kFooter);
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a [command] section file");
  app.allow_config_extras(CLI::config_extras_mode::error);
  std::string emit_config;
  app.add_option("--emit-config", emit_config, "also write the resolved config section to this path");

  ExpandOpts expand;
  MixtureOpts mixture;
  ConvergenceOpts convergence;
  InverseMomentOpts inverse;
  LatticeOpts lattice;
  McOpts mc;
  IdentitiesOpts identities;
  std::vector<std::unique_ptr<Section>> sections;
  auto section = [&](const char* name, const char* help) -> Section& {
    sections.push_back(std::make_unique<Section>(app.add_subcommand(name, help)));
    return *sections.back();
  };

  {
    auto& s = section("expand", "tabulate the closed-form expansion Phi + sum n^{-j/2} p*_j phi; columns x,cdf");
    s.add("dist", expand.dist, "distribution of Y");
    s.add("n", expand.n, "number of Bernoulli trials");
    s.add("p", expand.p, "Bernoulli success probability");
    s.add("q", expand.q, "expansion order (3 or 4)");
    s.add("grid", expand.grid, "x grid lo:hi:step");
    add_io(s, expand.io);
  }
  {
    auto& s = section("mixture",
                      "tabulate the exact mixture CDF; columns x,edgeworthMixture,oracleMixture (empty without oracle)");
    s.add("dist", mixture.dist, "distribution of Y");
    s.add("n", mixture.n, "number of Bernoulli trials");
    s.add("p", mixture.p, "Bernoulli success probability");
    s.add("q", mixture.q, "per-k Edgeworth order (3 or 4)");
    s.add("grid", mixture.grid, "x grid lo:hi:step");
    add_io(s, mixture.io);
  }
  {
    auto& s = section("convergence",
                      "sup-norm error sweep; columns n,p,q,family,supError,scaledError,fittedSlope");
    s.add("dist", convergence.dist, "distribution of Y");
    s.add("p", convergence.p, "Bernoulli success probability");
    s.add("q", convergence.q, "expansion order (3 or 4)");
    s.add("sizes", convergence.sizes, "increasing list of n");
    s.add("truth", convergence.truth, "edgeworth (Edgeworth mixture) or oracle (exact per-k CDF)")
        ->check(CLI::IsMember({"edgeworth", "oracle"}));
    s.add("grid", convergence.grid, "x grid lo:hi:step");
    s.flag("check", convergence.check, "exit 5 unless slope is within 0.2 of -(q-1)/2 and spread <= 3");
    add_io(s, convergence.io);
  }
  {
    auto& s = section("inverse-moment",
                      "E[N^-alpha; N>0] against its (np)^-k series; columns n,np,f,truncation,residual,scaledResidual");
    s.add("alpha", inverse.alpha, "exponent alpha > 0");
    s.add("p", inverse.p, "Bernoulli success probability");
    s.add("K", inverse.K, "number of series terms");
    s.add("sizes", inverse.sizes, "list of n");
    s.flag("check", inverse.check, "exit 5 unless residual slope is within 0.2 of -(alpha+K) and spread <= 2");
    add_io(s, inverse.io);
    s.app()->add_option("--coeff-out", inverse.coeff_out, "write the coefficient table (alpha,k,C) here");
  }
  {
    auto& s = section("lattice-check",
                      "lattice/semi-lattice verdicts and characteristic-function scans; columns label,verdict,"
                      "direction,offset,span,maxTailModulus,argmaxR,detectedPeriod,periodDeviation,certified");
    s.flag("examples", lattice.examples, "include the reference supports (expected verdicts are enforced)");
    s.add("atoms", lattice.atoms, "1-D atoms, comma separated; exact forms: 3, -2/5, e, pi, sqrt2, ln2, 3/2*pi");
    s.add("probs", lattice.probs, "atom probabilities (uniform when omitted)");
    s.add("vectors", lattice.vectors, "d-dimensional atoms: '0 0;0 1;1 0'");
    s.add("linear", lattice.linear, "coefficients c of X = c W");
    s.add("base", lattice.base, "law of W for --linear");
    s.add("gated", lattice.gated, "law of Y for the pair (YT, T)");
    s.add("gate-p", lattice.gate_p, "P(T = 1) for --gated");
    s.add("dist", lattice.dist, "a distribution spec");
    s.add("direction", lattice.direction, "scan direction (defaults to t* or e1)");
    s.add("r-max", lattice.r_max, "scan r over [r-max/2, r-max]");
    s.add("step", lattice.step, "scan step");
    add_io(s, lattice.io);
  }
  {
    auto& s = section("mc", "Monte-Carlo CDF of Z against the mixture CDF with a DKW band; columns x,ecdf,"
                            "reference,lower,upper,inside");
    s.add("dist", mc.dist, "distribution of Y");
    s.add("n", mc.n, "number of Bernoulli trials");
    s.add("p", mc.p, "Bernoulli success probability");
    s.add("q", mc.q, "per-k order used when no exact oracle exists");
    s.add("reps", mc.reps, "replications");
    s.add("seed", mc.seed, "generator seed");
    s.add("streams", mc.streams, "parallel chunks (output does not depend on it)");
    s.add("confidence", mc.confidence, "DKW band confidence");
    s.add("grid", mc.grid, "x grid lo:hi:step");
    add_io(s, mc.io);
    s.app()->add_option("--samples-out", mc.samples_out, "write raw Z draws (.bin: float64 LE, else CSV column z)");
  }
  {
    auto& s = section("identities", "exact moment identity and KL tail bound grids; columns check,n,p,param,lhs,rhs,"
                                    "relError,holds");
    s.add("ns", identities.ns, "n values for the identity");
    s.add("ps", identities.ps, "p values for the identity");
    s.add("alphas", identities.alphas, "alpha values for the identity");
    s.add("kl-ns", identities.kl_ns, "n values for the tail bound");
    s.add("kl-ps", identities.kl_ps, "p values for the tail bound");
    s.add("kl-fractions", identities.kl_fractions, "delta as a fraction of p");
    add_io(s, identities.io);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  const Section* active = nullptr;
  for (const auto& s : sections) {
    if (s->app()->parsed()) active = s.get();
  }
  if (!active) return kConfigError;
  const std::string name = active->app()->get_name();
  Provenance prov{name, active->config_text(), {}};

  try {
    if (!emit_config.empty()) write_text(emit_config, prov.config, out);
    if (name == "expand") run_expand(expand, prov, out, err);
    else if (name == "mixture") run_mixture(mixture, prov, out, err);
    else if (name == "convergence") run_convergence(convergence, prov, out, err);
    else if (name == "inverse-moment") run_inverse_moment(inverse, prov, out, err);
    else if (name == "lattice-check") run_lattice(lattice, prov, out, err);
    else if (name == "mc") run_mc(mc, prov, out, err);
    else run_identities(identities, prov, out, err);
  } catch (const InvariantFailure& f) {
    err << "bwedge " << name << ": invariant failure: " << f.message << "\n";
    return kInvariantFailure;
  } catch (const Error& e) {
    err << "bwedge " << name << ": " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "bwedge " << name << ": internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kOk;
}

}  // namespace bwedge::cli
