#include "runner.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <set>

#include "finharm/approximation.hpp"
#include "finharm/csv.hpp"
#include "finharm/errors.hpp"
#include "finharm/experiments.hpp"
#include "finharm/lifting_transform.hpp"

namespace finharm::cli {

namespace {

using nlohmann::json;
namespace ex = finharm::experiments;
constexpr double kPi = std::numbers::pi;
constexpr int kSchemaVersion = 1;

// Typed access to one params object; every key read is remembered so leftovers can be rejected.
class Params {
 public:
  Params(const json& j, std::string base) : j_(j), base_(std::move(base)) {
    if (!j_.is_object()) throw ConfigError(base_, "expected an object");
  }

  std::string at(const std::string& key) const { return base_ + "/" + key; }

  std::int64_t integer(const std::string& key, std::int64_t def, std::int64_t lo, std::int64_t hi) {
    used_.insert(key);
    if (!j_.contains(key)) return def;
    const json& v = j_[key];
    if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < lo || x > hi) throw ConfigError(at(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + std::to_string(x));
    return x;
  }

  double real(const std::string& key, double def, double lo, double hi) {
    used_.insert(key);
    if (!j_.contains(key)) return def;
    const json& v = j_[key];
    if (!v.is_number()) throw ConfigError(at(key), "expected a number");
    const double x = v.get<double>();
    if (!(x >= lo && x <= hi)) throw ConfigError(at(key), "must lie in [" + csv::number(lo) + ", " + csv::number(hi) + "], got " + csv::number(x));
    return x;
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  bool flag(const std::string& key, bool def) {
    used_.insert(key);
    if (!j_.contains(key)) return def;
    if (!j_[key].is_boolean()) throw ConfigError(at(key), "expected true or false");
    return j_[key].get<bool>();
  }

  std::string choice(const std::string& key, const std::string& def, const std::vector<std::string>& options) {
    used_.insert(key);
    if (!j_.contains(key)) return def;
    if (!j_[key].is_string()) throw ConfigError(at(key), "expected a string");
    const auto s = j_[key].get<std::string>();
    for (const auto& o : options) {
      if (o == s) return s;
    }
    std::string all;
    for (const auto& o : options) all += (all.empty() ? "" : ", ") + o;
    throw ConfigError(at(key), "unknown value '" + s + "' (expected one of " + all + ")");
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!used_.count(k)) throw ConfigError(at(k), "unknown parameter");
    }
  }

 private:
  const json& j_;
  std::string base_;
  std::set<std::string> used_;
};

struct Writer {
  std::ofstream os;
  Writer(RunContext& ctx, const std::string& name) {
    std::filesystem::create_directories(ctx.out);
    const auto path = ctx.out / name;
    os.open(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    ctx.artifacts.push_back(path);
  }
};

std::ostream& log(RunContext& ctx) {
  static std::ofstream null;
  return ctx.log ? *ctx.log : null;
}

Status status_of(const BoundReport& r) {
  switch (r.status) {
    case ReportStatus::Holds: return Status::Pass;
    case ReportStatus::ConclusionFailed: return Status::ConclusionFailed;
    default: return Status::HypothesisOnly;
  }
}

std::string yes(bool b) { return b ? "true" : "false"; }

Status dft_roundtrip(Params& p, RunContext& ctx) {
  const auto instances = p.integer("instances", 200, 1, 1000000);
  const auto max_order = p.integer("max_order", 10000, 1, 1 << 22);
  p.finish();
  std::mt19937_64 rng(ctx.seed);
  Writer w(ctx, "dft_roundtrip.csv");
  w.os << "instance,group,d,plancherel,inversion,convolution,shift,modulation,pass\n";
  Status s = Status::Pass;
  for (std::int64_t i = 0; i < instances; ++i) {
    const GroupSpec g = ex::random_group(rng, max_order);
    const double d = std::uniform_real_distribution<double>(0.05, 3.0)(rng);
    const ex::LawDeviations l = ex::dft_law_deviations(g, d, rng);
    const bool ok = l.plancherel <= 1e-10 && l.inversion <= 1e-10 && l.convolution <= 1e-9 && l.shift <= 1e-9 && l.modulation <= 1e-9;
    if (!ok) s = Status::ConclusionFailed;
    w.os << csv::row({csv::number(i), csv::field(g.to_string()), csv::number(d), csv::number(l.plancherel), csv::number(l.inversion),
                      csv::number(l.convolution), csv::number(l.shift), csv::number(l.modulation), yes(ok)})
         << '\n';
  }
  return s;
}

Status inequality_suite(Params& p, RunContext& ctx) {
  const auto instances = p.integer("instances", 1000, 1, 1000000);
  const auto max_order = p.integer("max_order", 512, 1, 4096);
  p.finish();
  std::mt19937_64 rng(ctx.seed);
  Writer w(ctx, "inequality_suite.csv");
  write_report_header(w.os);
  std::map<std::string, ex::Tally> tally;
  Status s = Status::Pass;
  for (std::int64_t i = 0; i < instances; ++i) {
    const GroupSpec g = ex::random_group(rng, max_order);
    for (const BoundReport& r : ex::inequality_instances(g, rng)) {
      write_report_row(w.os, r);
      tally[r.statement].add(r);
      s = worst(s, status_of(r));
    }
  }
  for (const auto& [name, t] : tally) {
    log(ctx) << name << ": " << t.holds << "/" << t.instances << " hold, " << t.conclusion_failed << " conclusion failures, "
             << t.hypothesis_failed << " hypothesis failures\n";
  }
  return s;
}

void certificate_out(RunContext& ctx, const ApproxCertificate& c) {
  Writer w(ctx, "adjoint_certificate.csv");
  write_certificate_csv(w.os, c);
}

Status certificate_status(const ApproxCertificate& c) {
  for (const auto& r : c.checks) {
    if (r.name == "hypotheses" && !r.passed) return Status::HypothesisOnly;
  }
  return c.certified() ? Status::Pass : Status::ConclusionFailed;
}

// Appends the full-enumeration pairing identity for pairs that are meant to satisfy it exactly.
void add_identity(ApproxCertificate& c, const AdjointPair& pair) {
  CheckResult r;
  r.name = "pairing-identity";
  r.worst = pairing_identity_deviation(pair);
  r.bound = pair.exact_identity ? 1e-10 : INFINITY;
  r.passed = r.worst <= r.bound;
  r.test_set = "every element and character of " + pair.eta.source.to_string();
  c.checks.push_back(r);
}

Status adjoint_build(Params& p, RunContext& ctx) {
  const std::string family = p.choice("family", "circle", {"circle", "reals", "integer", "tower"});
  try {
    if (family == "integer") {
      const auto n = p.integer("n", 64, 1, 1 << 24);
      const auto k = p.integer("k", 0, 0, 1 << 24);
      p.finish();
      if (!(4 * k < n)) {
        throw ConfigError(p.at("k"), "the identity map Z_n -> Z needs 0 <= k < n/4 (k = " + std::to_string(k) + ", n = " + std::to_string(n) + ")");
      }
      const ApproxCertificate c = certify_KU(build_integer_approx(n, k), SetDescriptor::integer_ball(k), SetDescriptor::integer_ball(0));
      certificate_out(ctx, c);
      return c.certified() ? Status::Pass : Status::ConclusionFailed;
    }
    if (family == "circle") {
      const auto n = p.integer("n", 64, 2, 1 << 24);
      const double alpha = p.real("alpha", kPi / 3, 0.0, kPi / 3 + 1e-15);
      const double r = p.real("r", 2 * kPi * 3 / static_cast<double>(n), 0.0, alpha);
      const double eps = p.real("eps", alpha / 2, 0.0, alpha);
      const double s = p.real("s", 0.95 * r * eps / alpha, 0.0, kPi);
      p.finish();
      if (!(r > 0.0)) throw ConfigError(p.at("r"), "r must be positive");
      const auto k = static_cast<std::int64_t>(std::floor(alpha / r + 1e-12));
      if (!(k >= 1 && 4 * k < n)) {
        throw ConfigError(p.at("r"), "k = floor(alpha/r) = " + std::to_string(k) + " violates 1 <= k < n/4 (n = " + std::to_string(n) + ")");
      }
      if (!(static_cast<double>(n) * r > kPi)) throw ConfigError(p.at("n"), "n > pi/r required (n = " + std::to_string(n) + ")");
      const AdjointPair pair = build_adjoint_pair_circle(n, alpha, r);
      ApproxCertificate c = verify_strong_adjointness(pair, alpha, eps, SetDescriptor::arc(s), SetDescriptor::integer_ball(0));
      add_identity(c, pair);
      certificate_out(ctx, c);
      return certificate_status(c);
    }
    if (family == "reals") {
      const auto n = p.integer("n", 1000, 2, 1 << 24);
      const double d = p.real("d", 0.1, 1e-12, 1e12);
      const double dp = p.real("d_prime", 2 * kPi / (static_cast<double>(n) * d), 1e-12, 1e12);
      const double alpha = p.real("alpha", 2 * kPi * 60 / static_cast<double>(n), 0.0, kPi / 3 + 1e-15);
      const double r = p.real("r", 3 * d, 0.0, alpha);
      const double rho = p.real("rho", 5 * dp, 0.0, alpha);
      const double eps = p.real("eps", alpha / 2, 0.0, alpha);
      const double s = p.real("s", 0.95 * r * eps / alpha, 0.0, 1e12);
      const double sigma = p.real("sigma", 0.95 * rho * eps / alpha, 0.0, 1e12);
      p.finish();
      const AdjointPair pair = build_adjoint_pair_reals(n, d, alpha, r, rho, dp);
      ApproxCertificate c = verify_strong_adjointness(pair, alpha, eps, SetDescriptor::interval(s), SetDescriptor::interval(sigma));
      add_identity(c, pair);
      certificate_out(ctx, c);
      return certificate_status(c);
    }
    const auto prime = p.integer("p", 3, 2, 1 << 20);
    const auto j = static_cast<int>(p.integer("j", 2, 0, 62));
    const auto k = static_cast<int>(p.integer("k", 2, 0, 62));
    const double alpha = p.real("alpha", kPi / 3, 0.0, 2 * kPi / 3);
    const double eps = p.real("eps", alpha / 2, 0.0, alpha);
    p.finish();
    for (std::int64_t q = 2; q * q <= prime; ++q) {
      if (prime % q == 0) throw ConfigError(p.at("p"), "p must be prime, got " + std::to_string(prime));
    }
    if (std::pow(static_cast<double>(prime), j + k) > 1 << 22) throw ConfigError(p.at("k"), "p^(j+k) exceeds the 2^22 enumeration budget");
    const AdjointPair pair = build_adjoint_pair_tower(prime, j, k, alpha);
    ApproxCertificate c = verify_strong_adjointness(pair, alpha, eps, pair.sets.u, pair.sets.omega);
    add_identity(c, pair);
    certificate_out(ctx, c);
    return certificate_status(c);
  } catch (const ParameterError& e) {
    throw ConfigError("/params", e.what());
  }
}

Status transform(Params& p, RunContext& ctx) {
  const auto n_start = p.integer("n_start", 256, 16, 1 << 20);
  const auto n_end = p.integer("n_end", 8192, 16, 1 << 20);
  const double sigma = p.real("sigma", 1.0, 1e-6, 1e6);
  const double gamma_max = p.real("gamma_max", 5.0, 1e-6, 1e6);
  const bool plot = p.flag("plot_data", false);
  p.finish();
  if (n_start % 8) throw ConfigError(p.at("n_start"), "must be a multiple of 8 so that alpha = pi/4 sits on the lattice");
  if (n_end < n_start) throw ConfigError(p.at("n_end"), "must be at least n_start");
  const auto half = static_cast<std::size_t>(std::ceil(gamma_max * ctx.grid_density));
  const auto grid = character_grid(LcaModel::reals(), SetDescriptor::interval(gamma_max), 2 * half + 1);
  const RefFunction f = RefFunction::gaussian(LcaModel::reals(), sigma);

  Writer conv(ctx, "transform_convergence.csv");
  conv.os << "n,d,d_prime,grid_points,sup_mft_err,sup_dft_err,bound,pass\n";
  std::ofstream plot_conv;
  if (plot) {
    const auto path = ctx.out / "transform_convergence.dat";
    plot_conv.open(path, std::ios::binary);
    ctx.artifacts.push_back(path);
  }
  Status s = Status::Pass;
  for (std::int64_t n = n_start; n <= n_end; n *= 2) {
    // d = d' = sqrt(2 pi / n) widens the sampled window and refines the step together.
    const double d = std::sqrt(2 * kPi / static_cast<double>(n));
    const AdjointPair pair = build_adjoint_pair_reals(n, d, kPi / 4, d, d, d);
    const TransformErrorReport r = transform_experiment(f, pair, grid);
    if (!r.bound_satisfied) s = Status::ConclusionFailed;
    conv.os << csv::row({csv::number(n), csv::number(d), csv::number(d), csv::number(static_cast<std::int64_t>(grid.size())),
                         csv::number(r.sup_mft_err), csv::number(r.sup_dft_err), csv::number(r.bound), yes(r.bound_satisfied)})
            << '\n';
    Writer rows(ctx, "transform_n" + std::to_string(n) + ".csv");
    write_transform_csv(rows.os, r);
    if (plot) {
      plot_conv << csv::number(n) << ' ' << csv::number(r.sup_mft_err) << '\n';
      Writer series(ctx, "transform_n" + std::to_string(n) + ".dat");
      for (const auto& row : r.rows) series.os << csv::number(row.chi.real) << ' ' << csv::number(row.mft.real()) << '\n';
    }
    log(ctx) << "n=" << n << " sup|F - ref| = " << csv::number(r.sup_mft_err) << '\n';
  }
  return s;
}

Status stability(Params& p, RunContext& ctx) {
  const auto trials = p.integer("trials", 200, 1, 1000000);
  const auto max_order = p.integer("max_order", 4096, 1, 1 << 16);
  const double delta = p.real("delta", 0.05, 0.0, kPi);
  p.finish();
  std::mt19937_64 rng(ctx.seed);
  Writer w(ctx, "stability_fit.csv");
  w.os << "trial,group,a0_size,delta_injected,closeness,recovered,factorwise_applicable,factorwise_agrees\n";
  Status s = Status::Pass;
  std::int64_t recovered = 0;
  for (std::int64_t i = 0; i < trials; ++i) {
    const ex::FitTrial t = ex::fit_trial(max_order, delta, rng);
    recovered += t.recovered ? 1 : 0;
    // The injected character is within delta, so the minimiser must be too; agreement is promised below pi/6.
    if (t.closeness > delta + 1e-12) s = Status::ConclusionFailed;
    if (t.factorwise_applicable && !t.factorwise_agrees && delta < kPi / 6) s = Status::ConclusionFailed;
    w.os << csv::row({csv::number(i), csv::field(t.group.to_string()), csv::number(static_cast<std::int64_t>(t.a0_size)), csv::number(delta),
                      csv::number(t.closeness), yes(t.recovered), yes(t.factorwise_applicable), yes(t.factorwise_agrees)})
         << '\n';
  }
  log(ctx) << "recovered " << recovered << "/" << trials << " injected characters\n";
  return s;
}

Status bohr_chain(Params& p, RunContext& ctx) {
  const auto chains = p.integer("chains", 200, 1, 1000000);
  p.finish();
  std::mt19937_64 rng(ctx.seed);
  Writer w(ctx, "bohr_chain.csv");
  write_report_header(w.os);
  Status s = Status::Pass;
  std::map<std::string, std::pair<int, int>> fam;
  for (std::int64_t i = 0; i < chains; ++i) {
    const ex::ChainInstance c = ex::chain_instance(rng);
    write_report_row(w.os, c.report);
    s = worst(s, status_of(c.report));
    fam[c.family].first += c.report.holds() ? 1 : 0;
    fam[c.family].second += 1;
  }
  for (const auto& [name, c] : fam) log(ctx) << name << ": " << c.first << "/" << c.second << " hold\n";
  return s;
}

Status bench(Params& p, RunContext& ctx) {
  const auto lo = p.integer("min_log2", 8, 0, 20);
  const auto hi = p.integer("max_log2", 16, 0, 20);
  p.finish();
  if (hi < lo) throw ConfigError(p.at("max_log2"), "must be at least min_log2");
  std::vector<GroupSpec> groups{GroupSpec({1}), GroupSpec({4099}), GroupSpec({12, 5, 7, 13})};
  for (std::int64_t k = lo; k <= hi; ++k) groups.push_back(GroupSpec({std::int64_t{1} << k}));
  std::mt19937_64 rng(ctx.seed);
  Writer w(ctx, "bench.csv");
  w.os << "group,size,reference_seconds,fast_seconds,speedup,rel_diff,bluestein,agree\n";
  Status s = Status::Pass;
  for (const GroupSpec& g : groups) {
    const ex::DftComparison c = ex::compare_dft(g, rng);
    // Timings only count once the two paths agree.
    const bool agree = c.rel_diff <= 1e-9;
    if (!agree) s = Status::ConclusionFailed;
    const double speedup = c.fast_seconds > 0 ? c.reference_seconds / c.fast_seconds : INFINITY;
    w.os << csv::row({csv::field(g.to_string()), csv::number(g.size()), csv::number(c.reference_seconds), csv::number(c.fast_seconds),
                      csv::number(speedup), csv::number(c.rel_diff), yes(c.bluestein), yes(agree)})
         << '\n';
    log(ctx) << g.to_string() << " speedup " << csv::number(speedup) << '\n';
  }
  return s;
}

using Runner = std::function<Status(Params&, RunContext&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> m{
      {"dft-roundtrip", dft_roundtrip}, {"inequality-suite", inequality_suite}, {"adjoint-build", adjoint_build},
      {"transform", transform},         {"stability", stability},               {"bohr-chain", bohr_chain},
      {"bench", bench},
  };
  return m;
}

}  // namespace

Status worst(Status a, Status b) {
  if (a == Status::ConclusionFailed || b == Status::ConclusionFailed) return Status::ConclusionFailed;
  if (a == Status::HypothesisOnly || b == Status::HypothesisOnly) return Status::HypothesisOnly;
  return Status::Pass;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::ConclusionFailed: return "conclusion-failed";
    case Status::HypothesisOnly: return "hypothesis-failed";
  }
  return "unknown";
}

const std::vector<ExperimentInfo>& registry() {
  static const std::vector<ExperimentInfo> r{
      {"dft-roundtrip", "Plancherel, inversion, convolution, shift and modulation laws on random groups"},
      {"inequality-suite", "randomized energy, Bohr-in-Spec, difference-set, Spec-size and smoothness checks"},
      {"adjoint-build", "build an adjoint pair (circle, reals, integer, tower) and certify it"},
      {"transform", "Gaussian transform convergence for n doubling from n_start to n_end"},
      {"stability", "brute and factorwise character fitting under per-point phase noise"},
      {"bohr-chain", "double Bohr containment on generated chains"},
      {"bench", "reference against fast DFT timing after an agreement check"},
  };
  return r;
}

Status run_experiment(const std::string& name, const json& params, RunContext& ctx) {
  const auto it = runners().find(name);
  if (it == runners().end()) throw ConfigError("/experiment", "unknown experiment '" + name + "' (see `finharm list`)");
  Params p(params, "/params");
  return it->second(p, ctx);
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  ExperimentConfig c;
  for (const auto& [k, v] : doc.items()) {
    if (k != "schema" && k != "experiment" && k != "seed" && k != "params") throw ConfigError("/" + k, "unknown key");
  }
  if (!doc.contains("schema") || !doc["schema"].is_number_integer() || doc["schema"].get<int>() != kSchemaVersion) {
    throw ConfigError("/schema", "expected schema version " + std::to_string(kSchemaVersion));
  }
  if (!doc.contains("experiment") || !doc["experiment"].is_string()) throw ConfigError("/experiment", "expected an experiment name");
  c.experiment = doc["experiment"].get<std::string>();
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("/seed", "expected a non-negative integer");
    c.seed = doc["seed"].get<std::uint64_t>();
    c.has_seed = true;
  }
  if (doc.contains("params")) c.params = doc["params"];
  return c;
}

}  // namespace finharm::cli
