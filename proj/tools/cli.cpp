#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "klmchain/chain.hpp"
#include "klmchain/io.hpp"
#include "klmchain/optimize.hpp"
#include "klmchain/oracle.hpp"
#include "klmchain/repro.hpp"
#include "klmchain/resource.hpp"
#include "klmchain/teleport.hpp"

namespace klmchain::cli {

namespace {

using nlohmann::json;

struct ResourceArgs {
  std::optional<int> max_entangled;
  std::optional<double> tent;
  std::string coeffs_file;

  bool given() const { return max_entangled || tent || !coeffs_file.empty(); }

  ResourceCoeffs resolve() const {
    if (max_entangled) return maximally_entangled(*max_entangled);
    if (tent) return tent_family({*tent});
    if (!coeffs_file.empty()) {
      auto coeffs = load_coeffs_file(coeffs_file);
      require_valid(coeffs);
      return coeffs;
    }
    throw std::invalid_argument("one of --max-entangled, --tent, --coeffs is required");
  }
};

void add_resource_options(CLI::App* cmd, ResourceArgs& r) {
  auto* me = cmd->add_option("--max-entangled", r.max_entangled, "Maximally entangled N-photon resource");
  auto* tent = cmd->add_option("--tent", r.tent, "Six-photon tent family with slope x");
  auto* file = cmd->add_option("--coeffs", r.coeffs_file, "JSON coefficient file {\"n_photons\", \"coeffs\"}");
  me->excludes(tent)->excludes(file);
  tent->excludes(file);
}

Complex parse_complex(const std::string& text) {
  std::istringstream in(text);
  double re = 0.0;
  double im = 0.0;
  char sep = 0;
  if (!(in >> re)) throw std::invalid_argument("cannot parse complex value '" + text + "'");
  if (in >> sep) {
    if (sep != ',' || !(in >> im)) throw std::invalid_argument("complex values are written re or re,im: '" + text + "'");
  }
  return {re, im};
}

struct QubitArgs {
  std::string alpha;
  std::string beta;
  bool haar = false;

  /// nullopt means Haar-averaged input.
  std::optional<QubitState> resolve() const {
    if (alpha.empty() != beta.empty()) throw std::invalid_argument("--alpha and --beta must be given together");
    if (alpha.empty()) return std::nullopt;
    QubitState q{parse_complex(alpha), parse_complex(beta)};
    require_normalized(q);
    return q;
  }
};

void add_qubit_options(CLI::App* cmd, QubitArgs& q) {
  auto* a = cmd->add_option("--alpha", q.alpha, "H amplitude, re or re,im");
  auto* b = cmd->add_option("--beta", q.beta, "V amplitude, re or re,im");
  auto* h = cmd->add_flag("--haar", q.haar, "Average over input qubits (default)");
  h->excludes(a)->excludes(b);
}

struct OutputArgs {
  std::string format = "json";
  std::string path;
};

void add_output_options(CLI::App* cmd, OutputArgs& o) {
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  cmd->add_option("--output,-o", o.path, "Write the report to a file instead of stdout");
}

// Writes to a file when a path is set, otherwise to the fallback stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::invalid_argument("cannot open output file " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

json qubit_field(const std::optional<QubitState>& q) { return q ? qubit_to_json(*q) : json("haar"); }

int cmd_single(const ResourceArgs& res, const QubitArgs& qa, const OutputArgs& oa, std::ostream& out) {
  const auto coeffs = res.resolve();
  const auto qubit = qa.resolve();
  const auto records = qubit ? outcome_distribution(*qubit, coeffs) : haar_outcome_distribution(coeffs);
  const double failure = records.front().probability + records.back().probability;

  Sink sink(oa.path, out);
  if (oa.format == "csv") {
    write_outcomes_csv(*sink, records);
  } else {
    json report = {{"resource", coeffs_to_json(coeffs)},
                   {"qubit", qubit_field(qubit)},
                   {"outcomes", outcomes_to_json(records)},
                   {"p_success", single_success_prob(coeffs)},
                   {"p_failure", failure}};
    *sink << report.dump(2) << '\n';
  }
  return kSuccess;
}

struct ChainArgs {
  int hops = 1;
  std::string table_path;
  std::uint64_t monte_carlo = 0;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultLatticeBudget;
  unsigned threads = 0;
};

int cmd_chain(const ResourceArgs& res, const QubitArgs& qa, const ChainArgs& ca, const OutputArgs& oa,
              std::ostream& out) {
  const auto coeffs = res.resolve();
  const auto qubit = qa.resolve();
  const auto spec = ChainSpec::identical(coeffs, ca.hops);
  const bool within_budget = lattice_size(spec.n_photons(), spec.hops()) <= ca.budget;
  if (!within_budget && ca.monte_carlo == 0) {
    throw BudgetExceeded("outcome lattice of " + std::to_string(spec.n_photons()) + "^" + std::to_string(ca.hops) +
                         " terms exceeds --budget; rerun with --monte-carlo TRIALS");
  }

  json report = {{"resource", coeffs_to_json(coeffs)}, {"hops", ca.hops}, {"qubit", qubit_field(qubit)}};
  std::vector<std::pair<std::string, double>> rows;
  if (within_budget) {
    const auto chain = analyze_chain(spec, !ca.table_path.empty(), ca.budget);
    report.update(chain_report_to_json(chain));
    rows = {{"p_deferred", chain.p_deferred},
            {"p_per_hop", chain.p_per_hop},
            {"self_correction_gain", chain.self_correction_gain}};
    if (chain.outcome_table) {
      std::ofstream table(ca.table_path);
      if (!table) throw std::invalid_argument("cannot open table file " + ca.table_path);
      write_outcome_table_csv(table, *chain.outcome_table);
    }
  } else {
    report["p_per_hop"] = per_hop_success_prob(spec);
    rows.emplace_back("p_per_hop", per_hop_success_prob(spec));
  }
  if (ca.monte_carlo > 0) {
    const auto mc = sample_chain(qubit, spec, {ca.monte_carlo, ca.seed, ca.threads});
    report["monte_carlo"] = empirical_to_json(mc);
    report["monte_carlo"]["seed"] = ca.seed;
    rows.emplace_back("mc_p_deferred", mc.p_deferred);
    rows.emplace_back("mc_stderr_deferred", mc.stderr_deferred);
    rows.emplace_back("mc_p_per_hop", mc.p_per_hop);
    rows.emplace_back("mc_stderr_per_hop", mc.stderr_per_hop);
  }

  Sink sink(oa.path, out);
  if (oa.format == "csv") {
    *sink << "quantity,value\n";
    for (const auto& [name, value] : rows) *sink << name << ',' << csv_number(value) << '\n';
  } else {
    *sink << report.dump(2) << '\n';
  }
  return kSuccess;
}

struct SweepArgs {
  int hops = 6;
  double from = 0.0;
  double to = 0.09;
  int steps = 91;
};

int cmd_sweep(const SweepArgs& sa, const OutputArgs& oa, std::ostream& out, std::ostream& err) {
  const auto sweep = sweep_x(sa.hops, sa.from, sa.to, sa.steps);
  json optimum = sweep_optimum_to_json(sweep);
  optimum["hops"] = sa.hops;
  if (oa.format == "json") {
    json samples = json::array();
    for (const auto& s : sweep.samples) samples.push_back({s.x, s.p});
    optimum["samples"] = samples;
    Sink sink(oa.path, out);
    *sink << optimum.dump(2) << '\n';
    return kSuccess;
  }
  if (oa.path.empty()) {
    write_sweep_csv(out, sweep);
    err << optimum.dump() << '\n';
  } else {
    Sink sink(oa.path, out);
    write_sweep_csv(*sink, sweep);
    out << optimum.dump(2) << '\n';
  }
  return kSuccess;
}

struct CertifyArgs {
  std::optional<int> n;
  int cases = 10;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  int max_photons = kDefaultMaxSimPhotons;
  bool inject_fault = false;
  std::string dump_path;
};

ResourceCoeffs random_coeffs(int n, std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<double> w(static_cast<std::size_t>(n) + 1);
  double total = 0.0;
  for (auto& x : w) total += (x = gamma(rng));
  std::vector<Complex> c(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) c[i] = std::polar(std::sqrt(w[i] / total), phase(rng));
  return ResourceCoeffs(std::move(c));
}

QubitState random_qubit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  return {std::polar(std::sqrt(u), 2.0 * std::numbers::pi * unif(rng)), std::polar(std::sqrt(1.0 - u), 2.0 * std::numbers::pi * unif(rng))};
}

// Fault injection: inflate c_0 and renormalize, so every p(m) near m = 0 shifts.
ResourceCoeffs corrupt(const ResourceCoeffs& coeffs) {
  auto c = coeffs.coeffs();
  c[0] = (std::abs(c[0]) == 0.0) ? Complex{0.5, 0.0} : c[0] * 1.5;
  double total = 0.0;
  for (const auto& x : c) total += std::norm(x);
  for (auto& x : c) x /= std::sqrt(total);
  return ResourceCoeffs(std::move(c));
}

int cmd_certify(const ResourceArgs& res, const CertifyArgs& ca, std::ostream& out) {
  std::optional<ResourceCoeffs> fixed;
  if (res.given()) fixed = res.resolve();
  const int n = fixed ? fixed->n_photons() : ca.n.value_or(2);
  if (fixed && ca.n && *ca.n != n) throw std::invalid_argument("--n disagrees with the resource's photon number");
  if (n < 1) throw std::invalid_argument("--n must be >= 1");
  if (n > ca.max_photons) {
    throw std::out_of_range("N = " + std::to_string(n) + " exceeds the simulator limit of " +
                            std::to_string(ca.max_photons));
  }
  if (ca.cases < 1) throw std::invalid_argument("--cases must be >= 1");

  std::mt19937_64 rng(ca.seed);
  CertificationReport total;
  total.tolerance = ca.tol;
  std::optional<CircuitRun> first_run;
  for (int i = 0; i < ca.cases; ++i) {
    const ResourceCoeffs coeffs = fixed ? *fixed : random_coeffs(n, rng);
    const std::vector<QubitState> qubits{random_qubit(rng)};
    std::optional<ResourceCoeffs> analytic;
    if (ca.inject_fault) analytic = corrupt(coeffs);
    const auto rep = certify(coeffs, qubits, ca.tol, analytic, ca.max_photons);
    if (!ca.dump_path.empty() && !first_run) first_run = run_circuit(qubits.front(), coeffs, ca.max_photons);

    if (rep.max_probability_deviation > total.max_probability_deviation || total.worst_m < 0) {
      total.max_probability_deviation = rep.max_probability_deviation;
      total.worst_m = rep.worst_m;
    }
    total.min_fidelity = std::min(total.min_fidelity, rep.min_fidelity);
    total.phase_mismatches += rep.phase_mismatches;
    total.pass = total.pass && rep.pass;
    total.cases.insert(total.cases.end(), rep.cases.begin(), rep.cases.end());
  }
  if (first_run) {
    std::ofstream dump(ca.dump_path);
    if (!dump) throw std::invalid_argument("cannot open dump file " + ca.dump_path);
    dump << circuit_run_to_json(*first_run).dump(2) << '\n';
  }

  json report = certification_to_json(total);
  report["n_photons"] = n;
  report["fault_injected"] = ca.inject_fault;
  out << report.dump(2) << '\n';
  return total.pass ? kSuccess : kCheckFailed;
}

int cmd_repro(std::ostream& out) {
  const auto rows = run_repro();
  bool all = true;
  out << std::left << std::setw(6) << "group" << std::setw(34) << "check" << std::setw(18) << "expected"
      << std::setw(18) << "actual" << std::setw(10) << "tol" << "result\n";
  for (const auto& r : rows) {
    all = all && r.pass;
    out << std::left << std::setw(6) << r.group << std::setw(34) << r.name << std::setw(18) << csv_number(r.expected)
        << std::setw(18) << csv_number(r.actual) << std::setw(10) << csv_number(r.tolerance)
        << (r.pass ? "PASS" : "FAIL") << '\n';
  }
  out << (all ? "ALL PASS" : "SOME CHECKS FAILED") << '\n';
  return all ? kSuccess : kCheckFailed;
}

struct OptimizeArgs {
  int n = 6;
  int hops = 6;
  std::uint64_t seed = 0;
  int starts = OptimizeOptions{}.random_starts;
};

int cmd_optimize(const OptimizeArgs& oa, std::ostream& out) {
  OptimizeOptions opts;
  opts.random_starts = oa.starts;
  const auto best = optimize_coeffs(oa.n, oa.hops, oa.seed, opts);
  json report = {{"resource", coeffs_to_json(best.coeffs)},
                 {"weights", best.coeffs.weights()},
                 {"hops", oa.hops},
                 {"seed", oa.seed},
                 {"p_deferred", best.p}};
  out << report.dump(2) << '\n';
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-hop linear-optical teleportation analysis"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with the same keys as the flags");

  ResourceArgs res;
  QubitArgs qubit;
  OutputArgs output;

  auto* single = app.add_subcommand("single", "Single-hop outcome table and success probability");
  add_resource_options(single, res);
  add_qubit_options(single, qubit);
  add_output_options(single, output);

  ChainArgs chain_args;
  auto* chain = app.add_subcommand("chain", "Deferred vs per-hop correction for an M-hop chain");
  add_resource_options(chain, res);
  add_qubit_options(chain, qubit);
  add_output_options(chain, output);
  chain->add_option("--hops", chain_args.hops, "Number of teleportations M")->required()->check(CLI::PositiveNumber);
  chain->add_option("--table", chain_args.table_path, "Write the outcome-resolved table as CSV");
  chain->add_option("--monte-carlo", chain_args.monte_carlo, "Also sample this many trajectories");
  chain->add_option("--seed", chain_args.seed, "Monte Carlo seed")->capture_default_str();
  chain->add_option("--budget", chain_args.budget, "Maximum exact lattice size N^M")->capture_default_str();
  chain->add_option("--threads", chain_args.threads, "Sampler threads (default: KLMCHAIN_THREADS or all cores)");

  SweepArgs sweep_args;
  OutputArgs sweep_output{"csv", ""};
  auto* sweep = app.add_subcommand("sweep", "Tent-family sweep over x with refined optimum");
  sweep->add_option("--hops", sweep_args.hops, "Number of teleportations M")->capture_default_str();
  sweep->add_option("--from", sweep_args.from, "Lower end of the x range")->capture_default_str();
  sweep->add_option("--to", sweep_args.to, "Upper end of the x range")->capture_default_str();
  sweep->add_option("--steps", sweep_args.steps, "Grid points")->capture_default_str();
  add_output_options(sweep, sweep_output);

  CertifyArgs certify_args;
  auto* cert = app.add_subcommand("certify", "Check the closed-form engine against full Fock-space simulation");
  add_resource_options(cert, res);
  cert->add_option("--n", certify_args.n, "Photon number for random resources (default 2)");
  cert->add_option("--cases", certify_args.cases, "Random cases")->capture_default_str();
  cert->add_option("--tol", certify_args.tol, "Tolerance")->capture_default_str();
  cert->add_option("--seed", certify_args.seed, "Seed for random qubits and resources")->capture_default_str();
  cert->add_option("--max-photons", certify_args.max_photons, "Simulator photon limit")->capture_default_str();
  cert->add_flag("--inject-fault", certify_args.inject_fault, "Perturb the analytic coefficients (must fail)");
  cert->add_option("--dump", certify_args.dump_path, "Write the first circuit run as JSON");

  auto* repro = app.add_subcommand("repro", "Regression table of the headline numbers");

  OptimizeArgs optimize_args;
  auto* opt = app.add_subcommand("optimize", "Local search over general coefficient vectors");
  opt->add_option("--n", optimize_args.n, "Photon number N")->capture_default_str();
  opt->add_option("--hops", optimize_args.hops, "Number of teleportations M")->capture_default_str();
  opt->add_option("--seed", optimize_args.seed, "Seed for random starts")->capture_default_str();
  opt->add_option("--starts", optimize_args.starts, "Random starting points")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (*single) return cmd_single(res, qubit, output, out);
    if (*chain) return cmd_chain(res, qubit, chain_args, output, out);
    if (*sweep) return cmd_sweep(sweep_args, sweep_output, out, err);
    if (*cert) return cmd_certify(res, certify_args, out);
    if (*repro) return cmd_repro(out);
    if (*opt) return cmd_optimize(optimize_args, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}

}  // namespace klmchain::cli
