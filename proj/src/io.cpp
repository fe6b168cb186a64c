#include "klmchain/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace klmchain {

using nlohmann::json;

namespace {

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

json pattern_to_json(const std::vector<ModeOccupation>& pattern) {
  json out = json::array();
  for (const auto& occ : pattern) out.push_back({{"v", occ.v_count}, {"h", occ.h_count}});
  return out;
}

}  // namespace

json coeffs_to_json(const ResourceCoeffs& coeffs) {
  json list = json::array();
  for (const auto& c : coeffs.coeffs()) list.push_back(complex_to_json(c));
  return {{"n_photons", coeffs.n_photons()}, {"coeffs", list}};
}

ResourceCoeffs coeffs_from_json(const json& j) {
  if (!j.is_object() || !j.contains("coeffs") || !j["coeffs"].is_array()) {
    throw std::invalid_argument("coefficient JSON needs a \"coeffs\" array");
  }
  std::vector<Complex> coeffs;
  for (const auto& entry : j["coeffs"]) {
    if (entry.is_number()) {
      coeffs.emplace_back(entry.get<double>(), 0.0);
    } else if (entry.is_array() && entry.size() == 2 && entry[0].is_number() && entry[1].is_number()) {
      coeffs.emplace_back(entry[0].get<double>(), entry[1].get<double>());
    } else {
      throw std::invalid_argument("each coefficient must be [re, im] or a real number");
    }
  }
  if (coeffs.size() < 2) throw std::invalid_argument("coefficient JSON needs at least two entries");
  if (j.contains("n_photons")) {
    if (!j["n_photons"].is_number_integer() || j["n_photons"].get<long>() + 1 != static_cast<long>(coeffs.size())) {
      throw std::invalid_argument("\"n_photons\" does not match the number of coefficients minus one");
    }
  }
  return ResourceCoeffs(std::move(coeffs));
}

ResourceCoeffs load_coeffs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open coefficient file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed coefficient file " + path + ": " + e.what());
  }
  return coeffs_from_json(j);
}

json qubit_to_json(const QubitState& q) {
  return {{"alpha", complex_to_json(q.alpha)}, {"beta", complex_to_json(q.beta)}};
}

json outcomes_to_json(const std::vector<OutcomeRecord>& records) {
  json out = json::array();
  for (const auto& r : records) {
    json row = {{"m", r.m}, {"probability", r.probability}, {"destroyed", r.destroyed}};
    if (r.post_state) row["post_state"] = qubit_to_json(*r.post_state);
    if (r.phase_exponent) row["phase_exponent"] = *r.phase_exponent;
    out.push_back(std::move(row));
  }
  return out;
}

json chain_report_to_json(const ChainReport& report) {
  json out = {{"p_deferred", report.p_deferred},
              {"p_per_hop", report.p_per_hop},
              {"self_correction_gain", report.self_correction_gain}};
  if (report.p_per_hop > 0.0) out["relative_gain"] = report.self_correction_gain / report.p_per_hop;
  return out;
}

json empirical_to_json(const EmpiricalReport& report) {
  return {{"trials", report.trials},
          {"deferred_successes", report.deferred_successes},
          {"per_hop_successes", report.per_hop_successes},
          {"p_deferred", report.p_deferred},
          {"stderr_deferred", report.stderr_deferred},
          {"p_per_hop", report.p_per_hop},
          {"stderr_per_hop", report.stderr_per_hop}};
}

json sweep_optimum_to_json(const SweepResult& sweep) {
  return {{"argmax_x", sweep.argmax_x}, {"max_p", sweep.max_p}, {"grid_points", sweep.samples.size()}};
}

json circuit_run_to_json(const CircuitRun& run) {
  json outcomes = json::array();
  for (const auto& o : run.outcomes) {
    json row = {{"pattern", pattern_to_json(o.pattern)},
                {"m", o.m},
                {"probability", o.probability},
                {"phase_exponent", o.phase_exponent}};
    if (o.conditional_qubit) {
      row["raw_h"] = complex_to_json(o.raw_h);
      row["raw_v"] = complex_to_json(o.raw_v);
      row["conditional_qubit"] = qubit_to_json(*o.conditional_qubit);
    }
    if (o.measured_phase_exponent) row["measured_phase_exponent"] = *o.measured_phase_exponent;
    if (o.located_mode) row["located_mode"] = *o.located_mode;
    outcomes.push_back(std::move(row));
  }
  return {{"n_photons", run.n_photons},
          {"qubit", qubit_to_json(run.qubit)},
          {"coeffs", coeffs_to_json(run.coeffs)},
          {"probability_by_m", run.probability_by_m()},
          {"outcomes", outcomes}};
}

json certification_to_json(const CertificationReport& report) {
  json cases = json::array();
  for (const auto& c : report.cases) {
    cases.push_back({{"qubit", qubit_to_json(c.qubit)},
                     {"max_probability_deviation", c.max_probability_deviation},
                     {"worst_m", c.worst_m},
                     {"min_fidelity", c.min_fidelity},
                     {"phase_mismatches", c.phase_mismatches},
                     {"pass", c.pass}});
  }
  return {{"pass", report.pass},
          {"tolerance", report.tolerance},
          {"max_probability_deviation", report.max_probability_deviation},
          {"worst_m", report.worst_m},
          {"min_fidelity", report.min_fidelity},
          {"phase_mismatches", report.phase_mismatches},
          {"cases", cases}};
}

std::string csv_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_outcomes_csv(std::ostream& os, const std::vector<OutcomeRecord>& records) {
  os << "m,probability,destroyed\n";
  for (const auto& r : records) os << r.m << ',' << csv_number(r.probability) << ',' << (r.destroyed ? 1 : 0) << '\n';
}

void write_outcome_table_csv(std::ostream& os, const OutcomeTable& table) {
  for (int k = 1; k <= table.hops; ++k) os << "m_" << k << ',';
  os << "joint_success_prob\n";
  for (std::size_t i = 0; i < table.joint_success.size(); ++i) {
    for (int m : table.outcomes_at(i)) os << m << ',';
    os << csv_number(table.joint_success[i]) << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
  os << "x,p\n";
  for (const auto& s : sweep.samples) os << csv_number(s.x) << ',' << csv_number(s.p) << '\n';
}

}  // namespace klmchain
