#pragma once

// JSON and CSV serialization for resources, reports, and simulator runs.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "klmchain/chain.hpp"
#include "klmchain/optimize.hpp"
#include "klmchain/oracle.hpp"
#include "klmchain/resource.hpp"
#include "klmchain/teleport.hpp"

namespace klmchain {

/// {"n_photons": N, "coeffs": [[re, im], ...]}
nlohmann::json coeffs_to_json(const ResourceCoeffs& coeffs);
/// Parses the shape only; normalization is left to validate(). Throws
/// std::invalid_argument on malformed input.
ResourceCoeffs coeffs_from_json(const nlohmann::json& j);
ResourceCoeffs load_coeffs_file(const std::string& path);

nlohmann::json qubit_to_json(const QubitState& q);
nlohmann::json outcomes_to_json(const std::vector<OutcomeRecord>& records);
nlohmann::json chain_report_to_json(const ChainReport& report);
nlohmann::json empirical_to_json(const EmpiricalReport& report);
nlohmann::json sweep_optimum_to_json(const SweepResult& sweep);
nlohmann::json circuit_run_to_json(const CircuitRun& run);
nlohmann::json certification_to_json(const CertificationReport& report);

/// Formats with 12 significant digits, the precision used for every CSV cell.
std::string csv_number(double value);

/// Header: m,probability,destroyed
void write_outcomes_csv(std::ostream& os, const std::vector<OutcomeRecord>& records);
/// Header: m_1,..,m_M,joint_success_prob
void write_outcome_table_csv(std::ostream& os, const OutcomeTable& table);
/// Header: x,p
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);

}  // namespace klmchain
