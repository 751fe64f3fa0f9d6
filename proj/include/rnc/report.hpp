#pragma once

#include <ostream>
#include <span>
#include <string>

#include <json.hpp>

#include "rnc/analysis.hpp"
#include "rnc/dynamics.hpp"
#include "rnc/spectral.hpp"

namespace rnc {

/// Shortest round-trip decimal form, locale independent.
std::string format_real(double v);

/// Long format, path-major then t: path,t,diameter,disagreement_inf,disagreement_l2
void write_paths_csv(std::ostream& out, std::span<const TrajectoryRecord> paths);
/// t,mean_diameter,p_exceed_eps,max_diameter,lp_mean
void write_aggregate_csv(std::ostream& out, const ModeReport& report);

nlohmann::json paths_json(std::span<const TrajectoryRecord> paths);
nlohmann::json aggregate_json(const ModeReport& report);

/// Flat object: lambda2_modulus, decision, positive_diagonal_support,
/// uncertainty_halfwidth, discrepancy (null when absent).
nlohmann::json verdict_json(const ConsensusVerdict& v);

/// Classifications, terminal statistics and curves of a ModeReport.
nlohmann::json mode_report_json(const ModeReport& r);

nlohmann::json spectrum_json(const Spectrum& s);

}  // namespace rnc
