#include "rnc/report.hpp"

#include <charconv>
#include <cmath>

namespace rnc {

using nlohmann::json;

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_paths_csv(std::ostream& out, std::span<const TrajectoryRecord> paths) {
  out << "path,t,diameter,disagreement_inf,disagreement_l2\n";
  for (const auto& p : paths)
    for (const auto& s : p.series)
      out << p.path_id << ',' << s.t << ',' << format_real(s.diameter) << ',' << format_real(s.disagreement_inf)
          << ',' << format_real(s.disagreement_l2) << '\n';
}

void write_aggregate_csv(std::ostream& out, const ModeReport& r) {
  out << "t,mean_diameter,p_exceed_eps,max_diameter,lp_mean\n";
  for (std::size_t t = 0; t < r.lp_curve.size(); ++t)
    out << t << ',' << format_real(r.mean_diameter[t]) << ',' << format_real(r.prob_curve[t]) << ','
        << format_real(r.max_diameter[t]) << ',' << format_real(r.lp_curve[t]) << '\n';
}

json paths_json(std::span<const TrajectoryRecord> paths) {
  json arr = json::array();
  for (const auto& p : paths) {
    json series = json::array();
    for (const auto& s : p.series)
      series.push_back({{"t", s.t},
                        {"diameter", s.diameter},
                        {"disagreement_inf", s.disagreement_inf},
                        {"disagreement_l2", s.disagreement_l2}});
    arr.push_back({{"path", p.path_id}, {"x0", p.x0}, {"series", std::move(series)}, {"final_state", p.final_state}});
  }
  return arr;
}

json aggregate_json(const ModeReport& r) {
  json arr = json::array();
  for (std::size_t t = 0; t < r.lp_curve.size(); ++t)
    arr.push_back({{"t", t},
                   {"mean_diameter", r.mean_diameter[t]},
                   {"p_exceed_eps", r.prob_curve[t]},
                   {"max_diameter", r.max_diameter[t]},
                   {"lp_mean", r.lp_curve[t]}});
  return arr;
}

json verdict_json(const ConsensusVerdict& v) {
  json j;
  j["lambda2_modulus"] = v.lambda2_modulus;
  j["decision"] = to_string(v.decision);
  j["positive_diagonal_support"] = v.positive_diagonal_support;
  j["uncertainty_halfwidth"] = v.uncertainty_halfwidth;
  j["discrepancy"] = v.discrepancy ? json(*v.discrepancy) : json(nullptr);
  return j;
}

json mode_report_json(const ModeReport& r) {
  auto name = [](ModeStatus s) { return s == ModeStatus::converged ? "converged" : "not_converged"; };
  json j;
  j["eps"] = r.eps;
  j["p"] = r.p;
  j["horizon"] = r.horizon;
  j["paths"] = r.paths;
  j["thresholds"] = {{"as_fraction_min", r.thresholds.as_fraction_min},
                     {"prob_exceed_max", r.thresholds.prob_exceed_max},
                     {"lp_max", std::pow(r.eps, r.p)}};
  j["as_fraction"] = r.as_fraction;
  j["prob_exceed_eps_at_horizon"] = r.prob_curve.back();
  j["lp_mean_at_horizon"] = r.lp_curve.back();
  j["classification"] = {{"almost_sure", name(r.almost_sure)},
                         {"in_probability", name(r.in_probability)},
                         {"in_lp", name(r.in_lp)}};
  j["agreement"] = r.agreement();
  j["prob_curve"] = r.prob_curve;
  j["lp_curve"] = r.lp_curve;
  return j;
}

json spectrum_json(const Spectrum& s) {
  json eig = json::array();
  for (const auto& e : s.eigenvalues) eig.push_back({{"re", e.real()}, {"im", e.imag()}, {"modulus", std::abs(e)}});
  return {{"eigenvalues", std::move(eig)}, {"residual", s.residual}};
}

}  // namespace rnc
