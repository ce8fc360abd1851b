#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "noisytopk/experiments.hpp"

namespace noisytopk {

using Json = nlohmann::ordered_json;

/// CSV number formatting: %.12g, "NA" for NaN, "inf"/"-inf" for infinities.
inline std::string csv_num(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// JSON number or null for non-finite values.
inline Json json_num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols = {
      "x_value",          "n",                  "alpha",               "beta",
      "mean_half_hamming", "se_half_hamming",   "mean_lower_bound",    "se_lower_bound",
      "mean_upper_bound", "se_upper_bound",     "exp_lower_bound",     "se_exp_lower_bound",
      "exp_upper_bound",  "se_exp_upper_bound", "theory_lower",        "exact_recovery_rate",
      "se_exact_recovery", "jaccard_degree",    "se_jaccard_degree",   "jaccard_evec",
      "se_jaccard_evec",  "trials",             "excluded_trials",     "disconnected_trials"};
  return cols;
}

inline std::vector<double> summary_values(const SummaryRow& r) {
  return {r.x_value,
          static_cast<double>(r.n),
          r.alpha,
          r.beta,
          r.mean_half_hamming,
          r.se_half_hamming,
          r.mean_lower_bound,
          r.se_lower_bound,
          r.mean_upper_bound,
          r.se_upper_bound,
          r.exp_lower_bound,
          r.se_exp_lower_bound,
          r.exp_upper_bound,
          r.se_exp_upper_bound,
          r.theory_lower,
          r.exact_recovery_rate,
          r.se_exact_recovery,
          r.jaccard_degree,
          r.se_jaccard_degree,
          r.jaccard_evec,
          r.se_jaccard_evec,
          static_cast<double>(r.trials),
          static_cast<double>(r.excluded_trials),
          static_cast<double>(r.disconnected_trials)};
}

inline const std::vector<std::string>& localization_columns() {
  static const std::vector<std::string> cols = {
      "n",        "reps",      "x_h_mean",  "x_h_se",    "x_h_q10",  "x_h_q50",    "x_h_q90",
      "m_out_mean", "m_out_se", "m_out_q10", "m_out_q50", "m_out_q90", "gap_mean", "gap_se",
      "gap_q10",  "gap_q50",   "gap_q90",   "hub_ties",  "nonconverged"};
  return cols;
}

inline std::vector<double> localization_values(const LocalizationRow& r) {
  return {static_cast<double>(r.n), static_cast<double>(r.reps), r.x_h_mean, r.x_h_se, r.x_h_q10, r.x_h_q50,
          r.x_h_q90, r.m_out_mean, r.m_out_se, r.m_out_q10, r.m_out_q50, r.m_out_q90, r.gap_mean, r.gap_se,
          r.gap_q10, r.gap_q50, r.gap_q90, static_cast<double>(r.hub_ties), static_cast<double>(r.nonconverged)};
}

namespace detail {

inline void write_csv_line(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

inline void write_csv_table(std::ostream& os, const std::vector<std::string>& cols,
                            const std::vector<std::vector<double>>& rows) {
  write_csv_line(os, cols);
  for (const auto& r : rows) {
    std::vector<std::string> cells;
    cells.reserve(r.size());
    for (double v : r) cells.push_back(csv_num(v));
    write_csv_line(os, cells);
  }
}

inline Json json_table(const std::vector<std::string>& cols, const std::vector<std::vector<double>>& rows) {
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json o = Json::object();
    for (std::size_t i = 0; i < cols.size(); ++i) o[cols[i]] = json_num(r[i]);
    arr.push_back(std::move(o));
  }
  return arr;
}

}  // namespace detail

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  std::vector<std::vector<double>> vals;
  for (const auto& r : rows) vals.push_back(summary_values(r));
  detail::write_csv_table(os, summary_columns(), vals);
}

inline Json summary_json(const std::vector<SummaryRow>& rows) {
  std::vector<std::vector<double>> vals;
  for (const auto& r : rows) vals.push_back(summary_values(r));
  return detail::json_table(summary_columns(), vals);
}

inline void write_localization_csv(std::ostream& os, const std::vector<LocalizationRow>& rows) {
  std::vector<std::vector<double>> vals;
  for (const auto& r : rows) vals.push_back(localization_values(r));
  detail::write_csv_table(os, localization_columns(), vals);
}

inline Json localization_json(const std::vector<LocalizationRow>& rows) {
  std::vector<std::vector<double>> vals;
  for (const auto& r : rows) vals.push_back(localization_values(r));
  return detail::json_table(localization_columns(), vals);
}

inline void write_profile_csv(std::ostream& os, const std::vector<ModelProfile>& profiles) {
  os << "model,rank,node,original_degree,noisy_degree\n";
  for (const auto& p : profiles)
    for (const auto& e : p.entries)
      os << to_string(p.model) << ',' << e.rank << ',' << e.node << ',' << e.original_degree << ','
         << e.noisy_degree << '\n';
}

inline Json profile_json(const std::vector<ModelProfile>& profiles) {
  Json arr = Json::array();
  for (const auto& p : profiles) {
    Json o;
    o["model"] = to_string(p.model);
    o["parameters"] = p.parameters;
    Json rows = Json::array();
    for (const auto& e : p.entries)
      rows.push_back({{"rank", e.rank}, {"node", e.node}, {"original_degree", e.original_degree},
                      {"noisy_degree", e.noisy_degree}});
    o["rows"] = std::move(rows);
    arr.push_back(std::move(o));
  }
  return arr;
}

}  // namespace noisytopk
