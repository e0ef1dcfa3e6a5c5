// Copyright 2026 The cssim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cssim/simulation.hpp"

namespace cssim {

namespace {

using nlohmann::json;

constexpr int kMetricsSchemaVersion = 1;

json outcome_to_json(const std::string& image, const AttackOutcome& o) {
  return {{"image", image},
          {"success", o.success},
          {"edits", o.edits},
          {"queries", o.queries},
          {"hamming", o.hamming},
          {"distortion", o.distortion}};
}

json attack_summary(const AttackSummary& s) {
  json out = {{"attack", s.attack},
              {"attempts", s.attempts},
              {"successes", s.successes},
              {"success_rate", s.success_rate},
              {"mean_edits", s.mean_edits},
              {"mean_queries", s.mean_queries},
              {"mean_hamming", s.mean_hamming},
              {"mean_distortion", s.mean_distortion},
              {"budget_violations", s.budget_violations},
              {"budget",
               {{"max_edits", s.budget.max_edits},
                {"max_delta", s.budget.max_delta},
                {"max_queries", s.budget.max_queries}}}};
  return out;
}

// The echoed config leaves out the thread count: it must not change output.
json echoed_config(const SimulationConfig& cfg) {
  json c = to_json(cfg);
  c.erase("jobs");
  return c;
}

}  // namespace

json metrics_to_json(const SimulationMetrics& m, const SimulationConfig& cfg) {
  json accounts = json::array();
  for (const AccountSummary& a : m.per_account) {
    accounts.push_back({{"account_id", a.account_id},
                        {"class", to_string(a.cls)},
                        {"uploads", a.uploads},
                        {"db_uploads", a.db_uploads},
                        {"real_matches", a.real_matches},
                        {"synthetic", a.synthetic},
                        {"matched_observed", a.matched_observed},
                        {"eligible", a.eligible},
                        {"reported", a.reported},
                        {"inliers", a.inliers},
                        {"report_verified", a.report_verified}});
  }
  json attacks = json::object();
  for (const AttackSummary& s : m.attacks) attacks[s.attack] = attack_summary(s);

  return {{"schema_version", kMetricsSchemaVersion},
          {"config", echoed_config(cfg)},
          {"vouchers",
           {{"uploads", m.uploads},
            {"real", m.real_vouchers},
            {"synthetic", m.synthetic_vouchers},
            {"db_uploads", m.db_uploads},
            {"real_matches", m.real_matches},
            {"matched", m.matched},
            {"unmatched", m.unmatched},
            {"duplicates", m.duplicates},
            {"parse_errors", m.parse_errors},
            {"bytes_on_wire", m.bytes_on_wire}}},
          {"shares_observed", m.shares_observed},
          {"detections",
           {{"accounts", m.accounts},
            {"reports", m.reports},
            {"true_positives", m.true_positives},
            {"false_positives", m.false_positives},
            {"eligible_accounts", m.eligible_accounts},
            {"eligible_reported", m.eligible_reported},
            {"pending_accounts", m.pending_accounts},
            {"below_threshold_accounts", m.below_threshold_real},
            {"derivatives_verified", m.derivatives_verified},
            {"synthetic_excluded", m.synthetic_excluded}}},
          {"accounts", accounts},
          {"attacks", attacks}};
}

json attack_to_json(const AttackSummary& s, const SimulationConfig& cfg) {
  json out = attack_summary(s);
  out["schema_version"] = kMetricsSchemaVersion;
  out["seed"] = cfg.seed;
  json outcomes = json::array();
  for (const auto& [image, o] : s.outcomes) outcomes.push_back(outcome_to_json(image, o));
  out["outcomes"] = outcomes;
  return out;
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace cssim
