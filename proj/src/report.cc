/*
 * Copyright 2026 The complexity-lens Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "clens/report.h"

#include <cstdio>
#include <fstream>

#include "clens/error.h"

namespace clens {
namespace {

using Json = nlohmann::ordered_json;

Json OptionalNumber(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json MacroJson(const MacroAverages& m) {
  Json j;
  j["P"] = OptionalNumber(m.precision);
  j["R"] = OptionalNumber(m.recall);
  j["F1"] = OptionalNumber(m.f1);
  for (std::size_t k = 0; k < m.edit_distance.size(); ++k) {
    j[std::string(SubstitutionCostLabel(k))] = OptionalNumber(m.edit_distance[k]);
  }
  j["TER"] = OptionalNumber(m.ter);
  return j;
}

Json UndefinedJson(const MacroAverages& m) {
  return Json{{"P", m.undefined_precision}, {"R", m.undefined_recall}, {"F1", m.undefined_f1}};
}

Json AccuracyJson(const AccuracyReport& a) {
  Json j;
  j["accuracy"] = a.accuracy;
  j["n"] = a.n;
  j["f1"] = a.PositiveF1();
  j["confusion"] = Json{{"gold0_pred0", a.confusion[0][0]},
                        {"gold0_pred1", a.confusion[0][1]},
                        {"gold1_pred0", a.confusion[1][0]},
                        {"gold1_pred1", a.confusion[1][1]}};
  return j;
}

std::string Cell(const Json& v) {
  if (v.is_null()) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v.get<double>());
  return buf;
}

}  // namespace

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "tsv") return ReportFormat::kTsv;
  if (name == "highlighted-text") return ReportFormat::kHighlightedText;
  throw ValidationError("unknown report format: " + std::string(name));
}

Json ReportToJson(const EvaluationReport& report) {
  Json j;
  j["dataset"] = report.dataset;
  j["explainer"] = report.explainer;
  j["classifier"] = report.classifier;
  j["seed"] = report.seed;
  j["undefined_policy"] = UndefinedPolicyName(report.undefined_policy);
  Json splits = Json::object();
  for (const auto& [split, count] : report.split_pairs) splits[split] = count;
  j["split_pairs"] = std::move(splits);
  j["sentences"] = report.macro.sentences;
  j["macro"] = MacroJson(report.macro);
  j["undefined_counts"] = UndefinedJson(report.macro);
  if (report.classification) j["classification"] = AccuracyJson(*report.classification);
  if (report.comparison) {
    Json c = AccuracyJson(report.comparison->test);
    c["classifier"] = report.comparison->classifier;
    c["z"] = report.comparison->ztest.z;
    c["p_two_tailed"] = report.comparison->ztest.p_two_tailed;
    j["comparison"] = std::move(c);
  }
  if (!report.per_domain.empty()) {
    Json rows = Json::array();
    for (const auto& d : report.per_domain) {
      Json row;
      row["domain"] = d.domain;
      row["sentences"] = d.macro.sentences;
      row["macro"] = MacroJson(d.macro);
      row["undefined_counts"] = UndefinedJson(d.macro);
      row["classification_f1"] = OptionalNumber(d.classification_f1);
      rows.push_back(std::move(row));
    }
    j["per_domain"] = std::move(rows);
  }
  if (!report.correlations.empty()) {
    Json rows = Json::array();
    for (const auto& c : report.correlations) {
      rows.push_back(Json{{"classification", c.classification_metric},
                          {"explanation", c.explanation_metric},
                          {"method", CorrelationName(c.method)},
                          {"domains", c.domains},
                          {"value", OptionalNumber(c.value)}});
    }
    j["correlations"] = std::move(rows);
  }
  return j;
}

std::string ReportJsonText(const EvaluationReport& report) {
  return ReportToJson(report).dump(2) + "\n";
}

std::string ReportTsvFromJson(const Json& report) {
  static const char* kColumns[] = {"P", "R", "F1", "TER", "ED_1", "ED_1.5", "ED_2"};
  std::string out = "dataset\tdomain\texplainer\tsentences";
  for (const char* c : kColumns) out += std::string("\t") + c;
  out += "\tseed\n";
  const auto row = [&](const std::string& domain, const Json& sentences, const Json& macro) {
    out += report.at("dataset").get<std::string>() + "\t" + domain + "\t" +
           report.at("explainer").get<std::string>() + "\t" + std::to_string(sentences.get<std::size_t>());
    for (const char* c : kColumns) out += "\t" + Cell(macro.at(c));
    out += "\t" + std::to_string(report.at("seed").get<std::uint64_t>()) + "\n";
  };
  row("ALL", report.at("sentences"), report.at("macro"));
  if (report.contains("per_domain")) {
    for (const auto& d : report.at("per_domain")) {
      row(d.at("domain").get<std::string>(), d.at("sentences"), d.at("macro"));
    }
  }
  return out;
}

std::string HighlightedText(const EvaluationReport& report) {
  std::string out = "# dataset=" + report.dataset + " explainer=" + report.explainer +
                    " seed=" + std::to_string(report.seed) + "\n";
  for (const auto& s : report.sentences) out += FormatHighlighted(s.complex, s.mask) + "\n";
  return out;
}

std::string ExplanationsJsonl(const EvaluationReport& report) {
  std::string out;
  for (const auto& s : report.sentences) {
    Json j;
    j["id"] = s.id;
    j["explainer"] = report.explainer;
    j["mask"] = s.mask.bits;
    j["seed"] = report.seed;
    if (s.domain) j["domain"] = *s.domain;
    if (s.score) {
      j["P"] = OptionalNumber(s.score->precision);
      j["R"] = OptionalNumber(s.score->recall);
      j["F1"] = OptionalNumber(s.score->f1);
      for (std::size_t k = 0; k < s.score->edit_distance.size(); ++k) {
        j[std::string(SubstitutionCostLabel(k))] = s.score->edit_distance[k];
      }
      j["TER"] = s.score->ter;
    }
    out += j.dump() + "\n";
  }
  return out;
}

void WriteTextFile(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw RuntimeError("write failure on " + path.string());
}

std::vector<std::filesystem::path> WriteReport(const EvaluationReport& report, ReportFormat format,
                                               const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  switch (format) {
    case ReportFormat::kJson:
      written.push_back(dir / "report.json");
      WriteTextFile(written.back(), ReportJsonText(report));
      break;
    case ReportFormat::kTsv:
      written.push_back(dir / "report.tsv");
      WriteTextFile(written.back(), ReportTsvFromJson(ReportToJson(report)));
      break;
    case ReportFormat::kHighlightedText:
      written.push_back(dir / "highlights.txt");
      WriteTextFile(written.back(), HighlightedText(report));
      written.push_back(dir / "explanations.jsonl");
      WriteTextFile(written.back(), ExplanationsJsonl(report));
      break;
  }
  return written;
}

}  // namespace clens
