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

#ifndef CLENS_REPORT_H_
#define CLENS_REPORT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "clens/pipeline.h"
#include "json.hpp"

namespace clens {

enum class ReportFormat { kJson, kTsv, kHighlightedText };
ReportFormat ParseReportFormat(std::string_view name);

nlohmann::ordered_json ReportToJson(const EvaluationReport& report);
std::string ReportJsonText(const EvaluationReport& report);

// Flat table with one overall row ("ALL") plus one row per domain.
std::string ReportTsvFromJson(const nlohmann::ordered_json& report);

// One `[[token]]`-wrapped sentence per line after a `#` header line.
std::string HighlightedText(const EvaluationReport& report);

// {"id","explainer","mask","seed"} plus sentence scores when available.
std::string ExplanationsJsonl(const EvaluationReport& report);

// Writes report.json, report.tsv or highlights.txt + explanations.jsonl
// under `dir` and returns the written paths.
std::vector<std::filesystem::path> WriteReport(const EvaluationReport& report, ReportFormat format,
                                               const std::filesystem::path& dir);

void WriteTextFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace clens

#endif  // CLENS_REPORT_H_
