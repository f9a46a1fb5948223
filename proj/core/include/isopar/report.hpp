#pragma once

#include <string>
#include <string_view>

#include "isopar/classifier.hpp"
#include "isopar/serialize.hpp"

namespace isopar {

enum class ReportFormat { json, csv, markdown };
std::string to_string(ReportFormat f);
ReportFormat report_format_from_string(std::string_view s);

Json to_json(const CaseSpec& s);
CaseSpec case_spec_from_json(const Json& j);
Json to_json(const CaseReport& r);
CaseReport case_report_from_json(const Json& j);
Json to_json(const ClassificationTable& t);
ClassificationTable table_from_json(const Json& j);

std::string to_csv(const ClassificationTable& t);
std::string to_markdown(const ClassificationTable& t);
std::string render_report(const ClassificationTable& t, ReportFormat f);

// writes the rendered report; "-" means stdout. Throws Error naming the path on I/O failure.
void emit_report(const ClassificationTable& t, ReportFormat f, const std::string& path);
ClassificationTable load_table(const std::string& path);

}  // namespace isopar
