// Copyright 2026 The Scripta Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "scripta/error.hpp"
#include "scripta/pipeline.hpp"

namespace scripta {
namespace {

const std::vector<std::string> kCsvHeader = {
    "setup_id",       "cer",           "wer",         "stage_metrics",
    "config_hash",    "segmenter_fingerprint", "normalizer_fingerprint", "noise_seed", "config"};

std::string fixed2(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  return buf;
}

std::vector<std::string> stage_columns(const EvalReport& report) {
  std::set<std::string> keys;
  for (const auto& row : report.rows) {
    for (const auto& [k, v] : row.stage_metrics) keys.insert(k);
  }
  return {keys.begin(), keys.end()};
}

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, field_started = false;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started && field.empty()) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_field();
      records.push_back(std::move(record));
      record.clear();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (quoted) throw DataError("unterminated quoted CSV field");
  if (field_started || !field.empty() || !record.empty()) {
    end_field();
    records.push_back(std::move(record));
  }
  return records;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DataError("bad number in report CSV: \"" + s + "\"");
  }
  if (used != s.size()) throw DataError("bad number in report CSV: \"" + s + "\"");
  return v;
}

std::string render_table(const EvalReport& report, bool markdown) {
  const auto stages = stage_columns(report);
  std::vector<std::string> header = {"setup", "CER", "WER"};
  header.insert(header.end(), stages.begin(), stages.end());
  header.push_back("config");

  std::vector<std::vector<std::string>> cells{header};
  for (const auto& row : report.rows) {
    std::vector<std::string> line = {row.setup_id, fixed2(row.cer), fixed2(row.wer)};
    for (const auto& key : stages) {
      auto it = row.stage_metrics.find(key);
      line.push_back(it == row.stage_metrics.end() ? "-" : fixed2(it->second));
    }
    line.push_back(row.provenance.config_hash);
    cells.push_back(std::move(line));
  }

  std::ostringstream out;
  if (markdown) {
    for (std::size_t r = 0; r < cells.size(); ++r) {
      out << '|';
      for (const auto& c : cells[r]) out << ' ' << c << " |";
      out << '\n';
      if (r == 0) {
        out << '|';
        for (std::size_t c = 0; c < cells[0].size(); ++c) out << (c == 0 ? " --- |" : " ---: |");
        out << '\n';
      }
    }
    return out.str();
  }

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  for (const auto& line : cells) {
    std::string text;
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c) text += "  ";
      // First column left-aligned, numbers right-aligned.
      const std::string pad(width[c] - line[c].size(), ' ');
      text += (c == 0 || c + 1 == line.size()) ? line[c] + pad : pad + line[c];
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    out << text << '\n';
  }
  return out.str();
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "text" || name == "text_table") return ReportFormat::TextTable;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "markdown" || name == "md") return ReportFormat::Markdown;
  throw DataError("unknown report format \"" + std::string(name) + "\"");
}

std::string render_report(const EvalReport& report, ReportFormat format) {
  if (format != ReportFormat::Csv) return render_table(report, format == ReportFormat::Markdown);

  std::ostringstream out;
  for (std::size_t i = 0; i < kCsvHeader.size(); ++i) out << (i ? "," : "") << kCsvHeader[i];
  out << '\n';
  for (const auto& row : report.rows) {
    std::string stages;
    for (const auto& [k, v] : row.stage_metrics) {
      if (!stages.empty()) stages += ';';
      stages += k + "=" + fixed2(v);
    }
    const auto& p = row.provenance;
    const std::vector<std::string> fields = {
        row.setup_id, fixed2(row.cer), fixed2(row.wer), stages, p.config_hash,
        p.segmenter_fingerprint, p.normalizer_fingerprint,
        p.noise_seed ? std::to_string(*p.noise_seed) : std::string(), p.config};
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << csv_field(fields[i]);
    out << '\n';
  }
  return out.str();
}

EvalReport parse_report_csv(std::string_view csv) {
  const auto records = parse_csv(csv);
  if (records.empty() || records.front() != kCsvHeader) throw DataError("not a report CSV");
  EvalReport report;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r];
    if (f.size() != kCsvHeader.size()) {
      throw LineError(r + 1, "expected " + std::to_string(kCsvHeader.size()) + " CSV fields");
    }
    ReportRow row;
    row.setup_id = f[0];
    row.cer = parse_number(f[1]);
    row.wer = parse_number(f[2]);
    std::size_t start = 0;
    while (start < f[3].size()) {
      const auto end = std::min(f[3].find(';', start), f[3].size());
      const std::string item = f[3].substr(start, end - start);
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw LineError(r + 1, "bad stage metric \"" + item + "\"");
      row.stage_metrics[item.substr(0, eq)] = parse_number(item.substr(eq + 1));
      start = end + 1;
    }
    row.provenance.config_hash = f[4];
    row.provenance.segmenter_fingerprint = f[5];
    row.provenance.normalizer_fingerprint = f[6];
    if (!f[7].empty()) row.provenance.noise_seed = std::stoull(f[7]);
    row.provenance.config = f[8];
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace scripta
