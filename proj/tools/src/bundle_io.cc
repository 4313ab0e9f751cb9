// Copyright 2026 The MIA Disparity Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "mia/cli/bundle_io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "mia/status_macros.h"
#include "mia/validate.h"

namespace mia::cli {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(Trim(line.substr(start)));
      return out;
    }
    out.push_back(Trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

// Non-empty lines with their 1-based line numbers.
std::vector<std::pair<size_t, std::string_view>> Lines(std::string_view text) {
  std::vector<std::pair<size_t, std::string_view>> out;
  size_t line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = Trim(text.substr(start, end - start));
    if (!line.empty()) out.emplace_back(line_no, line);
    start = end + 1;
  }
  return out;
}

std::string FileName(std::string_view name) {
  std::string out(name);
  for (char& c : out) {
    if (c == '/' || c == '\\' || c == ' ') c = '@';
  }
  return out;
}

absl::StatusOr<json> ParseJsonFile(const fs::path& path) {
  ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": ", e.what()));
  }
}

template <typename T>
absl::StatusOr<T> Field(const json& j, const char* key, const fs::path& path) {
  if (!j.contains(key)) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": missing field '", key, "'"));
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat(path.string(), ": field '", key, "': ", e.what()));
  }
}

}  // namespace

std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

absl::StatusOr<double> ParseDouble(std::string_view text) {
  text = Trim(text);
  if (text == "nan" || text == "NaN" || text == "NAN") {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot parse '", std::string(text), "' as a number"));
  }
  return value;
}

absl::StatusOr<std::string> ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open ", path.string()));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::Status WriteFileAtomic(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      return absl::UnavailableError(
          absl::StrCat("cannot write ", tmp.string()));
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
      return absl::UnavailableError(
          absl::StrCat("write failed for ", tmp.string()));
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    return absl::UnavailableError(absl::StrCat(
        "cannot rename ", tmp.string(), " to ", path.string(), ": ",
        ec.message()));
  }
  return absl::OkStatus();
}

std::string MatrixToCsv(const RealMatrix& matrix) {
  std::string out;
  for (size_t c = 0; c < matrix.cols(); ++c) {
    if (c > 0) out += ',';
    absl::StrAppend(&out, "x", c);
  }
  out += '\n';
  for (size_t r = 0; r < matrix.rows(); ++r) {
    for (size_t c = 0; c < matrix.cols(); ++c) {
      if (c > 0) out += ',';
      out += FormatDouble(matrix(r, c));
    }
    out += '\n';
  }
  return out;
}

absl::StatusOr<RealMatrix> ParseMatrixCsv(std::string_view text,
                                          const std::string& source) {
  auto lines = Lines(text);
  if (lines.empty()) {
    return absl::InvalidArgumentError(absl::StrCat(source, ": empty file"));
  }
  const size_t cols = SplitFields(lines.front().second).size();
  std::vector<double> data;
  data.reserve(cols * (lines.size() - 1));
  for (size_t r = 1; r < lines.size(); ++r) {
    const auto& [line_no, line] = lines[r];
    auto fields = SplitFields(line);
    if (fields.size() != cols) {
      return absl::InvalidArgumentError(absl::StrCat(
          source, ": row ", r, " (line ", line_no, ") has ", fields.size(),
          " columns, header has ", cols));
    }
    for (size_t c = 0; c < fields.size(); ++c) {
      auto value = ParseDouble(fields[c]);
      if (!value.ok()) {
        return absl::InvalidArgumentError(absl::StrCat(
            source, ": row ", r, ", column ", c + 1, " (line ", line_no,
            "): non-numeric cell '", std::string(fields[c]), "'"));
      }
      data.push_back(*value);
    }
  }
  return RealMatrix(lines.size() - 1, cols, std::move(data));
}

std::string FlagsToCsv(const std::vector<uint8_t>& flags,
                       std::string_view header) {
  std::string out(header);
  out += '\n';
  for (uint8_t f : flags) {
    out += static_cast<char>('0' + f);
    out += '\n';
  }
  return out;
}

absl::StatusOr<std::vector<uint8_t>> ParseFlagsCsv(std::string_view text,
                                                   const std::string& source,
                                                   std::string_view header) {
  auto lines = Lines(text);
  if (lines.empty() || lines.front().second != header) {
    return absl::InvalidArgumentError(absl::StrCat(
        source, ": expected header '", std::string(header), "'"));
  }
  std::vector<uint8_t> flags;
  flags.reserve(lines.size() - 1);
  for (size_t r = 1; r < lines.size(); ++r) {
    const auto& [line_no, line] = lines[r];
    if (line == "0" || line == "1") {
      flags.push_back(static_cast<uint8_t>(line[0] - '0'));
    } else {
      return absl::InvalidArgumentError(
          absl::StrCat(source, ": row ", r, ", column 1 (line ", line_no,
                       "): expected 0 or 1, got '", std::string(line), "'"));
    }
  }
  return flags;
}

absl::StatusOr<ExperimentBundle> LoadBundle(const fs::path& manifest) {
  ASSIGN_OR_RETURN(json m, ParseJsonFile(manifest));
  if (!m.is_object()) {
    return absl::InvalidArgumentError(
        absl::StrCat(manifest.string(), ": manifest must be a JSON object"));
  }
  const fs::path dir = manifest.parent_path();
  ASSIGN_OR_RETURN(int version, Field<int>(m, "version", manifest));
  if (version != kManifestVersion) {
    return absl::InvalidArgumentError(absl::StrCat(
        manifest.string(), ": unsupported manifest version ", version));
  }
  ASSIGN_OR_RETURN(size_t n_samples, Field<size_t>(m, "n_samples", manifest));

  ExperimentBundle bundle;
  ASSIGN_OR_RETURN(std::string gt_ref,
                   Field<std::string>(m, "ground_truth", manifest));
  {
    const fs::path path = dir / gt_ref;
    ASSIGN_OR_RETURN(std::string text, ReadFile(path));
    ASSIGN_OR_RETURN(bundle.ground_truth.labels,
                     ParseFlagsCsv(text, path.string(), "label"));
    if (bundle.ground_truth.size() != n_samples) {
      return absl::InvalidArgumentError(absl::StrCat(
          path.string(), ": has ", bundle.ground_truth.size(),
          " labels, manifest declares n_samples=", n_samples));
    }
  }

  if (m.contains("attacks")) {
    for (const json& a : m.at("attacks")) {
      ASSIGN_OR_RETURN(std::string name, Field<std::string>(a, "name", manifest));
      ASSIGN_OR_RETURN(std::string ref, Field<std::string>(a, "scores", manifest));
      ASSIGN_OR_RETURN(auto seeds,
                       Field<std::vector<std::string>>(a, "seeds", manifest));
      const fs::path path = dir / ref;
      ASSIGN_OR_RETURN(std::string text, ReadFile(path));
      ScoreMatrix sm;
      sm.attack_name = name;
      ASSIGN_OR_RETURN(sm.values, ParseMatrixCsv(text, path.string()));
      if (sm.values.cols() != n_samples) {
        return absl::InvalidArgumentError(absl::StrCat(
            path.string(), ": has ", sm.values.cols(),
            " sample columns, manifest declares n_samples=", n_samples));
      }
      if (seeds.size() != sm.values.rows()) {
        return absl::InvalidArgumentError(absl::StrCat(
            path.string(), ": has ", sm.values.rows(), " instance rows, ",
            "manifest lists ", seeds.size(), " seeds"));
      }
      sm.seed_labels = std::move(seeds);
      if (!bundle.attacks.emplace(name, std::move(sm)).second) {
        return absl::InvalidArgumentError(absl::StrCat(
            manifest.string(), ": duplicate attack '", name, "'"));
      }
    }
  }

  if (m.contains("signals")) {
    for (const json& s : m.at("signals")) {
      ASSIGN_OR_RETURN(std::string name, Field<std::string>(s, "name", manifest));
      ASSIGN_OR_RETURN(std::string ref, Field<std::string>(s, "file", manifest));
      const fs::path path = dir / ref;
      ASSIGN_OR_RETURN(std::string text, ReadFile(path));
      ASSIGN_OR_RETURN(RealMatrix values, ParseMatrixCsv(text, path.string()));
      if (values.cols() != n_samples) {
        return absl::InvalidArgumentError(absl::StrCat(
            path.string(), ": has ", values.cols(),
            " sample columns, manifest declares n_samples=", n_samples));
      }
      bundle.signals[name] = std::move(values);
    }
  }

  if (m.contains("canary_mask") && !m.at("canary_mask").is_null()) {
    ASSIGN_OR_RETURN(std::string ref,
                     Field<std::string>(m, "canary_mask", manifest));
    const fs::path path = dir / ref;
    ASSIGN_OR_RETURN(std::string text, ReadFile(path));
    ASSIGN_OR_RETURN(auto mask, ParseFlagsCsv(text, path.string(), "canary"));
    bundle.canary_mask = std::move(mask);
  }

  if (m.contains("metadata")) {
    for (const auto& [key, value] : m.at("metadata").items()) {
      bundle.metadata[key] =
          value.is_string() ? value.get<std::string>() : value.dump();
    }
  }
  return bundle;
}

absl::StatusOr<ExperimentBundle> IngestBundle(const fs::path& manifest) {
  ASSIGN_OR_RETURN(ExperimentBundle bundle, LoadBundle(manifest));
  const ValidationReport report = ValidateBundle(bundle);
  if (!report.ok()) {
    return absl::FailedPreconditionError(absl::StrCat(
        manifest.string(), ": bundle failed validation\n", report.ToString()));
  }
  return bundle;
}

absl::Status WriteBundle(const ExperimentBundle& bundle, const fs::path& dir) {
  json m;
  m["version"] = kManifestVersion;
  m["n_samples"] = bundle.num_samples();
  m["ground_truth"] = "ground_truth.csv";
  RETURN_IF_ERROR(WriteFileAtomic(
      dir / "ground_truth.csv", FlagsToCsv(bundle.ground_truth.labels, "label")));

  m["attacks"] = json::array();
  for (const auto& [name, sm] : bundle.attacks) {
    const std::string ref = absl::StrCat("scores/", FileName(name), ".csv");
    RETURN_IF_ERROR(WriteFileAtomic(dir / ref, MatrixToCsv(sm.values)));
    m["attacks"].push_back(
        json{{"name", name}, {"scores", ref}, {"seeds", sm.seed_labels}});
  }
  m["signals"] = json::array();
  for (const auto& [name, values] : bundle.signals) {
    const std::string ref = absl::StrCat("signals/", FileName(name), ".csv");
    RETURN_IF_ERROR(WriteFileAtomic(dir / ref, MatrixToCsv(values)));
    m["signals"].push_back(json{{"name", name}, {"file", ref}});
  }
  if (bundle.canary_mask.has_value()) {
    m["canary_mask"] = "canary_mask.csv";
    RETURN_IF_ERROR(WriteFileAtomic(dir / "canary_mask.csv",
                                    FlagsToCsv(*bundle.canary_mask, "canary")));
  }
  m["metadata"] = json::object();
  for (const auto& [key, value] : bundle.metadata) m["metadata"][key] = value;
  return WriteFileAtomic(dir / kManifestFile, m.dump(2) + "\n");
}

std::vector<std::string> SplitList(std::string_view text) {
  std::vector<std::string> out;
  if (Trim(text).empty()) return out;
  for (auto field : SplitFields(text)) out.emplace_back(field);
  return out;
}

absl::StatusOr<std::vector<double>> ParseDoubleList(std::string_view text) {
  std::vector<double> out;
  for (const auto& item : SplitList(text)) {
    ASSIGN_OR_RETURN(double v, ParseDouble(item));
    out.push_back(v);
  }
  return out;
}

}  // namespace mia::cli
