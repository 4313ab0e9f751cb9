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

#ifndef MIA_CLI_BUNDLE_IO_H_
#define MIA_CLI_BUNDLE_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "mia/matrix.h"
#include "mia/types.h"

namespace mia::cli {

inline constexpr int kManifestVersion = 1;
inline constexpr char kManifestFile[] = "manifest.json";

// Shortest decimal that round-trips to the same double; "nan" for NaN.
std::string FormatDouble(double value);
absl::StatusOr<double> ParseDouble(std::string_view text);

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it into place.
absl::Status WriteFileAtomic(const std::filesystem::path& path,
                             std::string_view content);

// Matrix CSV: a header naming the sample columns x0..x{n-1}, then one row per
// instance (or shadow model / feature). `source` names the file in errors.
std::string MatrixToCsv(const RealMatrix& matrix);
absl::StatusOr<RealMatrix> ParseMatrixCsv(std::string_view text,
                                          const std::string& source);

// Single-column 0/1 CSV with the given header ("label", "canary").
std::string FlagsToCsv(const std::vector<uint8_t>& flags,
                       std::string_view header);
absl::StatusOr<std::vector<uint8_t>> ParseFlagsCsv(std::string_view text,
                                                   const std::string& source,
                                                   std::string_view header);

// Reads the manifest and every referenced file, checking declared shapes,
// without running bundle validation.
absl::StatusOr<ExperimentBundle> LoadBundle(
    const std::filesystem::path& manifest);

// LoadBundle followed by ValidateBundle; any violation is returned as a
// FailedPrecondition error carrying the full report.
absl::StatusOr<ExperimentBundle> IngestBundle(
    const std::filesystem::path& manifest);

// Writes manifest.json plus ground truth, score, signal and canary CSVs
// under `dir`.
absl::Status WriteBundle(const ExperimentBundle& bundle,
                         const std::filesystem::path& dir);

// Splits "a,b,c" and trims whitespace; empty input gives an empty list.
std::vector<std::string> SplitList(std::string_view text);
absl::StatusOr<std::vector<double>> ParseDoubleList(std::string_view text);

}  // namespace mia::cli

#endif  // MIA_CLI_BUNDLE_IO_H_
