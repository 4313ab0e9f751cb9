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

#ifndef MIA_PCA_H_
#define MIA_PCA_H_

#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "mia/matrix.h"

namespace mia {

struct PcaOptions {
  double tolerance = 1e-10;
  int max_iterations = 1000;
  // The power iteration runs on C^(2^squarings) so that nearly equal
  // eigenvalues still separate within max_iterations.
  int squarings = 8;
};

struct PcaResult {
  RealMatrix components;   // k x n_features, unit rows
  std::vector<double> eigenvalues;
  std::vector<double> explained_variance_ratio;  // eigenvalue / trace
  RealMatrix projections;  // n_samples x k
  std::vector<int> iterations;
};

// Top eigenpair of a symmetric positive semi-definite matrix by power
// iteration. Fails with the iteration count when it does not converge.
struct Eigenpair {
  double value = 0.0;
  std::vector<double> vector;
  int iterations = 0;
};
absl::StatusOr<Eigenpair> DominantEigenpair(const RealMatrix& symmetric,
                                            const PcaOptions& options = {});

// Principal components of the rows of `data` (n_samples x n_features) via
// power iteration with deflation on the sample covariance. Each component is
// signed so that its largest-magnitude loading is positive.
absl::StatusOr<PcaResult> PcaProject(const RealMatrix& data, size_t k,
                                     const PcaOptions& options = {});

}  // namespace mia

#endif  // MIA_PCA_H_
