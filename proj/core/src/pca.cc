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
#include "mia/pca.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "mia/status_macros.h"

namespace mia {
namespace {

double FrobeniusNorm(const RealMatrix& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

RealMatrix Multiply(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

std::vector<double> Apply(const RealMatrix& m, std::span<const double> v) {
  std::vector<double> out(m.rows(), 0.0);
  for (size_t i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    double s = 0.0;
    for (size_t j = 0; j < row.size(); ++j) s += row[j] * v[j];
    out[i] = s;
  }
  return out;
}

double Norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void FixSign(std::vector<double>& v) {
  size_t arg = 0;
  for (size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  }
  if (v[arg] < 0.0) {
    for (double& x : v) x = -x;
  }
}

// Unit vector orthogonal to `basis`, from the first coordinate axis that is
// not already spanned.
std::vector<double> OrthogonalComplement(
    const std::vector<std::vector<double>>& basis, size_t dim) {
  for (size_t axis = 0; axis < dim; ++axis) {
    std::vector<double> v(dim, 0.0);
    v[axis] = 1.0;
    for (const auto& b : basis) {
      double d = 0.0;
      for (size_t i = 0; i < dim; ++i) d += v[i] * b[i];
      for (size_t i = 0; i < dim; ++i) v[i] -= d * b[i];
    }
    const double n = Norm(v);
    if (n > 1e-6) {
      for (double& x : v) x /= n;
      return v;
    }
  }
  return std::vector<double>(dim, 0.0);
}

}  // namespace

absl::StatusOr<Eigenpair> DominantEigenpair(const RealMatrix& symmetric,
                                            const PcaOptions& options) {
  const size_t n = symmetric.rows();
  if (n == 0 || symmetric.cols() != n) {
    return absl::InvalidArgumentError("expected a non-empty square matrix");
  }
  const double scale = FrobeniusNorm(symmetric);
  if (!(scale > 0.0)) {
    return absl::InvalidArgumentError("matrix is zero");
  }
  RealMatrix powered = symmetric;
  for (double& v : powered.data()) v /= scale;
  for (int s = 0; s < options.squarings; ++s) {
    powered = Multiply(powered, powered);
    const double norm = FrobeniusNorm(powered);
    if (!(norm > 0.0)) break;
    for (double& v : powered.data()) v /= norm;
  }

  // Start from the heaviest column, which cannot be orthogonal to the
  // dominant eigenvector of a PSD matrix.
  size_t best_col = 0;
  double best_norm = -1.0;
  for (size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (size_t r = 0; r < n; ++r) s += powered(r, c) * powered(r, c);
    if (s > best_norm) {
      best_norm = s;
      best_col = c;
    }
  }
  std::vector<double> v(n);
  for (size_t r = 0; r < n; ++r) v[r] = powered(r, best_col);
  double norm = Norm(v);
  if (!(norm > 0.0)) {
    v.assign(n, 0.0);
    v[best_col] = 1.0;
    norm = 1.0;
  }
  for (double& x : v) x /= norm;

  Eigenpair out;
  for (int it = 1; it <= options.max_iterations; ++it) {
    std::vector<double> next = Apply(powered, v);
    const double next_norm = Norm(next);
    if (!(next_norm > 0.0)) {
      return absl::InternalError("power iteration collapsed to zero");
    }
    double delta = 0.0;
    for (size_t i = 0; i < n; ++i) {
      next[i] /= next_norm;
      delta += (next[i] - v[i]) * (next[i] - v[i]);
    }
    v = std::move(next);
    if (std::sqrt(delta) < options.tolerance) {
      out.iterations = it;
      std::vector<double> av = Apply(symmetric, v);
      double lambda = 0.0;
      for (size_t i = 0; i < n; ++i) lambda += v[i] * av[i];
      out.value = lambda;
      out.vector = std::move(v);
      return out;
    }
  }
  return absl::InternalError(
      absl::StrCat("power iteration did not converge after ",
                   options.max_iterations, " iterations"));
}

absl::StatusOr<PcaResult> PcaProject(const RealMatrix& data, size_t k,
                                     const PcaOptions& options) {
  const size_t n = data.rows();
  const size_t dim = data.cols();
  if (k < 1 || k > dim) {
    return absl::InvalidArgumentError(absl::StrCat(
        "component count must lie in [1, ", dim, "], got ", k));
  }
  if (n <= k) {
    return absl::InvalidArgumentError(
        absl::StrCat("need more samples (", n, ") than components (", k, ")"));
  }
  for (double v : data.data()) {
    if (!std::isfinite(v)) {
      return absl::InvalidArgumentError("data contains non-finite values");
    }
  }

  std::vector<double> mean(dim, 0.0);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < dim; ++c) mean[c] += data(r, c);
  }
  for (double& m : mean) m /= static_cast<double>(n);
  RealMatrix centered(n, dim);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < dim; ++c) centered(r, c) = data(r, c) - mean[c];
  }
  RealMatrix cov(dim, dim);
  for (size_t r = 0; r < n; ++r) {
    auto row = centered.row(r);
    for (size_t i = 0; i < dim; ++i) {
      for (size_t j = i; j < dim; ++j) cov(i, j) += row[i] * row[j];
    }
  }
  double trace = 0.0;
  for (size_t i = 0; i < dim; ++i) {
    for (size_t j = i; j < dim; ++j) {
      cov(i, j) /= static_cast<double>(n - 1);
      cov(j, i) = cov(i, j);
    }
    trace += cov(i, i);
  }
  const double cov_norm = FrobeniusNorm(cov);

  PcaResult result;
  result.components = RealMatrix(k, dim);
  std::vector<std::vector<double>> found;
  RealMatrix residual = cov;
  for (size_t comp = 0; comp < k; ++comp) {
    Eigenpair pair;
    if (FrobeniusNorm(residual) <= 1e-12 * cov_norm || !(cov_norm > 0.0)) {
      // Remaining spectrum is numerically zero.
      pair.vector = OrthogonalComplement(found, dim);
      pair.value = 0.0;
    } else {
      ASSIGN_OR_RETURN(pair, DominantEigenpair(residual, options));
    }
    FixSign(pair.vector);
    const double lambda = std::max(pair.value, 0.0);
    for (size_t i = 0; i < dim; ++i) {
      for (size_t j = 0; j < dim; ++j) {
        residual(i, j) -= pair.value * pair.vector[i] * pair.vector[j];
      }
    }
    std::copy(pair.vector.begin(), pair.vector.end(),
              result.components.row(comp).begin());
    result.eigenvalues.push_back(lambda);
    result.explained_variance_ratio.push_back(trace > 0.0 ? lambda / trace
                                                          : 0.0);
    result.iterations.push_back(pair.iterations);
    found.push_back(std::move(pair.vector));
  }

  result.projections = RealMatrix(n, k);
  for (size_t r = 0; r < n; ++r) {
    auto row = centered.row(r);
    for (size_t comp = 0; comp < k; ++comp) {
      auto axis = result.components.row(comp);
      double s = 0.0;
      for (size_t c = 0; c < dim; ++c) s += row[c] * axis[c];
      result.projections(r, comp) = s;
    }
  }
  return result;
}

}  // namespace mia
