// Copyright 2026 The Forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef FORGE_EMBEDDING_EMBEDDING_H_
#define FORGE_EMBEDDING_EMBEDDING_H_

#include <filesystem>
#include <string>
#include <vector>

#include "forge/math/matrix.h"

namespace forge::embedding {

using Vector = std::vector<double>;

inline constexpr double kDefaultMargin = 1.0;

// Column-wise maximum over the sequence (row) dimension. Throws
// Error(kEmptyInput) for an empty matrix and Error(kNonFinite) for NaN/inf.
Vector max_pool(const math::Matrix& h);

// max(0, |a - p| - |a - n| + margin) with Euclidean distances.
double triplet_loss(const Vector& a, const Vector& p, const Vector& n,
                    double margin = kDefaultMargin);

struct TripletGrad {
  Vector da;
  Vector dp;
  Vector dn;
};

// Analytic gradient. Zero when the hinge is inactive or exactly at the
// kink; a zero distance contributes a zero subgradient.
TripletGrad triplet_loss_grad(const Vector& a, const Vector& p, const Vector& n,
                              double margin = kDefaultMargin);

struct Pca {
  math::Matrix projections;  // N x k
  math::Matrix components;   // k x D, orthonormal rows
  Vector explained_variance;  // descending
  Vector mean;
  double total_variance = 0.0;
};

struct PcaOptions {
  int max_iterations = 20000;
  double tolerance = 1e-13;
};

// Principal components by power iteration with deflation on the
// population covariance. Each component's first nonzero coordinate is
// positive. Throws Error(kInvalidArgument) unless N >= 2 and
// 1 <= k <= min(N, D).
Pca pca_project(const math::Matrix& points, size_t k, const PcaOptions& opt = {});

// Mean silhouette coefficient of a two-group labelling (labels 0/1).
double separation_score(const math::Matrix& points, const std::vector<int>& labels);

struct SeparabilityReport {
  Pca pca;               // joint 2-D PCA of both groups
  std::vector<int> labels;  // 0 = ok, 1 = err, in input order
  double score = 0.0;    // silhouette over the 2-D projections
};

// Joint PCA of the two groups plus their separation score. Each group
// needs at least two points.
SeparabilityReport separability(const math::Matrix& ok, const math::Matrix& err);

// Writes pca.csv (group,pc1,pc2) and pca.svg into `dir` and returns a
// short text summary.
std::string write_separability_report(const SeparabilityReport& report,
                                      const std::filesystem::path& dir);

}  // namespace forge::embedding

#endif  // FORGE_EMBEDDING_EMBEDDING_H_
