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


#ifndef FORGE_MATH_KERNELS_H_
#define FORGE_MATH_KERNELS_H_

#include <cstdint>
#include <vector>

#include "forge/math/matrix.h"

namespace forge::math {

// Each kernel has an OpenMP version and a serial reference. Both compute
// every output element with the same summation order, so their results are
// bitwise identical.

// Y = X * W^T + b, with X n x in, W out x in, b of size out.
void affine(const Matrix& x, const Matrix& w, const std::vector<double>& b, Matrix& y);
void affine_serial(const Matrix& x, const Matrix& w, const std::vector<double>& b, Matrix& y);

// Population covariance (divides by n) of the rows of x; the column means
// go to *mean.
Matrix covariance(const Matrix& x, std::vector<double>* mean);
Matrix covariance_serial(const Matrix& x, std::vector<double>* mean);

struct Confusion {
  uint64_t tp = 0;
  uint64_t fp = 0;
  uint64_t tn = 0;
  uint64_t fn = 0;

  bool operator==(const Confusion&) const = default;
};

// Confusion counts for "score >= threshold predicts 1", one per threshold.
std::vector<Confusion> threshold_counts(const std::vector<double>& scores,
                                        const std::vector<int>& labels,
                                        const std::vector<double>& thresholds);
std::vector<Confusion> threshold_counts_serial(const std::vector<double>& scores,
                                               const std::vector<int>& labels,
                                               const std::vector<double>& thresholds);

}  // namespace forge::math

#endif  // FORGE_MATH_KERNELS_H_
