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


#include "forge/math/kernels.h"

#include <string>

#include "forge/util/error.h"

namespace forge::math {

namespace {

void check_affine(const Matrix& x, const Matrix& w, const std::vector<double>& b, Matrix& y) {
  if (x.cols() != w.cols() || b.size() != w.rows()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "affine: input " + std::to_string(x.cols()) + " vs weights " +
                    std::to_string(w.rows()) + "x" + std::to_string(w.cols()));
  }
  if (y.rows() != x.rows() || y.cols() != w.rows()) y = Matrix(x.rows(), w.rows());
}

inline double affine_cell(const Matrix& x, const Matrix& w, const std::vector<double>& b,
                          size_t i, size_t o) {
  const double* xi = x.row(i);
  const double* wo = w.row(o);
  double s = b[o];
  for (size_t k = 0; k < x.cols(); ++k) s += xi[k] * wo[k];
  return s;
}

void check_counts(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "scores and labels differ in length");
  }
}

Confusion count_at(const std::vector<double>& scores, const std::vector<int>& labels,
                   double t) {
  Confusion c;
  for (size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] >= t;
    if (labels[i]) {
      (pred ? c.tp : c.fn)++;
    } else {
      (pred ? c.fp : c.tn)++;
    }
  }
  return c;
}

inline double cov_cell(const Matrix& x, const std::vector<double>& mean, size_t a, size_t b) {
  double s = 0.0;
  for (size_t r = 0; r < x.rows(); ++r) s += (x(r, a) - mean[a]) * (x(r, b) - mean[b]);
  return s / static_cast<double>(x.rows());
}

std::vector<double> column_means(const Matrix& x) {
  if (x.rows() == 0) throw Error(ErrorCode::kEmptyInput, "covariance of zero rows");
  std::vector<double> mean(x.cols(), 0.0);
  for (size_t c = 0; c < x.cols(); ++c) {
    double s = 0.0;
    for (size_t r = 0; r < x.rows(); ++r) s += x(r, c);
    mean[c] = s / static_cast<double>(x.rows());
  }
  return mean;
}

}  // namespace

void affine(const Matrix& x, const Matrix& w, const std::vector<double>& b, Matrix& y) {
  check_affine(x, w, b, y);
  const long n = static_cast<long>(x.rows());
#pragma omp parallel for schedule(static) if (n * static_cast<long>(w.rows()) > 4096)
  for (long i = 0; i < n; ++i) {
    for (size_t o = 0; o < w.rows(); ++o) {
      y(static_cast<size_t>(i), o) = affine_cell(x, w, b, static_cast<size_t>(i), o);
    }
  }
}

void affine_serial(const Matrix& x, const Matrix& w, const std::vector<double>& b, Matrix& y) {
  check_affine(x, w, b, y);
  for (size_t i = 0; i < x.rows(); ++i) {
    for (size_t o = 0; o < w.rows(); ++o) y(i, o) = affine_cell(x, w, b, i, o);
  }
}

Matrix covariance(const Matrix& x, std::vector<double>* mean) {
  const std::vector<double> mu = column_means(x);
  const size_t d = x.cols();
  Matrix c(d, d);
  const long dl = static_cast<long>(d);
#pragma omp parallel for schedule(dynamic) if (d > 16)
  for (long a = 0; a < dl; ++a) {
    for (size_t b = static_cast<size_t>(a); b < d; ++b) {
      const double v = cov_cell(x, mu, static_cast<size_t>(a), b);
      c(static_cast<size_t>(a), b) = v;
      c(b, static_cast<size_t>(a)) = v;
    }
  }
  if (mean) *mean = mu;
  return c;
}

Matrix covariance_serial(const Matrix& x, std::vector<double>* mean) {
  const std::vector<double> mu = column_means(x);
  const size_t d = x.cols();
  Matrix c(d, d);
  for (size_t a = 0; a < d; ++a) {
    for (size_t b = a; b < d; ++b) {
      const double v = cov_cell(x, mu, a, b);
      c(a, b) = v;
      c(b, a) = v;
    }
  }
  if (mean) *mean = mu;
  return c;
}

std::vector<Confusion> threshold_counts(const std::vector<double>& scores,
                                        const std::vector<int>& labels,
                                        const std::vector<double>& thresholds) {
  check_counts(scores, labels);
  std::vector<Confusion> out(thresholds.size());
  const long n = static_cast<long>(thresholds.size());
#pragma omp parallel for schedule(static) if (n * static_cast<long>(scores.size()) > 65536)
  for (long t = 0; t < n; ++t) {
    out[static_cast<size_t>(t)] = count_at(scores, labels, thresholds[static_cast<size_t>(t)]);
  }
  return out;
}

std::vector<Confusion> threshold_counts_serial(const std::vector<double>& scores,
                                               const std::vector<int>& labels,
                                               const std::vector<double>& thresholds) {
  check_counts(scores, labels);
  std::vector<Confusion> out;
  for (double t : thresholds) out.push_back(count_at(scores, labels, t));
  return out;
}

}  // namespace forge::math
