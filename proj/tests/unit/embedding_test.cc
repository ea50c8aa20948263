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


#include "forge/embedding/embedding.h"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>

#include "forge/math/kernels.h"
#include "forge/util/error.h"
#include "forge/util/io.h"
#include "forge/util/process.h"
#include "forge/util/rng.h"

namespace forge::embedding {
namespace {

using math::Matrix;

Vector random_vector(Rng& rng, size_t d, double scale = 1.0) {
  Vector v(d);
  for (double& x : v) x = rng.normal() * scale;
  return v;
}

Matrix random_matrix(Rng& rng, size_t r, size_t c) {
  Matrix m(r, c);
  for (double& x : m.data()) x = rng.normal();
  return m;
}

Matrix gaussian_cluster(Rng& rng, size_t n, const Vector& center, double sigma) {
  Matrix m(n, center.size());
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < center.size(); ++j) m(i, j) = center[j] + sigma * rng.normal();
  }
  return m;
}

Eigen::MatrixXd to_eigen(const Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (size_t r = 0; r < m.rows(); ++r) {
    for (size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
  }
  return e;
}

TEST(MaxPoolTest, Examples) {
  EXPECT_EQ(max_pool(Matrix::from_rows({{1, 4}, {3, 2}})), (Vector{3, 4}));
  EXPECT_EQ(max_pool(Matrix::from_rows({{-1, 0.5, 7}})), (Vector{-1, 0.5, 7}));
  EXPECT_EQ(max_pool(Matrix::from_rows({{3, 2}, {1, 4}})), (Vector{3, 4}));
}

TEST(MaxPoolTest, RejectsBadInput) {
  Matrix h = Matrix::from_rows({{1, NAN}});
  try {
    max_pool(h);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFinite);
  }
  EXPECT_THROW(max_pool(Matrix()), Error);
}

TEST(MaxPoolTest, PermutationInvariantAndMonotone) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t l = 1 + rng.below(8);
    const size_t d = 1 + rng.below(6);
    Matrix h = random_matrix(rng, l, d);
    const Vector base = max_pool(h);
    // Brute-force oracle.
    for (size_t c = 0; c < d; ++c) {
      double m = -INFINITY;
      for (size_t r = 0; r < l; ++r) m = std::max(m, h(r, c));
      EXPECT_EQ(base[c], m);
    }
    std::vector<size_t> perm(l);
    for (size_t i = 0; i < l; ++i) perm[i] = i;
    rng.shuffle(perm);
    Matrix shuffled(l, d);
    for (size_t r = 0; r < l; ++r) {
      for (size_t c = 0; c < d; ++c) shuffled(r, c) = h(perm[r], c);
    }
    EXPECT_EQ(max_pool(shuffled), base);
    h(rng.below(l), rng.below(d)) += std::abs(rng.normal());
    const Vector bumped = max_pool(h);
    for (size_t c = 0; c < d; ++c) EXPECT_GE(bumped[c], base[c]);
  }
}

TEST(TripletLossTest, HandComputedCases) {
  EXPECT_EQ(triplet_loss({1, 2}, {1, 2}, {1, 2}, 1.0), 1.0);
  EXPECT_EQ(triplet_loss({0, 0}, {0.5, 0}, {3, 0}, 1.0), 0.0);
  EXPECT_EQ(triplet_loss({0, 0}, {0, 1}, {2, 0}, 1.0), 0.0);
  // |a-p| = 5, |a-n| = 2: 5 - 2 + 0.5.
  EXPECT_EQ(triplet_loss({0, 0}, {3, 4}, {0, 2}, 0.5), 3.5);
}

TEST(TripletLossTest, Errors) {
  EXPECT_THROW(triplet_loss({0}, {0, 1}, {0}, 1.0), Error);
  EXPECT_THROW(triplet_loss({0}, {0}, {0}, -1.0), Error);
}

TEST(TripletLossTest, HingeProperties) {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const size_t d = 1 + rng.below(8);
    const Vector a = random_vector(rng, d);
    const Vector p = random_vector(rng, d);
    const Vector n = random_vector(rng, d);
    const double m = rng.uniform() * 2;
    const double loss = triplet_loss(a, p, n, m);
    EXPECT_GE(loss, 0.0);
    const bool satisfied = math::distance(a, n) >= math::distance(a, p) + m;
    EXPECT_EQ(loss == 0.0, satisfied);
  }
}

TEST(TripletLossTest, OrthogonalInvariance) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const size_t d = 2 + rng.below(6);
    // Random orthogonal matrix from a QR factorization.
    const Eigen::MatrixXd q =
        Eigen::HouseholderQR<Eigen::MatrixXd>(to_eigen(random_matrix(rng, d, d))).householderQ();
    auto rotate = [&](const Vector& v) {
      const Eigen::VectorXd r = q * Eigen::Map<const Eigen::VectorXd>(v.data(), v.size());
      return Vector(r.data(), r.data() + r.size());
    };
    const Vector a = random_vector(rng, d);
    const Vector p = random_vector(rng, d);
    const Vector n = random_vector(rng, d);
    EXPECT_NEAR(triplet_loss(a, p, n, 1.5), triplet_loss(rotate(a), rotate(p), rotate(n), 1.5),
                1e-12);
  }
}

TEST(TripletGradTest, InactiveHingeIsZero) {
  const TripletGrad g = triplet_loss_grad({0, 0}, {0.5, 0}, {3, 0}, 1.0);
  for (const Vector* v : {&g.da, &g.dp, &g.dn}) EXPECT_EQ(*v, (Vector{0, 0}));
}

TEST(TripletGradTest, PositiveGradientIsUnitDirection) {
  const Vector a = {1, 2, 3};
  const Vector p = {2, 0, 3};
  const Vector n = {1, 2, 3.5};
  const TripletGrad g = triplet_loss_grad(a, p, n, 1.0);
  const double d = std::sqrt(5.0);
  for (size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(g.dp[i], (p[i] - a[i]) / d);
}

TEST(TripletGradTest, MatchesCentralDifferences) {
  Rng rng(2026);
  int active = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vector a = random_vector(rng, 8);
    Vector p = random_vector(rng, 8);
    const Vector n = random_vector(rng, 8);
    const double m = 1.0 + rng.uniform() * 3;
    const TripletGrad g = triplet_loss_grad(a, p, n, m);
    const double h = 1e-5;
    auto check = [&](const Vector& grad, int which) {
      for (size_t i = 0; i < 8; ++i) {
        Vector args[3] = {a, p, n};
        args[which][i] += h;
        const double up = triplet_loss(args[0], args[1], args[2], m);
        args[which][i] -= 2 * h;
        const double down = triplet_loss(args[0], args[1], args[2], m);
        const double fd = (up - down) / (2 * h);
        EXPECT_LE(std::abs(grad[i] - fd), 1e-5 * std::max(1.0, std::abs(fd)))
            << "trial " << trial << " arg " << which << " coord " << i;
      }
    };
    if (triplet_loss(a, p, n, m) > 1e-3) ++active;
    if (std::abs(math::distance(a, p) - math::distance(a, n) + m) < 1e-3) continue;
    check(g.da, 0);
    check(g.dp, 1);
    check(g.dn, 2);
  }
  EXPECT_GT(active, 50);
}

TEST(PcaTest, AxisAlignedData) {
  const Matrix x = Matrix::from_rows({{-2, 0}, {-1, 0}, {1, 0}, {3, 0}});
  const Pca p = pca_project(x, 2);
  EXPECT_NEAR(p.components(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(p.components(0, 1), 0.0, 1e-12);
  EXPECT_NEAR(p.explained_variance[1], 0.0, 1e-12);
  EXPECT_NEAR(std::abs(p.components(1, 1)), 1.0, 1e-12);
}

TEST(PcaTest, TwoClustersSplitBySign) {
  const Matrix x = Matrix::from_rows({{10, 10.1}, {10.2, 9.9}, {-10, -9.8}, {-9.9, -10.1}});
  const Pca p = pca_project(x, 1);
  EXPECT_GT(p.projections(0, 0) * p.projections(1, 0), 0);
  EXPECT_GT(p.projections(2, 0) * p.projections(3, 0), 0);
  EXPECT_LT(p.projections(0, 0) * p.projections(2, 0), 0);
}

TEST(PcaTest, PropertiesOnRandomData) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const size_t n = 3 + rng.below(30);
    const size_t d = 1 + rng.below(std::min<size_t>(n, 10));
    Matrix x = random_matrix(rng, n, d);
    for (size_t r = 0; r < n; ++r) {
      for (size_t c = 0; c < d; ++c) x(r, c) *= 1.0 + c;  // distinct spectrum
    }
    const Pca p = pca_project(x, d);
    const Matrix& comp = p.components;
    for (size_t i = 0; i < d; ++i) {
      for (size_t j = 0; j < d; ++j) {
        double s = 0;
        for (size_t k = 0; k < d; ++k) s += comp(i, k) * comp(j, k);
        EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-6);
      }
      if (i > 0) EXPECT_GE(p.explained_variance[i - 1], p.explained_variance[i]);
      // Sign convention.
      for (size_t k = 0; k < d; ++k) {
        if (std::abs(comp(i, k)) > 1e-12) {
          EXPECT_GT(comp(i, k), 0);
          break;
        }
      }
    }
    double total = 0;
    for (double v : p.explained_variance) total += v;
    EXPECT_NEAR(total, p.total_variance, 1e-9);
    // Full-rank reconstruction of the centered data.
    for (size_t r = 0; r < n; ++r) {
      for (size_t c = 0; c < d; ++c) {
        double s = 0;
        for (size_t k = 0; k < d; ++k) s += p.projections(r, k) * comp(k, c);
        EXPECT_NEAR(s, x(r, c) - p.mean[c], 1e-6);
      }
    }
    // Eigenvalue oracle.
    Eigen::MatrixXd centered = to_eigen(x);
    centered.rowwise() -= centered.colwise().mean();
    const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    for (size_t i = 0; i < d; ++i) {
      EXPECT_NEAR(p.explained_variance[i], es.eigenvalues()(static_cast<long>(d - 1 - i)),
                  1e-6 * std::max(1.0, p.total_variance));
    }
  }
}

TEST(PcaTest, DegenerateDataHasZeroVariance) {
  const Matrix x = Matrix::from_rows({{1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
  const Pca p = pca_project(x, 3);
  for (double v : p.explained_variance) EXPECT_EQ(v, 0.0);
  for (size_t i = 0; i < 3; ++i) {
    double s = 0;
    for (size_t k = 0; k < 3; ++k) s += p.components(i, k) * p.components(i, k);
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(PcaTest, RejectsBadShapes) {
  EXPECT_THROW(pca_project(Matrix::from_rows({{1, 2}}), 1), Error);
  EXPECT_THROW(pca_project(Matrix::from_rows({{1, 2}, {3, 4}}), 3), Error);
}

TEST(SeparationTest, HandComputedSilhouette) {
  // Points 0, 1 | 10, 11 on a line. For x=0: a = 1, b = 10.5.
  const Matrix x = Matrix::from_rows({{0}, {1}, {10}, {11}});
  const double s0 = (10.5 - 1) / 10.5;
  const double s1 = (9.5 - 1) / 9.5;
  EXPECT_NEAR(separation_score(x, {0, 0, 1, 1}), (2 * s0 + 2 * s1) / 4, 1e-15);
}

TEST(SeparationTest, LimitCases) {
  Rng rng(8);
  const Vector zero(4, 0.0);
  const Matrix a = gaussian_cluster(rng, 200, zero, 1.0);
  const Matrix b = gaussian_cluster(rng, 200, zero, 1.0);
  EXPECT_LT(std::abs(separability(a, b).score), 0.05);
  const Matrix far = gaussian_cluster(rng, 50, {1000, 0, 0, 0}, 1.0);
  EXPECT_GT(separability(a, far).score, 0.95);
}

TEST(SeparationTest, WiderGapScoresHigher) {
  Rng rng(9);
  const Vector c0(16, 0.0);
  Vector c1(16, 0.0);
  c1[0] = 1.5;
  Vector c3 = c1;
  c3[0] = 4.5;
  const Matrix ok = gaussian_cluster(rng, 100, c0, 1.0);
  const Matrix pre = gaussian_cluster(rng, 100, c1, 1.0);
  Rng rng2(9);
  gaussian_cluster(rng2, 100, c0, 1.0);
  const Matrix post = gaussian_cluster(rng2, 100, c3, 1.0);
  EXPECT_GT(separability(ok, post).score, separability(ok, pre).score);
}

TEST(SeparationTest, ReportFiles) {
  Rng rng(10);
  const auto rep = separability(gaussian_cluster(rng, 5, {0, 0, 0}, 1.0),
                                gaussian_cluster(rng, 6, {5, 0, 0}, 1.0));
  ScratchDir dir;
  const std::string summary = write_separability_report(rep, dir.path() / "r");
  EXPECT_NE(summary.find("separation score"), std::string::npos);
  const std::string csv = read_file(dir.path() / "r" / "pca.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
  EXPECT_EQ(csv.rfind("group,pc1,pc2\n", 0), 0u);
  EXPECT_NE(read_file(dir.path() / "r" / "pca.svg").find("<circle"), std::string::npos);
}

TEST(KernelTest, ParallelMatchesSerialBitwise) {
  Rng rng(21);
  const Matrix x = random_matrix(rng, 300, 46);
  const Matrix w = random_matrix(rng, 256, 46);
  const Vector b = random_vector(rng, 256);
  Matrix y1, y2;
  math::affine(x, w, b, y1);
  math::affine_serial(x, w, b, y2);
  EXPECT_EQ(y1, y2);
  Vector m1, m2;
  EXPECT_EQ(math::covariance(x, &m1), math::covariance_serial(x, &m2));
  EXPECT_EQ(m1, m2);
  Vector scores(5000);
  std::vector<int> labels(5000);
  for (size_t i = 0; i < scores.size(); ++i) {
    scores[i] = rng.uniform();
    labels[i] = rng.uniform() < scores[i];
  }
  Vector thresholds;
  for (int t = 0; t <= 100; ++t) thresholds.push_back(t / 100.0);
  EXPECT_EQ(math::threshold_counts(scores, labels, thresholds),
            math::threshold_counts_serial(scores, labels, thresholds));
}

TEST(KernelTest, CovarianceMatchesEigen) {
  Rng rng(22);
  const Matrix x = random_matrix(rng, 40, 7);
  const Matrix c = math::covariance(x, nullptr);
  Eigen::MatrixXd e = to_eigen(x);
  e.rowwise() -= e.colwise().mean();
  const Eigen::MatrixXd oracle = e.transpose() * e / 40.0;
  for (size_t i = 0; i < 7; ++i) {
    for (size_t j = 0; j < 7; ++j) EXPECT_NEAR(c(i, j), oracle(i, j), 1e-12);
  }
}

TEST(KernelTest, AffineMatchesEigen) {
  Rng rng(23);
  const Matrix x = random_matrix(rng, 9, 5);
  const Matrix w = random_matrix(rng, 4, 5);
  const Vector b = random_vector(rng, 4);
  Matrix y;
  math::affine(x, w, b, y);
  const Eigen::MatrixXd oracle = to_eigen(x) * to_eigen(w).transpose();
  for (size_t i = 0; i < 9; ++i) {
    for (size_t o = 0; o < 4; ++o) EXPECT_NEAR(y(i, o), oracle(i, o) + b[o], 1e-12);
  }
  EXPECT_THROW(math::affine(x, random_matrix(rng, 4, 6), b, y), Error);
}

}  // namespace
}  // namespace forge::embedding
