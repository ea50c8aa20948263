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


#include "forge/classifier/classifier.h"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "forge/util/error.h"
#include "forge/util/io.h"
#include "forge/util/process.h"
#include "forge/util/rng.h"

namespace forge::classifier {
namespace {

void expect_code(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
    ADD_FAILURE() << "no error thrown";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

ClassifierModel zero_model(size_t input_dim) {
  ClassifierModel m;
  m.mlp = Mlp::zeros(input_dim, 8);
  return m;
}

TEST(ForwardTest, ZeroWeightsGiveOneHalf) {
  const ClassifierModel m = zero_model(18);
  Rng rng(1);
  for (int i = 0; i < 20; ++i) {
    Vector x(18);
    for (double& v : x) v = rng.normal() * 10;
    EXPECT_EQ(forward(m, x), 0.5);
  }
}

TEST(ForwardTest, LargeBiasSaturates) {
  ClassifierModel m = zero_model(18);
  m.mlp.b2 = 20;
  EXPECT_GT(forward(m, Vector(18, 1.0)), 0.999999);
  EXPECT_LT(forward(m, Vector(18, 1.0)), 1.0);
  m.mlp.b2 = -800;
  EXPECT_GT(forward(m, Vector(18, 1.0)), 0.0);
  m.mlp.b2 = 800;
  EXPECT_LT(forward(m, Vector(18, 1.0)), 1.0);
}

TEST(ForwardTest, DeterministicAndBatchConsistent) {
  ClassifierModel m;
  m.mlp = Mlp::random(20, 16, 4);
  Rng rng(5);
  math::Matrix x(30, 20);
  for (double& v : x.data()) v = rng.normal();
  const Vector batch = forward_batch(m, x);
  for (size_t r = 0; r < 30; ++r) {
    const double a = forward(m, x.row_vector(r));
    EXPECT_EQ(a, forward(m, x.row_vector(r)));
    EXPECT_NEAR(a, batch[r], 1e-12);
    EXPECT_GT(a, 0.0);
    EXPECT_LT(a, 1.0);
  }
  expect_code(ErrorCode::kDimensionMismatch, [&] { forward(m, Vector(19)); });
}

TEST(BceTest, ClosedForms) {
  EXPECT_LT(bce_loss({1 - kBceEpsilon}, {1}), 1e-6);
  EXPECT_NEAR(bce_loss({0.5}, {1}), std::log(2.0), 1e-15);
  EXPECT_NEAR(bce_loss({0.9, 0.1}, {1, 0}), 0.1054, 1e-4);
  EXPECT_NEAR(bce_loss({0.9, 0.1}, {1, 0}), -std::log(0.9), 1e-15);
  EXPECT_NEAR(bce_loss({0.0}, {1}), -std::log(kBceEpsilon), 1e-9);
  expect_code(ErrorCode::kDimensionMismatch, [] { bce_loss({0.5}, {1, 0}); });
  expect_code(ErrorCode::kEmptyInput, [] { bce_loss({}, {}); });
}

TEST(BceTest, LogitLossMatchesClampedBce) {
  Rng rng(6);
  const Mlp m = Mlp::random(15, 6, 7);
  math::Matrix x(12, 15);
  for (double& v : x.data()) v = rng.normal();
  std::vector<int> y;
  Vector p;
  for (size_t r = 0; r < 12; ++r) {
    y.push_back(static_cast<int>(r % 2));
    p.push_back(sigmoid(logit(m, x.row_vector(r))));
  }
  EXPECT_NEAR(mlp_loss(m, x, y), bce_loss(p, y), 1e-9);
}

void check_gradient(size_t in, size_t hidden, uint64_t seed) {
  Rng rng(seed);
  Mlp m = Mlp::random(in, hidden, seed);
  for (double& b : m.b1) b = rng.normal() * 0.5;
  m.b2 = rng.normal();
  math::Matrix x(6, in);
  for (double& v : x.data()) v = rng.normal();
  const std::vector<int> y = {1, 0, 1, 1, 0, 0};
  const Vector g = mlp_loss_grad(m, x, y);
  const Vector p0 = m.params();
  ASSERT_EQ(g.size(), p0.size());
  const double h = 1e-5;
  for (size_t i = 0; i < p0.size(); ++i) {
    Vector p = p0;
    p[i] += h;
    m.set_params(p);
    const double up = mlp_loss(m, x, y);
    p[i] -= 2 * h;
    m.set_params(p);
    const double down = mlp_loss(m, x, y);
    const double fd = (up - down) / (2 * h);
    EXPECT_LE(std::abs(g[i] - fd), 1e-4 * std::max(std::abs(fd), 1e-3)) << "param " << i;
  }
  m.set_params(p0);
}

TEST(GradientTest, TenParameterToyModel) {
  EXPECT_EQ(Mlp::zeros(1, 3).num_params(), 10u);
  for (uint64_t seed = 1; seed <= 5; ++seed) check_gradient(1, 3, seed);
}

TEST(GradientTest, WiderModel) { check_gradient(16, 5, 9); }

TEST(SplitTest, StratifiedAndDeterministic) {
  std::vector<int> y(103);
  for (size_t i = 0; i < y.size(); ++i) y[i] = i % 3 == 0;
  std::vector<size_t> tr, va, tr2, va2;
  stratified_split(y, 0.8, 11, tr, va);
  stratified_split(y, 0.8, 11, tr2, va2);
  EXPECT_EQ(tr, tr2);
  EXPECT_EQ(va, va2);
  EXPECT_EQ(tr.size() + va.size(), y.size());
  std::vector<int> seen(y.size(), 0);
  for (size_t i : tr) ++seen[i];
  for (size_t i : va) ++seen[i];
  for (int s : seen) EXPECT_EQ(s, 1);
  int pos = 0;
  for (size_t i : va) pos += y[i];
  EXPECT_EQ(pos, 7);                         // round(0.2 * 35)
  EXPECT_EQ(static_cast<int>(va.size()), 7 + 14);  // round(0.2 * 68)
  expect_code(ErrorCode::kDegenerateDataset, [] {
    std::vector<size_t> a, b;
    stratified_split({1, 1, 1, 0}, 0.8, 0, a, b);
  });
}

TEST(TrainTest, DegenerateInputs) {
  math::Matrix x(10, 20, 1.0);
  expect_code(ErrorCode::kDegenerateDataset,
              [&] { train(x, std::vector<int>(10, 1), TrainConfig{}); });
  TrainConfig cfg;
  cfg.batch_size = 64;
  expect_code(ErrorCode::kDegenerateDataset,
              [&] { train(x, {0, 1, 0, 1, 0, 1, 0, 1, 0, 1}, cfg); });
  cfg = TrainConfig{};
  cfg.split = 1.0;
  expect_code(ErrorCode::kInvalidArgument,
              [&] { train(x, {0, 1, 0, 1, 0, 1, 0, 1, 0, 1}, cfg); });
}

class SyntheticTrainTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    synthetic_clusters(512, 32, 6.0, 2026, x_, y_);
    const auto t0 = std::chrono::steady_clock::now();
    result_ = new TrainResult(train(x_, y_, TrainConfig{}));
    seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  static void TearDownTestSuite() { delete result_; }

  static math::Matrix x_;
  static std::vector<int> y_;
  static TrainResult* result_;
  static double seconds_;
};

math::Matrix SyntheticTrainTest::x_;
std::vector<int> SyntheticTrainTest::y_;
TrainResult* SyntheticTrainTest::result_ = nullptr;
double SyntheticTrainTest::seconds_ = 0;

TEST_F(SyntheticTrainTest, ReachesHighValidationAccuracy) {
  ASSERT_EQ(result_->history.size(), 100u);
  EXPECT_GE(result_->history.back().val_accuracy, 0.95);
  math::Matrix val(result_->val_rows.size(), x_.cols());
  std::vector<int> vy;
  for (size_t i = 0; i < result_->val_rows.size(); ++i) {
    std::copy(x_.row(result_->val_rows[i]), x_.row(result_->val_rows[i]) + x_.cols(), val.row(i));
    vy.push_back(y_[result_->val_rows[i]]);
  }
  EXPECT_GE(metrics(forward_batch(result_->model, val), vy, 0.5).accuracy, 0.95);
  EXPECT_LT(seconds_, 60.0);
}

TEST_F(SyntheticTrainTest, TrainingLossRoughlyNonIncreasing) {
  const auto& h = result_->history;
  for (size_t e = 1; e < h.size(); ++e) {
    EXPECT_LE(h[e].train_eval_loss, h[e - 1].train_eval_loss * 1.05) << "epoch " << h[e].epoch;
  }
  EXPECT_LT(h.back().train_eval_loss, h.front().train_eval_loss);
  EXPECT_LT(h.back().train_loss, h.front().train_loss);
}

TEST_F(SyntheticTrainTest, ProfileFromTrainingSplit) {
  std::vector<std::array<double, 14>> rows;
  for (size_t r : result_->train_rows) {
    std::array<double, 14> s;
    for (size_t j = 0; j < 14; ++j) s[j] = x_(r, 32 + j);
    rows.push_back(s);
  }
  EXPECT_EQ(result_->model.profile, features::NormalizationProfile::fit(rows));
}

TEST_F(SyntheticTrainTest, SeedDeterminism) {
  TrainConfig cfg;
  cfg.epochs = 3;
  const TrainResult a = train(x_, y_, cfg);
  const TrainResult b = train(x_, y_, cfg);
  EXPECT_EQ(a.model, b.model);
  cfg.seed = 1;
  EXPECT_FALSE(train(x_, y_, cfg).model == a.model);
}

TEST_F(SyntheticTrainTest, ShuffledLabelsAreChance) {
  std::vector<int> y = y_;
  Rng rng(77);
  rng.shuffle(y);
  const TrainResult r = train(x_, y, TrainConfig{});
  EXPECT_NEAR(r.history.back().val_accuracy, 0.5, 0.1);
}

TEST_F(SyntheticTrainTest, SaveLoadReproducesPredictions) {
  ScratchDir dir;
  save_model(dir.path() / "model.bin", result_->model);
  const ClassifierModel back = load_model(dir.path() / "model.bin");
  EXPECT_EQ(back, result_->model);
  for (size_t r = 0; r < 20; ++r) {
    EXPECT_EQ(forward(back, x_.row_vector(r)), forward(result_->model, x_.row_vector(r)));
  }
  const std::string bytes = read_file(dir.path() / "model.bin");
  EXPECT_EQ(bytes.substr(0, 4), "VCLC");
  EXPECT_EQ(bytes.size(), 4 + 12 + 8 + 8 + 4 * result_->model.mlp.num_params() + 14 * 16);
  write_file(dir.path() / "short.bin", bytes.substr(0, bytes.size() - 3));
  expect_code(ErrorCode::kSchema, [&] { load_model(dir.path() / "short.bin"); });
  write_file(dir.path() / "bad.bin", "VCLH" + bytes.substr(4));
  expect_code(ErrorCode::kSchema, [&] { load_model(dir.path() / "bad.bin"); });
}

TEST_F(SyntheticTrainTest, GateAcceptanceIsNested) {
  const Vector scores = forward_batch(result_->model, x_);
  for (double lo = 0; lo < 1; lo += 0.05) {
    for (double hi = lo; hi <= 1; hi += 0.05) {
      for (double s : scores) {
        if (s >= hi) EXPECT_GE(s, lo);
      }
    }
  }
}

TEST(MetricsTest, WorkedExamples) {
  Metrics m = metrics({0.9, 0.8, 0.1, 0.2}, {1, 1, 0, 0}, 0.5);
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.f1, 1.0);
  EXPECT_EQ(m.accuracy, 1.0);

  m = metrics({1, 1, 1, 1}, {1, 0, 1, 0}, 0.5);
  EXPECT_EQ(m.accuracy, 0.5);
  EXPECT_EQ(m.positive_recall, 1.0);
  EXPECT_EQ(m.precision, 0.25);  // 0.5 * 0.5 + 0.5 * 0

  m = metrics_from_counts(8, 2, 9, 1);
  EXPECT_DOUBLE_EQ(m.positive_precision, 0.8);
  EXPECT_DOUBLE_EQ(m.positive_recall, 8.0 / 9.0);
  EXPECT_DOUBLE_EQ(m.accuracy, 17.0 / 20.0);
  // Class 0: precision 9/10, recall 9/11, support 11; class 1 support 9.
  EXPECT_DOUBLE_EQ(m.precision, (9 * 0.8 + 11 * 0.9) / 20);
  EXPECT_DOUBLE_EQ(m.recall, (9 * (8.0 / 9) + 11 * (9.0 / 11)) / 20);
  expect_code(ErrorCode::kEmptyInput, [] { metrics({}, {}, 0.5); });
}

// Independent weighted-F1 oracle.
double brute_f1(const Vector& s, const std::vector<int>& y, double tau) {
  double total = 0;
  for (int cls : {0, 1}) {
    double tp = 0, pred = 0, support = 0;
    for (size_t i = 0; i < s.size(); ++i) {
      const int p = s[i] >= tau ? 1 : 0;
      if (p == cls) ++pred;
      if (y[i] == cls) ++support;
      if (p == cls && y[i] == cls) ++tp;
    }
    const double prec = pred ? tp / pred : 0;
    const double rec = support ? tp / support : 0;
    const double f = prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0;
    total += support * f;
  }
  return total / static_cast<double>(s.size());
}

TEST(SweepTest, SeparatedScoresPlateau) {
  const Sweep s = sweep_threshold({0.9, 0.9, 0.9, 0.1, 0.1}, {1, 1, 1, 0, 0});
  EXPECT_EQ(s.best_f1, 1.0);
  EXPECT_EQ(s.best_tau, 0.5);
  ASSERT_EQ(s.curve.size(), 1001u);
  for (const SweepPoint& p : s.curve) {
    if (p.tau > 0.1 && p.tau <= 0.9) EXPECT_EQ(p.f1, 1.0) << p.tau;
  }
}

TEST(SweepTest, ConstantScoresStep) {
  const Sweep s = sweep_threshold(Vector(6, 0.5), {1, 1, 1, 1, 0, 0});
  const double low = s.curve.front().f1;
  const double high = s.curve.back().f1;
  for (const SweepPoint& p : s.curve) EXPECT_EQ(p.f1, p.tau <= 0.5 ? low : high);
  EXPECT_GT(low, high);
  EXPECT_EQ(s.best_tau, 0.5);
}

TEST(SweepTest, MatchesBruteForceOnOverlappingGaussians) {
  Rng rng(41);
  Vector s;
  std::vector<int> y;
  for (int i = 0; i < 400; ++i) {
    const int label = i % 2;
    y.push_back(label);
    s.push_back(sigmoid(rng.normal() + (label ? 0.8 : -0.8)));
  }
  const Sweep sw = sweep_threshold(s, y);
  double best = -1, best_tau = 0.5;
  for (const SweepPoint& p : sw.curve) {
    const double f = brute_f1(s, y, p.tau);
    EXPECT_NEAR(p.f1, f, 1e-12) << p.tau;
    if (f > best + 1e-12 || (std::abs(f - best) <= 1e-12 &&
                             std::abs(p.tau - 0.5) < std::abs(best_tau - 0.5))) {
      best = f;
      best_tau = p.tau;
    }
  }
  EXPECT_NEAR(sw.best_f1, best, 1e-12);
  EXPECT_EQ(sw.best_tau, best_tau);
  expect_code(ErrorCode::kDegenerateDataset, [] { sweep_threshold({0.3, 0.4}, {1, 1}); });
}

}  // namespace
}  // namespace forge::classifier
