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


#ifndef FORGE_CLASSIFIER_CLASSIFIER_H_
#define FORGE_CLASSIFIER_CLASSIFIER_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "forge/features/features.h"
#include "forge/math/matrix.h"

namespace forge::classifier {

using Vector = std::vector<double>;

// One hidden ReLU layer followed by a sigmoid output unit:
// p = sigmoid(w2 . relu(W1 x + b1) + b2).
struct Mlp {
  math::Matrix w1;  // hidden x input
  Vector b1;
  Vector w2;
  double b2 = 0.0;

  size_t input_dim() const { return w1.cols(); }
  size_t hidden() const { return w1.rows(); }
  size_t num_params() const { return w1.data().size() + b1.size() + w2.size() + 1; }

  static Mlp zeros(size_t input_dim, size_t hidden);
  // He-style initialization from `seed`.
  static Mlp random(size_t input_dim, size_t hidden, uint64_t seed);

  // Flat parameter view in the order w1, b1, w2, b2.
  Vector params() const;
  void set_params(const Vector& p);

  bool operator==(const Mlp&) const = default;
};

double sigmoid(double z);
double logit(const Mlp& m, const Vector& x);

// Mean binary cross-entropy computed from logits, and its gradient in
// Mlp::params() order. Inference mode (no dropout).
double mlp_loss(const Mlp& m, const math::Matrix& x, const std::vector<int>& y);
Vector mlp_loss_grad(const Mlp& m, const math::Matrix& x, const std::vector<int>& y);

inline constexpr double kBceEpsilon = 1e-7;

// Mean BCE with predictions clamped to [eps, 1 - eps]. Throws
// Error(kDimensionMismatch) on a length mismatch, Error(kEmptyInput) when
// empty.
double bce_loss(const Vector& predictions, const std::vector<int>& labels);

struct ClassifierModel {
  Mlp mlp;
  double dropout_rate = 0.1;
  features::NormalizationProfile profile = features::NormalizationProfile::identity();
  uint64_t rng_seed = 0;

  size_t input_dim() const { return mlp.input_dim(); }
  size_t sem_dim() const { return input_dim() - features::kNumStatFeatures; }

  // Standardizes the trailing 14 v_stat entries with the profile.
  Vector standardize(const Vector& raw) const;

  bool operator==(const ClassifierModel&) const = default;
};

// P(valid) for a raw hybrid vector, always strictly inside (0, 1). Throws Error(kDimensionMismatch).
double forward(const ClassifierModel& model, const Vector& raw);
// Row-wise forward over raw hybrid vectors, parallel across rows.
Vector forward_batch(const ClassifierModel& model, const math::Matrix& raw);

enum class Optimizer { kAdam, kMomentum };

struct TrainConfig {
  double learning_rate = 1e-4;
  size_t batch_size = 8;
  size_t epochs = 100;
  double dropout = 0.1;
  double split = 0.8;
  uint64_t seed = 0;
  size_t hidden = 256;
  Optimizer optimizer = Optimizer::kAdam;
  double momentum = 0.9;  // kMomentum only

  // Throws Error(kInvalidArgument).
  void validate() const;
};

struct EpochStats {
  size_t epoch = 0;
  double train_loss = 0.0;       // mean minibatch loss (dropout active)
  double train_eval_loss = 0.0;  // whole training split, inference mode
  double val_loss = 0.0;
  double val_accuracy = 0.0;  // at tau = 0.5
};

struct TrainResult {
  ClassifierModel model;
  std::vector<EpochStats> history;
  std::vector<size_t> train_rows;
  std::vector<size_t> val_rows;
};

// Stratified seeded split, profile fitted on the training rows, then
// minibatch training. Final weights are rounded to float32 so that a
// saved model reproduces in-memory predictions exactly. Throws
// Error(kDegenerateDataset) unless each class has at least two rows and
// the training split holds at least one batch.
TrainResult train(const math::Matrix& x, const std::vector<int>& y, const TrainConfig& cfg);

// Stratified split used by train(): per class, max(1, round((1 - split) * n))
// rows go to validation.
void stratified_split(const std::vector<int>& y, double split, uint64_t seed,
                      std::vector<size_t>& train_rows, std::vector<size_t>& val_rows);

struct Metrics {
  double precision = 0;  // support-weighted over both classes
  double recall = 0;
  double f1 = 0;
  double accuracy = 0;
  double positive_precision = 0;  // class 1 only
  double positive_recall = 0;
  double positive_f1 = 0;
  uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
};

// Predicts 1 when score >= tau. Precision of a class with no predictions
// is 0. Throws Error(kEmptyInput) or Error(kDimensionMismatch).
Metrics metrics(const Vector& scores, const std::vector<int>& labels, double tau);
Metrics metrics_from_counts(uint64_t tp, uint64_t fp, uint64_t tn, uint64_t fn);

struct SweepPoint {
  double tau = 0;
  double f1 = 0;  // weighted
};

struct Sweep {
  double best_tau = 0.5;
  double best_f1 = 0;
  std::vector<SweepPoint> curve;
};

// 0.000, 0.001, ..., 1.000.
std::vector<double> default_grid();

// Weighted F1 at each grid threshold; the maximum wins, ties go to the
// threshold nearest 0.5 (the lower one if two are equally near). Throws
// Error(kDegenerateDataset) unless both classes are present.
Sweep sweep_threshold(const Vector& scores, const std::vector<int>& labels,
                      const std::vector<double>& grid = default_grid());

// Versioned binary: "VCLC", u32 version, u32 input_dim, u32 hidden,
// f64 dropout, u64 seed, f32 blocks (w1 row-major, b1, w2, b2), then the
// profile as f64 means and scales. Little-endian throughout.
void save_model(const std::filesystem::path& path, const ClassifierModel& model);
ClassifierModel load_model(const std::filesystem::path& path);

// Two Gaussian clusters (unit variance per coordinate) whose means are
// `separation` apart along a random unit direction; labels alternate so
// classes are balanced. Columns: sem_dim + 14.
void synthetic_clusters(size_t n, size_t sem_dim, double separation, uint64_t seed,
                        math::Matrix& x, std::vector<int>& y);

}  // namespace forge::classifier

#endif  // FORGE_CLASSIFIER_CLASSIFIER_H_
