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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "forge/math/kernels.h"
#include "forge/util/error.h"
#include "forge/util/io.h"
#include "forge/util/rng.h"

namespace forge::classifier {
namespace {

constexpr char kModelMagic[4] = {'V', 'C', 'L', 'C'};
constexpr uint32_t kModelVersion = 1;

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

// Adds the gradient of one example's loss (scaled by `scale`) into `g` and
// returns the unscaled loss. `mask` holds inverted-dropout multipliers or
// is null.
double accumulate(const Mlp& m, const double* x, int y, const double* mask, double scale,
                  Mlp& g, std::vector<double>& pre, std::vector<double>& act) {
  const size_t in = m.input_dim();
  const size_t hid = m.hidden();
  double z = m.b2;
  for (size_t j = 0; j < hid; ++j) {
    const double* w = m.w1.row(j);
    double s = m.b1[j];
    for (size_t i = 0; i < in; ++i) s += w[i] * x[i];
    pre[j] = s;
    act[j] = s > 0 ? s * (mask ? mask[j] : 1.0) : 0.0;
    z += m.w2[j] * act[j];
  }
  const double loss = softplus(z) - y * z;
  const double dz = (sigmoid(z) - y) * scale;
  g.b2 += dz;
  for (size_t j = 0; j < hid; ++j) {
    g.w2[j] += dz * act[j];
    if (pre[j] <= 0) continue;
    const double dh = dz * m.w2[j] * (mask ? mask[j] : 1.0);
    g.b1[j] += dh;
    double* gw = g.w1.row(j);
    for (size_t i = 0; i < in; ++i) gw[i] += dh * x[i];
  }
  return loss;
}

void check_xy(const math::Matrix& x, const std::vector<int>& y) {
  if (x.rows() != y.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "feature rows and labels differ in length");
  }
  for (int v : y) {
    if (v != 0 && v != 1) throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
  }
}

// Visits matching parameter blocks of several Mlps of equal shape.
template <typename Fn>
void for_each_block(Mlp& a, Mlp& b, Mlp& c, Mlp& d, Fn fn) {
  fn(a.w1.data().data(), b.w1.data().data(), c.w1.data().data(), d.w1.data().data(),
     a.w1.data().size());
  fn(a.b1.data(), b.b1.data(), c.b1.data(), d.b1.data(), a.b1.size());
  fn(a.w2.data(), b.w2.data(), c.w2.data(), d.w2.data(), a.w2.size());
  fn(&a.b2, &b.b2, &c.b2, &d.b2, 1);
}

math::Matrix standardize_rows(const math::Matrix& x, const features::NormalizationProfile& p) {
  math::Matrix out = x;
  const size_t off = x.cols() - features::kNumStatFeatures;
  for (size_t r = 0; r < x.rows(); ++r) {
    for (size_t j = 0; j < features::kNumStatFeatures; ++j) {
      out(r, off + j) = (x(r, off + j) - p.mean[j]) / p.scale[j];
    }
  }
  return out;
}

// Keeps probabilities strictly inside (0, 1) where the logistic function
// rounds to an endpoint.
double open_unit(double p) {
  return std::clamp(p, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

double round_f32(double v) { return static_cast<double>(static_cast<float>(v)); }

}  // namespace

Mlp Mlp::zeros(size_t input_dim, size_t hidden) {
  Mlp m;
  m.w1 = math::Matrix(hidden, input_dim);
  m.b1.assign(hidden, 0.0);
  m.w2.assign(hidden, 0.0);
  return m;
}

Mlp Mlp::random(size_t input_dim, size_t hidden, uint64_t seed) {
  Mlp m = zeros(input_dim, hidden);
  Rng rng(seed);
  const double s1 = std::sqrt(2.0 / static_cast<double>(input_dim));
  const double s2 = std::sqrt(1.0 / static_cast<double>(hidden));
  for (double& w : m.w1.data()) w = rng.normal() * s1;
  for (double& w : m.w2) w = rng.normal() * s2;
  return m;
}

Vector Mlp::params() const {
  Vector p = w1.data();
  p.insert(p.end(), b1.begin(), b1.end());
  p.insert(p.end(), w2.begin(), w2.end());
  p.push_back(b2);
  return p;
}

void Mlp::set_params(const Vector& p) {
  if (p.size() != num_params()) throw Error(ErrorCode::kDimensionMismatch, "parameter count");
  auto it = p.begin();
  std::copy(it, it + static_cast<long>(w1.data().size()), w1.data().begin());
  it += static_cast<long>(w1.data().size());
  std::copy(it, it + static_cast<long>(b1.size()), b1.begin());
  it += static_cast<long>(b1.size());
  std::copy(it, it + static_cast<long>(w2.size()), w2.begin());
  it += static_cast<long>(w2.size());
  b2 = *it;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logit(const Mlp& m, const Vector& x) {
  if (x.size() != m.input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "input has " + std::to_string(x.size()) +
                                                   " values, model expects " +
                                                   std::to_string(m.input_dim()));
  }
  double z = m.b2;
  for (size_t j = 0; j < m.hidden(); ++j) {
    const double* w = m.w1.row(j);
    double s = m.b1[j];
    for (size_t i = 0; i < x.size(); ++i) s += w[i] * x[i];
    if (s > 0) z += m.w2[j] * s;
  }
  return z;
}

double mlp_loss(const Mlp& m, const math::Matrix& x, const std::vector<int>& y) {
  check_xy(x, y);
  if (y.empty()) throw Error(ErrorCode::kEmptyInput, "no examples");
  double total = 0;
  for (size_t r = 0; r < x.rows(); ++r) {
    const double z = logit(m, x.row_vector(r));
    total += softplus(z) - y[r] * z;
  }
  return total / static_cast<double>(y.size());
}

Vector mlp_loss_grad(const Mlp& m, const math::Matrix& x, const std::vector<int>& y) {
  check_xy(x, y);
  if (y.empty()) throw Error(ErrorCode::kEmptyInput, "no examples");
  Mlp g = Mlp::zeros(m.input_dim(), m.hidden());
  std::vector<double> pre(m.hidden()), act(m.hidden());
  const double scale = 1.0 / static_cast<double>(y.size());
  for (size_t r = 0; r < x.rows(); ++r) accumulate(m, x.row(r), y[r], nullptr, scale, g, pre, act);
  return g.params();
}

double bce_loss(const Vector& predictions, const std::vector<int>& labels) {
  if (predictions.size() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "predictions and labels differ in length");
  }
  if (predictions.empty()) throw Error(ErrorCode::kEmptyInput, "no predictions");
  double total = 0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    const double p = std::clamp(predictions[i], kBceEpsilon, 1.0 - kBceEpsilon);
    total -= labels[i] ? std::log(p) : std::log(1.0 - p);
  }
  return total / static_cast<double>(predictions.size());
}

Vector ClassifierModel::standardize(const Vector& raw) const {
  if (raw.size() != input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "input has " + std::to_string(raw.size()) +
                                                   " values, model expects " +
                                                   std::to_string(input_dim()));
  }
  Vector x = raw;
  const size_t off = sem_dim();
  for (size_t j = 0; j < features::kNumStatFeatures; ++j) {
    x[off + j] = (raw[off + j] - profile.mean[j]) / profile.scale[j];
  }
  return x;
}

double forward(const ClassifierModel& model, const Vector& raw) {
  return open_unit(sigmoid(logit(model.mlp, model.standardize(raw))));
}

Vector forward_batch(const ClassifierModel& model, const math::Matrix& raw) {
  if (raw.cols() != model.input_dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "feature width does not match the model");
  }
  const math::Matrix x = standardize_rows(raw, model.profile);
  math::Matrix h;
  math::affine(x, model.mlp.w1, model.mlp.b1, h);
  Vector out(raw.rows());
  for (size_t r = 0; r < raw.rows(); ++r) {
    double z = model.mlp.b2;
    for (size_t j = 0; j < h.cols(); ++j) {
      if (h(r, j) > 0) z += model.mlp.w2[j] * h(r, j);
    }
    out[r] = open_unit(sigmoid(z));
  }
  return out;
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0) || !std::isfinite(learning_rate)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be positive");
  }
  if (batch_size == 0 || epochs == 0 || hidden == 0) {
    throw Error(ErrorCode::kInvalidArgument, "batch size, epochs and hidden width must be >= 1");
  }
  if (!(dropout >= 0 && dropout < 1)) throw Error(ErrorCode::kInvalidArgument, "dropout in [0, 1)");
  if (!(split > 0 && split < 1)) throw Error(ErrorCode::kInvalidArgument, "split in (0, 1)");
  if (!(momentum >= 0 && momentum < 1)) throw Error(ErrorCode::kInvalidArgument, "momentum in [0, 1)");
}

void stratified_split(const std::vector<int>& y, double split, uint64_t seed,
                      std::vector<size_t>& train_rows, std::vector<size_t>& val_rows) {
  train_rows.clear();
  val_rows.clear();
  Rng rng(derive_seed(seed, 0));
  for (int cls : {0, 1}) {
    std::vector<size_t> rows;
    for (size_t i = 0; i < y.size(); ++i) {
      if (y[i] == cls) rows.push_back(i);
    }
    if (rows.size() < 2) {
      throw Error(ErrorCode::kDegenerateDataset,
                  "class " + std::to_string(cls) + " has " + std::to_string(rows.size()) +
                      " examples; need at least 2");
    }
    rng.shuffle(rows);
    const size_t n_val = std::clamp<size_t>(
        static_cast<size_t>(std::llround((1.0 - split) * static_cast<double>(rows.size()))), 1,
        rows.size() - 1);
    val_rows.insert(val_rows.end(), rows.begin(), rows.begin() + static_cast<long>(n_val));
    train_rows.insert(train_rows.end(), rows.begin() + static_cast<long>(n_val), rows.end());
  }
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(val_rows.begin(), val_rows.end());
}

TrainResult train(const math::Matrix& x, const std::vector<int>& y, const TrainConfig& cfg) {
  cfg.validate();
  check_xy(x, y);
  if (x.cols() <= features::kNumStatFeatures) {
    throw Error(ErrorCode::kDimensionMismatch, "features need more than 14 columns");
  }
  if (!x.all_finite()) throw Error(ErrorCode::kNonFinite, "non-finite feature value");
  TrainResult res;
  stratified_split(y, cfg.split, cfg.seed, res.train_rows, res.val_rows);
  if (res.train_rows.size() < cfg.batch_size) {
    throw Error(ErrorCode::kDegenerateDataset, "training split is smaller than one batch");
  }

  const size_t off = x.cols() - features::kNumStatFeatures;
  std::vector<std::array<double, features::kNumStatFeatures>> stat_rows;
  for (size_t r : res.train_rows) {
    std::array<double, features::kNumStatFeatures> s;
    for (size_t j = 0; j < s.size(); ++j) s[j] = x(r, off + j);
    stat_rows.push_back(s);
  }
  ClassifierModel& model = res.model;
  model.profile = features::NormalizationProfile::fit(stat_rows);
  model.dropout_rate = cfg.dropout;
  model.rng_seed = cfg.seed;
  model.mlp = Mlp::random(x.cols(), cfg.hidden, derive_seed(cfg.seed, 1));
  const math::Matrix xs = standardize_rows(x, model.profile);

  math::Matrix val_x(res.val_rows.size(), x.cols());
  std::vector<int> val_y;
  for (size_t i = 0; i < res.val_rows.size(); ++i) {
    std::copy(x.row(res.val_rows[i]), x.row(res.val_rows[i]) + x.cols(), val_x.row(i));
    val_y.push_back(y[res.val_rows[i]]);
  }

  math::Matrix train_x(res.train_rows.size(), x.cols());
  std::vector<int> train_y;
  for (size_t i = 0; i < res.train_rows.size(); ++i) {
    std::copy(x.row(res.train_rows[i]), x.row(res.train_rows[i]) + x.cols(), train_x.row(i));
    train_y.push_back(y[res.train_rows[i]]);
  }

  Mlp& m = model.mlp;
  Mlp g = Mlp::zeros(m.input_dim(), m.hidden());
  Mlp s1 = g;  // first moment / velocity
  Mlp s2 = g;  // second moment
  Rng order_rng(derive_seed(cfg.seed, 2));
  Rng drop_rng(derive_seed(cfg.seed, 3));
  std::vector<double> pre(m.hidden()), act(m.hidden()), mask(m.hidden());
  std::vector<size_t> order = res.train_rows;
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  uint64_t t = 0;
  const double keep = 1.0 - cfg.dropout;

  for (size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    order_rng.shuffle(order);
    double epoch_loss = 0;
    size_t batches = 0;
    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const size_t end = std::min(order.size(), start + cfg.batch_size);
      const double scale = 1.0 / static_cast<double>(end - start);
      for (double& v : g.w1.data()) v = 0;
      std::fill(g.b1.begin(), g.b1.end(), 0.0);
      std::fill(g.w2.begin(), g.w2.end(), 0.0);
      g.b2 = 0;
      double loss = 0;
      for (size_t k = start; k < end; ++k) {
        const double* mk = nullptr;
        if (cfg.dropout > 0) {
          for (double& v : mask) v = drop_rng.uniform() < keep ? 1.0 / keep : 0.0;
          mk = mask.data();
        }
        loss += accumulate(m, xs.row(order[k]), y[order[k]], mk, scale, g, pre, act);
      }
      epoch_loss += loss * scale;
      ++batches;
      ++t;
      if (cfg.optimizer == Optimizer::kAdam) {
        const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
        const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
        for_each_block(m, g, s1, s2, [&](double* p, double* gr, double* a, double* b, size_t n) {
          for (size_t i = 0; i < n; ++i) {
            a[i] = beta1 * a[i] + (1 - beta1) * gr[i];
            b[i] = beta2 * b[i] + (1 - beta2) * gr[i] * gr[i];
            p[i] -= cfg.learning_rate * (a[i] / c1) / (std::sqrt(b[i] / c2) + eps);
          }
        });
      } else {
        for_each_block(m, g, s1, s2, [&](double* p, double* gr, double* a, double*, size_t n) {
          for (size_t i = 0; i < n; ++i) {
            a[i] = cfg.momentum * a[i] - cfg.learning_rate * gr[i];
            p[i] += a[i];
          }
        });
      }
    }
    EpochStats st;
    st.epoch = epoch;
    st.train_loss = epoch_loss / static_cast<double>(batches);
    st.train_eval_loss = bce_loss(forward_batch(model, train_x), train_y);
    const Vector pred = forward_batch(model, val_x);
    st.val_loss = bce_loss(pred, val_y);
    st.val_accuracy = metrics(pred, val_y, 0.5).accuracy;
    res.history.push_back(st);
  }

  for (double& w : m.w1.data()) w = round_f32(w);
  for (double& w : m.b1) w = round_f32(w);
  for (double& w : m.w2) w = round_f32(w);
  m.b2 = round_f32(m.b2);
  return res;
}

Metrics metrics_from_counts(uint64_t tp, uint64_t fp, uint64_t tn, uint64_t fn) {
  auto ratio = [](uint64_t a, uint64_t b) {
    return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
  };
  auto f1 = [](double p, double r) { return p + r == 0 ? 0.0 : 2 * p * r / (p + r); };
  Metrics m;
  m.tp = tp;
  m.fp = fp;
  m.tn = tn;
  m.fn = fn;
  const uint64_t n = tp + fp + tn + fn;
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "no predictions");
  m.positive_precision = ratio(tp, tp + fp);
  m.positive_recall = ratio(tp, tp + fn);
  m.positive_f1 = f1(m.positive_precision, m.positive_recall);
  const double p0 = ratio(tn, tn + fn);
  const double r0 = ratio(tn, tn + fp);
  const double w1 = static_cast<double>(tp + fn);
  const double w0 = static_cast<double>(tn + fp);
  const double total = static_cast<double>(n);
  m.precision = (w1 * m.positive_precision + w0 * p0) / total;
  m.recall = (w1 * m.positive_recall + w0 * r0) / total;
  m.f1 = (w1 * m.positive_f1 + w0 * f1(p0, r0)) / total;
  m.accuracy = static_cast<double>(tp + tn) / total;
  return m;
}

Metrics metrics(const Vector& scores, const std::vector<int>& labels, double tau) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "scores and labels differ in length");
  }
  if (scores.empty()) throw Error(ErrorCode::kEmptyInput, "no predictions");
  uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] >= tau;
    if (pred && labels[i]) ++tp;
    if (pred && !labels[i]) ++fp;
    if (!pred && !labels[i]) ++tn;
    if (!pred && labels[i]) ++fn;
  }
  return metrics_from_counts(tp, fp, tn, fn);
}

std::vector<double> default_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 1000; ++i) grid.push_back(i / 1000.0);
  return grid;
}

Sweep sweep_threshold(const Vector& scores, const std::vector<int>& labels,
                      const std::vector<double>& grid) {
  if (scores.size() != labels.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "scores and labels differ in length");
  }
  if (grid.empty()) throw Error(ErrorCode::kEmptyInput, "empty threshold grid");
  const bool has_pos = std::count(labels.begin(), labels.end(), 1) > 0;
  const bool has_neg = std::count(labels.begin(), labels.end(), 0) > 0;
  if (!has_pos || !has_neg) {
    throw Error(ErrorCode::kDegenerateDataset, "threshold sweep needs both classes");
  }
  const std::vector<math::Confusion> counts = math::threshold_counts(scores, labels, grid);
  Sweep s;
  s.best_f1 = -1;
  for (size_t i = 0; i < grid.size(); ++i) {
    const math::Confusion& c = counts[i];
    const double f1 = metrics_from_counts(c.tp, c.fp, c.tn, c.fn).f1;
    s.curve.push_back({grid[i], f1});
    if (f1 > s.best_f1 ||
        (f1 == s.best_f1 && std::abs(grid[i] - 0.5) < std::abs(s.best_tau - 0.5))) {
      s.best_f1 = f1;
      s.best_tau = grid[i];
    }
  }
  return s;
}

void save_model(const std::filesystem::path& path, const ClassifierModel& model) {
  std::ostringstream out;
  out.write(kModelMagic, 4);
  put_u32(out, kModelVersion);
  put_u32(out, static_cast<uint32_t>(model.input_dim()));
  put_u32(out, static_cast<uint32_t>(model.mlp.hidden()));
  put_f64(out, model.dropout_rate);
  put_u64(out, model.rng_seed);
  for (double v : model.mlp.params()) put_f32(out, static_cast<float>(v));
  for (double v : model.profile.mean) put_f64(out, v);
  for (double v : model.profile.scale) put_f64(out, v);
  write_file(path, out.str());
}

ClassifierModel load_model(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  char magic[4];
  if (!in.read(magic, 4) || std::string_view(magic, 4) != std::string_view(kModelMagic, 4)) {
    throw Error(ErrorCode::kSchema, path.string() + ": not a classifier model");
  }
  try {
    const uint32_t version = get_u32(in);
    if (version != kModelVersion) {
      throw Error(ErrorCode::kSchema,
                  path.string() + ": unsupported model version " + std::to_string(version));
    }
    const uint32_t input_dim = get_u32(in);
    const uint32_t hidden = get_u32(in);
    if (input_dim <= features::kNumStatFeatures || hidden == 0) {
      throw Error(ErrorCode::kSchema, path.string() + ": bad model dimensions");
    }
    ClassifierModel model;
    model.dropout_rate = get_f64(in);
    model.rng_seed = get_u64(in);
    model.mlp = Mlp::zeros(input_dim, hidden);
    Vector p(model.mlp.num_params());
    for (double& v : p) v = get_f32(in);
    model.mlp.set_params(p);
    for (double& v : model.profile.mean) v = get_f64(in);
    for (double& v : model.profile.scale) v = get_f64(in);
    if (in.peek() != std::char_traits<char>::eof()) {
      throw Error(ErrorCode::kSchema, path.string() + ": trailing bytes");
    }
    return model;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kSchema) throw;
    throw Error(ErrorCode::kSchema, path.string() + ": truncated model");
  }
}

void synthetic_clusters(size_t n, size_t sem_dim, double separation, uint64_t seed,
                        math::Matrix& x, std::vector<int>& y) {
  const size_t d = sem_dim + features::kNumStatFeatures;
  Rng rng(seed);
  Vector dir(d);
  for (double& v : dir) v = rng.normal();
  const double len = math::norm(dir);
  for (double& v : dir) v /= len;
  x = math::Matrix(n, d);
  y.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    y[i] = static_cast<int>(i % 2);
    const double shift = (y[i] ? 0.5 : -0.5) * separation;
    for (size_t j = 0; j < d; ++j) x(i, j) = shift * dir[j] + rng.normal();
  }
}

}  // namespace forge::classifier
