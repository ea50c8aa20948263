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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "forge/math/kernels.h"
#include "forge/util/error.h"
#include "forge/util/io.h"
#include "forge/util/rng.h"

namespace forge::embedding {

using math::Matrix;

namespace {

void check_triplet(const Vector& a, const Vector& p, const Vector& n, double margin) {
  if (a.size() != p.size() || a.size() != n.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "triplet: embeddings differ in dimension");
  }
  if (!(margin >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "margin must be >= 0");
}

// Removes the projections onto `basis` (modified Gram-Schmidt, twice).
void orthogonalize(Vector& v, const std::vector<Vector>& basis) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) {
      const double c = math::dot(v, b);
      for (size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
  }
}

bool normalize(Vector& v) {
  const double n = math::norm(v);
  if (!(n > 0.0)) return false;
  for (double& x : v) x /= n;
  return true;
}

void fix_sign(Vector& v) {
  for (double x : v) {
    if (std::abs(x) > 1e-12) {
      if (x < 0) {
        for (double& y : v) y = -y;
      }
      return;
    }
  }
}

Vector mat_vec(const Matrix& m, const Vector& v) {
  Vector out(m.rows(), 0.0);
  for (size_t r = 0; r < m.rows(); ++r) {
    const double* row = m.row(r);
    double s = 0.0;
    for (size_t c = 0; c < m.cols(); ++c) s += row[c] * v[c];
    out[r] = s;
  }
  return out;
}

// A unit vector orthogonal to `basis`, taken from the standard basis.
Vector complement_vector(size_t d, const std::vector<Vector>& basis) {
  Vector best;
  double best_norm = 0.0;
  for (size_t i = 0; i < d; ++i) {
    Vector e(d, 0.0);
    e[i] = 1.0;
    orthogonalize(e, basis);
    const double n = math::norm(e);
    if (n > best_norm + 1e-9) {
      best_norm = n;
      best = e;
    }
  }
  normalize(best);
  return best;
}

}  // namespace

Vector max_pool(const Matrix& h) {
  if (h.rows() == 0 || h.cols() == 0) throw Error(ErrorCode::kEmptyInput, "empty hidden matrix");
  if (!h.all_finite()) throw Error(ErrorCode::kNonFinite, "hidden matrix has non-finite entries");
  Vector out(h.row(0), h.row(0) + h.cols());
  for (size_t r = 1; r < h.rows(); ++r) {
    for (size_t c = 0; c < h.cols(); ++c) out[c] = std::max(out[c], h(r, c));
  }
  return out;
}

double triplet_loss(const Vector& a, const Vector& p, const Vector& n, double margin) {
  check_triplet(a, p, n, margin);
  return std::max(0.0, math::distance(a, p) - math::distance(a, n) + margin);
}

TripletGrad triplet_loss_grad(const Vector& a, const Vector& p, const Vector& n,
                              double margin) {
  check_triplet(a, p, n, margin);
  const size_t d = a.size();
  TripletGrad g{Vector(d, 0.0), Vector(d, 0.0), Vector(d, 0.0)};
  const double dap = math::distance(a, p);
  const double dan = math::distance(a, n);
  if (dap - dan + margin <= 0.0) return g;
  for (size_t i = 0; i < d; ++i) {
    if (dap > 0.0) {
      const double u = (a[i] - p[i]) / dap;
      g.da[i] += u;
      g.dp[i] -= u;
    }
    if (dan > 0.0) {
      const double w = (a[i] - n[i]) / dan;
      g.da[i] -= w;
      g.dn[i] += w;
    }
  }
  return g;
}

Pca pca_project(const Matrix& points, size_t k, const PcaOptions& opt) {
  const size_t n = points.rows();
  const size_t d = points.cols();
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "PCA needs at least two points");
  if (k < 1 || k > std::min(n, d)) {
    throw Error(ErrorCode::kInvalidArgument, "PCA: k must lie in [1, min(N, D)]");
  }
  if (!points.all_finite()) throw Error(ErrorCode::kNonFinite, "PCA input has non-finite entries");
  Pca out;
  const Matrix cov = math::covariance(points, &out.mean);
  for (size_t i = 0; i < d; ++i) out.total_variance += cov(i, i);
  const double scale = std::max(out.total_variance, 1e-300);

  std::vector<Vector> basis;
  std::vector<double> variance;
  Rng rng(0x5ca1ab1e);
  for (size_t c = 0; c < k; ++c) {
    Vector v(d);
    for (double& x : v) x = rng.uniform() - 0.5;
    orthogonalize(v, basis);
    if (!normalize(v)) v = complement_vector(d, basis);
    for (int it = 0; it < opt.max_iterations; ++it) {
      Vector w = mat_vec(cov, v);
      orthogonalize(w, basis);
      if (math::norm(w) <= 1e-14 * scale || !normalize(w)) {
        // Remaining spectrum is numerically zero; any orthogonal
        // direction will do.
        break;
      }
      double delta = 0.0;
      for (size_t i = 0; i < d; ++i) delta = std::max(delta, std::abs(w[i] - v[i]));
      v = std::move(w);
      if (delta < opt.tolerance) break;
    }
    orthogonalize(v, basis);
    if (!normalize(v)) v = complement_vector(d, basis);
    fix_sign(v);
    variance.push_back(std::max(0.0, math::dot(v, mat_vec(cov, v))));
    basis.push_back(v);
  }

  std::vector<size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t x, size_t y) { return variance[x] > variance[y]; });
  out.components = Matrix(k, d);
  for (size_t c = 0; c < k; ++c) {
    out.explained_variance.push_back(variance[order[c]]);
    std::copy(basis[order[c]].begin(), basis[order[c]].end(), out.components.row(c));
  }
  out.projections = Matrix(n, k);
  for (size_t r = 0; r < n; ++r) {
    for (size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (size_t j = 0; j < d; ++j) s += (points(r, j) - out.mean[j]) * out.components(c, j);
      out.projections(r, c) = s;
    }
  }
  return out;
}

double separation_score(const Matrix& points, const std::vector<int>& labels) {
  if (labels.size() != points.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "one label per point required");
  }
  size_t count[2] = {0, 0};
  for (int l : labels) {
    if (l != 0 && l != 1) throw Error(ErrorCode::kInvalidArgument, "labels must be 0 or 1");
    ++count[l];
  }
  if (count[0] < 2 || count[1] < 2) {
    throw Error(ErrorCode::kInvalidArgument, "each group needs at least two points");
  }
  double total = 0.0;
  for (size_t i = 0; i < points.rows(); ++i) {
    double sum[2] = {0.0, 0.0};
    const Vector pi = points.row_vector(i);
    for (size_t j = 0; j < points.rows(); ++j) {
      if (j != i) sum[labels[j]] += math::distance(pi, points.row_vector(j));
    }
    const int own = labels[i];
    const double a = sum[own] / static_cast<double>(count[own] - 1);
    const double b = sum[1 - own] / static_cast<double>(count[1 - own]);
    const double m = std::max(a, b);
    total += m > 0.0 ? (b - a) / m : 0.0;
  }
  return total / static_cast<double>(points.rows());
}

SeparabilityReport separability(const Matrix& ok, const Matrix& err) {
  if (ok.cols() != err.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "groups have different embedding dimensions");
  }
  if (ok.rows() < 2 || err.rows() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "each group needs at least two points");
  }
  Matrix all(ok.rows() + err.rows(), ok.cols());
  SeparabilityReport rep;
  for (size_t r = 0; r < ok.rows(); ++r) {
    std::copy(ok.row(r), ok.row(r) + ok.cols(), all.row(r));
    rep.labels.push_back(0);
  }
  for (size_t r = 0; r < err.rows(); ++r) {
    std::copy(err.row(r), err.row(r) + err.cols(), all.row(ok.rows() + r));
    rep.labels.push_back(1);
  }
  rep.pca = pca_project(all, std::min<size_t>(2, std::min(all.rows(), all.cols())));
  rep.score = separation_score(rep.pca.projections, rep.labels);
  return rep;
}

std::string write_separability_report(const SeparabilityReport& report,
                                      const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const Matrix& p = report.pca.projections;
  const bool two = p.cols() > 1;
  std::ostringstream csv;
  csv.precision(17);
  csv << "group,pc1,pc2\n";
  for (size_t r = 0; r < p.rows(); ++r) {
    csv << (report.labels[r] ? "err" : "ok") << "," << p(r, 0) << "," << (two ? p(r, 1) : 0.0)
        << "\n";
  }
  write_file(dir / "pca.csv", csv.str());

  double lo[2] = {0, 0};
  double hi[2] = {0, 0};
  for (size_t r = 0; r < p.rows(); ++r) {
    for (int c = 0; c < 2; ++c) {
      const double v = c < static_cast<int>(p.cols()) ? p(r, static_cast<size_t>(c)) : 0.0;
      lo[c] = std::min(lo[c], v);
      hi[c] = std::max(hi[c], v);
    }
  }
  const double size = 480.0;
  const double pad = 40.0;
  auto map = [&](double v, int c) {
    const double span = hi[c] - lo[c] > 0 ? hi[c] - lo[c] : 1.0;
    const double t = (v - lo[c]) / span;
    return c == 0 ? pad + t * (size - 2 * pad) : size - pad - t * (size - 2 * pad);
  };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (size_t r = 0; r < p.rows(); ++r) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n",
                  map(p(r, 0), 0), map(two ? p(r, 1) : 0.0, 1),
                  report.labels[r] ? "#d62728" : "#1f77b4");
    svg << buf;
  }
  char caption[160];
  std::snprintf(caption, sizeof(caption),
                "<text x=\"%g\" y=\"20\" font-size=\"12\">PC1 vs PC2, separation %.4f</text>\n",
                pad, report.score);
  svg << caption << "</svg>\n";
  write_file(dir / "pca.svg", svg.str());

  std::ostringstream summary;
  summary.precision(6);
  summary << "points: " << p.rows() << " (ok " << std::count(report.labels.begin(),
                                                               report.labels.end(), 0)
          << ", err " << std::count(report.labels.begin(), report.labels.end(), 1) << ")\n";
  summary << "explained variance:";
  for (double v : report.pca.explained_variance) summary << " " << v;
  summary << " of " << report.pca.total_variance << "\n";
  summary << "separation score: " << report.score << "\n";
  return summary.str();
}

}  // namespace forge::embedding
