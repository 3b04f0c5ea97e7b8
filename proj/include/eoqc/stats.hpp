// Copyright 2026 The eoqc Authors.
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

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace eoqc {

enum class EdgeMode {
  /// Same length as the input; windows shrink at the edges.
  Truncate,
  /// Only positions where the full window fits (length n - window + 1).
  Valid,
};

/// Centered simple moving average. For even windows the extra sample is taken
/// on the left, so Valid mode with window w averages x[i .. i+w-1].
inline std::vector<double> moving_average(const std::vector<double>& series, int window,
                                          EdgeMode mode = EdgeMode::Truncate) {
  if (series.empty()) throw std::invalid_argument("moving_average: empty series");
  if (window < 1 || static_cast<std::size_t>(window) > series.size()) {
    throw std::invalid_argument("moving_average: window must be in [1, series length]");
  }
  const int n = static_cast<int>(series.size());
  std::vector<double> prefix(series.size() + 1, 0.0);
  std::partial_sum(series.begin(), series.end(), prefix.begin() + 1);
  auto mean = [&](int lo, int hi) { return (prefix[hi] - prefix[lo]) / (hi - lo); };
  std::vector<double> out;
  if (mode == EdgeMode::Valid) {
    for (int i = 0; i + window <= n; ++i) out.push_back(mean(i, i + window));
    return out;
  }
  const int left = window / 2, right = window - 1 - left;
  for (int i = 0; i < n; ++i) out.push_back(mean(std::max(0, i - left), std::min(n, i + right + 1)));
  return out;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("pearson: need two equal series of length >= 2");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

/// Average ranks (1-based), ties share the mean rank.
inline std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return pearson(ranks(x), ranks(y));
}

/// Spearman correlation of a series against its index: a monotone-trend score.
inline double trend(const std::vector<double>& series) {
  std::vector<double> index(series.size());
  std::iota(index.begin(), index.end(), 0.0);
  return spearman(index, series);
}

}  // namespace eoqc
