#pragma once

// Brute-force evaluation metrics, computed per sample rather than from a
// confusion matrix, used as oracles for the eval module.

#include <array>
#include <cmath>

#include "sevpred/types.hpp"

namespace naive {

using sevpred::Labels;
using sevpred::Vector;

struct Naive {
  std::array<double, 4> p{}, r{}, f{};
  double pw = 0, rw = 0, fw = 0;
};

inline Naive prf(const Labels& t, const Labels& y) {
  Naive out;
  const auto n = static_cast<double>(t.size());
  for (int c = 0; c < 4; ++c) {
    double tp = 0, fp = 0, fn = 0;
    for (Eigen::Index i = 0; i < t.size(); ++i) {
      if (y(i) == c && t(i) == c) tp += 1;
      if (y(i) == c && t(i) != c) fp += 1;
      if (y(i) != c && t(i) == c) fn += 1;
    }
    out.p[c] = tp + fp > 0 ? tp / (tp + fp) : 0;
    out.r[c] = tp + fn > 0 ? tp / (tp + fn) : 0;
    out.f[c] = out.p[c] + out.r[c] > 0 ? 2 * out.p[c] * out.r[c] / (out.p[c] + out.r[c]) : 0;
    const double w = (tp + fn) / n;
    out.pw += w * out.p[c];
    out.rw += w * out.r[c];
    out.fw += w * out.f[c];
  }
  return out;
}

// Pearson correlation of one-hot encodings, summed over classes.
inline double mcc(const Labels& t, const Labels& y) {
  const auto n = static_cast<double>(t.size());
  auto cov = [&](const Labels& a, const Labels& b) {
    double total = 0;
    for (int k = 0; k < 4; ++k) {
      double ma = 0, mb = 0;
      for (Eigen::Index i = 0; i < a.size(); ++i) {
        ma += (a(i) == k);
        mb += (b(i) == k);
      }
      ma /= n;
      mb /= n;
      for (Eigen::Index i = 0; i < a.size(); ++i) total += ((a(i) == k) - ma) * ((b(i) == k) - mb);
    }
    return total;
  };
  const double vt = cov(t, t);
  const double vy = cov(y, y);
  if (vt == 0 || vy == 0) return 0;
  return cov(t, y) / std::sqrt(vt * vy);
}

// Mann-Whitney: probability a positive outranks a negative, ties count half.
inline double auc(const Labels& t, const Vector& s, int c) {
  double wins = 0, pairs = 0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    if (t(i) != c) continue;
    for (Eigen::Index j = 0; j < t.size(); ++j) {
      if (t(j) == c) continue;
      pairs += 1;
      wins += s(i) > s(j) ? 1.0 : (s(i) == s(j) ? 0.5 : 0.0);
    }
  }
  return pairs > 0 ? wins / pairs : 0.5;
}
}  // namespace naive
