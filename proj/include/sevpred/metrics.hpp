#pragma once

#include <algorithm>
#include <cmath>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sevpred/error.hpp"
#include "sevpred/method_parser.hpp"
#include "sevpred/types.hpp"

namespace sevpred {

int lines_of_code(const MethodShape& shape);
int mccabe(const MethodShape& shape);
int mcclure(const MethodShape& shape);
int nested_block_depth(const MethodShape& shape);
double proxy_indentation(const MethodShape& shape);
int fan_out(const MethodShape& shape);

struct Halstead {
  int n1 = 0;  // distinct operators
  int n2 = 0;  // distinct operands
  int N1 = 0;  // total operators
  int N2 = 0;  // total operands
  double volume = 0.0;
  double difficulty = 0.0;
  double effort = 0.0;
  // Set when n2 == 0 or n == 0; difficulty and effort are then 0.
  bool degenerate = false;
};

Halstead halstead(const HalsteadCounts& counts);
inline Halstead halstead(const MethodShape& shape) { return halstead(shape.halstead_counts); }

/// 171 - 5.2 ln(V) - 0.23 MA - 16.2 ln(LC), unclamped. The volume term is
/// dropped when V <= 0.
double maintainability_index(double volume, int mccabe, int lines);

/// Logistic layout score in [0, 1]; higher reads easier.
///
/// Features are averaged over logical lines: width, identifiers,
/// parentheses and indentation units, plus the widest line. The weights are
/// fixed constants (see readability_weights) that penalise long, dense and
/// deeply indented code.
double readability(const MethodShape& shape);

struct ReadabilityWeights {
  double bias = 2.0;
  double mean_width = -0.03;
  double mean_identifiers = -0.25;
  double max_width = -0.01;
  double mean_indent = -0.4;
  double mean_parentheses = -0.3;
};
inline constexpr ReadabilityWeights readability_weights{};

/// [LC, PI, MA, NBD, ML, D, MI, FO, R, E] for one parsed method.
MetricsVector metrics_vector(const MethodShape& shape);

/// Strip comments, parse and measure raw method text.
MetricsVector measure_source(std::string_view source);

// ---------------------------------------------------------------------------
// Robust scaling

template <typename Scalar>
struct RobustScaler {
  using Row = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
  Row median;
  Row iqr;
};

template <typename Scalar>
struct ScaledMatrix {
  typename Types<Scalar>::Matrix rows;
  RobustScaler<Scalar> params;
};

/// Quantile of ascending-sorted data by linear interpolation between the
/// closest ranks (position q * (n - 1)).
template <typename Scalar>
Scalar quantile_sorted(const std::vector<Scalar>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const Scalar frac = static_cast<Scalar>(pos - static_cast<double>(lo));
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

/// Per-column median and interquartile range (Q3 - Q1).
template <typename Derived>
RobustScaler<typename Derived::Scalar> robust_scale_fit(const Eigen::MatrixBase<Derived>& rows) {
  using Scalar = typename Derived::Scalar;
  if (rows.rows() < 2) throw Error(ErrorCode::EmptyFit, "robust scaling needs at least 2 rows");
  RobustScaler<Scalar> params;
  params.median.resize(rows.cols());
  params.iqr.resize(rows.cols());
  std::vector<Scalar> column(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index c = 0; c < rows.cols(); ++c) {
    for (Eigen::Index r = 0; r < rows.rows(); ++r) column[static_cast<std::size_t>(r)] = rows(r, c);
    std::sort(column.begin(), column.end());
    params.median(c) = quantile_sorted(column, 0.5);
    params.iqr(c) = quantile_sorted(column, 0.75) - quantile_sorted(column, 0.25);
  }
  return params;
}

/// (x - median) / IQR per cell; a zero IQR leaves the column only centred.
template <typename Derived>
ScaledMatrix<typename Derived::Scalar> robust_scale_transform(
    const Eigen::MatrixBase<Derived>& rows, const RobustScaler<typename Derived::Scalar>& params) {
  using Scalar = typename Derived::Scalar;
  if (rows.cols() != params.median.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "column count differs from fitted scaler");
  }
  ScaledMatrix<Scalar> out;
  out.params = params;
  const auto divisor = params.iqr.unaryExpr([](Scalar v) { return v == Scalar(0) ? Scalar(1) : v; });
  out.rows = (rows.rowwise() - params.median).array().rowwise() / divisor.array();
  return out;
}

}  // namespace sevpred
