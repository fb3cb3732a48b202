#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include <Eigen/Dense>

namespace sevpred {

inline constexpr int kNumClasses = 4;
inline constexpr int kNumMetrics = 10;

/// Dense aliases shared by every module, parameterised on the scalar type.
template <typename Scalar>
struct Types {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;
  // One method's metrics, ordered [LC, PI, MA, NBD, ML, D, MI, FO, R, E].
  using Metrics = Eigen::Matrix<Scalar, kNumMetrics, 1>;
  // One row of class probabilities, index = severity class.
  using Proba = Eigen::Matrix<Scalar, 1, kNumClasses>;
  using ProbaMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, kNumClasses>;
};

using Matrix = Types<double>::Matrix;
using Vector = Types<double>::Vector;
using MetricsVector = Types<double>::Metrics;
using ProbaMatrix = Types<double>::ProbaMatrix;
using Labels = Eigen::VectorXi;

/// Column indices into a MetricsVector.
enum MetricIndex : int {
  kLC = 0,
  kPI = 1,
  kMA = 2,
  kNBD = 3,
  kML = 4,
  kD = 5,
  kMI = 6,
  kFO = 7,
  kR = 8,
  kE = 9,
};

inline constexpr std::array<std::string_view, kNumMetrics> kMetricNames = {
    "lc", "pi", "ma", "nbd", "ml", "d", "mi", "fo", "r", "e"};

// Metrics that are counts by construction; the rest are reals.
inline constexpr std::array<bool, kNumMetrics> kIntegerMetric = {
    true, false, true, true, true, false, false, true, false, false};

}  // namespace sevpred
