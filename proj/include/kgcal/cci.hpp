#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kgcal/score_matrix.hpp"

namespace kgcal {

/// Spread of one candidate's probabilities across interventions (max - min).
template <class Derived>
typename Derived::Scalar ce_var(const Eigen::MatrixBase<Derived>& column) {
  if (column.size() == 0) throw std::invalid_argument("ce_var: empty column");
  return column.maxCoeff() - column.minCoeff();
}

/// Mean probability of one candidate across interventions.
template <class Derived>
typename Derived::Scalar ce_mean(const Eigen::MatrixBase<Derived>& column) {
  if (column.size() == 0) throw std::invalid_argument("ce_mean: empty column");
  return column.mean();
}

template <class Scalar>
Scalar cci(Scalar mean_ce, Scalar variation) {
  return mean_ce * (Scalar(1) - variation);
}

/// Row vector of CCI values, one per column of `table`.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, 1, Eigen::Dynamic, Eigen::RowMajor, 1, 3> cci_row(
    const Eigen::MatrixBase<Derived>& table) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = table.cols();
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic, Eigen::RowMajor, 1, 3> out(n);
  for (Eigen::Index j = 0; j < n; ++j)
    out(j) = cci(ce_mean(table.col(j)), ce_var(table.col(j)));
  return out;
}

struct CciScore {
  std::string candidate;
  double mean_ce = 0;
  double ce_var = 0;
  double cci = 0;
};

struct Selection {
  std::string chosen;
  int chosen_index = -1;
  double confidence = 0;
  std::vector<CciScore> scores;
  bool tie_broken = false;
};

class InvalidMatrix : public std::invalid_argument {
 public:
  InvalidMatrix(const std::string& what, std::vector<Violation> violations)
      : std::invalid_argument(what), violations_(std::move(violations)) {}
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// Two CCI values closer than this are a tie.
inline constexpr double kTieTolerance = 1e-12;

/// argmax CCI. Ties go to the candidate produced by T0, then to the higher
/// count, then to the leftmost column. Throws InvalidMatrix.
Selection select(const ScoreMatrix& m);

}  // namespace kgcal
