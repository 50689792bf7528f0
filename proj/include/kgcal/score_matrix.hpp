#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kgcal/canonicalize.hpp"
#include "kgcal/intervention.hpp"

namespace kgcal {

/// Interventions x candidates, at most 3 x 3.
template <class Scalar>
using ScoreTable = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor, 3, 3>;

template <class Scalar>
using ScoreColumn = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, 3, 1>;

/// Panel probabilities c(t_j, a_i): one row per active intervention, one
/// column per candidate.
struct ScoreMatrix {
  std::vector<InterventionId> interventions;
  CandidateSet candidates;
  ScoreTable<double> values;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

struct Violation {
  std::string kind;  // "dimension", "range" or "row sum"
  std::string detail;
};

/// Every violated invariant, empty when the matrix is well-formed.
std::vector<Violation> validate_matrix(const ScoreMatrix& m);

}  // namespace kgcal
