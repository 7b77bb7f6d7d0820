#pragma once

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "chainent/model.hpp"

namespace chainent {

inline constexpr long kDefaultDenseCap = 4096;

/// N x N matrix with entry ((x, y), (x', y')) = x0(x, x') delta_{y y'} + x1(x, x') / n_y.
/// Flat index convention i = y * n_x + x.
struct StructuredCorrelation {
  Eigen::MatrixXd x0;
  Eigen::MatrixXd x1;
  int n_y;
};

/// Ground-state correlations V^{1/2} and V^{-1/2} for V = Z^2 / n_y, together with
/// the two n_x x n_x inverses they are built from. Immutable after construction.
struct CorrelationPair {
  ChainCouplings couplings;
  Geometry geometry;
  ValidationMode mode;
  StructuredCorrelation vhalf;
  StructuredCorrelation vinvhalf;
  Eigen::MatrixXd gap_matrix;           // Lambda - Q
  Eigen::MatrixXd q_matrix;             // Q
  Eigen::MatrixXd gap_inverse;          // (Lambda - Q)^{-1}
  Eigen::MatrixXd collective_inverse;   // (Lambda - Q + n_y Q)^{-1}
};

/// Throws ValidationFailed if the couplings fail `mode`, SingularMatrix if a
/// Cholesky factorization fails.
CorrelationPair ground_state_correlations(const ChainCouplings& c, const Geometry& g,
                                          ValidationMode mode = ValidationMode::Strict);

/// Subsystem blocks
///   A = [a0 (x) 1 + (a1 - a0) (x) P] sqrt(n_y),   D = [d0 (x) 1 + n_y d1 (x) P] / sqrt(n_y)
/// where P is the l_y x l_y matrix with all entries 1 / n_y.
struct BlockPair {
  Eigen::MatrixXd a0;  // window of (Lambda - Q)^{-1}
  Eigen::MatrixXd a1;  // window of (Lambda - Q + n_y Q)^{-1}
  Eigen::MatrixXd d0;  // window of Lambda - Q
  Eigen::MatrixXd d1;  // window of Q
  int l_y;
  int n_y;
  // Optional low-rank factors R with R^T R = d - a^{-1} for the gap sector
  // (d0, a0) and, when l_y == n_y, the collective sector. When present they let
  // the exactly-unit part of the spectrum be identified without round-off.
  std::optional<Eigen::MatrixXd> gap_boundary{};
  std::optional<Eigen::MatrixXd> collective_boundary{};

  int l_x() const noexcept { return static_cast<int>(a0.rows()); }
};

/// Exact at finite n_y. The result does not depend on which chains the block
/// occupies, only on how many. Throws BlockOutOfRange.
BlockPair extract_block(const CorrelationPair& pair, const BlockSpec& block);

/// Dense (n_x l_y) x (n_x l_y) matrix of `s` restricted to l_y chains.
/// Throws SizeCap if the dimension exceeds `cap`.
Eigen::MatrixXd materialize(const StructuredCorrelation& s, int l_y, long cap = kDefaultDenseCap);

struct DenseBlock {
  Eigen::MatrixXd a;
  Eigen::MatrixXd d;
};

DenseBlock materialize(const BlockPair& bp, long cap = kDefaultDenseCap);

/// Caches CorrelationPair instances per (couplings, geometry, mode). Concurrent
/// lookups are safe.
class CorrelationCache {
 public:
  std::shared_ptr<const CorrelationPair> get(const ChainCouplings& c, const Geometry& g,
                                             ValidationMode mode = ValidationMode::Strict);
  std::size_t size() const;

 private:
  using Key = std::tuple<std::vector<double>, std::vector<double>, int, int, int>;
  mutable std::shared_mutex mutex_;
  std::map<Key, std::shared_ptr<const CorrelationPair>> entries_;
};

}  // namespace chainent
