#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "chainent/correlations.hpp"
#include "chainent/model.hpp"

namespace chainent {

/// Brute-force N x N ground-state correlations. Reference for the structured path.
struct DenseCorrelations {
  Eigen::MatrixXd vhalf;
  Eigen::MatrixXd vinvhalf;
  Geometry geometry;
};

/// The full block matrix Z (Lambda on the diagonal blocks, Q elsewhere).
Eigen::MatrixXd build_z(const ChainCouplings& c, const Geometry& g);

/// Forms V = Z^2 / n_y and takes V^{+-1/2} from its full eigendecomposition.
/// Throws SizeCap when N > cap, NonPositiveSpectrum if V has a non-positive eigenvalue.
DenseCorrelations dense_ground_state(const ChainCouplings& c, const Geometry& g,
                                     long cap = kDefaultDenseCap);

/// Raw eigenvalues (ascending, real parts) of A.D for an arbitrary index subset.
/// Uses a general non-symmetric eigensolver. Throws IndexOutOfRange.
std::vector<double> dense_block_eigenvalues(const DenseCorrelations& dc, std::span<const int> indices);

double dense_entropy(const DenseCorrelations& dc, std::span<const int> indices);

/// Flat indices (y * n_x + x) of a rectangular block.
std::vector<int> block_indices(const Geometry& g, const BlockSpec& block);

}  // namespace chainent
