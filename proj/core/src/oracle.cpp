#include "chainent/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "chainent/entropy.hpp"
#include "chainent/error.hpp"

namespace chainent {

Eigen::MatrixXd build_z(const ChainCouplings& c, const Geometry& g) {
  const int nx = g.n_x;
  const Eigen::MatrixXd lambda = build_toeplitz(c.lambda, nx);
  const Eigen::MatrixXd q = build_toeplitz(c.q, nx);
  const Eigen::Index n = g.total();
  Eigen::MatrixXd z(n, n);
  for (int y = 0; y < g.n_y; ++y) {
    for (int yp = 0; yp < g.n_y; ++yp) {
      z.block(y * nx, yp * nx, nx, nx) = (y == yp) ? lambda : q;
    }
  }
  return z;
}

DenseCorrelations dense_ground_state(const ChainCouplings& c, const Geometry& g, long cap) {
  if (g.total() > cap) {
    throw Error(ErrorCode::SizeCap, fmt::format("N = {} exceeds dense cap {}", g.total(), cap));
  }
  const Eigen::MatrixXd z = build_z(c, g);
  Eigen::MatrixXd v = z * z / static_cast<double>(g.n_y);
  v = 0.5 * (v + v.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::NonPositiveSpectrum, "eigendecomposition of V failed");
  }
  const Eigen::VectorXd& w = es.eigenvalues();
  if (!(w.minCoeff() > 0.0)) {
    throw Error(ErrorCode::NonPositiveSpectrum,
                fmt::format("V has eigenvalue {} <= 0", w.minCoeff()));
  }
  const Eigen::MatrixXd& u = es.eigenvectors();
  const Eigen::VectorXd root = w.cwiseSqrt();
  Eigen::MatrixXd vhalf = u * root.asDiagonal() * u.transpose();
  Eigen::MatrixXd vinvhalf = u * root.cwiseInverse().asDiagonal() * u.transpose();
  return DenseCorrelations{
      .vhalf = 0.5 * (vhalf + vhalf.transpose()),
      .vinvhalf = 0.5 * (vinvhalf + vinvhalf.transpose()),
      .geometry = g,
  };
}

std::vector<double> dense_block_eigenvalues(const DenseCorrelations& dc, std::span<const int> indices) {
  const long n = dc.geometry.total();
  if (indices.empty()) throw Error(ErrorCode::IndexOutOfRange, "empty index subset");
  std::set<int> seen;
  for (int i : indices) {
    if (i < 0 || i >= n || !seen.insert(i).second) {
      throw Error(ErrorCode::IndexOutOfRange, fmt::format("invalid or repeated index {}", i));
    }
  }
  const auto m = static_cast<Eigen::Index>(indices.size());
  Eigen::MatrixXd a(m, m);
  Eigen::MatrixXd d(m, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index s = 0; s < m; ++s) {
      a(r, s) = dc.vinvhalf(indices[r], indices[s]);
      d(r, s) = dc.vhalf(indices[r], indices[s]);
    }
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(a * d, false);
  std::vector<double> out(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i).real();
  std::sort(out.begin(), out.end());
  return out;
}

double dense_entropy(const DenseCorrelations& dc, std::span<const int> indices) {
  double s = 0.0;
  for (double mu : dense_block_eigenvalues(dc, indices)) {
    s += entropy_function(std::sqrt(std::max(mu, 0.0)));
  }
  return s;
}

std::vector<int> block_indices(const Geometry& g, const BlockSpec& block) {
  block.check(g);
  const int off = block.placement.resolve(g.n_x, block.l_x);
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(block.size()));
  for (int y : block.chain_list()) {
    for (int x = 0; x < block.l_x; ++x) out.push_back(y * g.n_x + off + x);
  }
  return out;
}

}  // namespace chainent
