#include "chainent/correlations.hpp"

#include <cmath>
#include <mutex>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "chainent/error.hpp"
#include "chainent/linalg.hpp"

namespace chainent {

CorrelationPair ground_state_correlations(const ChainCouplings& c, const Geometry& g,
                                          ValidationMode mode) {
  const ValidationReport report = validate(c, mode);
  if (!report.pass) {
    throw Error(ErrorCode::ValidationFailed, fmt::format("{}", fmt::join(report.messages, "; ")));
  }
  const double ny = g.n_y;
  const double root = std::sqrt(ny);

  Eigen::MatrixXd gap = build_toeplitz(c.lambda.axpy(-1.0, c.q), g.n_x);
  Eigen::MatrixXd q = build_toeplitz(c.q, g.n_x);
  Eigen::MatrixXd gap_inv = linalg::spd_inverse(gap, ErrorCode::SingularMatrix, "Lambda - Q");
  Eigen::MatrixXd coll_inv =
      linalg::spd_inverse(gap + ny * q, ErrorCode::SingularMatrix, "Lambda - Q + n_y Q");

  StructuredCorrelation vhalf{gap / root, ny * q / root, g.n_y};
  StructuredCorrelation vinvhalf{root * gap_inv, root * (coll_inv - gap_inv), g.n_y};

  return CorrelationPair{
      .couplings = c,
      .geometry = g,
      .mode = mode,
      .vhalf = std::move(vhalf),
      .vinvhalf = std::move(vinvhalf),
      .gap_matrix = std::move(gap),
      .q_matrix = std::move(q),
      .gap_inverse = std::move(gap_inv),
      .collective_inverse = std::move(coll_inv),
  };
}

BlockPair extract_block(const CorrelationPair& pair, const BlockSpec& block) {
  block.check(pair.geometry);
  const int off = block.placement.resolve(pair.geometry.n_x, block.l_x);
  const int lx = block.l_x;
  BlockPair bp{
      .a0 = pair.gap_inverse.block(off, off, lx, lx),
      .a1 = pair.collective_inverse.block(off, off, lx, lx),
      .d0 = pair.gap_matrix.block(off, off, lx, lx),
      .d1 = pair.q_matrix.block(off, off, lx, lx),
      .l_y = block.l_y,
      .n_y = pair.geometry.n_y,
  };
  bp.gap_boundary =
      linalg::boundary_factor(pair.gap_matrix, off, lx, ErrorCode::SingularMatrix, "Lambda - Q");
  if (block.l_y == pair.geometry.n_y) {
    const Eigen::MatrixXd collective = pair.gap_matrix + pair.geometry.n_y * pair.q_matrix;
    bp.collective_boundary = linalg::boundary_factor(collective, off, lx, ErrorCode::SingularMatrix,
                                                     "Lambda - Q + n_y Q");
  }
  return bp;
}

namespace {

void check_cap(long dim, long cap) {
  if (dim > cap) {
    throw Error(ErrorCode::SizeCap, fmt::format("dense dimension {} exceeds cap {}", dim, cap));
  }
}

// out = base (x) 1_{l_y} + uniform (x) J_{l_y}, index y * n + x.
Eigen::MatrixXd kron_identity_plus_uniform(const Eigen::MatrixXd& base, const Eigen::MatrixXd& uniform,
                                           int l_y) {
  const Eigen::Index n = base.rows();
  Eigen::MatrixXd out(n * l_y, n * l_y);
  for (int y = 0; y < l_y; ++y) {
    for (int yp = 0; yp < l_y; ++yp) {
      auto blk = out.block(y * n, yp * n, n, n);
      blk = uniform;
      if (y == yp) blk += base;
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd materialize(const StructuredCorrelation& s, int l_y, long cap) {
  if (l_y < 1) throw Error(ErrorCode::InvalidArgument, "l_y must be >= 1");
  check_cap(static_cast<long>(s.x0.rows()) * l_y, cap);
  return kron_identity_plus_uniform(s.x0, s.x1 / static_cast<double>(s.n_y), l_y);
}

DenseBlock materialize(const BlockPair& bp, long cap) {
  check_cap(static_cast<long>(bp.l_x()) * bp.l_y, cap);
  const double ny = bp.n_y;
  const double root = std::sqrt(ny);
  return DenseBlock{
      .a = root * kron_identity_plus_uniform(bp.a0, (bp.a1 - bp.a0) / ny, bp.l_y),
      .d = kron_identity_plus_uniform(bp.d0, bp.d1, bp.l_y) / root,
  };
}

std::shared_ptr<const CorrelationPair> CorrelationCache::get(const ChainCouplings& c,
                                                             const Geometry& g,
                                                             ValidationMode mode) {
  Key key{c.lambda.values(), c.q.values(), g.n_x, g.n_y, static_cast<int>(mode)};
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  auto fresh = std::make_shared<const CorrelationPair>(ground_state_correlations(c, g, mode));
  std::unique_lock lock(mutex_);
  return entries_.try_emplace(std::move(key), std::move(fresh)).first->second;
}

std::size_t CorrelationCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

}  // namespace chainent
