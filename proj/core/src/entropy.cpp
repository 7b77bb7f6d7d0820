#include "chainent/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "chainent/error.hpp"
#include "chainent/linalg.hpp"

namespace chainent {

double entropy_function(double x, double tol) {
  if (!(x >= 1.0 - tol)) {
    throw Error(ErrorCode::DomainError, fmt::format("entropy function needs x >= 1, got {}", x));
  }
  if (x <= 1.0) return 0.0;
  const double plus = 0.5 * (x + 1.0);
  const double minus = 0.5 * (x - 1.0);
  // plus ln plus - minus ln minus = ln plus + minus ln(1 + 1/minus); this form has
  // no cancellation for large x.
  if (x - 1.0 < 1e-15) return std::log(plus);
  return std::log(plus) + minus * std::log1p(1.0 / minus);
}

std::vector<double> BlockSpectrum::multiset() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(l_x) * static_cast<std::size_t>(l_y));
  for (double v : degenerate_set) out.insert(out.end(), static_cast<std::size_t>(l_y - 1), v);
  out.insert(out.end(), uniform_set.begin(), uniform_set.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<double> clamp_symplectic(const Eigen::VectorXd& raw, long multiplicity, double tol,
                                     BlockSpectrum& sp) {
  std::vector<double> out(static_cast<std::size_t>(raw.size()));
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    const double v = raw(i);
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::ComplexEigenvalue, "non-finite eigenvalue of A.D");
    }
    if (multiplicity > 0) sp.min_raw = std::min(sp.min_raw, v);
    if (v < 1.0 - tol) {
      throw Error(ErrorCode::DomainError,
                  fmt::format("eigenvalue {} of A.D violates the symplectic bound mu >= 1", v));
    }
    if (v < 1.0) {
      sp.clamp_count += multiplicity;
      out[static_cast<std::size_t>(i)] = 1.0;
    } else {
      out[static_cast<std::size_t>(i)] = v;
    }
  }
  return out;
}

// Eigenvalues of a.d where d = a^{-1} + R^T R: 1 + eig(R a R^T), padded with exact
// unit eigenvalues for the directions annihilated by R.
Eigen::VectorXd unit_plus_low_rank(const Eigen::MatrixXd& a, const Eigen::MatrixXd& r) {
  const Eigen::Index n = a.rows();
  Eigen::VectorXd out = Eigen::VectorXd::Ones(n);
  if (r.rows() > 0) {
    Eigen::MatrixXd c = r * a * r.transpose();
    c = 0.5 * (c + c.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
    out.tail(r.rows()).array() += es.eigenvalues().array();
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

BlockSpectrum block_spectrum(const BlockPair& bp, double tol) {
  BlockSpectrum sp;
  sp.l_x = bp.l_x();
  sp.l_y = bp.l_y;
  sp.min_raw = std::numeric_limits<double>::infinity();

  // Orthogonal complement of the uniform chain vector: A.D acts as a0.d0.
  const Eigen::MatrixXd lower =
      linalg::cholesky_lower(bp.a0, ErrorCode::NotPositiveDefinite, "A0");
  const Eigen::VectorXd deg = bp.gap_boundary ? unit_plus_low_rank(bp.a0, *bp.gap_boundary)
                                              : linalg::product_eigenvalues_factored(lower, bp.d0);
  sp.degenerate_set = clamp_symplectic(deg, bp.l_y - 1, tol, sp);

  // Uniform sector: A and D each reduce to a symmetric l_x x l_x matrix, so the
  // sector operator is a_u . d_u with a_u positive definite.
  const double ly = bp.l_y;
  const Eigen::MatrixXd a_u = bp.a0 + (ly / bp.n_y) * (bp.a1 - bp.a0);
  const Eigen::MatrixXd d_u = bp.d0 + ly * bp.d1;
  const Eigen::MatrixXd lower_u =
      linalg::cholesky_lower(a_u, ErrorCode::NotPositiveDefinite, "uniform-sector A");
  // With every chain in the block, a_u is the collective inverse window and the
  // same boundary structure applies.
  const Eigen::VectorXd uni = bp.collective_boundary && bp.l_y == bp.n_y
                                  ? unit_plus_low_rank(bp.a1, *bp.collective_boundary)
                                  : linalg::product_eigenvalues_factored(lower_u, d_u);
  sp.uniform_set = clamp_symplectic(uni, 1, tol, sp);
  return sp;
}

EntropyResult entanglement_entropy(const BlockSpectrum& sp) {
  EntropyResult r;
  double deg = 0.0;
  for (double mu : sp.degenerate_set) deg += entropy_function(std::sqrt(mu));
  r.s1 = (sp.l_y - 1) * deg;
  for (double mu : sp.uniform_set) r.s2 += entropy_function(std::sqrt(mu));
  r.s = r.s1 + r.s2;
  r.spectrum = sp;
  r.clamp_count = sp.clamp_count;
  return r;
}

EntropyResult block_entropy(const CorrelationPair& pair, const BlockSpec& block) {
  return entanglement_entropy(block_spectrum(extract_block(pair, block)));
}

}  // namespace chainent
