#include "chainent/linalg.hpp"

#include <vector>

#include <fmt/format.h>

namespace chainent::linalg {

Eigen::MatrixXd cholesky_lower(const Eigen::MatrixXd& m, ErrorCode code, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(code, fmt::format("{} is not positive definite", what));
  }
  return llt.matrixL();
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& m, ErrorCode code, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(code, fmt::format("{} is not positive definite", what));
  }
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
  return 0.5 * (inv + inv.transpose());
}

Eigen::VectorXd product_eigenvalues_factored(const Eigen::MatrixXd& lower,
                                             const Eigen::MatrixXd& sym) {
  Eigen::MatrixXd c = lower.transpose() * sym * lower;
  c = 0.5 * (c + c.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Eigen::VectorXd product_eigenvalues(const Eigen::MatrixXd& spd, const Eigen::MatrixXd& sym,
                                    ErrorCode code) {
  return product_eigenvalues_factored(cholesky_lower(spd, code, "left factor"), sym);
}

Eigen::MatrixXd boundary_factor(const Eigen::MatrixXd& t, int off, int len, ErrorCode code,
                                const char* what) {
  const Eigen::Index n = t.rows();
  const Eigen::Index nc = n - len;
  if (nc == 0) return Eigen::MatrixXd(0, len);

  std::vector<Eigen::Index> comp;
  comp.reserve(static_cast<std::size_t>(nc));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i < off || i >= off + len) comp.push_back(i);
  }
  Eigen::MatrixXd t_cc(nc, nc);
  Eigen::MatrixXd w(nc, len);
  for (Eigen::Index r = 0; r < nc; ++r) {
    for (Eigen::Index c = 0; c < nc; ++c) t_cc(r, c) = t(comp[r], comp[c]);
    w.row(r) = t.row(comp[r]).segment(off, len);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(t_cc);
  if (llt.info() != Eigen::Success) {
    throw Error(code, fmt::format("complement block of {} is not positive definite", what));
  }
  llt.matrixL().solveInPlace(w);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(w);
  const Eigen::Index rank = qr.rank();
  Eigen::MatrixXd upper = qr.matrixR().topRows(rank).triangularView<Eigen::Upper>();
  return upper * qr.colsPermutation().transpose();
}

}  // namespace chainent::linalg
