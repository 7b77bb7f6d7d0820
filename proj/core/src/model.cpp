#include "chainent/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "chainent/error.hpp"

namespace chainent {

Geometry::Geometry(int nx, int ny) : n_x(nx), n_y(ny) {
  if (nx < 1 || ny < 2) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("geometry needs n_x >= 1 and n_y >= 2, got n_x={} n_y={}", nx, ny));
  }
}

int Placement::resolve(int n_x, int l_x) const {
  switch (kind_) {
    case Kind::Corner: return 0;
    case Kind::Centered: return (n_x - l_x) / 2;
    case Kind::Offset:
      if (offset_ < 0 || offset_ + l_x > n_x) {
        throw Error(ErrorCode::BlockOutOfRange,
                    fmt::format("x window [{}, {}) does not fit in n_x = {}", offset_, offset_ + l_x, n_x));
      }
      return offset_;
  }
  return 0;
}

std::string Placement::to_string() const {
  switch (kind_) {
    case Kind::Corner: return "corner";
    case Kind::Centered: return "centered";
    case Kind::Offset: return fmt::format("offset={}", offset_);
  }
  return "?";
}

void BlockSpec::check(const Geometry& g) const {
  if (l_x < 1 || l_x > g.n_x || l_y < 1 || l_y > g.n_y) {
    throw Error(ErrorCode::BlockOutOfRange,
                fmt::format("block {}x{} does not fit lattice {}x{}", l_x, l_y, g.n_x, g.n_y));
  }
  placement.resolve(g.n_x, l_x);
  if (chains.empty()) return;
  if (static_cast<int>(chains.size()) != l_y) {
    throw Error(ErrorCode::BlockOutOfRange,
                fmt::format("chain list has {} entries, expected l_y = {}", chains.size(), l_y));
  }
  std::set<int> seen;
  for (int y : chains) {
    if (y < 0 || y >= g.n_y || !seen.insert(y).second) {
      throw Error(ErrorCode::BlockOutOfRange, fmt::format("invalid or repeated chain index {}", y));
    }
  }
}

std::vector<int> BlockSpec::chain_list() const {
  if (!chains.empty()) return chains;
  std::vector<int> out(static_cast<std::size_t>(l_y));
  for (int y = 0; y < l_y; ++y) out[static_cast<std::size_t>(y)] = y;
  return out;
}

std::string to_string(ValidationMode mode) {
  return mode == ValidationMode::Strict ? "strict" : "permissive";
}

ValidationReport validate(const ChainCouplings& c, ValidationMode mode, int grid_points) {
  ValidationReport r{.mode = mode};
  r.min_lambda = spectral_range(c.lambda_symbol(), grid_points).min;
  r.min_q = spectral_range(c.q_symbol(), grid_points).min;
  r.min_gap = spectral_range(c.gap_symbol(), grid_points).min;

  r.pass = true;
  auto require = [&](bool ok, std::string msg) {
    if (!ok) {
      r.pass = false;
      r.messages.push_back(std::move(msg));
    }
  };
  require(r.min_gap > 0.0, fmt::format("min(λ−q)={:g} is not positive", r.min_gap));
  if (mode == ValidationMode::Strict) {
    require(r.min_lambda > 0.0, fmt::format("min(λ)={:g} is not positive", r.min_lambda));
    require(r.min_q > 0.0, fmt::format("min(q)={:g} is not positive", r.min_q));
  } else {
    require(r.min_q >= 0.0, fmt::format("min(q)={:g} is negative", r.min_q));
  }
  return r;
}

namespace {

FrequencyRange sector_range(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff()};
}

}  // namespace

FrequencyRange spectrum_gap(const ChainCouplings& c, const Geometry& g, ValidationMode mode) {
  const ValidationReport report = validate(c, mode);
  if (!report.pass) {
    throw Error(ErrorCode::ValidationFailed, fmt::format("{}", fmt::join(report.messages, "; ")));
  }
  const double scale = std::sqrt(static_cast<double>(g.n_y));
  const auto gap = sector_range(build_toeplitz(c.lambda.axpy(-1.0, c.q), g.n_x));
  const auto collective =
      sector_range(build_toeplitz(c.lambda.axpy(g.n_y - 1.0, c.q), g.n_x));
  return {std::min(gap.min_freq, collective.min_freq) / scale,
          std::max(gap.max_freq, collective.max_freq) / scale};
}

}  // namespace chainent
