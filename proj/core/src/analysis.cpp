#include "chainent/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "chainent/error.hpp"
#include "chainent/linalg.hpp"

namespace chainent {

std::string fingerprint(const CorrelationPair& pair, const Placement& placement) {
  return fmt::format("lambda=[{}];q=[{}];n_x={};n_y={};mode={};placement={}",
                     fmt::join(pair.couplings.lambda.values(), ","),
                     fmt::join(pair.couplings.q.values(), ","), pair.geometry.n_x,
                     pair.geometry.n_y, to_string(pair.mode), placement.to_string());
}

SweepTable sweep(const CorrelationPair& pair, const Grid& grid, const SweepOptions& opts) {
  std::set<std::pair<int, int>> keys;
  for (int lx : grid.l_x) {
    for (int ly : grid.l_y) keys.emplace(lx, ly);
  }
  const std::vector<std::pair<int, int>> points(keys.begin(), keys.end());
  for (const auto& [lx, ly] : points) BlockSpec{lx, ly, opts.placement}.check(pair.geometry);

  SweepTable table;
  table.fingerprint = fingerprint(pair, opts.placement);
  table.rows.resize(points.size());

  auto evaluate = [&](std::size_t i) {
    const auto [lx, ly] = points[i];
    const auto start = std::chrono::steady_clock::now();
    const EntropyResult r = block_entropy(pair, BlockSpec{lx, ly, opts.placement});
    const auto stop = std::chrono::steady_clock::now();
    const double ms =
        opts.timing ? std::chrono::duration<double, std::milli>(stop - start).count() : 0.0;
    table.rows[i] = SweepRow{lx, ly, r.s, r.s1, r.s2, ms};
  };

  const int threads = std::clamp(opts.threads, 1, static_cast<int>(std::max<std::size_t>(points.size(), 1)));
  if (threads == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) evaluate(i);
    return table;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    for (int t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
          try {
            evaluate(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return table;
}

namespace {

struct LinearFit {
  Eigen::VectorXd coeffs;
  double rms = 0.0;
  double r_squared = 0.0;
};

// Normal equations on column-scaled features.
LinearFit least_squares(const Eigen::MatrixXd& features, const Eigen::VectorXd& target) {
  const Eigen::Index cols = features.cols();
  Eigen::VectorXd scale(cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double norm = features.col(j).norm();
    if (norm == 0.0) throw Error(ErrorCode::DegenerateDesign, "feature column is identically zero");
    scale(j) = 1.0 / norm;
  }
  const Eigen::MatrixXd x = features * scale.asDiagonal();
  const Eigen::MatrixXd gram = x.transpose() * x;
  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success || llt.rcond() < 1e-12) {
    throw Error(ErrorCode::DegenerateDesign, "feature matrix is rank deficient");
  }
  LinearFit fit;
  fit.coeffs = scale.asDiagonal() * llt.solve(x.transpose() * target);
  const Eigen::VectorXd residual = target - features * fit.coeffs;
  const double ss_res = residual.squaredNorm();
  fit.rms = std::sqrt(ss_res / static_cast<double>(target.size()));
  const double ss_tot = (target.array() - target.mean()).square().sum();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  return fit;
}

}  // namespace

ScalingFit scaling_fit(const SweepTable& table) {
  std::set<int> lxs;
  std::set<int> lys;
  for (const auto& r : table.rows) {
    lxs.insert(r.l_x);
    lys.insert(r.l_y);
  }
  if (table.rows.size() < 8 || lxs.size() < 2 || lys.size() < 3) {
    throw Error(ErrorCode::DegenerateDesign,
                fmt::format("scaling fit needs >= 8 rows, >= 2 distinct l_x and >= 3 distinct l_y "
                            "(got {} rows, {} l_x, {} l_y)",
                            table.rows.size(), lxs.size(), lys.size()));
  }
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  Eigen::MatrixXd features(n, 4);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = table.rows[static_cast<std::size_t>(i)];
    features.row(i) << r.l_x * std::log(static_cast<double>(r.l_y)), r.l_x, r.l_y, 1.0;
    target(i) = r.s;
  }
  const LinearFit fit = least_squares(features, target);
  return ScalingFit{fit.coeffs(0), fit.coeffs(1), fit.coeffs(2), fit.coeffs(3), fit.rms};
}

BoundsResidual bounds_residual(const SweepTable& table) {
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  if (n < 3) throw Error(ErrorCode::DegenerateDesign, "bounds residual needs >= 3 rows");
  Eigen::MatrixXd features(n, 3);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = table.rows[static_cast<std::size_t>(i)];
    features.row(i) << r.l_x, r.l_y, 1.0;
    target(i) = r.s - 0.5 * r.l_x * std::log(static_cast<double>(r.l_y));
  }
  const LinearFit fit = least_squares(features, target);
  return BoundsResidual{fit.coeffs(0), fit.coeffs(1), fit.coeffs(2), fit.r_squared, fit.rms};
}

EntropyBounds entropy_bounds(const EntropyResult& r) {
  const auto& sp = r.spectrum;
  double log_deg = 0.0;
  for (double mu : sp.degenerate_set) log_deg += 0.5 * std::log(mu);
  double log_uni = 0.0;
  for (double mu : sp.uniform_set) log_uni += 0.5 * std::log(mu);
  EntropyBounds b;
  b.lower = (sp.l_y - 1) * log_deg + log_uni;
  b.upper = r.s1 + static_cast<double>(sp.uniform_set.size()) * (1.0 - std::numbers::ln2) + log_uni;
  return b;
}

std::vector<SaturationPoint> saturation_curve(const CorrelationPair& pair, int l_y,
                                              std::span<const int> l_x_grid,
                                              const Placement& placement) {
  if (l_y < 2) throw Error(ErrorCode::InvalidArgument, "saturation curve needs l_y >= 2");
  std::vector<SaturationPoint> out;
  out.reserve(l_x_grid.size());
  for (int lx : l_x_grid) {
    const EntropyResult r = block_entropy(pair, BlockSpec{lx, l_y, placement});
    out.push_back({lx, r.s1 / (l_y - 1)});
  }
  return out;
}

LidskiiReport lidskii_check(const BlockPair& bp, std::span<const int> l_y_grid) {
  const Eigen::MatrixXd lower = linalg::cholesky_lower(bp.a0, ErrorCode::NotPositiveDefinite, "A0");
  Eigen::MatrixXd base = lower.transpose() * bp.d0 * lower;
  base = 0.5 * (base + base.transpose());
  Eigen::MatrixXd coupling = lower.transpose() * bp.d1 * lower;
  coupling = 0.5 * (coupling + coupling.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> base_es(base, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> coupling_es(coupling, Eigen::EigenvaluesOnly);
  const double bound = base_es.eigenvalues().maxCoeff();
  const Eigen::VectorXd& alpha_coupling = coupling_es.eigenvalues();
  const double coupling_scale = alpha_coupling.cwiseAbs().maxCoeff();

  const double trace_base = (bp.a0 * bp.d0).trace();
  const double trace_coupling = (bp.a0 * bp.d1).trace();

  LidskiiReport report;
  for (int ly : l_y_grid) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(base + ly * coupling, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& alpha = es.eigenvalues();
    const double deviation = (alpha - ly * alpha_coupling).cwiseAbs().maxCoeff();
    const double trace_expected = trace_base + ly * trace_coupling;
    LidskiiRow row{
        .l_y = ly,
        .deviation = deviation,
        .bound = bound,
        // The bound is attained when the two terms commute (e.g. l_x = 2), so allow
        // for the eigensolver's backward error on each side.
        .holds = deviation <= bound + 64.0 * std::numeric_limits<double>::epsilon() *
                                          (bound + ly * coupling_scale),
        .relative_deviation = coupling_scale > 0.0 ? deviation / (ly * coupling_scale) : 0.0,
        .trace_rel_error = std::abs(alpha.sum() - trace_expected) / std::abs(trace_expected),
    };
    report.all_hold = report.all_hold && row.holds;
    report.rows.push_back(row);
  }
  return report;
}

SzegoConsequence szego_consequence_check(const BlockPair& bp, const ChainCouplings& c,
                                         int quadrature_points) {
  const int lx = bp.l_x();
  const double ratio = (bp.a0 * bp.d1).trace() / lx;
  const double constant = trace_ratio_constant(c.lambda, c.q, quadrature_points);
  const double diff = std::abs(ratio - constant);
  return {lx, ratio, constant, constant != 0.0 ? diff / std::abs(constant) : diff};
}

std::vector<SzegoConsequence> szego_consequence_check(const CorrelationPair& pair,
                                                      std::span<const int> l_x_grid,
                                                      const Placement& placement,
                                                      int quadrature_points) {
  std::vector<SzegoConsequence> out;
  for (int lx : l_x_grid) {
    const BlockPair bp = extract_block(pair, BlockSpec{lx, 1, placement});
    out.push_back(szego_consequence_check(bp, pair.couplings, quadrature_points));
  }
  return out;
}

void write_sweep_csv(const SweepTable& table, std::ostream& out, double unit_scale) {
  out << "l_x,l_y,S,S1,S2,wall_ms\n";
  for (const auto& r : table.rows) {
    out << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.l_x, r.l_y, r.s * unit_scale,
                       r.s1 * unit_scale, r.s2 * unit_scale, r.wall_ms);
  }
}

SweepTable read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::InvalidArgument, "empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "l_x,l_y,S,S1,S2,wall_ms") {
    throw Error(ErrorCode::InvalidArgument, fmt::format("unexpected CSV header '{}'", line));
  }
  SweepTable table;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != 6) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("line {}: expected 6 fields", line_no));
    }
    try {
      std::size_t pos = 0;
      auto as_int = [&](const std::string& s) {
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
      };
      auto as_double = [&](const std::string& s) {
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
      };
      table.rows.push_back(SweepRow{as_int(fields[0]), as_int(fields[1]), as_double(fields[2]),
                                    as_double(fields[3]), as_double(fields[4]), as_double(fields[5])});
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidArgument, fmt::format("line {}: malformed number", line_no));
    }
  }
  return table;
}

}  // namespace chainent
