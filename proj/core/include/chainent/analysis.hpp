#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "chainent/correlations.hpp"
#include "chainent/entropy.hpp"

namespace chainent {

struct Grid {
  std::vector<int> l_x;
  std::vector<int> l_y;
};

struct SweepRow {
  int l_x;
  int l_y;
  double s;
  double s1;
  double s2;
  double wall_ms;
};

struct SweepTable {
  std::vector<SweepRow> rows;  // sorted by (l_x, l_y), unique
  std::string fingerprint;
};

struct SweepOptions {
  Placement placement = Placement::centered();
  int threads = 1;
  /// When false wall_ms is written as 0 so repeated runs are byte-identical.
  bool timing = false;
};

/// One structured-path entropy per grid point. Grid points are evaluated
/// independently (optionally on several threads) and merged by (l_x, l_y).
SweepTable sweep(const CorrelationPair& pair, const Grid& grid, const SweepOptions& opts = {});

std::string fingerprint(const CorrelationPair& pair, const Placement& placement);

/// S ~ b l_x ln l_y + a1 l_x + a2 l_y + a0.
struct ScalingFit {
  double b = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a0 = 0.0;
  double rms_residual = 0.0;
};

/// Least squares over the table. Needs >= 8 rows with >= 2 distinct l_x and >= 3
/// distinct l_y; throws DegenerateDesign otherwise or when the design is rank deficient.
ScalingFit scaling_fit(const SweepTable& table);

/// Fit of R = S - (l_x / 2) ln l_y against {l_x, l_y, 1}.
struct BoundsResidual {
  double c_lx = 0.0;
  double c_ly = 0.0;
  double c0 = 0.0;
  double r_squared = 0.0;
  double rms_residual = 0.0;
};

BoundsResidual bounds_residual(const SweepTable& table);

/// Per-spectrum bounds from ln x <= f(x) < 1 - ln 2 + ln x. `upper` keeps S1 exact
/// and bounds only the uniform-sector part.
struct EntropyBounds {
  double lower = 0.0;
  double upper = 0.0;
};

EntropyBounds entropy_bounds(const EntropyResult& r);

struct SaturationPoint {
  int l_x;
  double value;  // S1 / (l_y - 1)
};

std::vector<SaturationPoint> saturation_curve(const CorrelationPair& pair, int l_y,
                                              std::span<const int> l_x_grid,
                                              const Placement& placement = Placement::centered());

struct LidskiiRow {
  int l_y;
  double deviation;           // max_k |alpha_k(A0D0 + l_y A0D1) - l_y alpha_k(A0D1)|
  double bound;               // lambda_max(A0D0)
  bool holds;
  double relative_deviation;  // deviation / (l_y max_k alpha_k(A0D1)), 0 when D1 = 0
  double trace_rel_error;     // trace identity residual
};

struct LidskiiReport {
  std::vector<LidskiiRow> rows;
  bool all_hold = true;
};

LidskiiReport lidskii_check(const BlockPair& bp, std::span<const int> l_y_grid);

struct SzegoConsequence {
  int l_x;
  double trace_ratio;  // trace(A0 D1) / l_x
  double constant;     // (1/2pi) int q / (lambda - q)
  double deviation;    // relative to constant, absolute when constant == 0
};

SzegoConsequence szego_consequence_check(const BlockPair& bp, const ChainCouplings& c,
                                         int quadrature_points = kDefaultQuadraturePoints);

std::vector<SzegoConsequence> szego_consequence_check(const CorrelationPair& pair,
                                                      std::span<const int> l_x_grid,
                                                      const Placement& placement = Placement::centered(),
                                                      int quadrature_points = kDefaultQuadraturePoints);

/// CSV with header `l_x,l_y,S,S1,S2,wall_ms`; floats printed with 17 significant
/// digits. Entropies are multiplied by `unit_scale` (1 / ln 2 for bits).
void write_sweep_csv(const SweepTable& table, std::ostream& out, double unit_scale = 1.0);

/// Throws InvalidArgument on a malformed file.
SweepTable read_sweep_csv(std::istream& in);

}  // namespace chainent
