#pragma once

#include <string>
#include <vector>

#include "chainent/spectral.hpp"

namespace chainent {

/// Intra-chain coupling Lambda and collective inter-chain coupling Q; the block
/// Z matrix has Lambda on its diagonal blocks and Q everywhere else.
struct ChainCouplings {
  ToeplitzCoeffs lambda;
  ToeplitzCoeffs q;

  SpectralFunction lambda_symbol() const { return SpectralFunction(lambda); }
  SpectralFunction q_symbol() const { return SpectralFunction(q); }
  /// Symbol of Lambda - Q.
  SpectralFunction gap_symbol() const { return SpectralFunction(lambda.axpy(-1.0, q)); }
};

struct Geometry {
  int n_x;
  int n_y;

  Geometry(int nx, int ny);
  long total() const noexcept { return static_cast<long>(n_x) * n_y; }
};

class Placement {
 public:
  enum class Kind { Corner, Centered, Offset };

  static Placement corner() { return Placement(Kind::Corner, 0); }
  static Placement centered() { return Placement(Kind::Centered, 0); }
  static Placement offset(int k) { return Placement(Kind::Offset, k); }

  Kind kind() const noexcept { return kind_; }
  /// First x index of a window of width l_x in a chain of n_x oscillators.
  int resolve(int n_x, int l_x) const;
  std::string to_string() const;

  friend bool operator==(const Placement&, const Placement&) = default;

 private:
  Placement(Kind kind, int k) : kind_(kind), offset_(k) {}
  Kind kind_;
  int offset_;
};

/// Compact l_x by l_y subsystem. `chains` optionally lists which chains the block
/// occupies; empty means the first l_y chains.
struct BlockSpec {
  int l_x;
  int l_y;
  Placement placement = Placement::centered();
  std::vector<int> chains{};

  long size() const noexcept { return static_cast<long>(l_x) * l_y; }
  /// Throws BlockOutOfRange.
  void check(const Geometry& g) const;
  std::vector<int> chain_list() const;
};

enum class ValidationMode { Strict, Permissive };

struct ValidationReport {
  ValidationMode mode;
  double min_lambda = 0.0;
  double min_q = 0.0;
  double min_gap = 0.0;
  bool pass = false;
  std::vector<std::string> messages{};
};

ValidationReport validate(const ChainCouplings& c, ValidationMode mode,
                          int grid_points = kDefaultQuadraturePoints);

struct FrequencyRange {
  double min_freq;
  double max_freq;
};

/// Normal-mode frequencies are the eigenvalues of V^{1/2} = Z / sqrt(n_y): the
/// sector (Lambda - Q) / sqrt(n_y) with multiplicity n_y - 1 per mode and the
/// collective sector (Lambda + (n_y - 1) Q) / sqrt(n_y).
/// Throws ValidationFailed when the couplings fail `mode`.
FrequencyRange spectrum_gap(const ChainCouplings& c, const Geometry& g,
                            ValidationMode mode = ValidationMode::Strict);

std::string to_string(ValidationMode mode);

}  // namespace chainent
