#pragma once

#include <vector>

#include "chainent/correlations.hpp"

namespace chainent {

inline constexpr double kSymplecticTolerance = 1e-9;

/// f(x) = (x+1)/2 ln((x+1)/2) - (x-1)/2 ln((x-1)/2), f(1) = 0.
/// Throws DomainError for x < 1 - tol; x in [1 - tol, 1] evaluates to 0.
double entropy_function(double x, double tol = kSymplecticTolerance);

/// Eigenvalues of A.D split into the sector orthogonal to the uniform chain vector
/// (eigenvalues of a0.d0, each with multiplicity l_y - 1) and the uniform sector.
struct BlockSpectrum {
  std::vector<double> degenerate_set;  // ascending, length l_x
  std::vector<double> uniform_set;     // ascending, length l_x
  int l_x = 0;
  int l_y = 0;
  long clamp_count = 0;  // multiplicity-weighted count of values lifted to 1
  double min_raw = 1.0;  // smallest eigenvalue before clamping

  /// All l_x l_y eigenvalues with multiplicity, ascending.
  std::vector<double> multiset() const;
};

/// Throws NotPositiveDefinite if a0 (or the uniform-sector A) cannot be factored,
/// DomainError if an eigenvalue falls below 1 - tol.
BlockSpectrum block_spectrum(const BlockPair& bp, double tol = kSymplecticTolerance);

struct EntropyResult {
  double s = 0.0;
  double s1 = 0.0;  // (l_y - 1) sum_k f(sqrt(degenerate_k))
  double s2 = 0.0;  // sum_k f(sqrt(uniform_k))
  BlockSpectrum spectrum;
  long clamp_count = 0;
};

EntropyResult entanglement_entropy(const BlockSpectrum& sp);

EntropyResult block_entropy(const CorrelationPair& pair, const BlockSpec& block);

}  // namespace chainent
