#pragma once

#include <vector>

#include <Eigen/Dense>

namespace chainent {

/// Finite-range symmetric Toeplitz coefficients c_0 ... c_{R-1}; c_{-k} = c_k and
/// c_k = 0 for k >= R.
class ToeplitzCoeffs {
 public:
  explicit ToeplitzCoeffs(std::vector<double> coeffs);
  ToeplitzCoeffs(std::initializer_list<double> coeffs)
      : ToeplitzCoeffs(std::vector<double>(coeffs)) {}

  int range() const noexcept { return static_cast<int>(coeffs_.size()); }
  double operator[](int k) const noexcept {
    return k < range() ? coeffs_[static_cast<std::size_t>(k)] : 0.0;
  }
  const std::vector<double>& values() const noexcept { return coeffs_; }

  /// this + scale * other, zero-padded to the longer range.
  ToeplitzCoeffs axpy(double scale, const ToeplitzCoeffs& other) const;

  friend bool operator==(const ToeplitzCoeffs&, const ToeplitzCoeffs&) = default;

 private:
  std::vector<double> coeffs_;
};

Eigen::MatrixXd build_toeplitz(const ToeplitzCoeffs& c, int n);

/// Symbol g(theta) = c_0 + 2 sum_k c_k cos(k theta) of a symmetric Toeplitz sequence.
class SpectralFunction {
 public:
  explicit SpectralFunction(ToeplitzCoeffs backing) : backing_(std::move(backing)) {}

  double operator()(double theta) const noexcept;
  const ToeplitzCoeffs& coeffs() const noexcept { return backing_; }

 private:
  ToeplitzCoeffs backing_;
};

inline double eval_spectral(const SpectralFunction& g, double theta) { return g(theta); }

struct SpectralRange {
  double min = 0.0;
  double max = 0.0;
  double argmin = 0.0;
  double argmax = 0.0;
};

inline constexpr int kDefaultQuadraturePoints = 4096;
inline constexpr int kDefaultFourierCutoff = 512;

/// Extrema of g over a uniform grid on [0, 2pi) together with the exact critical
/// points of the cosine polynomial (roots of its derivative in x = cos theta).
SpectralRange spectral_range(const SpectralFunction& g, int grid_points = kDefaultQuadraturePoints);

/// Critical points theta in [0, pi] of g, always including 0 and pi.
std::vector<double> extremum_candidates(const SpectralFunction& g);

/// Trapezoidal value of (1/2pi) int q / (lambda - q) dtheta.
/// Throws NonPositiveGap if lambda - q <= 0 anywhere on the grid or at a critical point.
double trace_ratio_constant(const ToeplitzCoeffs& lambda, const ToeplitzCoeffs& q,
                            int quadrature_points = kDefaultQuadraturePoints);

struct SzegoEstimate {
  double leading = 0.0;     // g_0 * n
  double correction = 0.0;  // sum_k k |g_k|^2
  double log_mean = 0.0;    // g_0, zeroth Fourier coefficient of ln g

  double estimate() const noexcept { return leading + correction; }
};

struct SzegoOptions {
  int quadrature_points = kDefaultQuadraturePoints;
  int fourier_cutoff = kDefaultFourierCutoff;
};

/// Strong Szego asymptotic for ln det of the n x n Toeplitz section of g.
/// Throws NonPositiveSymbol if g <= 0 anywhere.
SzegoEstimate szego_logdet(const SpectralFunction& g, int n, SzegoOptions opts = {});

}  // namespace chainent
