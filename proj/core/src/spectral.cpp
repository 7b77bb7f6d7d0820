#include "chainent/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "chainent/error.hpp"

namespace chainent {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_grid(int points) {
  if (points < 2) {
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("quadrature grid needs at least 2 points, got {}", points));
  }
}

// Power-basis coefficients (ascending) of c_0 + 2 sum_k c_k T_k(x).
std::vector<double> chebyshev_to_power(const ToeplitzCoeffs& c) {
  const int r = c.range();
  std::vector<double> out(static_cast<std::size_t>(r), 0.0);
  std::vector<double> t_prev{1.0};       // T_0
  std::vector<double> t_cur{0.0, 1.0};   // T_1
  out[0] += c[0];
  for (int k = 1; k < r; ++k) {
    if (k > 1) {
      std::vector<double> t_next(static_cast<std::size_t>(k + 1), 0.0);
      for (std::size_t i = 0; i < t_cur.size(); ++i) t_next[i + 1] += 2.0 * t_cur[i];
      for (std::size_t i = 0; i < t_prev.size(); ++i) t_next[i] -= t_prev[i];
      t_prev = std::move(t_cur);
      t_cur = std::move(t_next);
    }
    for (std::size_t i = 0; i < t_cur.size(); ++i) out[i] += 2.0 * c[k] * t_cur[i];
  }
  return out;
}

// Real roots in [-1, 1] of the polynomial with ascending coefficients p.
std::vector<double> real_roots_in_unit_interval(std::vector<double> p) {
  while (!p.empty() && std::abs(p.back()) < 1e-300) p.pop_back();
  const int degree = static_cast<int>(p.size()) - 1;
  if (degree < 1) return {};
  if (degree == 1) {
    const double x = -p[0] / p[1];
    return (x >= -1.0 && x <= 1.0) ? std::vector<double>{x} : std::vector<double>{};
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -p[static_cast<std::size_t>(i)] / p.back();
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  std::vector<double> roots;
  for (int i = 0; i < degree; ++i) {
    const auto z = es.eigenvalues()(i);
    if (std::abs(z.imag()) < 1e-8 && z.real() >= -1.0 - 1e-12 && z.real() <= 1.0 + 1e-12) {
      roots.push_back(std::clamp(z.real(), -1.0, 1.0));
    }
  }
  return roots;
}

}  // namespace

ToeplitzCoeffs::ToeplitzCoeffs(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "Toeplitz coefficient list must have range >= 1");
  }
  for (double v : coeffs_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "Toeplitz coefficient is not finite");
  }
}

ToeplitzCoeffs ToeplitzCoeffs::axpy(double scale, const ToeplitzCoeffs& other) const {
  const int r = std::max(range(), other.range());
  std::vector<double> out(static_cast<std::size_t>(r));
  for (int k = 0; k < r; ++k) out[static_cast<std::size_t>(k)] = (*this)[k] + scale * other[k];
  return ToeplitzCoeffs(std::move(out));
}

Eigen::MatrixXd build_toeplitz(const ToeplitzCoeffs& c, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, fmt::format("Toeplitz size must be >= 1, got {}", n));
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const int band = std::min(c.range(), n);
  for (int k = 0; k < band; ++k) {
    for (int i = 0; i + k < n; ++i) {
      m(i, i + k) = c[k];
      m(i + k, i) = c[k];
    }
  }
  return m;
}

double SpectralFunction::operator()(double theta) const noexcept {
  double sum = backing_[0];
  for (int k = 1; k < backing_.range(); ++k) sum += 2.0 * backing_[k] * std::cos(k * theta);
  return sum;
}

std::vector<double> extremum_candidates(const SpectralFunction& g) {
  std::vector<double> thetas{0.0, std::numbers::pi};
  auto power = chebyshev_to_power(g.coeffs());
  std::vector<double> deriv;
  for (std::size_t i = 1; i < power.size(); ++i) deriv.push_back(static_cast<double>(i) * power[i]);
  for (double x : real_roots_in_unit_interval(std::move(deriv))) thetas.push_back(std::acos(x));
  return thetas;
}

SpectralRange spectral_range(const SpectralFunction& g, int grid_points) {
  require_grid(grid_points);
  SpectralRange r;
  r.min = r.max = g(0.0);
  auto visit = [&](double theta) {
    const double v = g(theta);
    if (v < r.min) { r.min = v; r.argmin = theta; }
    if (v > r.max) { r.max = v; r.argmax = theta; }
  };
  for (int j = 1; j < grid_points; ++j) visit(kTwoPi * j / grid_points);
  for (double theta : extremum_candidates(g)) visit(theta);
  return r;
}

double trace_ratio_constant(const ToeplitzCoeffs& lambda, const ToeplitzCoeffs& q,
                            int quadrature_points) {
  require_grid(quadrature_points);
  const SpectralFunction gap(lambda.axpy(-1.0, q));
  const SpectralFunction qf(q);
  const SpectralRange gr = spectral_range(gap, quadrature_points);
  if (!(gr.min > 0.0)) {
    throw Error(ErrorCode::NonPositiveGap,
                fmt::format("lambda(theta) - q(theta) = {} at theta = {}", gr.min, gr.argmin));
  }
  double sum = 0.0;
  for (int j = 0; j < quadrature_points; ++j) {
    const double theta = kTwoPi * j / quadrature_points;
    sum += qf(theta) / gap(theta);
  }
  return sum / quadrature_points;
}

SzegoEstimate szego_logdet(const SpectralFunction& g, int n, SzegoOptions opts) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Toeplitz size must be >= 1");
  require_grid(opts.quadrature_points);
  if (opts.fourier_cutoff < 0) throw Error(ErrorCode::InvalidArgument, "negative Fourier cutoff");
  const SpectralRange gr = spectral_range(g, opts.quadrature_points);
  if (!(gr.min > 0.0)) {
    throw Error(ErrorCode::NonPositiveSymbol,
                fmt::format("symbol is {} at theta = {}", gr.min, gr.argmin));
  }
  const int p = opts.quadrature_points;
  std::vector<double> log_g(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) log_g[static_cast<std::size_t>(j)] = std::log(g(kTwoPi * j / p));

  std::vector<double> cos_table(static_cast<std::size_t>(p));
  for (int j = 0; j < p; ++j) cos_table[static_cast<std::size_t>(j)] = std::cos(kTwoPi * j / p);

  // ln g is real and even, so its Fourier coefficients are real cosine moments.
  auto fourier = [&](int k) {
    double s = 0.0;
    for (long j = 0; j < p; ++j) {
      s += log_g[static_cast<std::size_t>(j)] * cos_table[static_cast<std::size_t>((k * j) % p)];
    }
    return s / p;
  };

  SzegoEstimate est;
  est.log_mean = fourier(0);
  est.leading = est.log_mean * n;
  const int cutoff = std::min(opts.fourier_cutoff, p / 2 - 1);
  for (int k = 1; k <= cutoff; ++k) {
    const double gk = fourier(k);
    est.correction += k * gk * gk;
  }
  return est;
}

}  // namespace chainent
