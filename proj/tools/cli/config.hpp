#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainent/analysis.hpp"
#include "chainent/model.hpp"

namespace chainent::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BlockConfig {
  int l_x = 0;
  int l_y = 0;
  std::vector<int> chains;
};

/// Parsed configuration file:
///
///   [model]     lambda = 4, 1 / q = 1 / mode = strict|permissive
///   [geometry]  n_x = ... / n_y = ...
///   [block]     l_x = ... / l_y = ... / placement = ... / chains = 0, 2, ...
///   [run]       grid = lx=2,4;ly=16,32 / quadrature_points / tolerance / threads /
///               output / bits / timing / dense_cap
///
/// Unknown sections or keys are rejected.
struct RunConfig {
  std::vector<double> lambda;
  std::vector<double> q;
  ValidationMode mode = ValidationMode::Strict;
  int n_x = 0;
  int n_y = 0;
  std::optional<BlockConfig> block;
  Placement placement = Placement::centered();
  std::optional<Grid> grid;
  int quadrature_points = kDefaultQuadraturePoints;
  double tolerance = 1e-8;
  int threads = 1;
  std::string output;
  bool bits = false;
  bool timing = false;
  long dense_cap = kDefaultDenseCap;

  ChainCouplings couplings() const;
  Geometry geometry() const;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

Placement parse_placement(const std::string& text);
ValidationMode parse_mode(const std::string& text);
/// "lx=2,4,8;ly=16,32,64"
Grid parse_grid(const std::string& text);

}  // namespace chainent::cli
