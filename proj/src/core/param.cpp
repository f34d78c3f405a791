#include "adrnet/core/param.hpp"

#include <cmath>

#include "adrnet/core/error.hpp"

namespace adrnet {

ParamBlock::ParamBlock(std::string name_, Matrix initial)
    : name(std::move(name_)),
      value(std::move(initial)),
      grad(value.rows(), value.cols()),
      m(value.rows(), value.cols()),
      v(value.rows(), value.cols()) {}

void ParamBlock::reset_moments() {
  m.fill(0.0);
  v.fill(0.0);
  step_count = 0;
}

InitScheme parse_init_scheme(const std::string& name) {
  if (name == "uniform_scaled") return InitScheme::UniformScaled;
  if (name == "normal_scaled") return InitScheme::NormalScaled;
  if (name == "zeros") return InitScheme::Zeros;
  throw ConfigError("unknown init scheme '" + name + "' (expected uniform_scaled, normal_scaled or zeros)");
}

std::string to_string(InitScheme scheme) {
  switch (scheme) {
    case InitScheme::UniformScaled: return "uniform_scaled";
    case InitScheme::NormalScaled: return "normal_scaled";
    case InitScheme::Zeros: return "zeros";
  }
  return "?";
}

double uniform_scaled_bound(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

ParamBlock init_params(std::string name, std::size_t rows, std::size_t cols, InitScheme scheme, Rng& rng) {
  Matrix value(rows, cols);
  switch (scheme) {
    case InitScheme::Zeros:
      break;
    case InitScheme::UniformScaled: {
      const double s = uniform_scaled_bound(rows, cols);
      for (double& x : value.values()) x = rng.uniform(-s, s);
      break;
    }
    case InitScheme::NormalScaled: {
      const double sd = std::sqrt(2.0 / static_cast<double>(rows + cols));
      for (double& x : value.values()) x = sd * rng.normal();
      break;
    }
  }
  return ParamBlock(std::move(name), std::move(value));
}

}  // namespace adrnet
