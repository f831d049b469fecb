// SPDX-License-Identifier: Apache-2.0

#include "hashbeam/array_channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace hashbeam {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

// sum_{k=0}^{count-1} e^{j k x} as e^{j (count-1) x / 2} * sin(count x/2) / sin(x/2).
// sin(x/2) == 0 means x = 2*pi*q with every term equal to 1.
std::complex<double> phase_ramp_sum(int count, double x) {
  const double half_sin = std::sin(0.5 * x);
  if (half_sin == 0.0) return {static_cast<double>(count), 0.0};
  const double ratio = std::sin(0.5 * count * x) / half_sin;
  const double phase = 0.5 * (count - 1) * x;
  return {ratio * std::cos(phase), ratio * std::sin(phase)};
}

CVec steering_from_sin(int n, double sin_theta) {
  CVec v(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k) {
    const double phase = -kPi * k * sin_theta;
    v[k] = {scale * std::cos(phase), scale * std::sin(phase)};
  }
  return v;
}

}  // namespace

ArrayConfig::ArrayConfig(int n_antennas) : n_(n_antennas) {
  if (n_antennas < 2) {
    throw std::invalid_argument("ArrayConfig: need at least 2 antennas, got " +
                                std::to_string(n_antennas));
  }
}

double ArrayConfig::grid_sin(int beam) const {
  if (beam < 1 || beam > n_) {
    throw std::invalid_argument("grid beam index " + std::to_string(beam) +
                                " out of range [1, " + std::to_string(n_) + "]");
  }
  return -1.0 + 2.0 * beam / n_;
}

double ArrayConfig::grid_angle(int beam) const { return std::asin(grid_sin(beam)); }

void validate_channel(const Channel& channel) {
  if (channel.paths.empty()) {
    throw std::invalid_argument("channel must contain at least one path");
  }
  for (const auto& path : channel.paths) {
    if (!std::isfinite(path.angle) || path.angle < -kHalfPi || path.angle > kHalfPi) {
      throw std::invalid_argument("path angle must be finite and within [-pi/2, pi/2]");
    }
    if (!std::isfinite(path.gain.real()) || !std::isfinite(path.gain.imag())) {
      throw std::invalid_argument("path gain must be finite");
    }
  }
}

CVec steering_vector(const ArrayConfig& cfg, double angle) {
  if (!std::isfinite(angle)) {
    throw std::invalid_argument("steering_vector: angle must be finite");
  }
  return steering_from_sin(cfg.n(), std::sin(angle));
}

CVec dft_beam(const ArrayConfig& cfg, int beam) {
  return steering_from_sin(cfg.n(), cfg.grid_sin(beam));
}

CVec synthesize_channel(const ArrayConfig& cfg, const Channel& channel) {
  validate_channel(channel);
  CVec h(cfg.n(), {0.0, 0.0});
  for (const auto& path : channel.paths) {
    const CVec a = steering_from_sin(cfg.n(), std::sin(path.angle));
    for (int k = 0; k < cfg.n(); ++k) h[k] += path.gain * a[k];
  }
  return h;
}

std::complex<double> inner_product(const CVec& a, const CVec& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("inner_product: length mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t k = 0; k < a.size(); ++k) acc += std::conj(a[k]) * b[k];
  return acc;
}

double beam_rsrp(const CVec& channel, const CVec& weights) {
  return std::norm(inner_product(channel, weights));
}

std::complex<double> dft_steering_inner(const ArrayConfig& cfg, int beam, double angle) {
  if (!std::isfinite(angle)) {
    throw std::invalid_argument("dft_steering_inner: angle must be finite");
  }
  const double delta = cfg.grid_sin(beam) - std::sin(angle);
  return phase_ramp_sum(cfg.n(), kPi * delta) / static_cast<double>(cfg.n());
}

CVec beamspace_channel(const ArrayConfig& cfg, const Channel& channel) {
  validate_channel(channel);
  const int n = cfg.n();
  CVec out(n, {0.0, 0.0});
  const double inv_n = 1.0 / n;
  for (const auto& path : channel.paths) {
    const double s = std::sin(path.angle);
    for (int b = 0; b < n; ++b) {
      const double delta = -1.0 + 2.0 * (b + 1) / n - s;
      out[b] += path.gain * (inv_n * phase_ramp_sum(n, kPi * delta));
    }
  }
  return out;
}

int best_beam(const CVec& beamspace) {
  if (beamspace.empty()) {
    throw std::invalid_argument("best_beam: empty beamspace vector");
  }
  int best = 0;
  double best_power = std::norm(beamspace[0]);
  for (int i = 1; i < static_cast<int>(beamspace.size()); ++i) {
    const double p = std::norm(beamspace[i]);
    if (p > best_power) {
      best_power = p;
      best = i;
    }
  }
  return best + 1;
}

ChannelSampler on_grid_los_sampler(const ArrayConfig& cfg) {
  return [cfg](Rng& rng) {
    const int beam = 1 + static_cast<int>(rng.below(cfg.n()));
    return Channel{{{std::complex<double>{1.0, 0.0}, cfg.grid_angle(beam)}}};
  };
}

ChannelSampler on_grid_los_sampler_fixed(const ArrayConfig& cfg, int beam) {
  const double angle = cfg.grid_angle(beam);  // validates the index
  return [angle](Rng&) {
    return Channel{{{std::complex<double>{1.0, 0.0}, angle}}};
  };
}

ChannelSampler multipath_sampler(const ArrayConfig& cfg,
                                 std::vector<double> path_gain_vars,
                                 double angle_min, double angle_max) {
  (void)cfg;
  if (path_gain_vars.empty()) {
    throw std::invalid_argument("multipath_sampler: need at least one path variance");
  }
  for (double v : path_gain_vars) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("multipath_sampler: variances must be >= 0");
    }
  }
  if (!(angle_min <= angle_max) || angle_min < -kHalfPi || angle_max > kHalfPi) {
    throw std::invalid_argument("multipath_sampler: angle range must lie in [-pi/2, pi/2]");
  }
  return [vars = std::move(path_gain_vars), angle_min, angle_max](Rng& rng) {
    Channel channel;
    channel.paths.reserve(vars.size());
    for (double var : vars) {
      const double scale = std::sqrt(0.5 * var);
      const std::complex<double> gain{scale * rng.gaussian(), scale * rng.gaussian()};
      const double angle = rng.uniform_range(angle_min, angle_max);
      channel.paths.push_back({gain, angle});
    }
    return channel;
  };
}

}  // namespace hashbeam
