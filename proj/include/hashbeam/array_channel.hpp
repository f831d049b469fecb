// SPDX-License-Identifier: Apache-2.0
//
// Uniform linear array geometry, steering vectors, the DFT beam grid and
// geometric multipath channels. All vectors are unit-norm with the 1/sqrt(N)
// factor folded into the steering vector; antenna spacing is half-wavelength
// (phase step pi*sin(theta) per element).

#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "hashbeam/rng.hpp"

namespace hashbeam {

using CVec = std::vector<std::complex<double>>;

class ArrayConfig {
 public:
  explicit ArrayConfig(int n_antennas);

  int n() const { return n_; }

  /// sin(theta_n) = -1 + 2n/N for the 1-based grid beam index n.
  double grid_sin(int beam) const;

  /// Grid beam boresight angle in radians.
  double grid_angle(int beam) const;

 private:
  int n_;
};

struct ChannelPath {
  std::complex<double> gain;
  double angle = 0.0;  // radians, in [-pi/2, pi/2]
};

struct Channel {
  std::vector<ChannelPath> paths;
};

/// Throws std::invalid_argument unless the channel has at least one path and
/// all path angles are finite and within [-pi/2, pi/2].
void validate_channel(const Channel& channel);

/// Array response a(theta); unit Euclidean norm.
CVec steering_vector(const ArrayConfig& cfg, double angle);

/// n-th DFT beam (1-based). The N beams form an orthonormal set.
CVec dft_beam(const ArrayConfig& cfg, int beam);

/// h = sum_p gain_p * a(angle_p).
CVec synthesize_channel(const ArrayConfig& cfg, const Channel& channel);

/// sum_k conj(a_k) * b_k.
std::complex<double> inner_product(const CVec& a, const CVec& b);

/// |h^H w|^2; the noiseless received power of weight vector w on channel h.
double beam_rsrp(const CVec& channel, const CVec& weights);

/// Closed-form f_n^H a(theta) (geometric series / Dirichlet kernel).
/// Matches the elementwise summation to ~1e-15 and costs O(1).
std::complex<double> dft_steering_inner(const ArrayConfig& cfg, int beam, double angle);

/// Beam-domain image of the channel: entry n-1 holds f_n^H h.
/// Computed per path with the closed-form kernel, O(N * P).
CVec beamspace_channel(const ArrayConfig& cfg, const Channel& channel);

/// 1-based index of the strongest beamspace entry; ties -> smallest index.
int best_beam(const CVec& beamspace);

// ---------------------------------------------------------------------------
// Channel samplers. A sampler draws one channel realization per call from the
// provided stream; factories below cover the standard experiment presets.
// ---------------------------------------------------------------------------

using ChannelSampler = std::function<Channel(Rng&)>;

/// Single LoS path with unit gain on a uniformly random grid angle.
ChannelSampler on_grid_los_sampler(const ArrayConfig& cfg);

/// Single LoS path with unit gain pinned to one grid beam (1-based).
ChannelSampler on_grid_los_sampler_fixed(const ArrayConfig& cfg, int beam);

/// Multipath channel: path p has gain CN(0, path_gain_vars[p]) and an angle
/// uniform in [angle_min, angle_max). Per path the draw order is gain
/// (two normals), then angle.
ChannelSampler multipath_sampler(const ArrayConfig& cfg,
                                 std::vector<double> path_gain_vars,
                                 double angle_min, double angle_max);

}  // namespace hashbeam
