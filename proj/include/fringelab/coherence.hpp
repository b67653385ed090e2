#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fringelab/optics.hpp"

namespace fringelab::coherence {

/// Counter-based generator: every (seed, index, component) triple maps to an
/// independent uniform variate, so draws do not depend on evaluation order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t index, std::uint32_t component) const;
  /// Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t index, std::uint32_t component) const;

 private:
  std::uint64_t seed_;
};

/// Probability density of a polarizer angle on [0, 2 pi).
class AngleDistribution {
 public:
  static AngleDistribution uniform();
  static AngleDistribution von_mises(double mean, double concentration);
  /// Arbitrary density, sampled by inverse CDF on a 2^14-point table.
  /// Throws unless the density is nonnegative and integrates to 1.
  static AngleDistribution tabulated(const std::function<double(double)>& density,
                                     std::string name);

  /// Inverse CDF at u in [0, 1).
  double sample(double u) const;
  const std::string& name() const { return name_; }
  bool is_uniform() const { return cdf_.empty(); }

 private:
  AngleDistribution() = default;

  std::string name_ = "uniform";
  std::vector<double> cdf_;  // empty for the exact uniform sampler
};

inline constexpr std::size_t kInverseCdfTableSize = std::size_t{1} << 14;

struct AnalyticCoherence {
  double delta = 1.0;
};

struct EnsembleCoherence {
  AngleDistribution theta1 = AngleDistribution::uniform();
  AngleDistribution theta2 = AngleDistribution::uniform();
  /// When set, theta2 = theta1 + offset for every sample.
  std::optional<double> joint_offset;
  std::uint64_t sample_count = 1;
  std::uint64_t seed = 0;
};

using CoherenceSpec = std::variant<AnalyticCoherence, EnsembleCoherence>;

/// Throws ValidationError when delta is outside [0, 1] or M = 0.
void validate(const CoherenceSpec& spec);

struct CoherencyMatrix {
  double j11 = 0.0;
  double j22 = 0.0;
  std::complex<double> j12;

  std::complex<double> j21() const { return std::conj(j12); }
  /// det J = J11 J22 - |J12|^2, nonnegative for a physical matrix.
  double determinant() const { return j11 * j22 - std::norm(j12); }
  /// |J12| / sqrt(J11 J22)
  double degree_of_coherence() const;
};

/// p1 . p2 = cos(theta1 - theta2) for each of the M drawn pairs, in index order.
std::vector<double> sample_dot_products(const EnsembleCoherence& spec);

/// Sample coherency matrix with unit-amplitude fields: J11 = J22 = 1,
/// J12 = <cos(theta1 - theta2)>.
CoherencyMatrix coherency_from_ensemble(const EnsembleCoherence& spec);

/// Envelope times 1 + delta cos(k b x / L); 2 at x = 0 for delta = 1.
double decohered_intensity(double x, const optics::ExperimentConfig& cfg, double delta);

/// Sample mean over the ensemble of the per-realization two-slit intensity.
optics::IntensityProfile ensemble_intensity(std::span<const double> x_grid,
                                            const optics::ExperimentConfig& cfg,
                                            const EnsembleCoherence& spec);

}  // namespace fringelab::coherence
