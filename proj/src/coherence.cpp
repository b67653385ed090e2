#include "fringelab/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fringelab/error.hpp"

namespace fringelab::coherence {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Neumaier summation, fixed order.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t index, std::uint32_t component) const {
  const std::uint64_t stream = splitmix64(seed_ ^ (0xd1b54a32d192ed03ULL * (component + 1)));
  return splitmix64(stream + 0x9e3779b97f4a7c15ULL * index);
}

double CounterRng::uniform(std::uint64_t index, std::uint32_t component) const {
  return static_cast<double>(bits(index, component) >> 11) * 0x1.0p-53;
}

AngleDistribution AngleDistribution::uniform() { return {}; }

AngleDistribution AngleDistribution::von_mises(double mean, double concentration) {
  if (!(concentration >= 0.0) || !std::isfinite(concentration) || !std::isfinite(mean)) {
    throw ValidationError("von Mises: concentration must be finite and >= 0");
  }
  // Scaled form e^{kappa (cos - 1)} / (2 pi I0e(kappa)) avoids overflow for large kappa.
  const double norm = kTwoPi * std::cyl_bessel_i(0.0, concentration) * std::exp(-concentration);
  std::ostringstream name;
  name << "vonmises " << mean << ' ' << concentration;
  return tabulated(
      [=](double t) { return std::exp(concentration * (std::cos(t - mean) - 1.0)) / norm; },
      name.str());
}

AngleDistribution AngleDistribution::tabulated(const std::function<double(double)>& density,
                                               std::string name) {
  constexpr std::size_t n = kInverseCdfTableSize;
  const double h = kTwoPi / static_cast<double>(n);
  std::vector<double> cdf(n + 1, 0.0);
  double prev = density(0.0);
  if (!(prev >= 0.0)) throw ValidationError("angle density negative at 0");
  for (std::size_t i = 1; i <= n; ++i) {
    const double t = h * static_cast<double>(i);
    const double cur = density(t);
    if (!(cur >= 0.0) || !std::isfinite(cur)) {
      std::ostringstream msg;
      msg << "angle density invalid (" << cur << ") at theta = " << t;
      throw ValidationError(msg.str());
    }
    cdf[i] = cdf[i - 1] + 0.5 * h * (prev + cur);
    prev = cur;
  }
  const double total = cdf.back();
  if (std::abs(total - 1.0) > 1e-3) {
    std::ostringstream msg;
    msg << "angle density integrates to " << total << " over [0, 2pi), expected 1";
    throw ValidationError(msg.str());
  }
  for (auto& c : cdf) c /= total;

  AngleDistribution d;
  d.name_ = std::move(name);
  d.cdf_ = std::move(cdf);
  return d;
}

double AngleDistribution::sample(double u) const {
  if (cdf_.empty()) return kTwoPi * u;
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.begin()) return 0.0;
  if (it == cdf_.end()) return kTwoPi;
  const auto i = static_cast<std::size_t>(it - cdf_.begin());
  const double h = kTwoPi / static_cast<double>(cdf_.size() - 1);
  const double span = cdf_[i] - cdf_[i - 1];
  const double t = span > 0.0 ? (u - cdf_[i - 1]) / span : 0.0;
  return h * (static_cast<double>(i - 1) + t);
}

void validate(const CoherenceSpec& spec) {
  if (const auto* a = std::get_if<AnalyticCoherence>(&spec)) {
    if (!(a->delta >= 0.0 && a->delta <= 1.0)) {
      std::ostringstream msg;
      msg << "delta = " << a->delta << " outside [0, 1]";
      throw ValidationError(msg.str());
    }
  } else if (std::get<EnsembleCoherence>(spec).sample_count == 0) {
    throw ValidationError("ensemble needs at least one sample");
  }
}

double CoherencyMatrix::degree_of_coherence() const {
  return std::abs(j12) / std::sqrt(j11 * j22);
}

std::vector<double> sample_dot_products(const EnsembleCoherence& spec) {
  validate(spec);
  const CounterRng rng(spec.seed);
  std::vector<double> dots(spec.sample_count);
  for (std::uint64_t m = 0; m < spec.sample_count; ++m) {
    if (spec.joint_offset) {
      // theta1 cancels in the difference.
      dots[m] = std::cos(*spec.joint_offset);
      continue;
    }
    const double t1 = spec.theta1.sample(rng.uniform(m, 0));
    const double t2 = spec.theta2.sample(rng.uniform(m, 1));
    dots[m] = std::cos(t1 - t2);
  }
  return dots;
}

CoherencyMatrix coherency_from_ensemble(const EnsembleCoherence& spec) {
  const auto dots = sample_dot_products(spec);
  CompensatedSum sum;
  for (double d : dots) sum.add(d);
  CoherencyMatrix j;
  j.j11 = 1.0;
  j.j22 = 1.0;
  j.j12 = sum.value() / static_cast<double>(dots.size());
  return j;
}

double decohered_intensity(double x, const optics::ExperimentConfig& cfg, double delta) {
  validate(AnalyticCoherence{delta});
  return optics::envelope(x, cfg) * optics::fringe_factor(x, cfg, delta);
}

optics::IntensityProfile ensemble_intensity(std::span<const double> x_grid,
                                            const optics::ExperimentConfig& cfg,
                                            const EnsembleCoherence& spec) {
  const auto dots = sample_dot_products(spec);
  const double kb_over_l = cfg.wavenumber() * cfg.slit_separation() / cfg.screen_distance();
  std::vector<double> values(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    const double env = optics::envelope(x_grid[i], cfg);
    const double c = std::cos(kb_over_l * x_grid[i]);
    CompensatedSum sum;
    for (double d : dots) sum.add(env * (1.0 + d * c));
    values[i] = sum.value() / static_cast<double>(dots.size());
  }
  return {std::vector<double>(x_grid.begin(), x_grid.end()), std::move(values)};
}

}  // namespace fringelab::coherence
