#include "fringelab/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fringelab/error.hpp"

namespace fringelab::optics {

namespace {

constexpr double kPi = std::numbers::pi;

void require_increasing(std::span<const double> x, const char* what) {
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) {
      std::ostringstream msg;
      msg << what << ": grid not strictly increasing at index " << i;
      throw ValidationError(msg.str());
    }
  }
}

// Trapezoid weights for a (possibly nonuniform) grid.
std::vector<double> trapezoid_weights(std::span<const double> x) {
  std::vector<double> w(x.size(), 0.0);
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double h = x[i + 1] - x[i];
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

// rect((x - center)/width) with the midpoint value on the edges.
double rect(double x, double center, double width, double edge_tol) {
  const double d = std::abs(x - center) - 0.5 * width;
  if (std::abs(d) <= edge_tol) return 0.5;
  return d < 0.0 ? 1.0 : 0.0;
}

}  // namespace

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

ExperimentConfig::ExperimentConfig(double slit_width, double slit_separation,
                                   double wavelength, double screen_distance)
    : slit_width_(slit_width),
      slit_separation_(slit_separation),
      wavelength_(wavelength),
      screen_distance_(screen_distance) {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string(name) + " must be positive and finite");
    }
  };
  positive(slit_width, "slit width");
  positive(slit_separation, "slit separation");
  positive(wavelength, "wavelength");
  positive(screen_distance, "screen distance");
  if (!(slit_separation > slit_width)) {
    throw ValidationError("slit separation must exceed slit width (slits overlap)");
  }
}

double ExperimentConfig::wavenumber() const { return 2.0 * kPi / wavelength_; }

ExperimentConfig ExperimentConfig::with_wavelength(double wavelength) const {
  return {slit_width_, slit_separation_, wavelength, screen_distance_};
}

ExperimentConfig ExperimentConfig::with_screen_distance(double screen_distance) const {
  return {slit_width_, slit_separation_, wavelength_, screen_distance};
}

bool ExperimentConfig::in_fraunhofer_regime() const {
  return screen_distance_ >= fraunhofer_distance(*this) * (1.0 - 1e-12);
}

double PolarizationPair::dot() const { return std::cos(theta1 - theta2); }

IntensityProfile::IntensityProfile(std::vector<double> x, std::vector<double> values)
    : x_(std::move(x)), values_(std::move(values)) {
  if (x_.size() != values_.size()) {
    throw ValidationError("intensity profile: grid and values differ in length");
  }
  require_increasing(x_, "intensity profile");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
      std::ostringstream msg;
      msg << "intensity profile: value " << values_[i] << " at index " << i
          << " is negative or not finite";
      throw ValidationError(msg.str());
    }
  }
}

double IntensityProfile::peak() const {
  return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end());
}

ComplexField::ComplexField(std::vector<double> x, std::vector<Complex> ex,
                           std::vector<Complex> ey)
    : x_(std::move(x)), ex_(std::move(ex)), ey_(std::move(ey)) {
  if (x_.size() != ex_.size() || x_.size() != ey_.size()) {
    throw ValidationError("complex field: grid and component lengths differ");
  }
  require_increasing(x_, "complex field");
}

IntensityProfile ComplexField::intensity() const {
  std::vector<double> v(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) v[i] = std::norm(ex_[i]) + std::norm(ey_[i]);
  return {x_, std::move(v)};
}

double ComplexField::power() const {
  const auto w = trapezoid_weights(x_);
  double sum = 0.0;
  for (std::size_t i = 0; i < x_.size(); ++i) {
    sum += w[i] * (std::norm(ex_[i]) + std::norm(ey_[i]));
  }
  return sum;
}

double fraunhofer_distance(const ExperimentConfig& cfg) {
  const double a = cfg.slit_width();
  return 4.0 * a * a / cfg.wavelength();
}

double fringe_period(const ExperimentConfig& cfg) {
  return cfg.wavelength() * cfg.screen_distance() / cfg.slit_separation();
}

double envelope_first_zero(const ExperimentConfig& cfg) {
  return cfg.wavelength() * cfg.screen_distance() / cfg.slit_width();
}

Complex rect_ft(double shift, double width, double frequency) {
  if (width == 0.0) throw ValidationError("rect_ft: zero width");
  const double magnitude = std::abs(width) / std::sqrt(2.0 * kPi);
  return magnitude * std::polar(1.0, shift * frequency) * sinc(width * frequency / 2.0);
}

double envelope(double x, const ExperimentConfig& cfg) {
  const double s = sinc(cfg.wavenumber() * cfg.slit_width() * x /
                        (2.0 * cfg.screen_distance()));
  return s * s;
}

double fringe_factor(double x, const ExperimentConfig& cfg, double dot) {
  return 1.0 + dot * std::cos(cfg.wavenumber() * cfg.slit_separation() * x /
                              cfg.screen_distance());
}

double analytic_intensity(double x, const ExperimentConfig& cfg,
                          const PolarizationPair& pol) {
  return envelope(x, cfg) * fringe_factor(x, cfg, pol.dot());
}

double absolute_intensity_scale(const ExperimentConfig& cfg) {
  const double r = cfg.slit_width() / (cfg.wavelength() * cfg.screen_distance());
  return 2.0 * r * r;
}

ComplexField double_slit_aperture(const ExperimentConfig& cfg,
                                  const PolarizationPair& pol,
                                  int samples_per_slit) {
  if (samples_per_slit < 2) throw ValidationError("aperture: need >= 2 samples per slit");
  const double a = cfg.slit_width();
  const double b = cfg.slit_separation();
  const double h = a / samples_per_slit;
  // One zero node past each outer edge keeps every slit edge interior.
  const double lo = -(a + b) / 2.0 - h;
  const auto n = static_cast<std::size_t>(std::llround((a + b) / h)) + 3;
  const auto x = linspace(lo, -lo, n);
  const double tol = 1e-6 * h;

  std::vector<Complex> ex(n), ey(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r1 = rect(x[i], b / 2.0, a, tol);
    const double r2 = rect(x[i], -b / 2.0, a, tol);
    ex[i] = r1 * std::cos(pol.theta1) + r2 * std::cos(pol.theta2);
    ey[i] = r1 * std::sin(pol.theta1) + r2 * std::sin(pol.theta2);
  }
  return {x, std::move(ex), std::move(ey)};
}

ComplexField single_slit_aperture(const ExperimentConfig& cfg, int samples_per_slit) {
  if (samples_per_slit < 2) throw ValidationError("aperture: need >= 2 samples per slit");
  const double a = cfg.slit_width();
  const auto n = static_cast<std::size_t>(samples_per_slit) + 1;
  auto x = linspace(-a / 2.0, a / 2.0, n);
  // Endpoint nodes already carry half weight in the trapezoid rule.
  std::vector<Complex> ex(n, 1.0), ey(n, 0.0);
  return {std::move(x), std::move(ex), std::move(ey)};
}

int recommended_samples_per_slit(double wavelength, double reference_wavelength) {
  return static_cast<int>(std::ceil(64.0 * std::max(1.0, reference_wavelength / wavelength)));
}

double max_phase_step(const ComplexField& aperture, const ExperimentConfig& cfg,
                      std::span<const double> x_out) {
  const auto xi = aperture.x();
  double widest = 0.0;
  for (std::size_t i = 0; i + 1 < xi.size(); ++i) widest = std::max(widest, xi[i + 1] - xi[i]);
  double far = 0.0;
  for (double x : x_out) far = std::max(far, std::abs(x));
  return cfg.wavenumber() * far * widest / cfg.screen_distance();
}

ComplexField numeric_propagate(const ComplexField& aperture, const ExperimentConfig& cfg,
                               std::span<const double> x_out) {
  const double step = max_phase_step(aperture, cfg, x_out);
  if (step >= kPi / 4.0) {
    std::ostringstream msg;
    msg << "numeric_propagate: aperture undersampled, worst phase step " << step
        << " rad >= pi/4";
    throw SamplingError(msg.str());
  }
  require_increasing(x_out, "numeric_propagate output");

  const auto xi = aperture.x();
  const auto w = trapezoid_weights(xi);
  const auto src_x = aperture.ex();
  const auto src_y = aperture.ey();
  const double k = cfg.wavenumber();
  const double L = cfg.screen_distance();
  const double lambda_l = cfg.wavelength() * L;
  // 1/(i lambda L)
  const Complex inv_i_lambda_l(0.0, -1.0 / lambda_l);
  const double kl_mod = std::fmod(k * L, 2.0 * kPi);

  std::vector<Complex> ex(x_out.size()), ey(x_out.size());
  for (std::size_t j = 0; j < x_out.size(); ++j) {
    const double x = x_out[j];
    const double tau = k * x / L;
    Complex sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xi.size(); ++i) {
      if (src_x[i] == 0.0 && src_y[i] == 0.0) continue;
      const Complex kernel = std::polar(w[i], -tau * xi[i]);
      sx += src_x[i] * kernel;
      sy += src_y[i] * kernel;
    }
    const Complex pre = std::polar(1.0, kl_mod + k * x * x / (2.0 * L)) * inv_i_lambda_l;
    ex[j] = pre * sx;
    ey[j] = pre * sy;
  }
  return {std::vector<double>(x_out.begin(), x_out.end()), std::move(ex), std::move(ey)};
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> x(n);
  if (n == 1) {
    x[0] = lo;
    return x;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + step * static_cast<double>(i);
  x.back() = hi;
  return x;
}

}  // namespace fringelab::optics
