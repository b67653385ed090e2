#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fringelab::optics {

using Complex = std::complex<double>;

/// sin(x)/x, continuous at 0.
double sinc(double x);

/// Geometry and wavelength of a two-slit experiment. All lengths in meters.
///
/// Slits of width `slit_width` are centered at x = +-slit_separation/2, so
/// the separation must exceed the width. The screen sits at
/// `screen_distance` from the slit plane.
class ExperimentConfig {
 public:
  ExperimentConfig(double slit_width, double slit_separation, double wavelength,
                   double screen_distance);

  double slit_width() const { return slit_width_; }
  double slit_separation() const { return slit_separation_; }
  double wavelength() const { return wavelength_; }
  double screen_distance() const { return screen_distance_; }
  double wavenumber() const;

  /// Same geometry at a different wavelength (screen distance unchanged).
  ExperimentConfig with_wavelength(double wavelength) const;
  ExperimentConfig with_screen_distance(double screen_distance) const;

  /// True when screen_distance >= 4 a^2 / lambda.
  bool in_fraunhofer_regime() const;

  bool operator==(const ExperimentConfig&) const = default;

 private:
  double slit_width_;
  double slit_separation_;
  double wavelength_;
  double screen_distance_;
};

/// Linear polarizer angles (radians) in front of slit 1 (x = +b/2) and slit 2.
struct PolarizationPair {
  double theta1 = 0.0;
  double theta2 = 0.0;

  static PolarizationPair parallel() { return {0.0, 0.0}; }

  /// p1 . p2 = cos(theta1 - theta2)
  double dot() const;
};

/// Real, nonnegative intensity sampled on a strictly increasing grid.
class IntensityProfile {
 public:
  IntensityProfile(std::vector<double> x, std::vector<double> values);

  std::span<const double> x() const { return x_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return x_.size(); }
  double peak() const;

 private:
  std::vector<double> x_;
  std::vector<double> values_;
};

/// Two-component (Jones) transverse field sampled on a strictly increasing grid.
class ComplexField {
 public:
  ComplexField(std::vector<double> x, std::vector<Complex> ex,
               std::vector<Complex> ey);

  std::span<const double> x() const { return x_; }
  std::span<const Complex> ex() const { return ex_; }
  std::span<const Complex> ey() const { return ey_; }
  std::size_t size() const { return x_.size(); }

  /// |ex|^2 + |ey|^2 at every sample.
  IntensityProfile intensity() const;

  /// Trapezoid integral of |E|^2 over the grid.
  double power() const;

 private:
  std::vector<double> x_;
  std::vector<Complex> ex_;
  std::vector<Complex> ey_;
};

/// 4 a^2 / lambda.
double fraunhofer_distance(const ExperimentConfig& cfg);

/// Period of the two-slit cosine term, lambda L / b.
double fringe_period(const ExperimentConfig& cfg);

/// Position of the first zero of the single-slit envelope, lambda L / a.
double envelope_first_zero(const ExperimentConfig& cfg);

/// Integral of rect((t - t0)/a) e^{i tau t} dt, in the 1/sqrt(2 pi)
/// convention: |a|/sqrt(2 pi) e^{i t0 tau} sinc(a tau / 2).
Complex rect_ft(double shift, double width, double frequency);

/// Single-slit envelope sinc^2(k a x / 2L), 1 at x = 0.
double envelope(double x, const ExperimentConfig& cfg);

/// Interference factor 1 + dot cos(k b x / L).
double fringe_factor(double x, const ExperimentConfig& cfg, double dot);

/// Normalized two-slit intensity, 2 at x = 0 for parallel polarizations.
double analytic_intensity(double x, const ExperimentConfig& cfg,
                          const PolarizationPair& pol);

/// Factor converting normalized intensities into |E|^2 produced by
/// numeric_propagate for a unit-amplitude double slit: 2 (a / (lambda L))^2.
double absolute_intensity_scale(const ExperimentConfig& cfg);

/// Sampled double-slit aperture with polarization p_k on slit k. Uniform grid
/// of pitch a / samples_per_slit spanning both slits; samples on a slit edge
/// carry the rect midpoint value 1/2.
ComplexField double_slit_aperture(const ExperimentConfig& cfg,
                                  const PolarizationPair& pol,
                                  int samples_per_slit);

/// Single x-polarized slit of width a centered at the origin.
ComplexField single_slit_aperture(const ExperimentConfig& cfg,
                                  int samples_per_slit);

/// Samples per slit width needed at `wavelength` when 64 suffice at
/// `reference_wavelength`.
int recommended_samples_per_slit(double wavelength, double reference_wavelength);

/// Largest phase step k |x| dxi / L of the propagation integrand over all
/// output points and aperture intervals.
double max_phase_step(const ComplexField& aperture, const ExperimentConfig& cfg,
                      std::span<const double> x_out);

/// Fraunhofer propagation of `aperture` to the screen by trapezoid
/// quadrature, including the e^{ik(L + x^2/2L)} / (i lambda L) prefactor.
/// Throws SamplingError when max_phase_step >= pi/4.
ComplexField numeric_propagate(const ComplexField& aperture,
                               const ExperimentConfig& cfg,
                               std::span<const double> x_out);

/// n points evenly spaced on [lo, hi].
std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace fringelab::optics
