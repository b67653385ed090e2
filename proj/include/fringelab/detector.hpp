#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "fringelab/optics.hpp"

namespace fringelab::detector {

/// One-dimensional array of N contiguous pixels of equal width.
///
/// Pixel k spans [x0 + k w, x0 + (k+1) w) with x0 = center_offset - N w / 2.
/// With center_offset = 0 a pixel edge sits at x = 0 for even N and a pixel
/// center for odd N.
class DetectorArray {
 public:
  DetectorArray(int pixel_count, double pixel_width, double center_offset = 0.0);

  int pixel_count() const { return pixel_count_; }
  double pixel_width() const { return pixel_width_; }
  double center_offset() const { return center_offset_; }
  double span() const { return pixel_count_ * pixel_width_; }
  double left_edge() const { return center_offset_ - 0.5 * span(); }
  double right_edge() const { return left_edge() + span(); }
  double pixel_lo(int k) const { return left_edge() + k * pixel_width_; }
  double pixel_hi(int k) const { return left_edge() + (k + 1) * pixel_width_; }
  double pixel_center(int k) const { return left_edge() + (k + 0.5) * pixel_width_; }

  DetectorArray shifted(double offset) const;

  bool operator==(const DetectorArray&) const = default;

 private:
  int pixel_count_;
  double pixel_width_;
  double center_offset_;
};

/// Per-pixel mean intensity.
struct AcquiredHistogram {
  std::vector<double> bin_centers;
  std::vector<double> bin_values;
  double bin_width = 0.0;

  std::size_t size() const { return bin_values.size(); }
  double peak() const;
};

/// Closed interval of screen positions.
struct Window {
  double lo;
  double hi;

  static Window centered(double half_width) { return {-half_width, half_width}; }
};

inline constexpr int kMinSamplesPerPixel = 16;

/// Sub-pixel sample count: at least 16, and at least 8 per fringe period.
int samples_per_pixel(const DetectorArray& det, double fringe_period);

/// Pixel averages of a sampled profile. Each pixel needs >= 16 profile
/// samples inside it; pixel edges off the grid are linearly interpolated.
AcquiredHistogram acquire(const optics::IntensityProfile& profile,
                          const DetectorArray& det);

/// Pixel averages of a continuous intensity, trapezoid on a uniform
/// sub-grid of `samples` intervals per pixel.
AcquiredHistogram acquire(const std::function<double(double)>& intensity,
                          const DetectorArray& det,
                          int samples = kMinSamplesPerPixel);

/// (Imax - Imin) / (Imax + Imin) over bins whose centers lie in `window`.
/// Zero when both extremes vanish.
double visibility(const AcquiredHistogram& hist, Window window);

/// Visibility of hist / envelope bin by bin, which removes the slow
/// envelope so only the fringe contrast remains. Both histograms must
/// come from the same detector.
double compensated_visibility(const AcquiredHistogram& hist,
                              const AcquiredHistogram& envelope, Window window);

/// Trapezoid integral of the profile over [lo, hi].
double integrate(const optics::IntensityProfile& profile, double lo, double hi);

void write_histogram_csv(const AcquiredHistogram& hist, const std::filesystem::path& path);
AcquiredHistogram read_histogram_csv(const std::filesystem::path& path);

}  // namespace fringelab::detector
