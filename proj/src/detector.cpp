#include "fringelab/detector.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fringelab/csv.hpp"
#include "fringelab/error.hpp"

namespace fringelab::detector {

namespace {

constexpr const char* kHistogramHeader = "bin_center_m,bin_width_m,intensity";

// Piecewise-linear value of the profile at x, x inside the grid.
double interpolate(std::span<const double> xs, std::span<const double> ys, double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return ys.front();
  if (it == xs.end()) return ys.back();
  const auto i = static_cast<std::size_t>(it - xs.begin());
  const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

struct Extremes {
  double max;
  double min;
  int count;
};

template <typename ValueAt>
Extremes window_extremes(const AcquiredHistogram& hist, Window window, ValueAt value_at) {
  Extremes e{0.0, 0.0, 0};
  for (std::size_t k = 0; k < hist.size(); ++k) {
    const double c = hist.bin_centers[k];
    if (c < window.lo || c > window.hi) continue;
    const double v = value_at(k);
    if (e.count == 0) {
      e.max = e.min = v;
    } else {
      e.max = std::max(e.max, v);
      e.min = std::min(e.min, v);
    }
    ++e.count;
  }
  if (e.count == 0) throw ValidationError("visibility: window contains no bins");
  if (e.count < 2) throw ValidationError("visibility: window contains fewer than 2 bins");
  return e;
}

double contrast(const Extremes& e) {
  const double sum = e.max + e.min;
  if (sum == 0.0) return 0.0;
  return (e.max - e.min) / sum;
}

}  // namespace

DetectorArray::DetectorArray(int pixel_count, double pixel_width, double center_offset)
    : pixel_count_(pixel_count), pixel_width_(pixel_width), center_offset_(center_offset) {
  if (pixel_count < 1) throw ValidationError("detector: pixel count must be >= 1");
  if (!(pixel_width > 0.0) || !std::isfinite(pixel_width)) {
    throw ValidationError("detector: pixel width must be positive");
  }
  if (!std::isfinite(center_offset)) throw ValidationError("detector: offset not finite");
}

DetectorArray DetectorArray::shifted(double offset) const {
  return {pixel_count_, pixel_width_, center_offset_ + offset};
}

double AcquiredHistogram::peak() const {
  return bin_values.empty() ? 0.0 : *std::max_element(bin_values.begin(), bin_values.end());
}

int samples_per_pixel(const DetectorArray& det, double fringe_period) {
  const double per_fringe = 8.0 * det.pixel_width() / fringe_period;
  return std::max(kMinSamplesPerPixel, static_cast<int>(std::ceil(per_fringe)));
}

AcquiredHistogram acquire(const optics::IntensityProfile& profile, const DetectorArray& det) {
  const auto xs = profile.x();
  const auto ys = profile.values();
  const double w = det.pixel_width();
  const double eps = 1e-9 * w;
  if (xs.empty() || xs.front() > det.left_edge() + eps || xs.back() < det.right_edge() - eps) {
    throw ValidationError("acquire: intensity profile does not cover the detector span");
  }

  AcquiredHistogram hist;
  hist.bin_width = w;
  hist.bin_centers.reserve(det.pixel_count());
  hist.bin_values.reserve(det.pixel_count());
  for (int k = 0; k < det.pixel_count(); ++k) {
    const double lo = det.pixel_lo(k);
    const double hi = det.pixel_hi(k);
    auto first = std::lower_bound(xs.begin(), xs.end(), lo - eps);
    auto last = std::upper_bound(xs.begin(), xs.end(), hi + eps);
    const auto inside = last - first;
    if (inside < kMinSamplesPerPixel) {
      std::ostringstream msg;
      msg << "acquire: pixel " << k << " holds " << inside << " samples, needs "
          << kMinSamplesPerPixel << " (short by " << kMinSamplesPerPixel - inside << ")";
      throw SamplingError(msg.str());
    }
    // Trapezoid over lo, interior samples, hi.
    double prev_x = lo;
    double prev_y = interpolate(xs, ys, lo);
    double sum = 0.0;
    for (auto it = first; it != last; ++it) {
      const double x = *it;
      if (x <= lo || x >= hi) continue;
      const double y = ys[static_cast<std::size_t>(it - xs.begin())];
      sum += 0.5 * (x - prev_x) * (y + prev_y);
      prev_x = x;
      prev_y = y;
    }
    sum += 0.5 * (hi - prev_x) * (interpolate(xs, ys, hi) + prev_y);
    hist.bin_centers.push_back(det.pixel_center(k));
    hist.bin_values.push_back(sum / w);
  }
  return hist;
}

AcquiredHistogram acquire(const std::function<double(double)>& intensity,
                          const DetectorArray& det, int samples) {
  if (samples < kMinSamplesPerPixel) {
    std::ostringstream msg;
    msg << "acquire: " << samples << " samples per pixel, needs " << kMinSamplesPerPixel;
    throw SamplingError(msg.str());
  }
  AcquiredHistogram hist;
  hist.bin_width = det.pixel_width();
  const double h = det.pixel_width() / samples;
  for (int k = 0; k < det.pixel_count(); ++k) {
    const double lo = det.pixel_lo(k);
    double sum = 0.5 * (intensity(lo) + intensity(det.pixel_hi(k)));
    for (int j = 1; j < samples; ++j) sum += intensity(lo + j * h);
    hist.bin_centers.push_back(det.pixel_center(k));
    hist.bin_values.push_back(sum / samples);
  }
  return hist;
}

double visibility(const AcquiredHistogram& hist, Window window) {
  return contrast(window_extremes(hist, window, [&](std::size_t k) { return hist.bin_values[k]; }));
}

double compensated_visibility(const AcquiredHistogram& hist, const AcquiredHistogram& envelope,
                              Window window) {
  if (hist.size() != envelope.size() || hist.bin_width != envelope.bin_width ||
      hist.bin_centers != envelope.bin_centers) {
    throw ValidationError("compensated_visibility: histograms come from different detectors");
  }
  return contrast(window_extremes(hist, window, [&](std::size_t k) {
    const double e = envelope.bin_values[k];
    if (!(e > 0.0)) {
      throw ValidationError("compensated_visibility: envelope vanishes inside the window");
    }
    return hist.bin_values[k] / e;
  }));
}

double integrate(const optics::IntensityProfile& profile, double lo, double hi) {
  const auto xs = profile.x();
  const auto ys = profile.values();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double a = std::max(xs[i], lo);
    const double b = std::min(xs[i + 1], hi);
    if (b <= a) continue;
    sum += 0.5 * (b - a) * (interpolate(xs, ys, a) + interpolate(xs, ys, b));
  }
  return sum;
}

void write_histogram_csv(const AcquiredHistogram& hist, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kHistogramHeader << '\n';
  for (std::size_t k = 0; k < hist.size(); ++k) {
    out << csv::number(hist.bin_centers[k]) << ',' << csv::number(hist.bin_width) << ','
        << csv::number(hist.bin_values[k]) << '\n';
  }
}

AcquiredHistogram read_histogram_csv(const std::filesystem::path& path) {
  const auto rows = csv::read_numeric(path, kHistogramHeader, 3);
  AcquiredHistogram hist;
  for (const auto& row : rows) {
    hist.bin_centers.push_back(row[0]);
    hist.bin_width = row[1];
    hist.bin_values.push_back(row[2]);
  }
  return hist;
}

}  // namespace fringelab::detector
