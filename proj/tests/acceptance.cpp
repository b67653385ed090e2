// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "fringelab/coherence.hpp"
#include "fringelab/detector.hpp"
#include "fringelab/optics.hpp"
#include "fringelab/runner.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
namespace rn = fringelab::runner;
namespace co = fringelab::coherence;
namespace dt = fringelab::detector;
namespace op = fringelab::optics;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

rn::Scenario baseline(const fs::path& out) {
  rn::Scenario s = rn::parse_scenario("", "acceptance");
  s.output_dir = out;
  return s;
}

double wavelength_visibility(const rn::Scenario& s, double lambda) {
  return rn::evaluate_point(rn::sweep_experiment(s, lambda), rn::sweep_envelope(s, lambda), 1.0, s.detector)
      .visibility;
}

void criterion1(const rn::Scenario& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const double v = wavelength_visibility(s, 800e-9);
  const double t = seconds_since(t0);
  report(1, std::abs(v - 0.994) <= 0.01 && t < 1.0, fmt("V(800 nm) = %.5f (target 0.994 +- 0.01), %.3f s", v, t));
}

void criterion2(rn::Scenario s) {
  const double v = wavelength_visibility(s, 100e-9);
  const double target = 0.644;
  double lo = v, hi = v;
  const double pixel = s.detector.pixel_width();
  for (int j = 1; j < 16; ++j) {
    auto shifted = s;
    shifted.detector = s.detector.shifted(j * pixel / 16);
    const double vj = wavelength_visibility(shifted, 100e-9);
    lo = std::min(lo, vj);
    hi = std::max(hi, vj);
  }
  const bool ok = std::abs(v - target) <= 0.08 && lo <= target && target <= hi;
  report(2, ok, fmt("V(100 nm) = %.4f (target 0.644 +- 0.08), alignment range [%.4f, %.4f]", v, lo, hi));
}

void criterion3(const rn::Scenario& s) {
  const double lambda = 20e-9;
  const auto point = rn::evaluate_point(rn::sweep_experiment(s, lambda), rn::sweep_envelope(s, lambda), 1.0,
                                        s.detector);
  // Washed-out fringes leave the pixel-averaged envelope behind.
  const auto& env_cfg = rn::sweep_envelope(s, lambda);
  const double lobe = op::envelope_first_zero(env_cfg);
  const auto& det = s.detector;
  double worst = 0.0;
  int bins = 0;
  for (int k = 0; k < det.pixel_count(); ++k) {
    if (det.pixel_lo(k) < -lobe || det.pixel_hi(k) > lobe) continue;
    const double expected =
        oracle::window_mean([&](double x) { return op::envelope(x, env_cfg); }, det.pixel_lo(k), det.pixel_hi(k));
    worst = std::max(worst, std::abs(point.histogram.bin_values[static_cast<std::size_t>(k)] - expected) / expected);
    ++bins;
  }
  const bool ok = point.visibility <= 0.03 && worst <= 0.05 && bins > 0;
  report(3, ok,
         fmt("V(20 nm) = %.5f (<= 0.03), max bin deviation from averaged envelope %.4f over %d bins (<= 0.05)",
             point.visibility, worst, bins));
}

void criterion4(const rn::Scenario& base, const fs::path& out) {
  auto s = base;
  s.deltas = {0.0, 0.3, 0.7, 1.0};
  s.deltas_configured = true;
  s.output_dir = out / "c4_delta";
  const auto coh = rn::run_coherence_sweep(s);
  auto w = base;
  w.wavelengths = {base.experiment.wavelength()};
  w.output_dir = out / "c4_lambda";
  const auto wave = rn::run_wavelength_sweep(w);

  const double v0 = coh.records[0].visibility;
  const double v3 = coh.records[1].visibility;
  const double v7 = coh.records[2].visibility;
  const auto h1 = dt::read_histogram_csv(s.output_dir / coh.records[3].histogram_path);
  const auto href = dt::read_histogram_csv(w.output_dir / wave.records[0].histogram_path);
  double diff = h1.size() == href.size() ? 0.0 : 1.0;
  for (std::size_t i = 0; i < std::min(h1.size(), href.size()); ++i) {
    diff = std::max(diff, std::abs(h1.bin_values[i] - href.bin_values[i]));
  }
  const bool ok = std::abs(v3 - 0.3) <= 0.03 && std::abs(v7 - 0.7) <= 0.03 && diff <= 1e-9 && v0 <= 0.02;
  report(4, ok,
         fmt("V(0.3) = %.4f, V(0.7) = %.4f, V(0) = %.2e, |delta=1 - reference| = %.1e", v3, v7, v0, diff));
}

void criterion5(const rn::Scenario& s) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = rn::run_oracle(s);
  const double t = seconds_since(t0);
  report(5, r.passed && r.max_relative_error <= 1e-4 && t < 10.0,
         fmt("max relative error %.2e over %zu points with %zu aperture samples, %.2f s", r.max_relative_error,
             r.points_compared, r.aperture_samples, t));
}

void criterion6(const rn::Scenario& base) {
  auto a = base;
  a.probe = rn::Probe{rn::Probe::Kind::Wavelength, 20e-9};
  auto b = base;
  b.probe = rn::Probe{rn::Probe::Kind::Delta, 0.0};
  const auto r = rn::run_equivalence_check(a, b);
  report(6, r.passed && r.max_deviation <= 0.05,
         fmt("peak-normalized deviation %.4f (<= 0.05), bin-relative %.4f", r.max_deviation,
             r.max_relative_deviation));
}

void criterion7(const rn::Scenario& s) {
  const std::vector<std::uint64_t> counts = {1000, 10000, 100000, 1000000};
  constexpr int kSeeds = 16;
  std::vector<double> lx, ly;
  for (auto m : counts) {
    double sq = 0.0;
    for (int seed = 0; seed < kSeeds; ++seed) {
      co::EnsembleCoherence e;
      e.sample_count = m;
      e.seed = 1000 + static_cast<std::uint64_t>(seed);
      sq += std::norm(co::coherency_from_ensemble(e).j12);
    }
    lx.push_back(std::log(static_cast<double>(m)));
    ly.push_back(0.5 * std::log(sq / kSeeds));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(lx.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;

  co::EnsembleCoherence e;
  e.sample_count = 100000;
  e.seed = 20240601;
  const auto& cfg = s.experiment;
  const auto x = op::linspace(s.detector.left_edge(), s.detector.right_edge(), 2001);
  const auto prof = co::ensemble_intensity(x, cfg, e);
  double worst = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double expected = co::decohered_intensity(x[i], cfg, 0.0);
    peak = std::max(peak, expected);
    worst = std::max(worst, std::abs(prof.values()[i] - expected));
  }
  const bool ok = std::abs(slope + 0.5) <= 0.1 && worst <= 0.01 * peak;
  report(7, ok, fmt("error exponent %.3f (-0.5 +- 0.1), M=1e5 deviation %.2e of peak (<= 1e-2)", slope,
                    worst / peak));
}

void criterion8() {
  const std::string cmd = std::string("\"") + FRINGELAB_PROPERTIES_BIN + "\" > \"" +
                          (fs::temp_directory_path() / "fringelab_properties.log").string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  report(8, status == 0, fmt("property suite exit status %d", status));
}

}  // namespace

int main() {
  const fs::path out = fs::temp_directory_path() / "fringelab_acceptance";
  fs::remove_all(out);
  fs::create_directories(out);
  const auto s = baseline(out);

  const std::vector<std::function<void()>> checks = {
      [&] { criterion1(s); },      [&] { criterion2(s); }, [&] { criterion3(s); },
      [&] { criterion4(s, out); }, [&] { criterion5(s); }, [&] { criterion6(s); },
      [&] { criterion7(s); },      [] { criterion8(); },
  };
  for (std::size_t i = 0; i < checks.size(); ++i) {
    try {
      checks[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), false, std::string("exception: ") + e.what());
    }
  }
  std::printf("%s: %d failure(s)\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
