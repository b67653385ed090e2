#include "fringelab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fringelab/csv.hpp"
#include "fringelab/error.hpp"

namespace fringelab::runner {

namespace {

using detector::AcquiredHistogram;
using detector::DetectorArray;
using optics::ExperimentConfig;

std::vector<double> screen_grid(const DetectorArray& det, int per_pixel) {
  const auto n = static_cast<std::size_t>(det.pixel_count()) * static_cast<std::size_t>(per_pixel) + 1;
  return optics::linspace(det.left_edge(), det.right_edge(), n);
}

PointResult finish_point(optics::IntensityProfile profile, const ExperimentConfig& envelope_cfg,
                         double fringe_period, const DetectorArray& det) {
  std::vector<double> env(profile.size());
  const auto xs = profile.x();
  for (std::size_t i = 0; i < xs.size(); ++i) env[i] = optics::envelope(xs[i], envelope_cfg);
  const optics::IntensityProfile envelope_profile({xs.begin(), xs.end()}, std::move(env));

  auto hist = detector::acquire(profile, det);
  auto env_hist = detector::acquire(envelope_profile, det);
  const auto window = detector::Window::centered(window_half_width(fringe_period, det));
  const double v = detector::compensated_visibility(hist, env_hist, window);
  const double raw = detector::visibility(hist, window);
  return {std::move(profile), std::move(hist), std::move(env_hist), window, v, raw};
}

std::string format_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_profile_csv(const optics::IntensityProfile& p, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "x_m,intensity\n";
  const auto xs = p.x();
  const auto ys = p.values();
  for (std::size_t i = 0; i < xs.size(); ++i) out << csv::number(xs[i]) << ',' << csv::number(ys[i]) << '\n';
}

RunRecord store_point(const Scenario& s, const std::string& stem, double param,
                      const PointResult& point, const ExperimentConfig& cfg) {
  std::filesystem::create_directories(s.output_dir);
  RunRecord rec;
  rec.param = param;
  rec.visibility = point.visibility;
  rec.raw_visibility = point.raw_visibility;
  rec.profile_path = stem + "_profile.csv";
  rec.histogram_path = stem + "_histogram.csv";
  rec.fraunhofer_ok = cfg.in_fraunhofer_regime();
  rec.screen_distance = cfg.screen_distance();
  write_profile_csv(point.profile, s.output_dir / rec.profile_path);
  detector::write_histogram_csv(point.histogram, s.output_dir / rec.histogram_path);
  return rec;
}

Provenance provenance_of(const Scenario& s) {
  Provenance p;
  p.seed = s.ensemble.seed;
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a(s.canonical())));
  p.config_hash = buf;
  return p;
}

}  // namespace

double window_half_width(double fringe_period, const DetectorArray& det) {
  return std::max(fringe_period, 2.0 * det.pixel_width());
}

int fine_samples_per_pixel(double fringe_period, const DetectorArray& det) {
  const double w = det.pixel_width();
  const double feature = std::min(fringe_period, w);
  const int per_feature = static_cast<int>(std::ceil(32.0 * w / feature));
  return std::max({detector::kMinSamplesPerPixel, per_feature,
                   detector::samples_per_pixel(det, fringe_period)});
}

PointResult evaluate_point(const ExperimentConfig& fringe_cfg, const ExperimentConfig& envelope_cfg,
                           double dot, const DetectorArray& det) {
  const double period = optics::fringe_period(fringe_cfg);
  auto x = screen_grid(det, fine_samples_per_pixel(period, det));
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    v[i] = optics::envelope(x[i], envelope_cfg) * optics::fringe_factor(x[i], fringe_cfg, dot);
  }
  return finish_point({std::move(x), std::move(v)}, envelope_cfg, period, det);
}

PointResult evaluate_ensemble_point(const ExperimentConfig& cfg,
                                    const coherence::EnsembleCoherence& ensemble,
                                    const DetectorArray& det) {
  const double period = optics::fringe_period(cfg);
  const auto x = screen_grid(det, fine_samples_per_pixel(period, det));
  return finish_point(coherence::ensemble_intensity(x, cfg, ensemble), cfg, period, det);
}

ExperimentConfig sweep_experiment(const Scenario& s, double wavelength) {
  auto cfg = s.experiment.with_wavelength(wavelength);
  if (s.rescale_screen_per_wavelength) cfg = cfg.with_screen_distance(optics::fraunhofer_distance(cfg));
  return cfg;
}

ExperimentConfig sweep_envelope(const Scenario& s, double wavelength) {
  return s.hold_envelope ? s.experiment : sweep_experiment(s, wavelength);
}

RunReport run_wavelength_sweep(const Scenario& s) {
  s.validate();
  RunReport report;
  report.scenario = s.name;
  report.kind = "wavelength";
  report.provenance = provenance_of(s);
  for (double lambda : s.wavelengths) {
    const auto cfg = sweep_experiment(s, lambda);
    const double nm = lambda * 1e9;
    try {
      const auto point = evaluate_point(cfg, sweep_envelope(s, lambda), 1.0, s.detector);
      report.records.push_back(
          store_point(s, s.name + "_lambda_" + format_param(nm) + "nm", nm, point, cfg));
    } catch (const ValidationError& e) {
      throw ValidationError("wavelength " + format_param(nm) + " nm: " + e.what());
    }
  }
  write_report(report, s.output_dir);
  return report;
}

RunReport run_coherence_sweep(const Scenario& s) {
  s.validate();
  RunReport report;
  report.scenario = s.name;
  report.kind = "coherence";
  report.provenance = provenance_of(s);
  const auto& cfg = s.experiment;
  if (s.coherence_mode == CoherenceMode::Ensemble) {
    const double j12 = coherence::coherency_from_ensemble(s.ensemble).j12.real();
    const auto point = evaluate_ensemble_point(cfg, s.ensemble, s.detector);
    report.records.push_back(store_point(s, s.name + "_ensemble", j12, point, cfg));
  } else {
    const double period = optics::fringe_period(cfg);
    const DetectorArray& det = s.detector;
    for (double delta : s.deltas) {
      try {
        auto x = screen_grid(det, fine_samples_per_pixel(period, det));
        std::vector<double> v(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) v[i] = coherence::decohered_intensity(x[i], cfg, delta);
        const auto point = finish_point({std::move(x), std::move(v)}, cfg, period, det);
        report.records.push_back(
            store_point(s, s.name + "_delta_" + format_param(delta), delta, point, cfg));
      } catch (const ValidationError& e) {
        throw ValidationError("delta " + format_param(delta) + ": " + e.what());
      }
    }
  }
  write_report(report, s.output_dir);
  return report;
}

void write_report(RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto stem = report.scenario + "_" + report.kind;
  report.report_path = dir / (stem + "_report.csv");
  report.provenance_path = dir / (stem + "_provenance.txt");

  std::ofstream csv_out(report.report_path);
  if (!csv_out) throw std::runtime_error("cannot write " + report.report_path.string());
  csv_out << "param,visibility,profile_path,histogram_path\n";
  for (const auto& r : report.records) {
    csv_out << csv::number(r.param) << ',' << csv::number(r.visibility) << ',' << r.profile_path
            << ',' << r.histogram_path << '\n';
  }

  std::ofstream prov(report.provenance_path);
  if (!prov) throw std::runtime_error("cannot write " + report.provenance_path.string());
  prov << "tool_version = " << report.provenance.tool_version << '\n'
       << "seed = " << report.provenance.seed << '\n'
       << "config_hash = " << report.provenance.config_hash << '\n'
       << "sweep = " << report.kind << '\n'
       << "visibility = envelope-compensated, window +-max(fringe period, 2 pixels)\n";
  for (const auto& r : report.records) {
    prov << "point " << csv::number(r.param) << ": screen_distance_m = " << csv::number(r.screen_distance)
         << ", fraunhofer = " << (r.fraunhofer_ok ? "ok" : "VIOLATED")
         << ", raw_visibility = " << csv::number(r.raw_visibility) << '\n';
  }
}

std::vector<RunReportRow> read_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "param,visibility,profile_path,histogram_path") {
    throw ValidationError(path.string() + ": unexpected report header");
  }
  std::vector<RunReportRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = csv::split(line);
    if (f.size() != 4) throw ValidationError(path.string() + ": malformed report row");
    rows.push_back({std::stod(f[0]), std::stod(f[1]), f[2], f[3]});
  }
  return rows;
}

PointResult probe_point(const Scenario& s) {
  const auto p = s.resolved_probe();
  if (p.kind == Probe::Kind::Delta) return evaluate_point(s.experiment, s.experiment, p.value, s.detector);
  return evaluate_point(sweep_experiment(s, p.value), sweep_envelope(s, p.value), 1.0, s.detector);
}

EquivalenceReport run_equivalence_check(const Scenario& a, const Scenario& b) {
  if (!(a.detector == b.detector)) throw ValidationError("equivalence: detector geometries differ");
  const auto& ea = a.experiment;
  const auto& eb = b.experiment;
  if (ea.slit_width() != eb.slit_width() || ea.slit_separation() != eb.slit_separation() ||
      ea.screen_distance() != eb.screen_distance()) {
    throw ValidationError("equivalence: slit geometry or screen distance differ");
  }
  const auto ha = probe_point(a).histogram;
  const auto hb = probe_point(b).histogram;
  const double pa = ha.peak();
  const double pb = hb.peak();
  if (!(pa > 0.0) || !(pb > 0.0)) throw ValidationError("equivalence: empty histogram");

  EquivalenceReport r;
  for (std::size_t k = 0; k < ha.size(); ++k) {
    const double na = ha.bin_values[k] / pa;
    const double nb = hb.bin_values[k] / pb;
    const double d = std::abs(na - nb);
    if (d > r.max_deviation) {
      r.max_deviation = d;
      r.worst_bin = k;
    }
    if (nb > 1e-3) r.max_relative_deviation = std::max(r.max_relative_deviation, d / nb);
  }
  r.passed = r.max_deviation <= kEquivalenceThreshold;
  return r;
}

OracleReport run_oracle(const Scenario& s, int samples_per_slit, std::size_t output_points) {
  const auto& cfg = s.experiment;
  const auto pol = optics::PolarizationPair::parallel();
  const auto aperture = optics::double_slit_aperture(cfg, pol, samples_per_slit);
  const auto x = optics::linspace(s.detector.left_edge(), s.detector.right_edge(), output_points);
  const auto screen = optics::numeric_propagate(aperture, cfg, x).intensity();
  const double scale = optics::absolute_intensity_scale(cfg);

  std::vector<double> exact(x.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    exact[i] = optics::analytic_intensity(x[i], cfg, pol);
    peak = std::max(peak, exact[i]);
  }
  OracleReport r;
  r.aperture_samples = aperture.size();
  const auto num = screen.values();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (exact[i] <= 1e-3 * peak) continue;
    ++r.points_compared;
    const double err = std::abs(num[i] / scale / exact[i] - 1.0);
    if (err > r.max_relative_error) {
      r.max_relative_error = err;
      r.worst_x = x[i];
    }
  }
  r.passed = r.points_compared > 0 && r.max_relative_error <= kOracleTolerance;
  return r;
}

}  // namespace fringelab::runner
