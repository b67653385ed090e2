#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fringelab/coherence.hpp"
#include "fringelab/detector.hpp"
#include "fringelab/optics.hpp"

namespace fringelab::runner {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Which single histogram a scenario contributes to an equivalence check.
struct Probe {
  enum class Kind { Wavelength, Delta };
  Kind kind = Kind::Wavelength;
  double value = 0.0;  // meters for Wavelength, dimensionless for Delta
};

enum class CoherenceMode { Analytic, Ensemble };

/// A fully resolved run description. `experiment` carries the reference
/// wavelength and the (fixed) screen distance.
struct Scenario {
  std::string name = "scenario";
  optics::ExperimentConfig experiment{1e-3, 3e-3, 800e-9, 5.0};
  detector::DetectorArray detector{370, 65e-6};
  std::vector<double> wavelengths;  // meters
  std::vector<double> deltas;
  CoherenceMode coherence_mode = CoherenceMode::Analytic;
  coherence::EnsembleCoherence ensemble;
  bool hold_envelope = true;
  bool rescale_screen_per_wavelength = false;
  std::optional<Probe> probe;
  std::filesystem::path output_dir = "out";
  bool deltas_configured = false;

  /// Explicit probe, else delta:<first delta> when deltas were configured,
  /// else wavelength:<shortest wavelength>.
  Probe resolved_probe() const;
  /// Canonical key = value dump; its hash goes into the provenance block.
  std::string canonical() const;
  void validate() const;
};

/// Parse `key = value` lines (SI-suffixed keys, `#` comments).
Scenario parse_scenario(std::string_view text, std::string default_name = "scenario");
Scenario load_scenario(const std::filesystem::path& path);

/// Screen profile, its detector acquisition, and the fringe visibility of
/// one sweep point.
struct PointResult {
  optics::IntensityProfile profile;
  detector::AcquiredHistogram histogram;
  detector::AcquiredHistogram envelope_histogram;
  detector::Window window;
  double visibility = 0.0;      // envelope-compensated
  double raw_visibility = 0.0;  // plain (Imax - Imin)/(Imax + Imin)
};

/// Visibility window half-width: max(fringe period, 2 pixel widths).
double window_half_width(double fringe_period, const detector::DetectorArray& det);

/// Sub-samples per pixel for the fine screen grid: 32 per min(period, pixel),
/// never fewer than 16 per pixel or 8 per fringe period.
int fine_samples_per_pixel(double fringe_period, const detector::DetectorArray& det);

/// Fringes from `fringe_cfg` with parameter `dot` under the envelope of
/// `envelope_cfg`.
PointResult evaluate_point(const optics::ExperimentConfig& fringe_cfg,
                           const optics::ExperimentConfig& envelope_cfg, double dot,
                           const detector::DetectorArray& det);

/// Same, with the screen profile averaged over a polarization ensemble.
PointResult evaluate_ensemble_point(const optics::ExperimentConfig& cfg,
                                    const coherence::EnsembleCoherence& ensemble,
                                    const detector::DetectorArray& det);

/// Experiment used at one sweep wavelength (screen fixed unless rescaling).
optics::ExperimentConfig sweep_experiment(const Scenario& s, double wavelength);
/// Experiment whose envelope is drawn at one sweep wavelength: the
/// reference experiment when the envelope is held.
optics::ExperimentConfig sweep_envelope(const Scenario& s, double wavelength);

struct RunRecord {
  double param = 0.0;
  double visibility = 0.0;
  double raw_visibility = 0.0;
  std::string profile_path;    // relative to the output directory
  std::string histogram_path;  // relative to the output directory
  bool fraunhofer_ok = true;
  double screen_distance = 0.0;
};

struct Provenance {
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string tool_version{kToolVersion};
};

struct RunReport {
  std::string scenario;
  std::string kind;  // "wavelength" or "coherence"
  std::vector<RunRecord> records;
  Provenance provenance;
  std::filesystem::path report_path;
  std::filesystem::path provenance_path;
};

/// Fixed detector and screen, one point per configured wavelength.
RunReport run_wavelength_sweep(const Scenario& scenario);
/// Reference wavelength, one point per delta (analytic mode) or a single
/// ensemble point whose param is the sample J12 (ensemble mode).
RunReport run_coherence_sweep(const Scenario& scenario);

/// Writes <scenario>_<kind>_report.csv and _provenance.txt and records their paths.
void write_report(RunReport& report, const std::filesystem::path& dir);

struct RunReportRow {
  double param;
  double visibility;
  std::string profile_path;
  std::string histogram_path;
};
std::vector<RunReportRow> read_report_csv(const std::filesystem::path& path);

inline constexpr double kEquivalenceThreshold = 5e-2;

struct EquivalenceReport {
  double max_deviation = 0.0;           // max |a/max a - b/max b|
  double max_relative_deviation = 0.0;  // max |a - b| / b, peak-normalized, b > 1e-3
  std::size_t worst_bin = 0;
  bool passed = false;
};

/// The single histogram a scenario's probe produces.
PointResult probe_point(const Scenario& s);

/// Compare the two scenarios' probe histograms, each rescaled to its own
/// peak. Throws ValidationError when detector or slit geometry differ.
EquivalenceReport run_equivalence_check(const Scenario& a, const Scenario& b);

inline constexpr double kOracleTolerance = 1e-4;

struct OracleReport {
  double max_relative_error = 0.0;
  double worst_x = 0.0;
  std::size_t points_compared = 0;
  std::size_t aperture_samples = 0;
  bool passed = false;
};

/// Quadrature propagation of the parallel double slit vs the closed form,
/// over the detector span, at the reference wavelength.
OracleReport run_oracle(const Scenario& s, int samples_per_slit = 2500,
                        std::size_t output_points = 4801);

std::uint64_t fnv1a(std::string_view text);

}  // namespace fringelab::runner
