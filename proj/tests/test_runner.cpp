#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fringelab/error.hpp"
#include "fringelab/runner.hpp"

using namespace fringelab;
using namespace fringelab::runner;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "fringelab_runner_test" / name;
  std::filesystem::remove_all(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Scenario with_output(std::string_view text, const std::string& dir) {
  auto s = parse_scenario(text, dir);
  s.output_dir = scratch(dir);
  return s;
}

}  // namespace

TEST_CASE("config defaults") {
  const auto s = parse_scenario("", "x");
  CHECK(s.name == "x");
  CHECK(s.experiment.slit_width() == 1e-3);
  CHECK(s.experiment.slit_separation() == 3e-3);
  CHECK(s.experiment.wavelength() == 800e-9);
  CHECK(s.experiment.screen_distance() == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(s.detector.pixel_count() == 370);
  CHECK(s.detector.pixel_width() == doctest::Approx(65e-6));
  CHECK(s.wavelengths.size() == 6);
  CHECK(s.deltas.size() == 11);
  CHECK(s.resolved_probe().kind == Probe::Kind::Wavelength);
  CHECK(s.resolved_probe().value == doctest::Approx(20e-9));
}

TEST_CASE("config parsing") {
  const auto s = parse_scenario(R"(
    # comment line
    name = run_1
    slit_width_mm = 0.5   # trailing comment
    slit_sep_mm = 2
    screen_distance_m = 3
    wavelengths_nm = 600,300
    delta = 0.25
    seed = 99
  )");
  CHECK(s.name == "run_1");
  CHECK(s.experiment.slit_width() == 0.5e-3);
  CHECK(s.experiment.screen_distance() == 3.0);
  CHECK(s.wavelengths == std::vector<double>{600e-9, 300e-9});
  CHECK(s.resolved_probe().kind == Probe::Kind::Delta);
  CHECK(s.resolved_probe().value == 0.25);
  CHECK(s.ensemble.seed == 99);

  CHECK_THROWS_AS(parse_scenario("bogus_key = 1"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("seed = 1\nseed = 2"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("no equals sign"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("slit_width_mm = abc"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("slit_width_mm = 4"), ValidationError);  // overlapping slits
  CHECK_THROWS_AS(parse_scenario("delta = 0.5, 1.2"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("wavelengths_nm = 800, -1"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("name = ../etc"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("pixel_count = 0"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("coherence_mode = ensemble\nmc_samples = 0"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("theta1_distribution = cauchy"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("probe = colour:3"), ValidationError);
}

TEST_CASE("canonical dump and hash are stable") {
  const auto a = parse_scenario("seed = 1", "n");
  const auto b = parse_scenario("seed=1\n# same thing\n", "n");
  CHECK(a.canonical() == b.canonical());
  CHECK(fnv1a(a.canonical()) == fnv1a(b.canonical()));
  CHECK(fnv1a(a.canonical()) != fnv1a(parse_scenario("seed = 2", "n").canonical()));
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("sampling and window rules") {
  const detector::DetectorArray det(370, 65e-6);
  CHECK(fine_samples_per_pixel(1.3333e-3, det) == 32);
  CHECK(fine_samples_per_pixel(3.3333e-5, det) >= 62);
  CHECK(window_half_width(1.3333e-3, det) == 1.3333e-3);
  CHECK(window_half_width(3.3333e-5, det) == doctest::Approx(130e-6));
  CHECK(window_half_width(8.3333e-5, det) == doctest::Approx(130e-6));
}

TEST_CASE("wavelength sweep writes a report whose files reproduce it") {
  const auto s = with_output("", "wave");
  const auto report = run_wavelength_sweep(s);
  REQUIRE(report.records.size() == 6);
  const auto rows = read_report_csv(report.report_path);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = report.records[i];
    CHECK(r.visibility >= 0.0);
    CHECK(r.visibility <= 1.0);
    CHECK(r.fraunhofer_ok == sweep_experiment(s, r.param * 1e-9).in_fraunhofer_regime());
    CHECK(r.fraunhofer_ok == (i == 0));
    REQUIRE(std::filesystem::exists(s.output_dir / rows[i].profile_path));
    REQUIRE(std::filesystem::exists(s.output_dir / rows[i].histogram_path));
    // Re-derive the visibility from the stored histogram.
    const auto hist = detector::read_histogram_csv(s.output_dir / rows[i].histogram_path);
    const double lambda = rows[i].param * 1e-9;
    const auto expected = evaluate_point(sweep_experiment(s, lambda), sweep_envelope(s, lambda), 1.0, s.detector);
    const double v = detector::compensated_visibility(hist, expected.envelope_histogram, expected.window);
    CHECK(std::abs(v - rows[i].visibility) <= 1e-9);
  }
  CHECK(std::filesystem::exists(report.provenance_path));
  CHECK(slurp(report.provenance_path).find("config_hash = fnv1a64:") != std::string::npos);
}

TEST_CASE("wavelength sweep trend") {
  const auto report = run_wavelength_sweep(with_output("", "trend"));
  const auto& r = report.records;
  // 800, 400, 200, 100, 50, 20 nm: decreasing down to the washout point, small beyond.
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i].visibility < r[i - 1].visibility);
  CHECK(r[4].visibility <= 0.25);
  CHECK(r[5].visibility <= 0.25);
}

TEST_CASE("rescaled screen keeps the fringe pattern fixed") {
  const auto report = run_wavelength_sweep(with_output("wavelengths_nm = 800, 100\nrescale_L_per_lambda = true", "rescale"));
  CHECK(report.records[1].screen_distance == doctest::Approx(40.0));
  CHECK(report.records[1].visibility == doctest::Approx(report.records[0].visibility).epsilon(1e-9));
}

TEST_CASE("coherence sweep is monotone in delta") {
  const auto report = run_coherence_sweep(with_output("", "coh"));
  REQUIRE(report.records.size() == 11);
  for (std::size_t i = 1; i < report.records.size(); ++i) {
    CHECK(report.records[i].visibility >= report.records[i - 1].visibility);
  }
  CHECK(report.records.front().visibility <= 1e-12);
}

TEST_CASE("ensemble coherence run") {
  const auto s = with_output("coherence_mode = ensemble\nmc_samples = 2000\nseed = 4", "ens");
  const auto report = run_coherence_sweep(s);
  REQUIRE(report.records.size() == 1);
  const double j12 = coherence::coherency_from_ensemble(s.ensemble).j12.real();
  CHECK(report.records[0].param == j12);
  // V of 1 + J cos(...) is |J| up to pixel averaging.
  CHECK(report.records[0].visibility == doctest::Approx(std::abs(j12)).epsilon(0.02));
}

TEST_CASE("outputs are byte-identical across runs") {
  const char* text = "coherence_mode = ensemble\nmc_samples = 500\nseed = 77\nwavelengths_nm = 800, 20";
  const auto a = with_output(text, "det_a");
  auto b = parse_scenario(text, "det_a");
  b.output_dir = scratch("det_b");
  const auto ra = run_coherence_sweep(a);
  const auto rb = run_coherence_sweep(b);
  CHECK(slurp(ra.report_path) == slurp(rb.report_path));
  CHECK(slurp(ra.provenance_path) == slurp(rb.provenance_path));
  CHECK(slurp(a.output_dir / ra.records[0].histogram_path) == slurp(b.output_dir / rb.records[0].histogram_path));
  const auto wa = run_wavelength_sweep(a);
  const auto wb = run_wavelength_sweep(b);
  CHECK(slurp(a.output_dir / wa.records[1].profile_path) == slurp(b.output_dir / wb.records[1].profile_path));
}

TEST_CASE("equivalence check") {
  const auto wave = parse_scenario("probe = wavelength:20");
  const auto incoherent = parse_scenario("delta = 0");
  const auto coherent = parse_scenario("delta = 1");

  CHECK(run_equivalence_check(wave, wave).max_deviation == 0.0);
  CHECK(run_equivalence_check(wave, wave).passed);

  const auto classical = run_equivalence_check(wave, incoherent);
  CHECK(classical.passed);
  CHECK(classical.max_deviation <= 0.05);

  const auto mismatch = run_equivalence_check(coherent, incoherent);
  CHECK_FALSE(mismatch.passed);
  CHECK(mismatch.max_deviation > 0.8);

  CHECK_THROWS_AS(run_equivalence_check(wave, parse_scenario("pixel_um = 60\ndelta = 0")), ValidationError);
  CHECK_THROWS_AS(run_equivalence_check(wave, parse_scenario("screen_distance_m = 6\ndelta = 0")), ValidationError);
}

TEST_CASE("oracle check on a coarse grid") {
  const auto r = run_oracle(parse_scenario(""), 2000, 601);
  CHECK(r.points_compared > 100);
  CHECK(r.max_relative_error < 1e-4);
  CHECK(r.passed);
}
