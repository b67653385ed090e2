// fringe-lab: two-slit fringe washout by detector averaging and by
// polarization decoherence.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fringelab/error.hpp"
#include "fringelab/runner.hpp"

namespace {

namespace rn = fringelab::runner;

constexpr int kExitValidation = 1;
constexpr int kExitCheckFailed = 2;

struct Overrides {
  std::optional<double> wavelength_nm;
  std::optional<double> delta;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  bool rescale = false;
};

rn::Scenario load(const std::string& path, const Overrides& o) {
  auto s = rn::load_scenario(path);
  if (o.wavelength_nm) s.wavelengths = {*o.wavelength_nm / 1e9};
  if (o.delta) {
    s.deltas = {*o.delta};
    s.deltas_configured = true;
  }
  if (o.seed) s.ensemble.seed = *o.seed;
  if (o.out) s.output_dir = *o.out;
  if (o.rescale) s.rescale_screen_per_wavelength = true;
  s.validate();
  return s;
}

void print_report(const rn::RunReport& r, const char* param_name) {
  std::printf("%-12s %-12s %-12s %s\n", param_name, "visibility", "raw", "histogram");
  for (const auto& rec : r.records) {
    std::printf("%-12.6g %-12.6f %-12.6f %s%s\n", rec.param, rec.visibility, rec.raw_visibility,
                rec.histogram_path.c_str(), rec.fraunhofer_ok ? "" : "  [L < 4a^2/lambda]");
  }
  std::printf("report: %s\n", r.report_path.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fringe-lab: classical limit of the two-slit experiment"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(rn::kToolVersion));

  Overrides o;
  std::string config, config_a, config_b;

  auto* wave = app.add_subcommand("wavelength-sweep", "Fixed detector, decreasing wavelength");
  wave->add_option("--config", config, "Scenario file")->required()->check(CLI::ExistingFile);
  wave->add_option("--out", o.out, "Output directory");
  wave->add_option("--wavelength-nm", o.wavelength_nm, "Run a single wavelength");
  wave->add_flag("--rescale-L-per-lambda", o.rescale, "Move the screen to 4a^2/lambda at every point");

  auto* coh = app.add_subcommand("coherence-sweep", "Reference wavelength, varying delta");
  coh->add_option("--config", config, "Scenario file")->required()->check(CLI::ExistingFile);
  coh->add_option("--out", o.out, "Output directory");
  coh->add_option("--delta", o.delta, "Run a single delta");
  coh->add_option("--seed", o.seed, "Ensemble seed");

  auto* eq = app.add_subcommand("equivalence", "Compare the probe histograms of two scenarios");
  eq->add_option("--config-a", config_a, "First scenario")->required()->check(CLI::ExistingFile);
  eq->add_option("--config-b", config_b, "Second scenario")->required()->check(CLI::ExistingFile);

  auto* oracle = app.add_subcommand("oracle", "Quadrature propagation vs closed form");
  oracle->add_option("--config", config, "Scenario file")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*wave) {
      print_report(rn::run_wavelength_sweep(load(config, o)), "lambda_nm");
    } else if (*coh) {
      const auto s = load(config, o);
      const bool ensemble = s.coherence_mode == rn::CoherenceMode::Ensemble;
      print_report(rn::run_coherence_sweep(s), ensemble ? "j12" : "delta");
    } else if (*eq) {
      const auto r = rn::run_equivalence_check(rn::load_scenario(config_a), rn::load_scenario(config_b));
      std::printf("max peak-normalized deviation: %.6g (threshold %.3g, worst bin %zu)\n",
                  r.max_deviation, rn::kEquivalenceThreshold, r.worst_bin);
      std::printf("max bin-relative deviation:    %.6g\n", r.max_relative_deviation);
      std::printf("%s\n", r.passed ? "PASS" : "FAIL");
      return r.passed ? 0 : kExitCheckFailed;
    } else if (*oracle) {
      const auto r = rn::run_oracle(load(config, o));
      std::printf("aperture samples: %zu, compared points: %zu\n", r.aperture_samples, r.points_compared);
      std::printf("max relative error: %.3e at x = %.6g m (tolerance %.0e)\n", r.max_relative_error,
                  r.worst_x, rn::kOracleTolerance);
      std::printf("%s\n", r.passed ? "PASS" : "FAIL");
      return r.passed ? 0 : kExitCheckFailed;
    }
  } catch (const fringelab::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
