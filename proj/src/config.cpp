#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "fringelab/csv.hpp"
#include "fringelab/error.hpp"
#include "fringelab/runner.hpp"

namespace fringelab::runner {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ValidationError(key + ": not a number: '" + text + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ValidationError(key + ": not a nonnegative integer: '" + text + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const auto t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ValidationError(key + ": expected true/false, got '" + text + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : csv::split(text)) out.push_back(to_double(key, item));
  if (out.empty()) throw ValidationError(key + ": empty list");
  return out;
}

coherence::AngleDistribution to_distribution(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  std::string kind;
  in >> kind;
  if (kind == "uniform") return coherence::AngleDistribution::uniform();
  if (kind == "vonmises") {
    double mu = 0.0, kappa = 0.0;
    if (!(in >> mu >> kappa)) throw ValidationError(key + ": expected 'vonmises <mu_rad> <kappa>'");
    return coherence::AngleDistribution::von_mises(mu, kappa);
  }
  throw ValidationError(key + ": unknown distribution '" + text + "'");
}

Probe to_probe(const std::string& key, const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ValidationError(key + ": expected wavelength:<nm> or delta:<value>");
  const auto kind = trim(std::string_view(text).substr(0, colon));
  const double v = to_double(key, text.substr(colon + 1));
  if (kind == "wavelength") return {Probe::Kind::Wavelength, v / 1e9};
  if (kind == "delta") return {Probe::Kind::Delta, v};
  throw ValidationError(key + ": unknown probe kind '" + kind + "'");
}

bool filesystem_safe(std::string_view name) {
  return !name.empty() && name != "." && name != ".." &&
         std::all_of(name.begin(), name.end(), [](char c) {
           return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
         });
}

}  // namespace

Probe Scenario::resolved_probe() const {
  if (probe) return *probe;
  if (deltas_configured && !deltas.empty()) return {Probe::Kind::Delta, deltas.front()};
  return {Probe::Kind::Wavelength, *std::min_element(wavelengths.begin(), wavelengths.end())};
}

void Scenario::validate() const {
  if (!filesystem_safe(name)) throw ValidationError("name '" + name + "' is empty or not filesystem-safe");
  if (wavelengths.empty()) throw ValidationError("wavelengths_nm: empty sweep");
  for (double w : wavelengths) {
    if (!(w > 0.0)) throw ValidationError("wavelengths_nm: values must be positive");
  }
  for (double d : deltas) coherence::validate(coherence::AnalyticCoherence{d});
  if (coherence_mode == CoherenceMode::Ensemble) coherence::validate(ensemble);
  if (probe) {
    if (probe->kind == Probe::Kind::Delta) coherence::validate(coherence::AnalyticCoherence{probe->value});
    if (probe->kind == Probe::Kind::Wavelength && !(probe->value > 0.0)) {
      throw ValidationError("probe: wavelength must be positive");
    }
  }
}

std::string Scenario::canonical() const {
  std::ostringstream out;
  auto list = [](const std::vector<double>& v, double scale) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + csv::number(v[i] * scale);
    return s;
  };
  out << "name = " << name << '\n'
      << "slit_width_m = " << csv::number(experiment.slit_width()) << '\n'
      << "slit_sep_m = " << csv::number(experiment.slit_separation()) << '\n'
      << "ref_wavelength_m = " << csv::number(experiment.wavelength()) << '\n'
      << "screen_distance_m = " << csv::number(experiment.screen_distance()) << '\n'
      << "pixel_m = " << csv::number(detector.pixel_width()) << '\n'
      << "pixel_count = " << detector.pixel_count() << '\n'
      << "pixel_offset_m = " << csv::number(detector.center_offset()) << '\n'
      << "wavelengths_m = " << list(wavelengths, 1.0) << '\n'
      << "delta = " << list(deltas, 1.0) << '\n'
      << "coherence_mode = " << (coherence_mode == CoherenceMode::Analytic ? "analytic" : "ensemble") << '\n'
      << "theta1_distribution = " << ensemble.theta1.name() << '\n'
      << "theta2_distribution = " << ensemble.theta2.name() << '\n'
      << "joint_offset_rad = " << (ensemble.joint_offset ? csv::number(*ensemble.joint_offset) : "none") << '\n'
      << "mc_samples = " << ensemble.sample_count << '\n'
      << "seed = " << ensemble.seed << '\n'
      << "hold_envelope = " << (hold_envelope ? "true" : "false") << '\n'
      << "rescale_L_per_lambda = " << (rescale_screen_per_wavelength ? "true" : "false") << '\n';
  const auto p = resolved_probe();
  out << "probe = " << (p.kind == Probe::Kind::Delta ? "delta:" : "wavelength_m:") << csv::number(p.value) << '\n';
  return out.str();
}

Scenario parse_scenario(std::string_view text, std::string default_name) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    auto key = trim(std::string_view(body).substr(0, eq));
    auto value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ValidationError("line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(key, value).second) throw ValidationError("duplicate key '" + key + "'");
  }

  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto v = it->second;
    kv.erase(it);
    return v;
  };
  auto num = [&](const std::string& key, double fallback) {
    const auto v = take(key);
    return v ? to_double(key, *v) : fallback;
  };

  Scenario s;
  s.name = take("name").value_or(std::move(default_name));
  const double a = num("slit_width_mm", 1.0) / 1e3;
  const double b = num("slit_sep_mm", 3.0) / 1e3;
  const double ref = num("ref_wavelength_nm", 800.0) / 1e9;
  if (!(a > 0.0) || !(ref > 0.0)) throw ValidationError("slit width and reference wavelength must be positive");
  const double screen = num("screen_distance_m", 4.0 * a * a / ref);
  s.experiment = optics::ExperimentConfig(a, b, ref, screen);

  const auto count = take("pixel_count");
  const std::uint64_t n = count ? to_u64("pixel_count", *count) : 370;
  if (n < 1 || n > 100'000'000) throw ValidationError("pixel_count: must be in [1, 1e8]");
  s.detector = detector::DetectorArray(static_cast<int>(n), num("pixel_um", 65.0) / 1e6,
                                       num("pixel_offset_um", 0.0) / 1e6);

  if (const auto v = take("wavelengths_nm")) {
    for (double w : to_list("wavelengths_nm", *v)) s.wavelengths.push_back(w / 1e9);
  } else {
    s.wavelengths = {800e-9, 400e-9, 200e-9, 100e-9, 50e-9, 20e-9};
  }
  if (const auto v = take("delta")) {
    s.deltas = to_list("delta", *v);
    s.deltas_configured = true;
  } else {
    for (int i = 0; i <= 10; ++i) s.deltas.push_back(i / 10.0);
  }

  if (const auto v = take("coherence_mode")) {
    if (*v == "analytic") {
      s.coherence_mode = CoherenceMode::Analytic;
    } else if (*v == "ensemble") {
      s.coherence_mode = CoherenceMode::Ensemble;
    } else {
      throw ValidationError("coherence_mode: expected analytic or ensemble");
    }
  }
  if (const auto v = take("theta1_distribution")) s.ensemble.theta1 = to_distribution("theta1_distribution", *v);
  if (const auto v = take("theta2_distribution")) s.ensemble.theta2 = to_distribution("theta2_distribution", *v);
  if (const auto v = take("joint_offset_rad")) s.ensemble.joint_offset = to_double("joint_offset_rad", *v);
  if (const auto v = take("mc_samples")) s.ensemble.sample_count = to_u64("mc_samples", *v);
  else s.ensemble.sample_count = 10'000;
  if (const auto v = take("seed")) s.ensemble.seed = to_u64("seed", *v);
  if (const auto v = take("hold_envelope")) s.hold_envelope = to_bool("hold_envelope", *v);
  if (const auto v = take("rescale_L_per_lambda")) s.rescale_screen_per_wavelength = to_bool("rescale_L_per_lambda", *v);
  if (const auto v = take("probe")) s.probe = to_probe("probe", *v);
  if (const auto v = take("output_dir")) s.output_dir = *v;

  if (!kv.empty()) throw ValidationError("unknown config key '" + kv.begin()->first + "'");
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path.stem().string());
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace fringelab::runner
