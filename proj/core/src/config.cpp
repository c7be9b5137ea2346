// SPDX-License-Identifier: Apache-2.0
#include "pairgen/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "pairgen/checksum.hpp"

namespace pairgen {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + value + "' as a number");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("key '" + key + "': cannot parse '" + value + "' as an integer");
  }
  return v;
}

int parse_int(const std::string& key, const std::string& value) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("key '" + key + "': cannot parse '" + value + "' as an integer");
  }
  return v;
}

std::optional<double> parse_auto(const std::string& key, const std::string& value) {
  if (value == "auto") return std::nullopt;
  return parse_double(key, value);
}

}  // namespace

void RunConfig::validate() const {
  if (material_database.empty()) {
    throw ConfigError("materials.database is required");
  }
  if (!std::filesystem::exists(material_database)) {
    throw ConfigError("material database not found: " + material_database.string());
  }
  if (!(pump_nm > 0.0) || !(signal_nm > pump_nm) || !(degenerate_nm > pump_nm)) {
    throw ConfigError("need pump_nm > 0 and signal/degenerate wavelengths above the pump");
  }
  if (!(band_signal_lo_nm > pump_nm) || !(hwp_band_lo_nm > pump_nm)) {
    throw ConfigError("band wavelengths must lie above the pump");
  }
  if (!(sweep_step_deg > 0.0) || !(sweep_stop_deg > sweep_start_deg)) {
    throw ConfigError("sweep needs stop > start and a positive step");
  }
  if (n_bootstrap < 100) {
    throw ConfigError("fit.n_bootstrap must be at least 100");
  }
  if (replicate_experiments < 1 || replicate_bootstrap < 100) {
    throw ConfigError("replicate needs experiments >= 1 and bootstrap >= 100");
  }
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& origin) {
  RunConfig cfg;
  cfg.checksum = fnv1a64(text);
  cfg.origin = origin;
  const std::filesystem::path base = origin.empty() ? "." : origin.parent_path();

  using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;
  static const std::map<std::string, Setter> setters = {
      {"materials.database",
       [](RunConfig& c, const std::string&, const std::string& v) {
         c.material_database = v;  // resolved against the config dir after parsing
       }},
      {"materials.crystal",
       [](RunConfig& c, const std::string&, const std::string& v) { c.crystal = v; }},
      {"materials.compensator",
       [](RunConfig& c, const std::string&, const std::string& v) { c.compensator = v; }},
      {"materials.hwp_quartz",
       [](RunConfig& c, const std::string&, const std::string& v) { c.hwp_quartz = v; }},
      {"materials.hwp_mgf2",
       [](RunConfig& c, const std::string&, const std::string& v) { c.hwp_mgf2 = v; }},
      {"layout.crystal_length_mm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.crystal_length_mm = parse_double(k, v);
       }},
      {"layout.cut_angle_deg",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.cut_angle_deg = parse_double(k, v);
       }},
      {"layout.pump_nm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.pump_nm = parse_double(k, v);
       }},
      {"layout.signal_nm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.signal_nm = parse_double(k, v);
       }},
      {"layout.degenerate_nm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.degenerate_nm = parse_double(k, v);
       }},
      {"layout.compensator_length_mm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.compensator_length_mm = parse_auto(k, v);
       }},
      {"layout.hwp_t_quartz_mm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.hwp_t_quartz_mm = parse_auto(k, v);
       }},
      {"layout.hwp_t_mgf2_mm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.hwp_t_mgf2_mm = parse_auto(k, v);
       }},
      {"band.signal_lo_nm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.band_signal_lo_nm = parse_double(k, v);
       }},
      {"band.signal_hi_nm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.band_signal_hi_nm = parse_double(k, v);
       }},
      {"band.hwp_lo_nm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.hwp_band_lo_nm = parse_double(k, v);
       }},
      {"band.hwp_hi_nm",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.hwp_band_hi_nm = parse_double(k, v);
       }},
      {"beam.pump_fwhm_major_um",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.pump_fwhm_major_um = parse_double(k, v);
       }},
      {"beam.pump_fwhm_minor_um",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.pump_fwhm_minor_um = parse_double(k, v);
       }},
      {"beam.collection_fwhm_um",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.collection_fwhm_um = parse_double(k, v);
       }},
      {"experiment.pump_power_mw",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.pump_power_mw = parse_double(k, v);
       }},
      {"experiment.brightness_pairs_per_s_mw",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.brightness_pairs_per_s_mw = parse_double(k, v);
       }},
      {"experiment.coincidence_window_ns",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.coincidence_window_ns = parse_double(k, v);
       }},
      {"experiment.integration_time_s",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.integration_time_s = parse_double(k, v);
       }},
      {"experiment.state_p",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.state_p = parse_double(k, v);
       }},
      {"experiment.state_x",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.state_x = parse_double(k, v);
       }},
      {"experiment.state_theta_rad",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.state_theta_rad = parse_double(k, v);
       }},
      {"experiment.heralding_signal",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.heralding_signal = parse_double(k, v);
       }},
      {"experiment.heralding_idler",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.heralding_idler = parse_double(k, v);
       }},
      {"experiment.dark_rate_signal_hz",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.dark_rate_signal_hz = parse_double(k, v);
       }},
      {"experiment.dark_rate_idler_hz",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.dark_rate_idler_hz = parse_double(k, v);
       }},
      {"experiment.dead_time_us",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.dead_time_us = parse_double(k, v);
       }},
      {"experiment.seed",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.seed = parse_u64(k, v);
       }},
      {"sweep.angle_start_deg",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.sweep_start_deg = parse_double(k, v);
       }},
      {"sweep.angle_stop_deg",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.sweep_stop_deg = parse_double(k, v);
       }},
      {"sweep.angle_step_deg",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.sweep_step_deg = parse_double(k, v);
       }},
      {"fit.n_bootstrap",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.n_bootstrap = parse_int(k, v);
       }},
      {"fit.accidental_window_ns",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.fit_accidental_window_ns = parse_double(k, v);
       }},
      {"replicate.experiments",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.replicate_experiments = parse_int(k, v);
       }},
      {"replicate.bootstrap",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.replicate_bootstrap = parse_int(k, v);
       }},
  };

  std::istringstream stream{std::string(text)};
  std::string raw, section;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(origin.string() + ":" + std::to_string(line_no) +
                          ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin.string() + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    const std::string key = section + "." + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError(origin.string() + ":" + std::to_string(line_no) + ": unknown key '" +
                        key + "'");
    }
    it->second(cfg, key, value);
  }
  if (!cfg.material_database.empty() && !cfg.material_database.is_absolute()) {
    cfg.material_database = base / cfg.material_database;
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

}  // namespace pairgen
