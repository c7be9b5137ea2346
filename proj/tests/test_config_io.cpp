// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pairgen/checksum.hpp"
#include "pairgen/config.hpp"
#include "pairgen/expsim.hpp"
#include "pairgen/sweepio.hpp"
#include "test_helpers.hpp"

using namespace pairgen;

namespace {

namespace fs = std::filesystem;

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "pairgen_test";
  fs::create_directories(dir);
  return dir;
}

std::string minimal_config() {
  return "[materials]\ndatabase = " + (testutil::data_dir() / "materials.db").string() + "\n";
}

}  // namespace

TEST_CASE("config parsing: defaults, units, auto fields") {
  const RunConfig cfg = parse_config(minimal_config(), "test.cfg");
  CHECK(cfg.pump_nm == 405.0);
  CHECK(cfg.signal_nm == 776.0);
  CHECK(cfg.crystal_length_mm == 5.0);
  CHECK(cfg.brightness_pairs_per_s_mw == 65000.0);
  CHECK(cfg.coincidence_window_ns == 4.0);
  CHECK(cfg.heralding_signal == 0.27);
  CHECK(cfg.heralding_idler == 0.22);
  CHECK_FALSE(cfg.compensator_length_mm.has_value());
  CHECK(cfg.checksum == fnv1a64(minimal_config()));

  const RunConfig with = parse_config(
      minimal_config() + "[layout]\ncompensator_length_mm = 2.5 # inline comment\n", "t.cfg");
  CHECK(with.compensator_length_mm.has_value());
  CHECK(*with.compensator_length_mm == 2.5);
}

TEST_CASE("config parsing rejects unknown keys and bad numbers") {
  CHECK_THROWS_WITH_AS(parse_config(minimal_config() + "[layout]\ncrystal_length = 5\n", "t.cfg"),
                       doctest::Contains("unknown key"), ConfigError);
  CHECK_THROWS_WITH_AS(
      parse_config(minimal_config() + "[layout]\ncrystal_length_mm = five\n", "t.cfg"),
      doctest::Contains("cannot parse"), ConfigError);
  CHECK_THROWS_AS(parse_config(minimal_config() + "no equals sign\n", "t.cfg"), ConfigError);
  CHECK_THROWS_AS(parse_config(minimal_config() + "[layout\n", "t.cfg"), ConfigError);
  CHECK_THROWS_AS(parse_config("[materials]\ndatabase = /missing.db\n", "t.cfg"), ConfigError);
  CHECK_THROWS_AS(parse_config("", "t.cfg"), ConfigError);  // database required
}

TEST_CASE("config paths resolve relative to the config file") {
  const fs::path dir = scratch();
  fs::copy_file(testutil::data_dir() / "materials.db", dir / "materials.db",
                fs::copy_options::overwrite_existing);
  std::ofstream(dir / "run.cfg") << "[materials]\ndatabase = materials.db\n";
  const RunConfig cfg = load_config(dir / "run.cfg");
  CHECK(cfg.material_database == dir / "materials.db");
  CHECK(cfg.origin == dir / "run.cfg");
}

TEST_CASE("default shipped config loads and validates") {
  const RunConfig cfg = load_config(testutil::data_dir() / "default.cfg");
  CHECK(cfg.cut_angle_deg == 28.8);
  CHECK(cfg.state_p == 0.98005);
  CHECK(cfg.replicate_experiments == 500);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("sweep files round-trip") {
  ExperimentConfig ec;
  ec.pump_power_mw = 0.1;
  ec.brightness_pairs_per_s_mw = 65000.0;
  ec.integration_time_s = 1.0;
  ec.state = make_state(0.98, 0.5, 3.14159265358979);
  ec.heralding_s = 0.27;
  ec.heralding_i = 0.22;
  ec.seed = 11;
  std::vector<double> angles;
  for (int d = -90; d <= 90; d += 10) angles.push_back(d);
  const MeasurementRecord rec = generate_sweep(ec, angles);

  const fs::path path = scratch() / "sweep_roundtrip.dat";
  write_sweep(path, rec, {0xabcd, 11});
  const MeasurementRecord back = read_sweep(path);
  CHECK(back.angles_deg == rec.angles_deg);
  CHECK(back.coincidences == rec.coincidences);
  CHECK(back.singles_1 == rec.singles_1);
  CHECK(back.singles_2 == rec.singles_2);
  CHECK(back.integration_s == rec.integration_s);

  // provenance comments are present
  std::ifstream in(path);
  std::string first, second;
  std::getline(in, first);
  std::getline(in, second);
  CHECK(first == "# pairgen sweep v1");
  CHECK(second.find("version:") != std::string::npos);
}

TEST_CASE("sweep files without singles columns") {
  const fs::path path = scratch() / "sweep_plain.dat";
  std::ofstream out(path);
  out << "angle_deg coincidences integration_s\n";
  for (int d = -90; d <= 90; d += 10) out << d << " " << 100 + d << " 1.0\n";
  out.close();
  const MeasurementRecord rec = read_sweep(path);
  CHECK(rec.angles_deg.size() == 19);
  CHECK(rec.singles_1.empty());
  CHECK(rec.coincidences[0] == 10.0);
}

TEST_CASE("sweep reader rejects malformed files") {
  const fs::path no_header = scratch() / "no_header.dat";
  std::ofstream(no_header) << "0 100 1\n10 90 1\n";
  CHECK_THROWS_WITH_AS(read_sweep(no_header), doctest::Contains("header"), std::runtime_error);

  const fs::path bad_cols = scratch() / "bad_cols.dat";
  std::ofstream(bad_cols) << "angle_deg counts integration_s\n0 1 1\n";
  CHECK_THROWS_AS(read_sweep(bad_cols), std::runtime_error);

  const fs::path bad_row = scratch() / "bad_row.dat";
  {
    std::ofstream out(bad_row);
    out << "angle_deg coincidences integration_s\n";
    for (int d = -90; d <= 90; d += 10) out << d << " 100 1\n";
    out << "45 oops 1\n";
  }
  CHECK_THROWS_WITH_AS(read_sweep(bad_row), doctest::Contains("malformed"), std::runtime_error);

  CHECK_THROWS_AS(read_sweep(scratch() / "missing.dat"), std::runtime_error);
}

TEST_CASE("comma-delimited rows are accepted") {
  const fs::path path = scratch() / "sweep_csv.dat";
  std::ofstream out(path);
  out << "angle_deg coincidences integration_s\n";
  for (int d = -90; d <= 90; d += 10) out << d << "," << 50 << "," << 1.0 << "\n";
  out.close();
  CHECK(read_sweep(path).coincidences[0] == 50.0);
}
