#pragma once

#include <filesystem>
#include <string>

#include "mcmt/core/types.hpp"
#include "mcmt/harness/scenario.hpp"
#include "mcmt/ica/config.hpp"
#include "mcmt/scmt/config.hpp"

namespace mcmt::harness {

struct RunConfig {
  scmt::TrackerConfig tracker;
  ica::IcaConfig ica;
  CameraTopology topology;
  std::filesystem::path input;
  std::filesystem::path output;
  double iou_min = 0.5;  // evaluation overlap threshold
  int jobs = 1;

  void validate() const;
};

// JSON (de)serialization. Keys mirror the struct field names; unknown keys, wrong types
// and out-of-range values raise ConfigError, malformed JSON raises ParseError.
std::string topology_to_json(const CameraTopology& t);
CameraTopology topology_from_json(const std::string& text);

std::string scenario_to_json(const ScenarioConfig& c);
ScenarioConfig scenario_from_json(const std::string& text);

// Run config file: {"tracker": {...}, "ica": {...}, "iou_min": x, "topology": path,
// "input": dir, "output": dir, "jobs": n}. Relative paths resolve against the file's
// directory. Fields left out keep their defaults.
RunConfig run_config_from_json(const std::string& text, const std::filesystem::path& base = {});
std::string run_config_to_json(const RunConfig& c);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace mcmt::harness
