#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "adrnet/data/synthetic.hpp"
#include "adrnet/harness/training.hpp"

namespace adrnet::cli {

// Flat key=value settings. Later assignments of a key replace earlier ones.
using Settings = std::map<std::string, std::string>;

// Blank lines and lines starting with '#' are skipped; anything else must be
// "key=value". Throws ParseError with source:line on a malformed line.
Settings parse_settings(std::istream& in, const std::string& source = "<stream>");
Settings load_settings(const std::filesystem::path& path);
// "key=value" as given on the command line.
void apply_assignment(Settings& settings, const std::string& assignment);

// Everything a training command needs besides the data.
struct RunSettings {
  harness::TrainConfig train;
  std::size_t folds = 10;
  bool parallel = false;
};

// Keys are the TrainConfig / ModelConfig / AdamConfig field names plus
// `folds` and `parallel`. Throws ConfigError on unknown keys or bad values.
void apply_run_settings(RunSettings& run, const Settings& settings);
// Keys are the SyntheticSpec field names.
void apply_synth_settings(data::SyntheticSpec& spec, const Settings& settings);

// One "key=value" line per setting, in a fixed order.
std::string format_run_settings(const RunSettings& run);
std::string format_synth_settings(const data::SyntheticSpec& spec);

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& text);
std::vector<double> parse_real_list(const std::string& key, const std::string& text);

}  // namespace adrnet::cli
