#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "adrnet/models/model.hpp"

namespace adrnet::models {

// A trained model together with the id tables it was trained on.
struct SavedModel {
  Model model;
  std::vector<std::string> drug_ids;
  std::vector<std::string> adr_ids;
};

// Text format: a "adrnet-model 1" header, the model config as key=value lines,
// the id tables, then every parameter block with values in hexadecimal
// floating point so a reload is bit-exact. Optimizer moments are not stored.
void write_model(const Model& model, const std::vector<std::string>& drug_ids,
                 const std::vector<std::string>& adr_ids, std::ostream& out);
void save_model(const Model& model, const std::vector<std::string>& drug_ids,
                const std::vector<std::string>& adr_ids, const std::filesystem::path& path);

SavedModel read_model(std::istream& in, const std::string& source = "<stream>");
SavedModel load_model(const std::filesystem::path& path);

}  // namespace adrnet::models
