#include "adrnet/models/serialize.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "adrnet/core/error.hpp"

namespace adrnet::models {

namespace {

constexpr const char* kMagic = "adrnet-model 1";

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s;
}

std::vector<std::size_t> split_sizes(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoul(item));
  }
  return out;
}

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

}  // namespace

void write_model(const Model& model, const std::vector<std::string>& drug_ids,
                 const std::vector<std::string>& adr_ids, std::ostream& out) {
  const ModelConfig& c = model.config();
  out << kMagic << '\n';
  out << "kind=" << to_string(c.kind) << '\n';
  out << "K=" << c.embedding_size << '\n';
  out << "deep_widths=" << join(c.deep_widths) << '\n';
  out << "shallow_widths=" << join(c.shallow_widths) << '\n';
  out << "descriptor_dim=" << c.descriptor_dim << '\n';
  out << "init=" << to_string(c.init) << '\n';
  out << "seed=" << c.seed << '\n';
  out << "drugs=" << drug_ids.size() << '\n';
  for (const auto& id : drug_ids) out << id << '\n';
  out << "adrs=" << adr_ids.size() << '\n';
  for (const auto& id : adr_ids) out << id << '\n';
  for (const ParamBlock* block : model.parameters()) {
    out << "block " << block->name << ' ' << block->rows() << ' ' << block->cols() << '\n';
    for (std::size_t r = 0; r < block->rows(); ++r) {
      for (std::size_t col = 0; col < block->cols(); ++col) {
        out << (col ? " " : "") << hex(block->value(r, col));
      }
      out << '\n';
    }
  }
  out << "end\n";
}

void save_model(const Model& model, const std::vector<std::string>& drug_ids,
                const std::vector<std::string>& adr_ids, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_model(model, drug_ids, adr_ids, out);
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

SavedModel read_model(std::istream& in, const std::string& source) {
  auto fail = [&](const std::string& what) -> void { throw ParseError(source + ": " + what); };
  std::string line;
  if (!std::getline(in, line) || line != kMagic) fail("not a saved model (bad header)");

  std::map<std::string, std::string> fields;
  for (const char* key : {"kind", "K", "deep_widths", "shallow_widths", "descriptor_dim", "init", "seed"}) {
    if (!std::getline(in, line)) fail("truncated config");
    const auto eq = line.find('=');
    if (eq == std::string::npos || line.substr(0, eq) != key) fail(std::string("expected '") + key + "=...'");
    fields[key] = line.substr(eq + 1);
  }

  ModelConfig cfg;
  std::size_t num_drugs = 0, num_adrs = 0;
  std::vector<std::string> drug_ids, adr_ids;
  try {
    cfg.kind = parse_model_kind(fields["kind"]);
    cfg.embedding_size = std::stoul(fields["K"]);
    cfg.deep_widths = split_sizes(fields["deep_widths"]);
    cfg.shallow_widths = split_sizes(fields["shallow_widths"]);
    cfg.descriptor_dim = std::stoul(fields["descriptor_dim"]);
    cfg.init = parse_init_scheme(fields["init"]);
    cfg.seed = std::stoull(fields["seed"]);
    auto read_ids = [&](const char* key, std::vector<std::string>& ids) -> std::size_t {
      if (!std::getline(in, line) || line.rfind(std::string(key) + "=", 0) != 0) fail(std::string("expected ") + key);
      const std::size_t n = std::stoul(line.substr(std::string(key).size() + 1));
      for (std::size_t k = 0; k < n; ++k) {
        if (!std::getline(in, line)) fail("truncated id table");
        ids.push_back(line);
      }
      return n;
    };
    num_drugs = read_ids("drugs", drug_ids);
    num_adrs = read_ids("adrs", adr_ids);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(source + ": bad model header (" + e.what() + ")");
  }

  Model model = Model::build(cfg, num_drugs, num_adrs);
  for (ParamBlock* block : model.parameters()) {
    if (!std::getline(in, line)) fail("missing block " + block->name);
    std::istringstream head(line);
    std::string tag, name;
    std::size_t rows = 0, cols = 0;
    if (!(head >> tag >> name >> rows >> cols) || tag != "block" || name != block->name ||
        rows != block->rows() || cols != block->cols()) {
      fail("expected block " + block->name + " " + block->value.shape_string() + ", got '" + line + "'");
    }
    for (std::size_t r = 0; r < rows; ++r) {
      if (!std::getline(in, line)) fail("truncated block " + name);
      std::istringstream values(line);
      std::string token;
      for (std::size_t c = 0; c < cols; ++c) {
        if (!(values >> token)) fail("short row in block " + name);
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0') fail("bad number '" + token + "' in block " + name);
        block->value(r, c) = v;
      }
    }
  }
  if (!std::getline(in, line) || line != "end") fail("missing end marker");
  return SavedModel{std::move(model), std::move(drug_ids), std::move(adr_ids)};
}

SavedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "' for reading");
  return read_model(in, path.string());
}

}  // namespace adrnet::models
