#include "adrnet/data/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "adrnet/core/error.hpp"

namespace adrnet::data {

namespace {

void require_unique(const std::vector<std::string>& ids, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (!seen.insert(id).second) throw DataError(std::string("duplicate ") + what + " id '" + id + "'");
  }
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace

// ---- InteractionDataset --------------------------------------------------------

InteractionDataset::InteractionDataset(std::vector<std::string> drug_ids, std::vector<std::string> adr_ids)
    : drug_ids_(std::move(drug_ids)), adr_ids_(std::move(adr_ids)), y_(drug_ids_.size() * adr_ids_.size(), 0) {
  require_unique(drug_ids_, "drug");
  require_unique(adr_ids_, "ADR");
}

std::size_t InteractionDataset::interaction_count() const {
  return static_cast<std::size_t>(std::count(y_.begin(), y_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> InteractionDataset::drugs_per_adr() const {
  std::vector<std::size_t> counts(num_adrs(), 0);
  for (std::size_t i = 0; i < num_drugs(); ++i) {
    for (std::size_t j = 0; j < num_adrs(); ++j) counts[j] += at(i, j) ? 1 : 0;
  }
  return counts;
}

std::vector<std::size_t> InteractionDataset::adrs_per_drug() const {
  std::vector<std::size_t> counts(num_drugs(), 0);
  for (std::size_t i = 0; i < num_drugs(); ++i) {
    for (std::size_t j = 0; j < num_adrs(); ++j) counts[i] += at(i, j) ? 1 : 0;
  }
  return counts;
}

InteractionDataset InteractionDataset::subset(std::span<const std::size_t> drugs,
                                              std::span<const std::size_t> adrs) const {
  std::vector<std::string> d_ids, a_ids;
  for (std::size_t i : drugs) d_ids.push_back(drug_ids_.at(i));
  for (std::size_t j : adrs) a_ids.push_back(adr_ids_.at(j));
  InteractionDataset out(std::move(d_ids), std::move(a_ids));
  for (std::size_t r = 0; r < drugs.size(); ++r) {
    for (std::size_t c = 0; c < adrs.size(); ++c) out.set(r, c, at(drugs[r], adrs[c]));
  }
  return out;
}

// ---- DescriptorTable -------------------------------------------------------------

DescriptorTable::DescriptorTable(std::vector<std::string> drug_ids, std::size_t pc_dim, std::size_t bio_dim,
                                 std::vector<std::vector<std::uint32_t>> rows)
    : drug_ids_(std::move(drug_ids)), pc_dim_(pc_dim), bio_dim_(bio_dim), rows_(std::move(rows)) {
  if (drug_ids_.size() != rows_.size()) {
    throw DataError("descriptor table: " + std::to_string(drug_ids_.size()) + " ids for " +
                    std::to_string(rows_.size()) + " rows");
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& row = rows_[i];
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k] >= dim()) {
        throw DataError("descriptor row '" + drug_ids_[i] + "': index " + std::to_string(row[k]) +
                        " outside [0, " + std::to_string(dim()) + ")");
      }
      if (k > 0 && row[k] <= row[k - 1]) {
        throw DataError("descriptor row '" + drug_ids_[i] + "': indices not strictly increasing");
      }
    }
  }
}

DescriptorTable DescriptorTable::subset(std::span<const std::size_t> drugs) const {
  std::vector<std::string> ids;
  std::vector<std::vector<std::uint32_t>> rows;
  for (std::size_t i : drugs) {
    ids.push_back(drug_ids_.at(i));
    rows.push_back(rows_.at(i));
  }
  return DescriptorTable(std::move(ids), pc_dim_, bio_dim_, std::move(rows));
}

// ---- interactions I/O ----------------------------------------------------------------

InteractionDataset read_interactions(std::istream& in, const std::string& source) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(std::move(line));
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": expected 'drug_id<TAB>adr_id', got '" + line +
                       "'");
    }
    pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  if (pairs.empty()) throw DataError(source + ": no interactions");

  std::set<std::string> drug_set, adr_set;
  for (const auto& [d, a] : pairs) {
    drug_set.insert(d);
    adr_set.insert(a);
  }
  std::vector<std::string> drugs(drug_set.begin(), drug_set.end());
  std::vector<std::string> adrs(adr_set.begin(), adr_set.end());
  std::unordered_map<std::string, std::size_t> drug_index, adr_index;
  for (std::size_t i = 0; i < drugs.size(); ++i) drug_index[drugs[i]] = i;
  for (std::size_t j = 0; j < adrs.size(); ++j) adr_index[adrs[j]] = j;

  InteractionDataset ds(std::move(drugs), std::move(adrs));
  for (const auto& [d, a] : pairs) ds.set(drug_index.at(d), adr_index.at(a));
  return ds;
}

InteractionDataset load_interactions(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_interactions(in, path.string());
}

void write_interactions(const InteractionDataset& ds, std::ostream& out) {
  for (std::size_t i = 0; i < ds.num_drugs(); ++i) {
    for (std::size_t j = 0; j < ds.num_adrs(); ++j) {
      if (ds.at(i, j)) out << ds.drug_ids()[i] << '\t' << ds.adr_ids()[j] << '\n';
    }
  }
}

void save_interactions(const InteractionDataset& ds, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_interactions(ds, out);
  finish_write(out, path);
}

// ---- descriptor I/O ------------------------------------------------------------------

DescriptorFile read_descriptor_file(std::istream& in, const std::string& source) {
  DescriptorFile file;
  bool have_dims = false;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ParseError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(std::move(line));
    if (line.empty()) continue;
    if (line.rfind("#dims=", 0) == 0) {
      if (have_dims) fail("repeated #dims header");
      const std::string digits = line.substr(6);
      std::size_t dim = 0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), dim);
      if (ec != std::errc{} || ptr != digits.data() + digits.size() || dim == 0) fail("bad #dims header '" + line + "'");
      file.dim = dim;
      have_dims = true;
      continue;
    }
    if (line.front() == '#') continue;
    if (!have_dims) fail("data line before the #dims header");

    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) fail("expected 'drug_id<TAB>indices', got '" + line + "'");
    const std::string id = line.substr(0, tab);
    const std::string list = line.substr(tab + 1);
    std::vector<std::uint32_t> bits;
    std::size_t pos = 0;
    while (pos < list.size()) {
      std::size_t comma = list.find(',', pos);
      if (comma == std::string::npos) comma = list.size();
      std::uint32_t bit = 0;
      auto [ptr, ec] = std::from_chars(list.data() + pos, list.data() + comma, bit);
      if (ec != std::errc{} || ptr != list.data() + comma) fail("bad index list '" + list + "'");
      if (bit >= file.dim) {
        fail("index " + std::to_string(bit) + " outside [0, " + std::to_string(file.dim) + ")");
      }
      if (!bits.empty() && bit <= bits.back()) fail("indices must be strictly increasing");
      bits.push_back(bit);
      pos = comma + 1;
      if (comma + 1 == list.size()) fail("trailing comma in index list");
    }
    if (!file.rows.emplace(id, std::move(bits)).second) fail("duplicate drug id '" + id + "'");
  }
  if (!have_dims) throw ParseError(source + ": missing #dims header");
  return file;
}

DescriptorFile load_descriptor_file(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_descriptor_file(in, path.string());
}

DescriptorTable assemble_descriptors(std::span<const DescriptorFile> parts, const InteractionDataset& ds) {
  if (parts.empty()) throw ConfigError("no descriptor files given");
  std::vector<std::string> missing;
  for (const auto& id : ds.drug_ids()) {
    for (const auto& part : parts) {
      if (!part.rows.contains(id)) {
        missing.push_back(id);
        break;
      }
    }
  }
  if (!missing.empty()) {
    std::string msg = "no descriptor row for " + std::to_string(missing.size()) + " drug(s):";
    for (std::size_t k = 0; k < missing.size() && k < 20; ++k) msg += " " + missing[k];
    if (missing.size() > 20) msg += " ...";
    throw CoverageError(msg);
  }

  const std::size_t pc_dim = parts[0].dim;
  std::size_t bio_dim = 0;
  for (std::size_t p = 1; p < parts.size(); ++p) bio_dim += parts[p].dim;

  std::vector<std::vector<std::uint32_t>> rows;
  rows.reserve(ds.num_drugs());
  for (const auto& id : ds.drug_ids()) {
    std::vector<std::uint32_t> row;
    std::uint32_t offset = 0;
    for (const auto& part : parts) {
      for (std::uint32_t bit : part.rows.at(id)) row.push_back(offset + bit);
      offset += static_cast<std::uint32_t>(part.dim);
    }
    rows.push_back(std::move(row));
  }
  return DescriptorTable(ds.drug_ids(), pc_dim, bio_dim, std::move(rows));
}

DescriptorTable load_descriptors(const std::filesystem::path& pc_path, const std::filesystem::path& bio_path,
                                 const InteractionDataset& ds) {
  const std::filesystem::path paths[] = {pc_path, bio_path};
  return load_descriptors(paths, ds);
}

DescriptorTable load_descriptors(std::span<const std::filesystem::path> paths, const InteractionDataset& ds) {
  std::vector<DescriptorFile> parts;
  for (const auto& p : paths) parts.push_back(load_descriptor_file(p));
  return assemble_descriptors(parts, ds);
}

void write_descriptors(const DescriptorTable& table, std::ostream& out) {
  out << "#dims=" << table.dim() << '\n';
  for (std::size_t i = 0; i < table.num_drugs(); ++i) {
    out << table.drug_ids()[i] << '\t';
    const auto bits = table.active(i);
    for (std::size_t k = 0; k < bits.size(); ++k) {
      if (k > 0) out << ',';
      out << bits[k];
    }
    out << '\n';
  }
}

void save_descriptors(const DescriptorTable& table, const std::filesystem::path& path) {
  auto out = open_for_write(path);
  write_descriptors(table, out);
  finish_write(out, path);
}

// ---- filtering -------------------------------------------------------------------------

std::set<std::string> load_allow_list(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  std::set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    line = strip_cr(std::move(line));
    if (line.empty() || line.front() == '#') continue;
    ids.insert(line);
  }
  return ids;
}

InteractionDataset filter_dataset(const InteractionDataset& ds, std::size_t min_drugs_per_adr,
                                  const std::set<std::string>* allowed_drugs) {
  std::vector<bool> keep_drug(ds.num_drugs(), true);
  std::vector<bool> keep_adr(ds.num_adrs(), true);
  if (allowed_drugs != nullptr) {
    for (std::size_t i = 0; i < ds.num_drugs(); ++i) keep_drug[i] = allowed_drugs->contains(ds.drug_ids()[i]);
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t j = 0; j < ds.num_adrs(); ++j) {
      if (!keep_adr[j]) continue;
      std::size_t count = 0;
      for (std::size_t i = 0; i < ds.num_drugs(); ++i) count += (keep_drug[i] && ds.at(i, j)) ? 1 : 0;
      if (count <= min_drugs_per_adr) {
        keep_adr[j] = false;
        changed = true;
      }
    }
    for (std::size_t i = 0; i < ds.num_drugs(); ++i) {
      if (!keep_drug[i]) continue;
      bool any = false;
      for (std::size_t j = 0; j < ds.num_adrs() && !any; ++j) any = keep_adr[j] && ds.at(i, j);
      if (!any) {
        keep_drug[i] = false;
        changed = true;
      }
    }
  }

  std::vector<std::size_t> drugs, adrs;
  for (std::size_t i = 0; i < ds.num_drugs(); ++i)
    if (keep_drug[i]) drugs.push_back(i);
  for (std::size_t j = 0; j < ds.num_adrs(); ++j)
    if (keep_adr[j]) adrs.push_back(j);
  if (adrs.empty()) {
    throw DataError("filter: no ADR occurs on more than " + std::to_string(min_drugs_per_adr) + " drugs");
  }
  if (drugs.empty()) throw DataError("filter: no drug survives");
  return ds.subset(drugs, adrs);
}

DatasetStats dataset_stats(const InteractionDataset& ds) {
  DatasetStats s;
  s.drugs = ds.num_drugs();
  s.adrs = ds.num_adrs();
  s.interactions = ds.interaction_count();
  const double cells = static_cast<double>(s.drugs) * static_cast<double>(s.adrs);
  s.density = cells > 0 ? static_cast<double>(s.interactions) / cells : 0.0;
  for (std::size_t c : ds.drugs_per_adr()) s.drugs_per_adr_histogram[c] += 1;
  return s;
}

std::string format_stats(const DatasetStats& stats) {
  std::ostringstream os;
  os << "drugs=" << stats.drugs << " adrs=" << stats.adrs << " interactions=" << stats.interactions
     << " density=" << stats.density;
  return os.str();
}

}  // namespace adrnet::data
