#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace adrnet::data {

// One cell (drug i, ADR j) of the interaction matrix.
struct Cell {
  std::uint32_t drug = 0;
  std::uint32_t adr = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct LabeledCell {
  std::uint32_t drug = 0;
  std::uint32_t adr = 0;
  double label = 0.0;
};

// Drug and ADR identifier tables plus the binary M x N interaction matrix.
class InteractionDataset {
 public:
  InteractionDataset() = default;
  // Zero matrix over the given ids. Throws DataError on duplicate ids.
  InteractionDataset(std::vector<std::string> drug_ids, std::vector<std::string> adr_ids);

  std::size_t num_drugs() const { return drug_ids_.size(); }
  std::size_t num_adrs() const { return adr_ids_.size(); }
  const std::vector<std::string>& drug_ids() const { return drug_ids_; }
  const std::vector<std::string>& adr_ids() const { return adr_ids_; }

  bool at(std::size_t i, std::size_t j) const { return y_[i * adr_ids_.size() + j] != 0; }
  double label(std::size_t i, std::size_t j) const { return at(i, j) ? 1.0 : 0.0; }
  void set(std::size_t i, std::size_t j, bool value = true) { y_[i * adr_ids_.size() + j] = value ? 1 : 0; }

  std::size_t interaction_count() const;
  std::vector<std::size_t> drugs_per_adr() const;
  std::vector<std::size_t> adrs_per_drug() const;

  // Restriction to the given drug and ADR indices, in the given order.
  InteractionDataset subset(std::span<const std::size_t> drugs, std::span<const std::size_t> adrs) const;

  friend bool operator==(const InteractionDataset&, const InteractionDataset&) = default;

 private:
  std::vector<std::string> drug_ids_;
  std::vector<std::string> adr_ids_;
  std::vector<std::uint8_t> y_;
};

// Per-drug multi-hot descriptors. Bits [0, pc_dim) come from the first
// descriptor source and [pc_dim, pc_dim + bio_dim) from the second.
class DescriptorTable {
 public:
  DescriptorTable() = default;
  // Throws DataError when an index is out of range or a row is not strictly increasing.
  DescriptorTable(std::vector<std::string> drug_ids, std::size_t pc_dim, std::size_t bio_dim,
                  std::vector<std::vector<std::uint32_t>> rows);

  std::size_t dim() const { return pc_dim_ + bio_dim_; }
  std::size_t pc_dim() const { return pc_dim_; }
  std::size_t bio_dim() const { return bio_dim_; }
  std::size_t num_drugs() const { return rows_.size(); }
  const std::vector<std::string>& drug_ids() const { return drug_ids_; }
  std::span<const std::uint32_t> active(std::size_t drug) const { return rows_[drug]; }
  const std::vector<std::vector<std::uint32_t>>& rows() const { return rows_; }

  // Rows reordered / restricted to the given drug indices.
  DescriptorTable subset(std::span<const std::size_t> drugs) const;

  friend bool operator==(const DescriptorTable&, const DescriptorTable&) = default;

 private:
  std::vector<std::string> drug_ids_;
  std::size_t pc_dim_ = 0;
  std::size_t bio_dim_ = 0;
  std::vector<std::vector<std::uint32_t>> rows_;
};

// ---- interactions file ----------------------------------------------------------
// UTF-8 text, '#' comment lines, data lines "drug_id<TAB>adr_id". Ids are
// ordered lexicographically, so the matrix layout does not depend on line
// order. Duplicate pairs collapse to a single 1.

InteractionDataset read_interactions(std::istream& in, const std::string& source = "<stream>");
InteractionDataset load_interactions(const std::filesystem::path& path);
// One line per positive cell, row-major.
void write_interactions(const InteractionDataset& ds, std::ostream& out);
void save_interactions(const InteractionDataset& ds, const std::filesystem::path& path);

// ---- descriptor file ------------------------------------------------------------
// First non-comment line "#dims=<D>", then "drug_id<TAB>i1,i2,..." with sorted
// active indices (possibly none).

struct DescriptorFile {
  std::size_t dim = 0;
  std::map<std::string, std::vector<std::uint32_t>> rows;
};

DescriptorFile read_descriptor_file(std::istream& in, const std::string& source = "<stream>");
DescriptorFile load_descriptor_file(const std::filesystem::path& path);

// Concatenates the parts in order and aligns rows to ds.drug_ids(). With two
// parts, the first is the PC block and the second the BIO block; further parts
// are appended to the BIO block. Throws CoverageError listing the drugs that
// have no row in some part.
DescriptorTable assemble_descriptors(std::span<const DescriptorFile> parts, const InteractionDataset& ds);
DescriptorTable load_descriptors(const std::filesystem::path& pc_path, const std::filesystem::path& bio_path,
                                 const InteractionDataset& ds);
DescriptorTable load_descriptors(std::span<const std::filesystem::path> paths, const InteractionDataset& ds);

void write_descriptors(const DescriptorTable& table, std::ostream& out);
void save_descriptors(const DescriptorTable& table, const std::filesystem::path& path);

// ---- filtering and statistics -------------------------------------------------------

// One id per line; '#' comments allowed.
std::set<std::string> load_allow_list(const std::filesystem::path& path);

// Keeps ADRs observed on strictly more than min_drugs_per_adr drugs, then drops
// drugs left without interactions, repeating until nothing changes. With an
// allow-list, drugs outside it are removed first. Throws DataError if no ADR
// or no drug survives.
InteractionDataset filter_dataset(const InteractionDataset& ds, std::size_t min_drugs_per_adr,
                                  const std::set<std::string>* allowed_drugs = nullptr);

struct DatasetStats {
  std::size_t drugs = 0;
  std::size_t adrs = 0;
  std::size_t interactions = 0;
  double density = 0.0;
  // drugs-per-ADR count -> number of ADRs with that count
  std::map<std::size_t, std::size_t> drugs_per_adr_histogram;
};

DatasetStats dataset_stats(const InteractionDataset& ds);
// "drugs=<M> adrs=<N> interactions=<nnz> density=<d>"
std::string format_stats(const DatasetStats& stats);

}  // namespace adrnet::data
