#include "adrnet/data/synthetic.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "adrnet/core/error.hpp"
#include "adrnet/core/ops.hpp"
#include "adrnet/core/random.hpp"

namespace adrnet::data {

namespace {

std::string padded_id(const char* prefix, std::size_t index, std::size_t count) {
  const std::size_t width = std::to_string(count > 0 ? count - 1 : 0).size();
  std::string digits = std::to_string(index);
  return std::string(prefix) + std::string(width - digits.size(), '0') + digits;
}

Matrix score_matrix(const GroundTruth& truth) {
  return matmul_a_bt(truth.drug_factors, truth.adr_factors);
}

double mean_probability_with(const Matrix& scores, double bias) {
  double total = 0.0;
  for (double s : scores.values()) total += sigmoid(s + bias);
  return total / static_cast<double>(scores.size());
}

std::string format_real(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void SyntheticSpec::validate() const {
  if (num_drugs == 0 || num_adrs == 0 || true_rank == 0 || descriptor_dim == 0) {
    throw SpecError("synthetic spec: M, N, K_true and D must be positive");
  }
  if (!(noise >= 0.0 && noise < 1.0)) throw SpecError("synthetic spec: noise must lie in [0, 1)");
  if (!(descriptor_informativeness >= 0.0 && descriptor_informativeness <= 1.0)) {
    throw SpecError("synthetic spec: descriptor_informativeness must lie in [0, 1]");
  }
  if (!(positive_rate > 0.0 && positive_rate < 1.0)) {
    throw SpecError("synthetic spec: positive_rate must lie in (0, 1)");
  }
}

double GroundTruth::probability(std::size_t drug, std::size_t adr) const {
  return sigmoid(dot(drug_factors.row(drug), adr_factors.row(adr)) + bias);
}

double mean_probability(const GroundTruth& truth) { return mean_probability_with(score_matrix(truth), truth.bias); }

SyntheticData synth_generate(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::size_t M = spec.num_drugs, N = spec.num_adrs, K = spec.true_rank, D = spec.descriptor_dim;

  GroundTruth truth;
  truth.drug_factors = Matrix(M, K);
  truth.adr_factors = Matrix(N, K);
  for (double& x : truth.drug_factors.values()) x = rng.normal();
  for (double& x : truth.adr_factors.values()) x = rng.normal();

  // Bias by bisection; the mean probability is increasing in the bias.
  const Matrix scores = score_matrix(truth);
  double lo = -60.0, hi = 60.0;
  if (mean_probability_with(scores, lo) > spec.positive_rate || mean_probability_with(scores, hi) < spec.positive_rate) {
    throw SpecError("synthetic spec: bias search cannot bracket positive_rate " + format_real(spec.positive_rate));
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mean_probability_with(scores, mid) < spec.positive_rate ? lo : hi) = mid;
  }
  truth.bias = 0.5 * (lo + hi);
  if (std::abs(mean_probability_with(scores, truth.bias) - spec.positive_rate) > 1e-3) {
    throw SpecError("synthetic spec: bias search did not reach positive_rate within 1e-3");
  }

  std::vector<std::string> drug_ids, adr_ids;
  for (std::size_t i = 0; i < M; ++i) drug_ids.push_back(padded_id("drug", i, M));
  for (std::size_t j = 0; j < N; ++j) adr_ids.push_back(padded_id("adr", j, N));

  InteractionDataset ds(drug_ids, adr_ids);
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t j = 0; j < N; ++j) {
      const double p = sigmoid(scores(i, j) + truth.bias);
      const bool planted = rng.uniform() < p;
      const bool replace = rng.uniform() < spec.noise;
      const bool background = rng.uniform() < spec.positive_rate;
      ds.set(i, j, replace ? background : planted);
    }
  }

  Matrix hyperplanes(D, K);
  for (double& x : hyperplanes.values()) x = rng.normal();
  std::vector<std::vector<std::uint32_t>> rows(M);
  for (std::size_t i = 0; i < M; ++i) {
    for (std::size_t b = 0; b < D; ++b) {
      const bool informative = dot(hyperplanes.row(b), truth.drug_factors.row(i)) > 0.0;
      const bool replace = rng.uniform() < 1.0 - spec.descriptor_informativeness;
      const bool coin = rng.uniform() < 0.5;
      if (replace ? coin : informative) rows[i].push_back(static_cast<std::uint32_t>(b));
    }
  }

  return SyntheticData{std::move(ds), DescriptorTable(drug_ids, D, 0, std::move(rows)), std::move(truth)};
}

void write_ground_truth(const GroundTruth& truth, std::ostream& out) {
  for (std::size_t i = 0; i < truth.drug_factors.rows(); ++i) {
    for (std::size_t k = 0; k < truth.drug_factors.cols(); ++k) {
      out << "drug\t" << i << '\t' << k << '\t' << format_real(truth.drug_factors(i, k)) << '\n';
    }
  }
  for (std::size_t j = 0; j < truth.adr_factors.rows(); ++j) {
    for (std::size_t k = 0; k < truth.adr_factors.cols(); ++k) {
      out << "adr\t" << j << '\t' << k << '\t' << format_real(truth.adr_factors(j, k)) << '\n';
    }
  }
  out << "bias=" << format_real(truth.bias) << '\n';
}

GroundTruth read_ground_truth(std::istream& in, const std::string& source) {
  struct Entry {
    bool drug;
    std::size_t index, k;
    double value;
  };
  std::vector<Entry> entries;
  std::size_t M = 0, N = 0, K = 0;
  bool have_bias = false;
  GroundTruth truth;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (line.rfind("bias=", 0) == 0) {
      try {
        truth.bias = std::stod(line.substr(5));
      } catch (const std::exception&) {
        throw ParseError(source + ":" + std::to_string(line_no) + ": bad bias line");
      }
      have_bias = true;
      continue;
    }
    std::istringstream fields(line);
    std::string kind;
    Entry e{};
    if (!(fields >> kind >> e.index >> e.k >> e.value) || (kind != "drug" && kind != "adr")) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": expected 'drug|adr<TAB>index<TAB>k<TAB>value'");
    }
    e.drug = kind == "drug";
    (e.drug ? M : N) = std::max(e.drug ? M : N, e.index + 1);
    K = std::max(K, e.k + 1);
    entries.push_back(e);
  }
  if (!have_bias) throw ParseError(source + ": missing bias line");
  truth.drug_factors = Matrix(M, K);
  truth.adr_factors = Matrix(N, K);
  for (const Entry& e : entries) (e.drug ? truth.drug_factors : truth.adr_factors)(e.index, e.k) = e.value;
  return truth;
}

}  // namespace adrnet::data
