#include "adrnet/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "adrnet/core/error.hpp"

namespace adrnet::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::size_t to_size(const std::string& key, const std::string& text) {
  std::size_t v = 0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError(key + ": expected an unsigned integer, got '" + text + "'");
  return v;
}

double to_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw ConfigError(key + ": expected a number, got '" + text + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& text) {
  const auto t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + text + "'");
}

template <typename T>
std::vector<T> split_list(const std::string& key, const std::string& text,
                          const std::function<T(const std::string&, const std::string&)>& convert) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(convert(key, item));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s;
}

std::string real(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

Settings parse_settings(std::istream& in, const std::string& source) {
  Settings out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos || trim(t.substr(0, eq)).empty())
      throw ParseError(source + ":" + std::to_string(lineno) + ": expected key=value");
    out[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return out;
}

Settings load_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "' for reading");
  return parse_settings(in, path.string());
}

void apply_assignment(Settings& settings, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || trim(assignment.substr(0, eq)).empty())
    throw ParseError("expected key=value, got '" + assignment + "'");
  settings[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

std::vector<std::size_t> parse_size_list(const std::string& key, const std::string& text) {
  return split_list<std::size_t>(key, text, to_size);
}

std::vector<double> parse_real_list(const std::string& key, const std::string& text) {
  return split_list<double>(key, text, to_real);
}

void apply_run_settings(RunSettings& run, const Settings& settings) {
  auto& t = run.train;
  auto& m = t.model;
  auto& a = t.adam;
  for (const auto& [key, value] : settings) {
    if (key == "model") m.kind = models::parse_model_kind(value);
    else if (key == "embedding_size") m.embedding_size = to_size(key, value);
    else if (key == "deep_widths") m.deep_widths = parse_size_list(key, value);
    else if (key == "shallow_widths") m.shallow_widths = parse_size_list(key, value);
    else if (key == "descriptor_dim") m.descriptor_dim = to_size(key, value);
    else if (key == "init") {
      try {
        m.init = parse_init_scheme(value);
      } catch (const Error& e) {
        throw ConfigError(e.what());
      }
    }
    else if (key == "learning_rate") a.learning_rate = to_real(key, value);
    else if (key == "beta1") a.beta1 = to_real(key, value);
    else if (key == "beta2") a.beta2 = to_real(key, value);
    else if (key == "epsilon") a.epsilon = to_real(key, value);
    else if (key == "weight_decay") a.weight_decay = to_real(key, value);
    else if (key == "epochs") t.epochs = to_size(key, value);
    else if (key == "batch_size") t.batch_size = to_size(key, value);
    else if (key == "neg_subsample_ratio") {
      if (trim(value) == "none") t.neg_subsample_ratio.reset();
      else t.neg_subsample_ratio = to_real(key, value);
    }
    else if (key == "eval_every") t.eval_every = to_size(key, value);
    else if (key == "seed") t.seed = to_u64(key, value);
    else if (key == "folds") run.folds = to_size(key, value);
    else if (key == "parallel") run.parallel = to_bool(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
  }
}

void apply_synth_settings(data::SyntheticSpec& spec, const Settings& settings) {
  for (const auto& [key, value] : settings) {
    if (key == "num_drugs") spec.num_drugs = to_size(key, value);
    else if (key == "num_adrs") spec.num_adrs = to_size(key, value);
    else if (key == "true_rank") spec.true_rank = to_size(key, value);
    else if (key == "descriptor_dim") spec.descriptor_dim = to_size(key, value);
    else if (key == "noise") spec.noise = to_real(key, value);
    else if (key == "descriptor_informativeness") spec.descriptor_informativeness = to_real(key, value);
    else if (key == "positive_rate") spec.positive_rate = to_real(key, value);
    else if (key == "seed") spec.seed = to_u64(key, value);
    else throw ConfigError("unknown spec key '" + key + "'");
  }
}

std::string format_run_settings(const RunSettings& run) {
  const auto& t = run.train;
  const auto m = t.model.resolved();
  std::ostringstream os;
  os << "model=" << models::to_string(m.kind) << "\n"
     << "embedding_size=" << m.embedding_size << "\n"
     << "deep_widths=" << join(m.deep_widths) << "\n"
     << "shallow_widths=" << join(m.shallow_widths) << "\n"
     << "descriptor_dim=" << m.descriptor_dim << "\n"
     << "init=" << to_string(m.init) << "\n"
     << "learning_rate=" << real(t.adam.learning_rate) << "\n"
     << "beta1=" << real(t.adam.beta1) << "\n"
     << "beta2=" << real(t.adam.beta2) << "\n"
     << "epsilon=" << real(t.adam.epsilon) << "\n"
     << "weight_decay=" << real(t.adam.weight_decay) << "\n"
     << "epochs=" << t.epochs << "\n"
     << "batch_size=" << t.batch_size << "\n"
     << "neg_subsample_ratio=" << (t.neg_subsample_ratio ? real(*t.neg_subsample_ratio) : "none") << "\n"
     << "eval_every=" << t.eval_every << "\n"
     << "seed=" << t.seed << "\n"
     << "folds=" << run.folds << "\n"
     << "parallel=" << (run.parallel ? "true" : "false") << "\n";
  return os.str();
}

std::string format_synth_settings(const data::SyntheticSpec& spec) {
  std::ostringstream os;
  os << "num_drugs=" << spec.num_drugs << "\n"
     << "num_adrs=" << spec.num_adrs << "\n"
     << "true_rank=" << spec.true_rank << "\n"
     << "descriptor_dim=" << spec.descriptor_dim << "\n"
     << "noise=" << real(spec.noise) << "\n"
     << "descriptor_informativeness=" << real(spec.descriptor_informativeness) << "\n"
     << "positive_rate=" << real(spec.positive_rate) << "\n"
     << "seed=" << spec.seed << "\n";
  return os.str();
}

}  // namespace adrnet::cli
