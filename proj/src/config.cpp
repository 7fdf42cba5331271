#include "sdwsn/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "sdwsn/textio.hpp"

namespace sdwsn {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::string dirname_of(const std::string& path) {
  const std::size_t pos = path.find_last_of('/');
  return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

}  // namespace

KvConfig KvConfig::parse_string(const std::string& text,
                                const std::string& base_dir) {
  KvConfig cfg;
  cfg.base_dir_ = base_dir;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t comment = line.find_first_of('#');
    if (comment != std::string::npos) line.erase(comment);
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw InvalidInput("config line " + std::to_string(lineno) +
                           ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("config line " + std::to_string(lineno) +
                         ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw InvalidInput("config line " + std::to_string(lineno) + ": empty key");
    cfg.sections_[section][key] = value;
  }
  return cfg;
}

KvConfig KvConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), dirname_of(path));
}

bool KvConfig::has(const std::string& section, const std::string& key) const {
  auto sit = sections_.find(section);
  return sit != sections_.end() && sit->second.count(key) > 0;
}

std::string KvConfig::get_string(const std::string& section,
                                 const std::string& key,
                                 const std::string& fallback) const {
  auto sit = sections_.find(section);
  if (sit == sections_.end()) return fallback;
  auto kit = sit->second.find(key);
  return kit == sit->second.end() ? fallback : kit->second;
}

std::string KvConfig::require_string(const std::string& section,
                                     const std::string& key) const {
  if (!has(section, key))
    throw InvalidInput("config: missing required key '" + key + "' in section [" +
                       section + "]");
  return get_string(section, key, "");
}

double KvConfig::get_double(const std::string& section, const std::string& key,
                            double fallback) const {
  const std::string s = get_string(section, key, "");
  return s.empty() ? fallback : std::stod(s);
}

int KvConfig::get_int(const std::string& section, const std::string& key,
                      int fallback) const {
  const std::string s = get_string(section, key, "");
  return s.empty() ? fallback : std::stoi(s);
}

std::uint64_t KvConfig::get_u64(const std::string& section,
                                const std::string& key,
                                std::uint64_t fallback) const {
  const std::string s = get_string(section, key, "");
  return s.empty() ? fallback : std::stoull(s);
}

std::vector<double> KvConfig::get_doubles(const std::string& section,
                                          const std::string& key) const {
  std::vector<double> out;
  for (const std::string& tok : split_ws(get_string(section, key, "")))
    out.push_back(std::stod(tok));
  return out;
}

std::vector<int> KvConfig::get_ints(const std::string& section,
                                    const std::string& key) const {
  std::vector<int> out;
  for (const std::string& tok : split_ws(get_string(section, key, "")))
    out.push_back(std::stoi(tok));
  return out;
}

Mat KvConfig::get_mat(const std::string& section, const std::string& key) const {
  const std::string value = require_string(section, key);
  if (value.rfind("file:", 0) == 0) {
    return read_mat(base_dir_ + "/" + value.substr(5));
  }
  if (value.rfind("inline:", 0) == 0) {
    std::vector<std::vector<double>> rows;
    std::string row;
    std::istringstream is(value.substr(7));
    while (std::getline(is, row, ';')) {
      std::vector<double> vals;
      for (const std::string& tok : split_ws(row)) vals.push_back(std::stod(tok));
      if (!vals.empty()) rows.push_back(std::move(vals));
    }
    if (rows.empty())
      throw InvalidInput("config: empty inline matrix for '" + key + "'");
    const std::size_t cols = rows[0].size();
    std::vector<double> data;
    for (const auto& r : rows) {
      if (r.size() != cols)
        throw InvalidInput("config: ragged inline matrix for '" + key + "'");
      data.insert(data.end(), r.begin(), r.end());
    }
    return Mat(static_cast<int>(rows.size()), static_cast<int>(cols),
               std::move(data));
  }
  throw InvalidInput("config: matrix value for '" + key +
                     "' must start with inline: or file:");
}

BlockPartition ExperimentConfig::partition() const {
  return BlockPartition::make(m, n, r, lifting);
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  return from_kv(KvConfig::parse_file(path));
}

ExperimentConfig ExperimentConfig::from_kv(const KvConfig& kv) {
  ExperimentConfig cfg;

  const std::string mode = kv.get_string("", "mode", "ideal");
  if (mode == "ideal")
    cfg.mode = RunMode::ideal;
  else if (mode == "channel")
    cfg.mode = RunMode::channel;
  else
    throw InvalidInput("config: mode must be ideal or channel, got '" + mode + "'");

  const std::string source = kv.get_string("", "model", "analytic-gaussian");
  if (source == "analytic-gaussian")
    cfg.model_source = ModelSource::analytic_gaussian;
  else if (source == "sample-data")
    cfg.model_source = ModelSource::sample_data;
  else if (source == "image")
    cfg.model_source = ModelSource::image;
  else
    throw InvalidInput("config: unknown model source '" + source + "'");

  cfg.seed = kv.get_u64("", "seed", 1);
  cfg.out_dir = kv.get_string("", "out", "out");
  cfg.format = kv.get_string("", "format", "both");
  if (cfg.format != "csv" && cfg.format != "svg" && cfg.format != "both")
    throw InvalidInput("config: format must be csv, svg or both");

  cfg.p = kv.get_int("partition", "p", 2);
  cfg.m = kv.get_int("partition", "m", 3);
  cfg.n = kv.get_ints("partition", "n");
  cfg.r = kv.get_ints("partition", "r");
  if (cfg.n.empty()) cfg.n.assign(cfg.p, cfg.m);
  if (static_cast<int>(cfg.n.size()) != cfg.p ||
      (!cfg.r.empty() && static_cast<int>(cfg.r.size()) != cfg.p))
    throw InvalidInput("config: n and r must list one entry per sensor");

  const std::string lifting = kv.get_string("partition", "lifting", "reduced");
  if (lifting == "full")
    cfg.lifting = Lifting::full;
  else if (lifting == "reduced")
    cfg.lifting = Lifting::reduced;
  else
    throw InvalidInput("config: lifting must be full or reduced");

  if (kv.has("model", "exx")) cfg.exx = kv.get_mat("model", "exx");
  cfg.sigma = kv.get_doubles("noise", "sigma");
  cfg.beta = kv.get_doubles("noise", "beta");
  cfg.sample_count = kv.get_int("sample", "s", 20);

  cfg.image_path = kv.get_string("image", "path", "");
  if (!cfg.image_path.empty() && cfg.image_path.front() != '/')
    cfg.image_path = kv.base_dir() + "/" + cfg.image_path;
  cfg.image_size = kv.get_int("image", "size", 64);

  cfg.gamma = kv.get_doubles("channel", "gamma");
  for (int j = 0; j < cfg.p; ++j) {
    const std::string key = "d" + std::to_string(j + 1);
    if (kv.has("channel", key)) cfg.channel_d.push_back(kv.get_mat("channel", key));
  }

  cfg.epsilon = kv.get_double("fit", "epsilon", 1e-9);
  cfg.max_iterations = kv.get_int("fit", "max_iterations", 100);
  if (cfg.epsilon < 0.0 || cfg.max_iterations < 1)
    throw InvalidInput("config: fit parameters out of range");

  if (cfg.mode == RunMode::channel) {
    if (static_cast<int>(cfg.channel_d.size()) != cfg.p)
      throw InvalidInput("config: channel mode needs one d<j> matrix per sensor");
    if (static_cast<int>(cfg.gamma.size()) != cfg.p)
      throw InvalidInput("config: channel mode needs one gamma per sensor");
  }
  return cfg;
}

}  // namespace sdwsn
