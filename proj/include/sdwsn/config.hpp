#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sdwsn/covmodel.hpp"

namespace sdwsn {

/// Sectioned key-value config file:
///   top-level `key = value` lines, `[section]` headers, `#`/`;` comments.
/// Matrix values are written either `inline:1 2 ; 3 4` (rows split on `;`)
/// or `file:relative/path.txt`.
class KvConfig {
 public:
  static KvConfig parse_file(const std::string& path);
  static KvConfig parse_string(const std::string& text,
                               const std::string& base_dir = ".");

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  std::string require_string(const std::string& section,
                             const std::string& key) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  int get_int(const std::string& section, const std::string& key,
              int fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  std::vector<double> get_doubles(const std::string& section,
                                  const std::string& key) const;
  std::vector<int> get_ints(const std::string& section,
                            const std::string& key) const;
  /// Matrix from an `inline:` or `file:` value.
  Mat get_mat(const std::string& section, const std::string& key) const;

  const std::string& base_dir() const { return base_dir_; }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string base_dir_;
};

enum class RunMode { ideal, channel };
enum class ModelSource { analytic_gaussian, sample_data, image };

/// Everything an experiment run needs, validated up front.
struct ExperimentConfig {
  RunMode mode = RunMode::ideal;
  ModelSource model_source = ModelSource::analytic_gaussian;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  std::string format = "both";  // csv | svg | both

  // Partition.
  int p = 2;
  int m = 3;
  std::vector<int> n;
  std::vector<int> r;
  Lifting lifting = Lifting::reduced;

  // Model parameters.
  Mat exx;                    // analytic source covariance (correlation form)
  std::vector<double> sigma;  // analytic observation noise levels
  std::vector<double> beta;   // sample / image observation noise levels
  int sample_count = 20;      // training samples for sample-data mode

  // Image mode.
  std::string image_path;  // empty selects the built-in synthetic image
  int image_size = 64;

  // Channel.
  std::vector<Mat> channel_d;
  std::vector<double> gamma;

  // Fit.
  double epsilon = 1e-9;
  int max_iterations = 100;

  BlockPartition partition() const;

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_kv(const KvConfig& kv);
};

}  // namespace sdwsn
