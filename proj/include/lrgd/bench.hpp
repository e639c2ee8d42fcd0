#ifndef LRGD_BENCH_HPP
#define LRGD_BENCH_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lrgd/algorithms.hpp"

namespace lrgd {

/// Flat `key = value` / `key = [a, b, c]` config text. `#` starts a comment;
/// values may be double-quoted to protect spaces.
class FlatConfig {
public:
  static FlatConfig parse_string(const std::string& text);
  static FlatConfig parse_file(const std::string& path);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_doubles(const std::string& key,
                                  std::vector<double> fallback) const;

  void set(const std::string& key, const std::string& value);

private:
  std::map<std::string, std::string> scalars_;
  std::map<std::string, std::vector<std::string>> arrays_;
};

/// Parsed experiment description for the CLI.
struct ExperimentConfig {
  std::string kind; // table | trajectory | scaling | spectrum
  std::string objective_spec;
  std::vector<std::string> algorithms;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  std::string format = "csv"; // csv | tsv
  FlatConfig raw;             // kind-specific knobs
};

ExperimentConfig load_experiment_config(const std::string& kind,
                                        const std::string& config_path,
                                        std::uint64_t seed,
                                        const std::string& out_dir,
                                        const std::string& format);

/// In-memory result of an experiment: named files plus text for stdout.
/// Identical config and seed produce byte-identical file contents.
struct ExperimentOutput {
  std::vector<std::pair<std::string, std::string>> files;
  std::string stdout_text;
  bool ok = true; // false => some run diverged (CLI exits nonzero)
};

ExperimentOutput run_table_experiment(const ExperimentConfig& cfg);
ExperimentOutput run_trajectory_experiment(const ExperimentConfig& cfg);
ExperimentOutput run_scaling_experiment(const ExperimentConfig& cfg);
ExperimentOutput run_rank_spectrum(const ExperimentConfig& cfg);

/// Writes output files into cfg.output_dir, creating it if needed.
void write_outputs(const ExperimentConfig& cfg, const ExperimentOutput& out);

/// Reference oracle-call counts from the published tables, used by the
/// regression tests (alpha = 1/(2L) set): gd and parenthesized low-rank
/// counts for H = diag(L, 1), L in {1, 10, 100, 1000} and the five
/// unit-circle initializations.
struct TableReference {
  std::vector<std::array<double, 2>> theta0s;
  std::vector<double> ls;
  std::vector<std::vector<long>> gd;
  std::vector<std::vector<long>> lowrank;
};
const TableReference& table_half_reference();

} // namespace lrgd

#endif
