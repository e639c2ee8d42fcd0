#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lrgd/bench.hpp"
#include "lrgd/funcspec.hpp"

using namespace lrgd;

namespace {

ExperimentConfig quick_config(const std::string& kind) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  cfg.seed = 7;
  cfg.format = "csv";
  return cfg;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

const std::string& file_named(const ExperimentOutput& out,
                              const std::string& name) {
  for (const auto& [fname, content] : out.files)
    if (fname == name) return content;
  throw std::runtime_error("missing output file " + name);
}

} // namespace

TEST_CASE("flat config parsing") {
  const FlatConfig cfg = FlatConfig::parse_string(
      "# comment\n"
      "eps = 0.25\n"
      "name = \"hello world\"  # trailing\n"
      "values = [1, 2.5, 3]\n"
      "seed = 42\n");
  CHECK(cfg.get_double("eps", 0) == doctest::Approx(0.25));
  CHECK(cfg.get_string("name", "") == "hello world");
  CHECK(cfg.get_u64("seed", 0) == 42);
  const auto vals = cfg.get_doubles("values", {});
  REQUIRE(vals.size() == 3);
  CHECK(vals[1] == doctest::Approx(2.5));
  CHECK(cfg.get_double("missing", 9.5) == doctest::Approx(9.5));
  CHECK_THROWS_AS(FlatConfig::parse_string("novalue\n"), Error);
}

TEST_CASE("funcspec parses the documented grammar") {
  SUBCASE("quadratic diag") {
    const Objective q = parse_objective("(quadratic (diag 3 1))");
    Vector t(2);
    t << 1.5, 1.5;
    CHECK(eval(q, t) == doctest::Approx(9.0));
  }
  SUBCASE("ridge with profile and rows") {
    const Objective f = parse_objective(
        "(ridge (profile squares) (rows (1 0 0) (0 1 0)))");
    CHECK(f.dim == 3);
    CHECK(*f.known_rank == 2);
  }
  SUBCASE("combinators nest") {
    const Objective f = parse_objective(
        "(scale 2 (sum (ridge (profile squares) (rows (1 0 0 0))) "
        "(ridge (profile squares) (rows (0 1 0 0)))))");
    CHECK(f.dim == 4);
    CHECK(*f.known_rank == 2);
    Vector t = Vector::Zero(4);
    t[0] = 1;
    CHECK(eval(f, t) == doctest::Approx(2.0));
  }
  SUBCASE("geometric pair") {
    const Objective f = parse_objective("(geometric 3)");
    const Objective g = parse_objective("(loggeometric 3)");
    CHECK(*f.known_rank == 3);
    CHECK(*g.known_rank == 1);
  }
  SUBCASE("exp composition") {
    const Objective f = parse_objective(
        "(exp (ridge (profile linear) (rows (1 0))))");
    Vector t(2);
    t << 1, 5;
    CHECK(eval(f, t) == doctest::Approx(std::exp(1.0)));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(parse_objective("(unknown 1)"), Error);
    CHECK_THROWS_AS(parse_objective("(quadratic (diag 1)"), Error);
    CHECK_THROWS_AS(parse_objective("(scale 0 (quadratic (diag 1)))"), Error);
  }
}

TEST_CASE("table experiment output") {
  ExperimentConfig cfg = quick_config("table");
  cfg.raw = FlatConfig::parse_string("alpha_denominators = [2]\n");
  const ExperimentOutput out = run_table_experiment(cfg);
  CHECK(out.ok);
  const std::string& csv = file_named(out, "table.csv");
  // header + 3 algorithms x 4 Hessians x 5 starts
  CHECK(count_lines(csv) == 1 + 3 * 4 * 5);
  CHECK(csv.find("total_counted") != std::string::npos);
  CHECK(out.stdout_text.find("(5)") != std::string::npos);

  SUBCASE("every row satisfies the ledger identity") {
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line); // header
    while (std::getline(lines, line)) {
      // columns: ...,sampling(10),descent(11),total(12),...
      std::vector<std::string> cols;
      std::string cell;
      std::istringstream ls(line);
      while (std::getline(ls, cell, ',')) cols.push_back(cell);
      REQUIRE(cols.size() >= 15);
      const long sampling = std::stol(cols[10]);
      const long descent = std::stol(cols[11]);
      const long total = std::stol(cols[12]);
      CHECK(total == sampling + descent);
    }
  }
}

TEST_CASE("table gd column matches the published reference exactly") {
  ExperimentConfig cfg = quick_config("table");
  cfg.raw = FlatConfig::parse_string("alpha_denominators = [2]\n");
  const ExperimentOutput out = run_table_experiment(cfg);
  const TableReference& ref = table_half_reference();
  const std::string& csv = file_named(out, "table.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  // rows come in (gd, iterated, lrgd) triples over L-major, theta0-minor order
  std::size_t cell = 0;
  while (std::getline(lines, line)) {
    std::vector<std::string> cols;
    std::string c;
    std::istringstream ls(line);
    while (std::getline(ls, c, ',')) cols.push_back(c);
    if (cols[1] != "gd") continue;
    const std::size_t li = cell / ref.theta0s.size();
    const std::size_t ti = cell % ref.theta0s.size();
    CHECK(std::stol(cols[12]) == ref.gd[ti][li]);
    ++cell;
  }
  CHECK(cell == 20);
}

TEST_CASE("trajectory experiment output") {
  const ExperimentConfig cfg = quick_config("trajectory");
  const ExperimentOutput out = run_trajectory_experiment(cfg);
  CHECK(out.ok);
  const std::string& gd_trace = file_named(out, "gd_trace.csv");
  CHECK(gd_trace.find("iter,theta_0,theta_1,f,grad_norm,cum_counted_calls,"
                      "phase") == 0);
  CHECK(count_lines(gd_trace) == 1 + 14); // initial point + 13 updates
  const std::string& summary = file_named(out, "summary.csv");
  CHECK(summary.find("gd,true,13") != std::string::npos);
  const std::string& phases = file_named(out, "phases.csv");
  CHECK(count_lines(phases) >= 3);
}

TEST_CASE("spectrum experiment flags the expected structure") {
  ExperimentConfig cfg = quick_config("spectrum");
  const ExperimentOutput out = run_rank_spectrum(cfg);
  const std::string& csv = file_named(out, "spectrum.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line); // header
  std::vector<double> energies;
  while (std::getline(lines, line)) {
    const auto comma = line.find(',');
    energies.push_back(std::stod(line.substr(comma + 1)));
  }
  REQUIRE(energies.size() >= 3);
  // top-3 energy of a sum of three independent rank-1 pieces
  CHECK(energies[0] + energies[1] + energies[2] >= 1.0 - 1e-8);
}

TEST_CASE("experiments are byte-identical across reruns") {
  for (const std::string kind :
       {std::string("table"), std::string("trajectory"),
        std::string("scaling"), std::string("spectrum")}) {
    ExperimentConfig cfg = quick_config(kind);
    if (kind == "table")
      cfg.raw = FlatConfig::parse_string("alpha_denominators = [2]\n"
                                         "ls = [1, 10]\n");
    if (kind == "scaling")
      cfg.raw = FlatConfig::parse_string(
          "ps = [10, 20]\nranks = [1, 2]\neps_list = [1e-2, 1e-4]\n");
    ExperimentOutput a, b;
    if (kind == "table") {
      a = run_table_experiment(cfg);
      b = run_table_experiment(cfg);
    } else if (kind == "trajectory") {
      a = run_trajectory_experiment(cfg);
      b = run_trajectory_experiment(cfg);
    } else if (kind == "scaling") {
      a = run_scaling_experiment(cfg);
      b = run_scaling_experiment(cfg);
    } else {
      a = run_rank_spectrum(cfg);
      b = run_rank_spectrum(cfg);
    }
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) {
      INFO(kind << ":" << a.files[i].first);
      CHECK(a.files[i].first == b.files[i].first);
      CHECK(a.files[i].second == b.files[i].second);
    }
  }
}

TEST_CASE("tsv format switches the separator") {
  ExperimentConfig cfg = quick_config("spectrum");
  cfg.format = "tsv";
  const ExperimentOutput out = run_rank_spectrum(cfg);
  const std::string& tsv = file_named(out, "spectrum.tsv");
  CHECK(tsv.find('\t') != std::string::npos);
}
