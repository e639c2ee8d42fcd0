#include "lrgd/bench.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include "lrgd/funcspec.hpp"
#include "lrgd/functions.hpp"

namespace lrgd {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  return s;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// RFC-4180 style quoting; LF line endings.
class CsvWriter {
public:
  explicit CsvWriter(char sep) : sep_(sep) {}

  CsvWriter& field(const std::string& s) {
    if (!first_) out_ << sep_;
    first_ = false;
    if (s.find(sep_) != std::string::npos ||
        s.find('"') != std::string::npos ||
        s.find('\n') != std::string::npos) {
      out_ << '"';
      for (char c : s) {
        if (c == '"') out_ << '"';
        out_ << c;
      }
      out_ << '"';
    } else {
      out_ << s;
    }
    return *this;
  }
  CsvWriter& field(double v) { return field(fmt(v)); }
  CsvWriter& field(std::int64_t v) { return field(std::to_string(v)); }
  CsvWriter& field(int v) { return field(std::to_string(v)); }
  void endrow() {
    out_ << '\n';
    first_ = true;
  }
  std::string str() const { return out_.str(); }

private:
  char sep_;
  std::ostringstream out_;
  bool first_ = true;
};

char separator(const ExperimentConfig& cfg) {
  return cfg.format == "tsv" ? '\t' : ',';
}

std::string vec_to_string(const Vector& v) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) s += ";";
    s += fmt(v[i]);
  }
  return s + ")";
}

struct RowRecord {
  std::string objective_id;
  std::string algorithm;
  double alpha_denom = 0;
  double alpha = 0;
  double eps = 0;
  Vector theta0;
  std::string status = "ok"; // ok | diverged
  RunReport report;
  double budget = 0;
};

void append_result_row(CsvWriter& csv, const RowRecord& row) {
  const CallLedger& led = row.report.ledger;
  csv.field(row.objective_id)
      .field(row.algorithm)
      .field(row.alpha_denom)
      .field(row.alpha)
      .field(row.eps)
      .field(vec_to_string(row.theta0))
      .field(row.status)
      .field(std::string(row.report.converged ? "true" : "false"))
      .field(row.report.iterations)
      .field(row.report.phases)
      .field(led.sampling_calls())
      .field(led.descent_calls())
      .field(led.total_counted())
      .field(led.instrumentation_calls())
      .field(row.report.calls_including_guards)
      .field(row.report.final_f)
      .field(row.report.final_grad_norm)
      .field(row.budget);
  csv.endrow();
}

void result_header(CsvWriter& csv) {
  for (const char* name :
       {"objective_id", "algorithm", "alpha_denom", "alpha", "eps", "theta0",
        "status", "converged", "iterations", "phases", "sampling_calls",
        "descent_calls", "total_counted", "instrumentation_calls",
        "calls_including_guards", "final_f", "final_grad_norm",
        "theoretical_budget"})
    csv.field(std::string(name));
  csv.endrow();
}

} // namespace

FlatConfig FlatConfig::parse_string(const std::string& text) {
  FlatConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw Error("config: expected 'key = value' in line '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (!value.empty() && value.front() == '[') {
      if (value.back() != ']') throw Error("config: unterminated array");
      value = value.substr(1, value.size() - 2);
      std::vector<std::string> items;
      std::string item;
      std::istringstream vin(value);
      while (std::getline(vin, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(unquote(item));
      }
      cfg.arrays_[key] = std::move(items);
    } else {
      cfg.scalars_[key] = unquote(value);
    }
  }
  return cfg;
}

FlatConfig FlatConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

bool FlatConfig::has(const std::string& key) const {
  return scalars_.count(key) || arrays_.count(key);
}

std::string FlatConfig::get_string(const std::string& key,
                                   const std::string& fallback) const {
  const auto it = scalars_.find(key);
  return it == scalars_.end() ? fallback : it->second;
}

double FlatConfig::get_double(const std::string& key, double fallback) const {
  const auto it = scalars_.find(key);
  return it == scalars_.end() ? fallback : std::stod(it->second);
}

std::int64_t FlatConfig::get_int(const std::string& key,
                                 std::int64_t fallback) const {
  const auto it = scalars_.find(key);
  return it == scalars_.end() ? fallback : std::stoll(it->second);
}

std::uint64_t FlatConfig::get_u64(const std::string& key,
                                  std::uint64_t fallback) const {
  const auto it = scalars_.find(key);
  return it == scalars_.end() ? fallback : std::stoull(it->second);
}

std::vector<double> FlatConfig::get_doubles(
    const std::string& key, std::vector<double> fallback) const {
  const auto it = arrays_.find(key);
  if (it == arrays_.end()) return fallback;
  std::vector<double> out;
  out.reserve(it->second.size());
  for (const auto& s : it->second) out.push_back(std::stod(s));
  return out;
}

void FlatConfig::set(const std::string& key, const std::string& value) {
  scalars_[key] = value;
}

ExperimentConfig load_experiment_config(const std::string& kind,
                                        const std::string& config_path,
                                        std::uint64_t seed,
                                        const std::string& out_dir,
                                        const std::string& format) {
  ExperimentConfig cfg;
  cfg.kind = kind;
  if (!config_path.empty()) cfg.raw = FlatConfig::parse_file(config_path);
  cfg.seed = cfg.raw.get_u64("seed", seed);
  cfg.output_dir = cfg.raw.get_string("out", out_dir);
  cfg.format = cfg.raw.get_string("format", format);
  cfg.objective_spec = cfg.raw.get_string("objective", "");
  if (cfg.format != "csv" && cfg.format != "tsv")
    throw Error("config: format must be csv or tsv");
  return cfg;
}

const TableReference& table_half_reference() {
  static const TableReference ref = [] {
    TableReference t;
    t.theta0s = {{1.00, 0.00}, {0.87, 0.50}, {0.71, 0.71},
                 {0.50, 0.87}, {0.00, 1.00}};
    t.ls = {1, 10, 100, 1000};
    t.gd = {{2, 2, 2, 2},
            {2, 22, 230, 2302},
            {2, 30, 300, 3004},
            {2, 34, 340, 3410},
            {2, 36, 368, 3688}};
    t.lowrank = {{5, 5, 5, 5},
                 {5, 20, 130, 1190},
                 {5, 26, 166, 1536},
                 {5, 31, 195, 1746},
                 {5, 22, 188, 1848}};
    return t;
  }();
  return ref;
}

ExperimentOutput run_table_experiment(const ExperimentConfig& cfg) {
  const std::vector<double> ls =
      cfg.raw.get_doubles("ls", {1, 10, 100, 1000});
  const std::vector<double> denoms =
      cfg.raw.get_doubles("alpha_denominators", {2, 4, 10});
  const double eps = cfg.raw.get_double("eps", 0.1);
  const double inner_factor =
      cfg.raw.get_double("inner_threshold_factor", 0.9);
  const std::vector<double> t0x =
      cfg.raw.get_doubles("theta0_x", {1.00, 0.87, 0.71, 0.50, 0.00});
  const std::vector<double> t0y =
      cfg.raw.get_doubles("theta0_y", {0.00, 0.50, 0.71, 0.87, 1.00});
  if (t0x.size() != t0y.size() || t0x.empty())
    throw Error("table: theta0_x and theta0_y must be equal-length");
  const double thr = std::sqrt(eps);

  struct Cell {
    double denom, L;
    Vector theta0;
    std::size_t index;
  };
  std::vector<Cell> cells;
  for (double denom : denoms)
    for (double L : ls)
      for (std::size_t i = 0; i < t0x.size(); ++i) {
        Vector t0(2);
        t0 << t0x[i], t0y[i];
        cells.push_back({denom, L, t0, cells.size()});
      }

  struct CellResult {
    RowRecord gd_row, iter_row, lrgd_row;
  };
  std::vector<std::future<CellResult>> futures;
  futures.reserve(cells.size());
  const std::uint64_t seed = cfg.seed;
  for (const Cell& cell : cells) {
    futures.push_back(std::async(std::launch::async, [cell, thr, eps,
                                                      inner_factor, seed] {
      Matrix H = Matrix::Zero(2, 2);
      H(0, 0) = cell.L;
      H(1, 1) = 1.0;
      const Objective obj = make_quadratic(H);
      const double alpha = 1.0 / (cell.denom * cell.L);
      const std::string obj_id = "quadratic-diag(" + fmt(cell.L) + ",1)";

      AlgoConfig base;
      base.stepsize = alpha;
      base.target_eps = eps;
      base.termination = GradNorm{thr};
      base.max_iters = 2000000;

      CellResult res;
      const auto budget = [&](int r, double delta0) {
        // kappa of theta^T H theta is L (2*lambda_max / 2*lambda_min).
        BudgetParams prm;
        prm.kappa = cell.L;
        prm.r = r;
        prm.p = 2;
        prm.delta0 = delta0;
        prm.eps = eps;
        return delta0 > eps ? theoretical_budget(BudgetSetting::ExactSC, prm)
                            : 0.0;
      };

      const auto run_one = [&](const std::string& algo) {
        RowRecord row;
        row.objective_id = obj_id;
        row.algorithm = algo;
        row.alpha_denom = cell.denom;
        row.alpha = alpha;
        row.eps = eps;
        row.theta0 = cell.theta0;
        CountedObjective cobj(obj);
        try {
          if (algo == "gd") {
            row.report = gd(cobj, cell.theta0, base);
          } else if (algo == "iterated") {
            AlgoConfig c = base;
            c.rank = 1;
            c.inner_grad_threshold = inner_factor * thr;
            row.report = iterated_lrgd(cobj, cell.theta0, c);
          } else {
            // Plain low-rank descent on a fixed estimated subspace cannot
            // reach full-gradient stationarity on these full-rank
            // quadratics; it stops when its projected gradient is spent.
            AlgoConfig c = base;
            c.rank = 1;
            c.sampler.seed = seed + cell.index;
            c.termination = ProjGradNorm{thr};
            row.report = lrgd(cobj, cell.theta0, c);
          }
          row.budget = budget(algo == "gd" ? 2 : 1,
                              row.report.delta0.value_or(0.0));
        } catch (const DivergenceError&) {
          row.status = "diverged";
          row.report.ledger = cobj.ledger_snapshot();
          row.report.final_point = cell.theta0;
        }
        return row;
      };
      res.gd_row = run_one("gd");
      res.iter_row = run_one("iterated");
      res.lrgd_row = run_one("lrgd");
      return res;
    }));
  }

  std::vector<CellResult> results;
  results.reserve(cells.size());
  for (auto& f : futures) results.push_back(f.get());

  ExperimentOutput out;
  CsvWriter csv(separator(cfg));
  result_header(csv);
  bool all_ok = true;
  for (const auto& res : results) {
    append_result_row(csv, res.gd_row);
    append_result_row(csv, res.iter_row);
    append_result_row(csv, res.lrgd_row);
    all_ok = all_ok && res.gd_row.status == "ok" &&
             res.iter_row.status == "ok" && res.lrgd_row.status == "ok";
  }
  out.ok = all_ok;
  out.files.emplace_back("table." + cfg.format, csv.str());

  // Aligned text tables, one per stepsize policy: "gd (iterated) [lrgd]".
  std::ostringstream pretty;
  std::size_t idx = 0;
  for (double denom : denoms) {
    pretty << "alpha = 1/(" << fmt(denom) << " L), eps = " << fmt(eps)
           << ", stop |grad| <= " << fmt(thr) << "\n";
    pretty << "          theta0 \\ H=diag(L,1), L =";
    for (double L : ls) pretty << "  " << fmt(L);
    pretty << "\n";
    std::vector<std::string> lines(t0x.size());
    for (std::size_t li = 0; li < ls.size(); ++li) {
      for (std::size_t i = 0; i < t0x.size(); ++i) {
        const CellResult& res = results[idx + li * t0x.size() + i];
        char inner[80];
        std::snprintf(inner, sizeof(inner), "%ld (%ld) [%ld]",
                      static_cast<long>(res.gd_row.report.ledger.total_counted()),
                      static_cast<long>(res.iter_row.report.calls_including_guards),
                      static_cast<long>(res.lrgd_row.report.ledger.total_counted()));
        char cellbuf[96];
        std::snprintf(cellbuf, sizeof(cellbuf), "  %-22s", inner);
        lines[i] += cellbuf;
      }
    }
    for (std::size_t i = 0; i < t0x.size(); ++i) {
      char head[48];
      std::snprintf(head, sizeof(head), "(%.2f, %.2f)", t0x[i], t0y[i]);
      pretty << head << lines[i] << "\n";
    }
    pretty << "\n";
    idx += ls.size() * t0x.size();
  }
  pretty << "cells: gd counted (iterated, guard evaluations included) "
            "[plain low-rank counted]\n";
  out.stdout_text = pretty.str();
  return out;
}

namespace {

std::string phase_label_at(const std::vector<PhaseMark>& marks,
                           std::int64_t update_index) {
  std::string label = "init";
  for (const auto& m : marks) {
    if (m.iteration <= update_index - 1)
      label = m.label;
    else
      break;
  }
  return label;
}

std::string trace_csv(const RunTrace& trace, char sep, bool phased) {
  CsvWriter csv(sep);
  const Eigen::Index p = trace.iterates.empty() ? 0 : trace.iterates[0].size();
  csv.field(std::string("iter"));
  for (Eigen::Index i = 0; i < p; ++i)
    csv.field("theta_" + std::to_string(i));
  csv.field(std::string("f"))
      .field(std::string("grad_norm"))
      .field(std::string("cum_counted_calls"))
      .field(std::string("phase"));
  csv.endrow();
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    csv.field(static_cast<std::int64_t>(k));
    for (Eigen::Index i = 0; i < p; ++i) csv.field(trace.iterates[k][i]);
    csv.field(trace.f_values[k]).field(trace.grad_norms[k]);
    csv.field(trace.counted_calls[k]);
    csv.field(phased ? phase_label_at(trace.phase_marks,
                                      static_cast<std::int64_t>(k))
                     : std::string("gd"));
    csv.endrow();
  }
  return csv.str();
}

} // namespace

ExperimentOutput run_trajectory_experiment(const ExperimentConfig& cfg) {
  const std::vector<double> hdiag = cfg.raw.get_doubles("h_diag", {3, 1});
  const std::vector<double> t0v = cfg.raw.get_doubles("theta0", {1.5, 1.5});
  const double alpha = cfg.raw.get_double("alpha", 1.0 / 15.0);
  const double eps = cfg.raw.get_double("eps", 0.02);
  const double mu_guard = cfg.raw.get_double("mu_guard", 6.0);
  const int rank = static_cast<int>(cfg.raw.get_int("rank", 1));

  Matrix H = Matrix::Zero(static_cast<Eigen::Index>(hdiag.size()),
                          static_cast<Eigen::Index>(hdiag.size()));
  for (std::size_t i = 0; i < hdiag.size(); ++i)
    H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = hdiag[i];
  const Objective obj = make_quadratic(H);
  Vector theta0(static_cast<Eigen::Index>(t0v.size()));
  for (std::size_t i = 0; i < t0v.size(); ++i)
    theta0[static_cast<Eigen::Index>(i)] = t0v[i];

  AlgoConfig base;
  base.stepsize = alpha;
  base.target_eps = eps;
  base.termination = PLSuboptimality{mu_guard, eps};
  base.record_trace = true;
  base.max_iters = 1000000;

  CountedObjective gd_obj(obj);
  const RunReport gd_report = gd(gd_obj, theta0, base);

  AlgoConfig iter_cfg = base;
  iter_cfg.rank = rank;
  CountedObjective it_obj(obj);
  const RunReport it_report = iterated_lrgd(it_obj, theta0, iter_cfg);

  const char sep = separator(cfg);
  ExperimentOutput out;
  out.files.emplace_back("gd_trace." + cfg.format,
                         trace_csv(*gd_report.trace, sep, false));
  out.files.emplace_back("lrgd_trace." + cfg.format,
                         trace_csv(*it_report.trace, sep, true));

  CsvWriter phases(sep);
  phases.field(std::string("index"))
      .field(std::string("iteration"))
      .field(std::string("label"));
  phases.endrow();
  for (std::size_t i = 0; i < it_report.trace->phase_marks.size(); ++i) {
    phases.field(static_cast<std::int64_t>(i))
        .field(it_report.trace->phase_marks[i].iteration)
        .field(it_report.trace->phase_marks[i].label);
    phases.endrow();
  }
  out.files.emplace_back("phases." + cfg.format, phases.str());

  CsvWriter summary(sep);
  for (const char* name :
       {"algorithm", "converged", "iterations", "phases", "sampling_calls",
        "descent_calls", "total_counted", "instrumentation_calls",
        "calls_including_guards", "final_f", "final_grad_norm"})
    summary.field(std::string(name));
  summary.endrow();
  const auto srow = [&summary](const char* algo, const RunReport& rep) {
    summary.field(std::string(algo))
        .field(std::string(rep.converged ? "true" : "false"))
        .field(rep.iterations)
        .field(rep.phases)
        .field(rep.ledger.sampling_calls())
        .field(rep.ledger.descent_calls())
        .field(rep.ledger.total_counted())
        .field(rep.ledger.instrumentation_calls())
        .field(rep.calls_including_guards)
        .field(rep.final_f)
        .field(rep.final_grad_norm);
    summary.endrow();
  };
  srow("gd", gd_report);
  srow("iterated", it_report);
  out.files.emplace_back("summary." + cfg.format, summary.str());

  std::ostringstream text;
  text << "gd:       " << gd_report.iterations << " iterations, "
       << gd_report.ledger.total_counted() << " counted calls\n";
  text << "iterated: " << it_report.iterations << " iterations, "
       << it_report.ledger.total_counted() << " counted calls ("
       << it_report.calls_including_guards << " with guards), "
       << it_report.phases << " phases\n";
  out.stdout_text = text.str();
  return out;
}

ExperimentOutput run_scaling_experiment(const ExperimentConfig& cfg) {
  const std::vector<double> ps =
      cfg.raw.get_doubles("ps", {10, 20, 50, 100, 200, 500});
  const std::vector<double> ranks = cfg.raw.get_doubles("ranks", {1, 2, 5});
  const std::vector<double> eps_list = cfg.raw.get_doubles(
      "eps_list", {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8});
  const double kappa = cfg.raw.get_double("kappa", 8.0);
  const double x0_scale = cfg.raw.get_double("x0_scale", 2.0);

  struct Cell {
    int p, r;
    double eps;
    std::size_t index;
  };
  std::vector<Cell> cells;
  for (double pd : ps)
    for (double rd : ranks)
      for (double eps : eps_list) {
        const int p = static_cast<int>(pd), r = static_cast<int>(rd);
        if (r < p) cells.push_back({p, r, eps, cells.size()});
      }

  struct CellOut {
    Cell cell;
    RunReport gd_rep, lr_rep;
    double delta0 = 0, budget = 0;
  };
  const std::uint64_t seed = cfg.seed;
  std::vector<std::future<CellOut>> futures;
  futures.reserve(cells.size());
  for (const Cell& cell : cells) {
    futures.push_back(std::async(std::launch::async, [cell, kappa, x0_scale,
                                                      seed] {
      // Deterministic orthonormal rows for A, independent of eps so the
      // same objective is solved across the accuracy sweep.
      std::mt19937_64 rng(seed ^ (0x517cc1b727220a95ull * (cell.p * 31 + cell.r)));
      std::normal_distribution<double> gauss(0.0, 1.0);
      Matrix raw(cell.p, cell.r);
      for (int i = 0; i < cell.p; ++i)
        for (int j = 0; j < cell.r; ++j) raw(i, j) = gauss(rng);
      std::vector<Vector> cols;
      for (int j = 0; j < cell.r; ++j) cols.push_back(raw.col(j));
      const Subspace basis = orthonormalize(cols, default_drop_tol(cols));
      const Matrix A = basis.basis().transpose(); // r x p, orthonormal rows

      Vector d(cell.r);
      d.setOnes();
      d[0] = kappa;
      const Objective obj = make_ridge(A, quadratic_profile(d));

      Vector x0(cell.r);
      x0.setConstant(x0_scale);
      const Vector theta0 = A.transpose() * x0;

      AlgoConfig base;
      base.stepsize = 1.0 / kappa; // alpha = 1/L of the ridge
      base.target_eps = cell.eps;
      base.termination = SuboptimalityGap{0.0, cell.eps};
      base.max_iters = 10000000;

      CellOut out;
      out.cell = cell;
      CountedObjective gobj(obj);
      out.gd_rep = gd(gobj, theta0, base);
      AlgoConfig lc = base;
      lc.rank = cell.r;
      lc.sampler.seed = seed + cell.index;
      CountedObjective lobj(obj);
      out.lr_rep = lrgd(lobj, theta0, lc);
      out.delta0 = out.lr_rep.delta0.value_or(0.0);
      BudgetParams prm;
      prm.kappa = kappa;
      prm.r = cell.r;
      prm.p = cell.p;
      prm.delta0 = out.delta0;
      prm.eps = cell.eps;
      out.budget = theoretical_budget(BudgetSetting::ExactSC, prm);
      return out;
    }));
  }

  CsvWriter csv(separator(cfg));
  for (const char* name :
       {"p", "r", "eps", "algorithm", "converged", "iterations",
        "sampling_calls", "descent_calls", "total_counted",
        "instrumentation_calls", "final_f", "delta0", "budget_exact_sc",
        "lrgd_over_gd"})
    csv.field(std::string(name));
  csv.endrow();
  bool ok = true;
  for (auto& f : futures) {
    const CellOut o = f.get();
    ok = ok && o.gd_rep.converged && o.lr_rep.converged;
    const auto row = [&](const char* algo, const RunReport& rep,
                         double ratio) {
      csv.field(o.cell.p)
          .field(o.cell.r)
          .field(o.cell.eps)
          .field(std::string(algo))
          .field(std::string(rep.converged ? "true" : "false"))
          .field(rep.iterations)
          .field(rep.ledger.sampling_calls())
          .field(rep.ledger.descent_calls())
          .field(rep.ledger.total_counted())
          .field(rep.ledger.instrumentation_calls())
          .field(rep.final_f)
          .field(o.delta0)
          .field(o.budget);
      if (ratio >= 0)
        csv.field(ratio);
      else
        csv.field(std::string(""));
      csv.endrow();
    };
    row("gd", o.gd_rep, -1.0);
    row("lrgd", o.lr_rep,
        static_cast<double>(o.lr_rep.ledger.total_counted()) /
            static_cast<double>(o.gd_rep.ledger.total_counted()));
  }

  ExperimentOutput out;
  out.ok = ok;
  out.files.emplace_back("scaling." + cfg.format, csv.str());
  out.stdout_text = "scaling grid: " + std::to_string(cells.size()) +
                    " cells (gd + lrgd each)\n";
  return out;
}

ExperimentOutput run_rank_spectrum(const ExperimentConfig& cfg) {
  std::string spec = cfg.objective_spec;
  if (spec.empty())
    spec = "(sum (sum (ridge (profile squares) (rows (1 0.5 0.25 0 0 0))) "
           "(ridge (profile squares) (rows (0 1 0.5 0.25 0 0)))) "
           "(ridge (profile squares) (rows (0 0 1 0.5 0.25 0))))";
  const Objective obj = parse_objective(spec);
  const int n = static_cast<int>(cfg.raw.get_int("n_samples", 40));
  const double radius = cfg.raw.get_double("radius", 2.0);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vector> gradients;
  for (int k = 0; k < n; ++k) {
    Vector point(obj.dim);
    for (int i = 0; i < obj.dim; ++i) point[i] = radius * gauss(rng);
    const Vector g = full_gradient_raw(obj, point);
    if (g.norm() > 0) gradients.push_back(g);
  }
  if (gradients.empty())
    throw DegenerateSampleError("degenerate sample: all gradients zero");
  const GradientMatrix G = GradientMatrix::from_gradients(gradients);
  const Vector& sigma = G.singular_values();
  const double total = sigma.squaredNorm();

  CsvWriter csv(separator(cfg));
  csv.field(std::string("index")).field(std::string("normalized_sigma_sq"));
  csv.endrow();
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    csv.field(static_cast<std::int64_t>(i + 1));
    csv.field(sigma[i] * sigma[i] / total);
    csv.endrow();
  }

  ExperimentOutput out;
  out.files.emplace_back("spectrum." + cfg.format, csv.str());
  out.stdout_text = "objective: " + obj.name + ", " +
                    std::to_string(gradients.size()) + " gradients\n";
  return out;
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentOutput& out) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.output_dir);
  for (const auto& [name, content] : out.files) {
    std::ofstream f(fs::path(cfg.output_dir) / name, std::ios::binary);
    if (!f) throw Error("cannot write output file " + name);
    f << content;
  }
}

} // namespace lrgd
