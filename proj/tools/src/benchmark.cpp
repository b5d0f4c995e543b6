// Repeated training over a grid of (cscm, fs type, firing mode) cells.

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <thread>

#include "commands.hpp"
#include "format.hpp"

namespace it2fls::cli {

namespace {

struct Job {
  std::size_t cell;
  std::uint64_t seed;
};

struct RunRow {
  MetricsReport report;
  std::optional<std::size_t> best_epoch;
};

std::string cell_name(const Architecture& a) {
  return std::string(to_string(a.cscm)) + "," + std::string(to_string(a.fs_type)) + "," +
         std::string(to_string(a.firing_mode));
}

std::string mean_std(const MetricSummary& s, double scale, int digits) {
  return fixed(scale * s.mean, digits) + " +- " + fixed(scale * s.std, digits);
}

}  // namespace

int cmd_benchmark(const BenchmarkCommand& cmd, std::ostream& out, std::ostream& err) {
  if (cmd.rules == 0) throw UsageError("--rules must be at least 1");
  if (cmd.seeds == 0) throw UsageError("--seeds must be at least 1");
  if (cmd.train.beta) throw UsageError("--beta is not supported by benchmark; weighted variants start at 0.5");

  const auto raw = load_csv(cmd.data.path, {cmd.data.target, cmd.data.delimiter});
  warn_constant_columns(raw, err);

  std::vector<Architecture> cells;
  try {
    for (const auto& c : cmd.cscm)
      for (const auto& f : cmd.fs_type)
        for (const auto& m : cmd.firing)
          cells.push_back({cmd.rules, raw.inputs(), parse_fs_type(f), parse_firing_mode(m), parse_cscm(c)});
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  // Parsed once up front so flag errors surface before any training.
  const auto base_config = make_train_config(cmd.train, cells.front().cscm);

  std::vector<Job> jobs;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (std::size_t s = 0; s < cmd.seeds; ++s) jobs.push_back({c, cmd.train.seed + s});

  // The split and normalization depend only on the seed; share them across cells.
  std::vector<std::optional<PreparedData>> prepared(cmd.seeds);
  for (std::size_t s = 0; s < cmd.seeds; ++s)
    prepared[s] = prepare(raw, cmd.train.split, cmd.train.seed + s, cmd.train.normalize);

  std::vector<RunRow> results(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const auto i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        auto config = base_config;
        config.seed = jobs[i].seed;
        const auto run = run_once(cells[jobs[i].cell], config, *prepared[jobs[i].seed - cmd.train.seed]);
        results[i] = {run.test_report, run.result.best_epoch};
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::size_t threads = cmd.threads ? cmd.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  const std::filesystem::path dir(cmd.out);
  std::filesystem::create_directories(dir);

  std::vector<CsvRow> run_rows;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& a = cells[jobs[i].cell];
    const auto& r = results[i].report;
    run_rows.push_back({std::string(to_string(a.cscm)), std::string(to_string(a.fs_type)),
                        std::string(to_string(a.firing_mode)), std::to_string(jobs[i].seed),
                        num(100 * r.rmse), num(r.picp), num(100 * r.pinaw), r.f2t ? "1" : "0", r.fpi ? "1" : "0",
                        results[i].best_epoch ? std::to_string(*results[i].best_epoch + 1) : ""});
  }
  write_csv(dir / "runs.csv",
            {"cscm", "fs_type", "firing_mode", "seed", "rmse_x100", "picp", "pinaw_x100", "f2t", "fpi", "best_epoch"},
            run_rows);

  std::vector<CsvRow> summary_rows, box_rows;
  out << pad("cell", 18) << pad("RMSE(x100)", 20) << pad("PICP", 20) << pad("PINAW(x100)", 20) << "#F2T|#FPI\n";
  for (std::size_t c = 0; c < cells.size(); ++c) {
    std::vector<MetricsReport> reports;
    for (std::size_t i = 0; i < jobs.size(); ++i)
      if (jobs[i].cell == c) reports.push_back(results[i].report);
    AggregateSummary counts;
    const auto s = try_aggregate(reports, &counts);
    const auto& a = cells[c];
    CsvRow row{std::string(to_string(a.cscm)), std::string(to_string(a.fs_type)),
               std::string(to_string(a.firing_mode)), std::to_string(counts.runs)};
    if (s) {
      for (const auto& [m, scale] : {std::pair{s->rmse, 100.0}, {s->picp, 1.0}, {s->pinaw, 100.0}}) {
        row.push_back(num(scale * m.mean));
        row.push_back(num(scale * m.std));
      }
      row.push_back(std::to_string(s->rmse.count));
    } else {
      for (int k = 0; k < 6; ++k) row.push_back("---");
      row.push_back("0");
    }
    row.push_back(std::to_string(counts.f2t));
    row.push_back(std::to_string(counts.fpi));
    summary_rows.push_back(row);

    out << pad(cell_name(a), 18);
    if (s) {
      out << pad(mean_std(s->rmse, 100, 2), 20) << pad(mean_std(s->picp, 1, 2), 20)
          << pad(mean_std(s->pinaw, 100, 2), 20);
    } else {
      out << pad("---", 20) << pad("---", 20) << pad("---", 20);
    }
    out << counts.f2t << "|" << counts.fpi << "\n";

    // Box statistics over the runs kept by the aggregate.
    std::vector<double> rm, pc, pw;
    for (const auto& r : reports) {
      if (r.f2t || r.fpi) continue;
      rm.push_back(100 * r.rmse);
      pc.push_back(r.picp);
      pw.push_back(100 * r.pinaw);
    }
    for (const auto& [name, values] : {std::pair<const char*, const std::vector<double>&>{"rmse_x100", rm},
                                       {"picp", pc},
                                       {"pinaw_x100", pw}}) {
      CsvRow b{row[0], row[1], row[2], name};
      if (values.empty()) {
        b.push_back("0");
        for (int k = 0; k < 8; ++k) b.push_back("---");
      } else {
        const auto bs = box_stats(values);
        std::string outliers;
        for (std::size_t k = 0; k < bs.outliers.size(); ++k) outliers += (k ? ";" : "") + num(bs.outliers[k]);
        for (const auto& v : {std::to_string(bs.n), num(bs.median), num(bs.q1), num(bs.q3), num(bs.whisker_low),
                              num(bs.whisker_high), num(bs.notch_low), num(bs.notch_high), outliers})
          b.push_back(v);
      }
      box_rows.push_back(std::move(b));
    }
  }
  write_csv(dir / "summary.csv",
            {"cscm", "fs_type", "firing_mode", "runs", "rmse_x100_mean", "rmse_x100_std", "picp_mean", "picp_std",
             "pinaw_x100_mean", "pinaw_x100_std", "kept", "f2t", "fpi"},
            summary_rows);
  write_csv(dir / "boxplot.csv",
            {"cscm", "fs_type", "firing_mode", "metric", "n", "median", "q1", "q3", "whisker_low", "whisker_high",
             "notch_low", "notch_high", "outliers"},
            box_rows);
  out << cells.size() << " cells x " << cmd.seeds << " seeds = " << jobs.size() << " runs\n";
  return 0;
}

}  // namespace it2fls::cli
