#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "text_util.hpp"
#include "variastar/bench.hpp"
#include "variastar/error.hpp"

namespace variastar {

namespace {

double ratio_of(double cost, double optimal) {
  return cost == optimal ? 1.0 : cost / optimal;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

bool starts_heuristic(std::string_view token) {
  static constexpr std::string_view kNames[] = {"zero",     "manhattan", "euclidean", "diagonal",
                                                "octile",   "table",     "velocity"};
  for (std::string_view name : kNames) {
    if (token.substr(0, name.size()) == name &&
        (token.size() == name.size() || token[name.size()] == ':')) {
      return true;
    }
  }
  return false;
}

// Rows for one instance: oracle first, then each heuristic. Returns nothing
// if the goal is unreachable.
std::optional<std::vector<BenchRow>> run_instance(const BenchSuite& suite, std::uint64_t seed,
                                                  const std::vector<HeuristicSpec>& specs,
                                                  const std::vector<std::string>& names) {
  const GridMap map = random_grid(seed, suite.width, suite.height, suite.depth, suite.density);
  const Connectivity conn = suite.connectivity.value_or(default_connectivity(map));
  const GridDomain domain(map, conn);
  const Cell start{0, 0, 0};
  const Cell goal{suite.width - 1, suite.height - 1, suite.depth - 1};
  SearchOptions opts;
  opts.connectivity = conn;
  opts.allow_reopen = suite.allow_reopen;

  using Clock = std::chrono::steady_clock;
  auto elapsed_ms = [&](Clock::time_point t0) {
    return suite.measure_time
               ? std::chrono::duration<double, std::milli>(Clock::now() - t0).count()
               : 0.0;
  };

  const std::string instance = std::to_string(seed);
  auto t0 = Clock::now();
  const PlanResult oracle = dijkstra(domain, start, goal, opts);
  const double oracle_ms = elapsed_ms(t0);
  if (!oracle.found()) return std::nullopt;

  std::vector<BenchRow> rows;
  rows.push_back({instance, std::string(kOracleName), oracle.cost, oracle.cost, 1.0,
                  oracle.expansions, oracle.reopenings, oracle_ms});
  for (std::size_t n = 0; n < specs.size(); ++n) {
    t0 = Clock::now();
    const PlanResult r = astar(domain, start, goal, specs[n], opts);
    const double ms = elapsed_ms(t0);
    if (!r.found()) {
      throw Error("heuristic '" + names[n] + "' failed to find a path on instance " + instance);
    }
    rows.push_back({instance, names[n], r.cost, oracle.cost, ratio_of(r.cost, oracle.cost),
                    r.expansions, r.reopenings, ms});
  }
  return rows;
}

}  // namespace

std::vector<std::string> split_heuristic_list(std::string_view text) {
  std::vector<std::string> out;
  for (std::string_view token : detail::split(text, ',')) {
    if (token.empty()) continue;
    if (out.empty() || starts_heuristic(token)) {
      out.emplace_back(token);
    } else {
      out.back() += ",";
      out.back() += token;
    }
  }
  return out;
}

unsigned bench_threads(unsigned requested) {
  unsigned n = requested;
  if (n == 0) {
    n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("VARIASTAR_THREADS")) {
      const long cap = std::strtol(env, nullptr, 10);
      if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
    }
  }
  return std::max(1u, n);
}

BenchReport compare_heuristics(const BenchSuite& suite,
                               const std::vector<std::string>& heuristics) {
  if (heuristics.empty()) throw ConfigError("usage: at least one heuristic is required");
  if (suite.seed_end < suite.seed_begin) throw ConfigError("seed range is empty");
  std::vector<HeuristicSpec> specs;
  std::vector<std::string> names;
  for (const std::string& h : heuristics) {
    specs.push_back(parse_heuristic(h));
    names.push_back(to_string(specs.back()));
  }

  const std::uint64_t count = suite.seed_end - suite.seed_begin + 1;
  std::vector<std::optional<std::vector<BenchRow>>> slots(count);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::uint64_t n = next++; n < count; n = next++) {
      try {
        slots[n] = run_instance(suite, suite.seed_begin + n, specs, names);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  const unsigned threads =
      static_cast<unsigned>(std::min<std::uint64_t>(bench_threads(suite.threads), count));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  BenchReport report;
  report.instances = count;
  for (auto& slot : slots) {
    if (!slot) {
      ++report.unreachable_excluded;
      continue;
    }
    for (BenchRow& row : *slot) report.rows.push_back(std::move(row));
  }
  report.aggregates = aggregate_rows(report.rows);
  return report;
}

std::vector<BenchAggregate> aggregate_rows(const std::vector<BenchRow>& rows) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const BenchRow*>> groups;
  for (const BenchRow& r : rows) {
    auto [it, inserted] = groups.try_emplace(r.heuristic);
    if (inserted) order.push_back(r.heuristic);
    it->second.push_back(&r);
  }
  std::vector<BenchAggregate> out;
  for (const std::string& name : order) {
    const auto& group = groups[name];
    std::vector<double> ratio, expansions, reopenings, wall;
    for (const BenchRow* r : group) {
      ratio.push_back(r->ratio);
      expansions.push_back(static_cast<double>(r->expansions));
      reopenings.push_back(static_cast<double>(r->reopenings));
      wall.push_back(r->wall_ms);
    }
    out.push_back({name, group.size(), mean(ratio), median(ratio), mean(expansions),
                   median(expansions), mean(reopenings), mean(wall)});
  }
  return out;
}

std::string emit_report(const BenchReport& report, ReportFormat format) {
  for (const BenchRow& r : report.rows) {
    if (std::abs(ratio_of(r.cost, r.optimal) - r.ratio) > 1e-12) {
      throw Error("report row " + r.instance + "/" + r.heuristic +
                  " has a ratio inconsistent with cost/optimal");
    }
  }
  if (format == ReportFormat::Csv) {
    using detail::csv_field;
    using detail::format_number;
    std::string out = "instance,heuristic,cost,optimal,ratio,expansions,reopenings,wall_ms\n";
    for (const BenchRow& r : report.rows) {
      out += csv_field(r.instance) + "," + csv_field(r.heuristic) + "," + format_number(r.cost) +
             "," + format_number(r.optimal) + "," + format_number(ratio_of(r.cost, r.optimal)) +
             "," + std::to_string(r.expansions) + "," + std::to_string(r.reopenings) + "," +
             detail::format_fixed(r.wall_ms, 3) + "\n";
    }
    return out;
  }

  using nlohmann::ordered_json;
  ordered_json j;
  j["instances"] = report.instances;
  j["unreachable_excluded"] = report.unreachable_excluded;
  j["rows"] = ordered_json::array();
  for (const BenchRow& r : report.rows) {
    j["rows"].push_back({{"instance", r.instance},
                         {"heuristic", r.heuristic},
                         {"cost", r.cost},
                         {"optimal", r.optimal},
                         {"ratio", ratio_of(r.cost, r.optimal)},
                         {"expansions", r.expansions},
                         {"reopenings", r.reopenings},
                         {"wall_ms", r.wall_ms}});
  }
  j["aggregates"] = ordered_json::array();
  for (const BenchAggregate& a : report.aggregates) {
    j["aggregates"].push_back({{"heuristic", a.heuristic},
                               {"count", a.count},
                               {"mean_ratio", a.mean_ratio},
                               {"median_ratio", a.median_ratio},
                               {"mean_expansions", a.mean_expansions},
                               {"median_expansions", a.median_expansions},
                               {"mean_reopenings", a.mean_reopenings},
                               {"mean_wall_ms", a.mean_wall_ms}});
  }
  return j.dump(2) + "\n";
}

BenchReport parse_report_json(std::string_view text) {
  using nlohmann::json;
  BenchReport report;
  try {
    const json j = json::parse(text);
    report.instances = j.at("instances").get<std::size_t>();
    report.unreachable_excluded = j.at("unreachable_excluded").get<std::size_t>();
    for (const json& r : j.at("rows")) {
      report.rows.push_back({r.at("instance").get<std::string>(),
                             r.at("heuristic").get<std::string>(), r.at("cost").get<double>(),
                             r.at("optimal").get<double>(), r.at("ratio").get<double>(),
                             r.at("expansions").get<std::size_t>(),
                             r.at("reopenings").get<std::size_t>(),
                             r.at("wall_ms").get<double>()});
    }
    for (const json& a : j.at("aggregates")) {
      report.aggregates.push_back(
          {a.at("heuristic").get<std::string>(), a.at("count").get<std::size_t>(),
           a.at("mean_ratio").get<double>(), a.at("median_ratio").get<double>(),
           a.at("mean_expansions").get<double>(), a.at("median_expansions").get<double>(),
           a.at("mean_reopenings").get<double>(), a.at("mean_wall_ms").get<double>()});
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid report JSON: ") + e.what());
  }
  return report;
}

}  // namespace variastar
