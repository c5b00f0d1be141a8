#include "lteu/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "lteu/error.hpp"

namespace lteu {

std::string_view to_string(SweepAxis axis) {
  return axis == SweepAxis::Load ? "load" : "nwap";
}

std::optional<SweepAxis> parse_axis(std::string_view text) {
  if (text == "load") return SweepAxis::Load;
  if (text == "nwap") return SweepAxis::NWap;
  return std::nullopt;
}

void validate(const SweepSpec& sweep) {
  if (sweep.values.empty()) throw ConfigError("sweep needs at least one value");
  for (std::size_t i = 1; i < sweep.values.size(); ++i) {
    if (!(sweep.values[i - 1] < sweep.values[i])) {
      throw ConfigError("sweep values must be strictly increasing");
    }
  }
  for (double v : sweep.values) {
    if (!(v >= 0)) throw ConfigError("sweep values must be >= 0");
    if (sweep.axis == SweepAxis::NWap && v != std::floor(v)) {
      throw ConfigError("WAP counts must be integers");
    }
  }
  if (sweep.modes.empty()) throw ConfigError("sweep needs at least one mode");
  for (std::size_t i = 0; i < sweep.modes.size(); ++i) {
    for (std::size_t j = i + 1; j < sweep.modes.size(); ++j) {
      if (sweep.modes[i] == sweep.modes[j]) throw ConfigError("duplicate sweep mode");
    }
  }
  if (sweep.replications < 1) throw ConfigError("replications must be >= 1");
}

SweepSpec sweep_from_config(const ScenarioConfig& config, SweepAxis axis,
                            std::vector<Mode> modes) {
  SweepSpec sweep;
  sweep.axis = axis;
  if (axis == SweepAxis::Load) {
    sweep.values = config.load_axis;
  } else {
    sweep.values.assign(config.nwap_axis.begin(), config.nwap_axis.end());
  }
  sweep.modes = std::move(modes);
  sweep.replications = config.replications;
  return sweep;
}

ScenarioConfig scenario_at(const ScenarioConfig& config, SweepAxis axis, double value,
                           std::uint64_t seed) {
  ScenarioConfig point = config;
  if (axis == SweepAxis::Load) {
    point.wue_demand = value;
  } else {
    point.n_wap = static_cast<int>(value);
  }
  point.seed = seed;
  return point;
}

std::vector<ResultRow> run_sweep(const ScenarioConfig& config, const SweepSpec& sweep,
                                 const SweepOptions& options) {
  validate(config);
  validate(sweep);
  const std::uint64_t seed_base = options.seed_base.value_or(config.seed);
  const std::size_t n_seeds = static_cast<std::size_t>(sweep.replications);
  const std::size_t n_modes = sweep.modes.size();
  const std::size_t n_points = sweep.values.size() * n_seeds;

  std::vector<ResultRow> rows(n_points * n_modes);
  std::vector<std::exception_ptr> errors(n_points);
  std::atomic<std::size_t> next{0};
  std::mutex observer_mutex;

  const auto work = [&] {
    for (std::size_t point = next++; point < n_points; point = next++) {
      const double value = sweep.values[point / n_seeds];
      const std::uint64_t seed = seed_base + point % n_seeds;
      std::size_t m = 0;
      try {
        const ScenarioConfig scenario = scenario_at(config, sweep.axis, value, seed);
        const NetworkTopology topology = generate_topology(scenario);
        for (; m < n_modes; ++m) {
          const Mode mode = sweep.modes[m];
          const MultiGameOutcome outcome = solve(mode, topology, scenario);
          ResultRow& row = rows[point * n_modes + m];
          row.mode = mode;
          row.axis = sweep.axis;
          row.axis_value = value;
          row.seed = seed;
          row.wap_sum_throughput = outcome.wap_sum();
          row.bs_sum_rate = outcome.bs_sum();
          row.mgs_ok = check_mgs(outcome, topology, scenario).ok();
          row.converged = outcome.converged;
          if (options.observer) {
            const std::lock_guard lock(observer_mutex);
            options.observer(row, outcome, topology, scenario);
          }
        }
      } catch (const std::exception& e) {
        const std::string_view mode =
            m < n_modes ? to_string(sweep.modes[m]) : std::string_view("-");
        errors[point] = std::make_exception_ptr(Error(fmt::format(
            "sweep failed at {}={}, seed={}, mode={}: {}", to_string(sweep.axis), value,
            seed, mode, e.what())));
      }
    }
  };

  unsigned workers = options.workers != 0 ? options.workers
                                          : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n_points));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
  }

  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return rows;
}

std::string emit_csv(std::span<const ResultRow> rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const ResultRow& r : rows) {
    out += fmt::format("{},{},{:.6g},{},{:.6g},{:.6g},{},{}\n", to_string(r.mode),
                       to_string(r.axis), r.axis_value, r.seed, r.wap_sum_throughput,
                       r.bs_sum_rate, r.mgs_ok, r.converged);
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(sep, start);
    fields.push_back(line.substr(start, end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return fields;
}

double parse_double(std::string_view text) {
  // from_chars for double is missing from older libstdc++.
  std::string copy(text);
  std::size_t used = 0;
  const double value = std::stod(copy, &used);
  if (used != copy.size()) throw ValidationError("bad number in CSV: " + copy);
  return value;
}

bool parse_bool(std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw ValidationError("bad boolean in CSV: " + std::string(text));
}

}  // namespace

std::vector<ResultRow> parse_csv(std::string_view text) {
  std::vector<ResultRow> rows;
  auto lines = split(text, '\n');
  if (lines.empty() || lines.front() != kCsvHeader) {
    throw ValidationError("CSV header mismatch");
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split(lines[i], ',');
    if (f.size() != 8) throw ValidationError("CSV row has wrong field count");
    ResultRow row;
    const auto mode = parse_mode(f[0]);
    const auto axis = parse_axis(f[1]);
    if (!mode || !axis) throw ValidationError("bad mode or axis in CSV");
    row.mode = *mode;
    row.axis = *axis;
    row.axis_value = parse_double(f[2]);
    const auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), row.seed);
    if (ec != std::errc{} || ptr != f[3].data() + f[3].size()) {
      throw ValidationError("bad seed in CSV");
    }
    row.wap_sum_throughput = parse_double(f[4]);
    row.bs_sum_rate = parse_double(f[5]);
    row.mgs_ok = parse_bool(f[6]);
    row.converged = parse_bool(f[7]);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace lteu
