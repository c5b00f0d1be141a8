// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Usage: acceptance <scenario.json>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "lteu/config.hpp"
#include "lteu/matching.hpp"
#include "lteu/multigame.hpp"
#include "lteu/sweep.hpp"
#include "oracles.hpp"

using namespace lteu;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const Verdict& v, double seconds) {
  if (!v.pass) ++failures;
  fmt::print("{} [{}] {}: {} ({:.2f} s)\n", v.pass ? "PASS" : "FAIL", id, name, v.detail,
             seconds);
  std::fflush(stdout);
}

template <class F>
void run(int id, const char* name, double limit_s, F&& body) {
  const auto start = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("threw: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (limit_s > 0 && secs >= limit_s) {
    v.pass = false;
    v.detail += fmt::format("; over the {:.0f} s limit", limit_s);
  }
  report(id, name, v, secs);
}

// Seed-mean of one quantity per axis value for one mode.
std::vector<double> mean_curve(const std::vector<ResultRow>& rows, Mode mode,
                               double ResultRow::*field) {
  std::map<double, std::pair<double, int>> acc;
  for (const ResultRow& r : rows) {
    if (r.mode != mode) continue;
    auto& [sum, n] = acc[r.axis_value];
    sum += r.*field;
    ++n;
  }
  std::vector<double> out;
  for (const auto& [value, sn] : acc) out.push_back(sn.first / sn.second);
  return out;
}

// Per (axis value, seed) lookup of one mode's row.
std::map<std::pair<double, std::uint64_t>, ResultRow> by_point(const std::vector<ResultRow>& rows,
                                                               Mode mode) {
  std::map<std::pair<double, std::uint64_t>, ResultRow> out;
  for (const ResultRow& r : rows) {
    if (r.mode == mode) out[{r.axis_value, r.seed}] = r;
  }
  return out;
}

std::size_t knee_index(const std::vector<double>& curve) {
  const double top = *std::max_element(curve.begin(), curve.end());
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (curve[i] >= 0.95 * top) return i;
  }
  return curve.size();
}

struct SweepAudit {
  std::size_t solves = 0;
  std::size_t multi_converged = 0;
  std::size_t multi_unstable = 0;
  double worst_budget = 0.0;
  std::size_t budget_violations = 0;
  std::size_t priority_violations = 0;
  std::size_t infeasible_targets = 0;
};

// Re-derives the airtime budget and the WiFi protection from the outcome,
// independently of the solver's own summaries.
SweepObserver auditor(SweepAudit& audit) {
  return [&audit](const ResultRow& row, const MultiGameOutcome& out, const NetworkTopology& t,
                  const ScenarioConfig& c) {
    ++audit.solves;
    if (row.mode == Mode::MultiGame && row.converged) {
      ++audit.multi_converged;
      if (!row.mgs_ok) ++audit.multi_unstable;
    }
    const oracle::ChannelOracle o(t, c, *out.outcomes.wue_wap);
    const auto& wap_ch = out.outcomes.wap_channel->channel;
    const auto& bs = *out.outcomes.bs_channel;
    for (int ch = 0; ch < c.n_channels; ++ch) {
      const auto waps = oracle::ChannelOracle::members(ch, wap_ch);
      const ChannelContention cont = o.contention(waps);
      double served = 0.0;
      for (std::size_t w : waps) served += out.wap_utility[w];
      double airtime = 0.0;
      for (std::size_t b = 0; b < bs.channel.size(); ++b) {
        if (bs.channel[b] == ch) airtime += bs.airtime[b];
      }
      const double wifi = cont.capacity > 0 ? cont.busy_fraction * served / cont.capacity : 0.0;
      audit.worst_budget = std::max(audit.worst_budget, wifi + airtime);
      if (wifi + airtime > 1.0 + 1e-9) ++audit.budget_violations;
    }
    if (out.mode != Mode::MultiGame) return;
    const std::vector<double> targets = o.targets(wap_ch);
    for (int ch = 0; ch < c.n_channels; ++ch) {
      const auto waps = oracle::ChannelOracle::members(ch, wap_ch);
      const auto free = o.evaluate(waps, {}, AccessPolicy::Priority, targets).served;
      for (std::size_t i = 0; i < waps.size(); ++i) {
        const std::size_t w = waps[i];
        if (out.wap_utility[w] >= targets[w] - 1e-9) continue;
        if (free[i] < targets[w] - 1e-9) {
          ++audit.infeasible_targets;
        } else {
          ++audit.priority_violations;
        }
      }
    }
  };
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    fmt::print(stderr, "usage: acceptance <scenario.json>\n");
    return 2;
  }
  const ScenarioConfig config = load_config(argv[1]);
  const std::vector<Mode> all_modes = {Mode::MultiGame, Mode::SingleGame, Mode::Lbt};

  run(1, "matching correctness", 10.0, [&] {
    std::mt19937_64 rng(1);
    int blocking = 0;
    int small = 0;
    int optimal = 0;
    for (int i = 0; i < 1000; ++i) {
      const auto inst = oracle::random_matching_instance(rng, 10, 4, 3);
      const Matching m = deferred_acceptance(inst.proposer, inst.acceptor, inst.quotas);
      if (!find_blocking_pairs(m, inst.proposer, inst.acceptor, inst.quotas).stable()) ++blocking;
      if (inst.proposer.size() > 6 || inst.acceptor.size() > 3) continue;
      ++small;
      const auto best = oracle::proposer_optimal(
          oracle::all_stable_matchings(inst.proposer, inst.acceptor, inst.quotas), inst.proposer);
      oracle::Assignment got(m.n_proposers());
      for (std::size_t w = 0; w < got.size(); ++w) got[w] = m.partner(w);
      if (best && *best == got) ++optimal;
    }
    return Verdict{blocking == 0 && optimal == small,
                   fmt::format("1000 instances, {} with blocking pairs; {}/{} small instances "
                               "proposer-optimal",
                               blocking, optimal, small)};
  });

  run(2, "one-sided stability oracle", 30.0, [&] {
    std::mt19937_64 rng(2);
    int instances = 0;
    int converged = 0;
    int outside = 0;
    int disagreements = 0;
    for (int seed = 0; seed < 200; ++seed) {
      for (std::size_t n = 1; n <= 4; ++n) {
        for (int k = 1; k <= 3; ++k) {
          ++instances;
          const auto g = oracle::random_table_game(rng, n, k, seed % 2 == 0);
          const ChannelUtility u = std::cref(g);
          const auto nash = oracle::all_nash(n, k, u);
          std::vector<std::vector<int>> brute;
          for (const auto& a : brute_force_stable_allocations(n, k, u)) brute.push_back(a.channel);
          if (brute != nash) ++disagreements;

          ChannelAllocation init;
          for (std::size_t p = 0; p < n; ++p) init.channel.push_back(static_cast<int>(p) % k);
          const auto r = best_response_channel_matching(n, k, u, init, 100);
          if (r.converged) {
            ++converged;
            if (std::find(brute.begin(), brute.end(), r.allocation.channel) == brute.end()) {
              ++outside;
            }
          }
          // Every allocation of the instance.
          std::vector<int> alloc(n, 0);
          for (bool more = true; more;) {
            const auto rep = check_unilateral_stability(ChannelAllocation{alloc, {}}, k, u);
            if (rep.violations != oracle::enumerate_deviations(alloc, k, u)) ++disagreements;
            more = false;
            for (std::size_t i = n; i-- > 0;) {
              if (++alloc[i] < k) {
                more = true;
                break;
              }
              alloc[i] = 0;
            }
          }
        }
      }
    }
    return Verdict{outside == 0 && disagreements == 0,
                   fmt::format("{} games, {} converged, {} converged outside the stable set, "
                               "{} checker disagreements",
                               instances, converged, outside, disagreements)};
  });

  SweepAudit load_audit;
  std::vector<ResultRow> load_rows;
  const SweepSpec load_sweep = sweep_from_config(config, SweepAxis::Load, all_modes);

  run(3, "multi-game vs single-game WiFi throughput", 60.0, [&] {
    SweepOptions opts;
    opts.observer = auditor(load_audit);
    load_rows = run_sweep(config, load_sweep, opts);
    const auto multi = by_point(load_rows, Mode::MultiGame);
    const auto single = by_point(load_rows, Mode::SingleGame);
    int below = 0;
    for (const auto& [key, row] : multi) {
      if (row.wap_sum_throughput < single.at(key).wap_sum_throughput) ++below;
    }
    const double m_top = mean_curve(load_rows, Mode::MultiGame, &ResultRow::wap_sum_throughput).back();
    const double s_top = mean_curve(load_rows, Mode::SingleGame, &ResultRow::wap_sum_throughput).back();
    const double ratio = m_top / s_top;
    return Verdict{below == 0 && ratio >= 1.3,
                   fmt::format("{} of {} (load, seed) points below single-game; top-load ratio "
                               "{:.3f} (need >= 1.3)",
                               below, multi.size(), ratio)};
  });

  std::vector<ResultRow> nwap_rows;
  SweepAudit nwap_audit;
  const SweepSpec nwap_sweep = sweep_from_config(config, SweepAxis::NWap, all_modes);

  run(4, "BS sum-rate falls with more WAPs", 0.0, [&] {
    SweepOptions opts;
    opts.observer = auditor(nwap_audit);
    nwap_rows = run_sweep(config, nwap_sweep, opts);
    const auto curve = mean_curve(nwap_rows, Mode::MultiGame, &ResultRow::bs_sum_rate);
    bool non_increasing = true;
    for (std::size_t i = 1; i < curve.size(); ++i) non_increasing &= curve[i] <= curve[i - 1];
    const bool strict = curve.back() < curve.front();
    std::string values;
    for (std::size_t i = 0; i < curve.size(); ++i) {
      values += fmt::format("{}{}:{:.4g}", i ? ", " : "", nwap_sweep.values[i], curve[i]);
    }
    return Verdict{non_increasing && strict,
                   fmt::format("seed-mean BS sum-rate at load {:.3g} b/s per WUE [{}]",
                               config.wue_demand, values)};
  });

  run(5, "multi-game vs LBT WiFi throughput", 0.0, [&] {
    const auto multi = by_point(load_rows, Mode::MultiGame);
    const auto lbt = by_point(load_rows, Mode::Lbt);
    int below = 0;
    for (const auto& [key, row] : multi) {
      if (row.wap_sum_throughput < lbt.at(key).wap_sum_throughput) ++below;
    }
    const auto m_curve = mean_curve(load_rows, Mode::MultiGame, &ResultRow::wap_sum_throughput);
    const auto l_curve = mean_curve(load_rows, Mode::Lbt, &ResultRow::wap_sum_throughput);
    const std::size_t m_knee = knee_index(m_curve);
    const std::size_t l_knee = knee_index(l_curve);
    return Verdict{below == 0 && l_knee <= m_knee,
                   fmt::format("{} points below LBT; 95% knee at load {:.3g} (LBT) vs {:.3g} "
                               "(multi-game)",
                               below, load_sweep.values[l_knee], load_sweep.values[m_knee])};
  });

  run(6, "MGS soundness", 0.0, [&] {
    const std::size_t converged = load_audit.multi_converged + nwap_audit.multi_converged;
    const std::size_t unstable = load_audit.multi_unstable + nwap_audit.multi_unstable;
    std::mt19937_64 rng(6);
    int mismatches = 0;
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
      const ScenarioConfig c = oracle::small_scenario(rng, 3, 2, 3);
      const NetworkTopology t = generate_topology(c);
      for (Mode mode : all_modes) {
        MultiGameOutcome out = solve(mode, t, c);
        for (int perturb = 0; perturb < 2; ++perturb) {
          ++checked;
          const MgsReport rep = check_mgs(out, t, c);
          const auto expected = oracle::enumerate_mgs(out, t, c);
          if (!oracle::same_deviations(rep.wifi_violations, expected.wifi) ||
              !oracle::same_deviations(rep.lte_violations, expected.lte)) {
            ++mismatches;
          }
          std::uniform_int_distribution<int> ch(0, c.n_channels - 1);
          for (int& x : out.outcomes.wap_channel->channel) x = ch(rng);
          for (int& x : out.outcomes.bs_channel->channel) x = ch(rng);
        }
      }
    }
    return Verdict{unstable == 0 && mismatches == 0,
                   fmt::format("{} converged default-sweep solves, {} not MGS; {} small "
                               "outcomes, {} differ from exhaustive enumeration",
                               converged, unstable, checked, mismatches)};
  });

  run(7, "airtime conservation and WiFi priority", 0.0, [&] {
    const std::size_t solves = load_audit.solves + nwap_audit.solves;
    const std::size_t budget = load_audit.budget_violations + nwap_audit.budget_violations;
    const std::size_t priority = load_audit.priority_violations + nwap_audit.priority_violations;
    const double worst = std::max(load_audit.worst_budget, nwap_audit.worst_budget);
    return Verdict{budget == 0 && priority == 0 && solves == load_rows.size() + nwap_rows.size(),
                   fmt::format("{} solves; worst channel budget {:.12f}; {} budget and {} "
                               "priority violations; {} infeasible targets",
                               solves, worst, budget, priority,
                               load_audit.infeasible_targets + nwap_audit.infeasible_targets)};
  });

  run(8, "determinism", 0.0, [&] {
    SweepOptions serial;
    serial.workers = 1;
    const bool load_same = emit_csv(load_rows) == emit_csv(run_sweep(config, load_sweep, serial));
    const bool nwap_same = emit_csv(nwap_rows) == emit_csv(run_sweep(config, nwap_sweep, serial));
    return Verdict{load_same && nwap_same,
                   fmt::format("load sweep {}, N_WAP sweep {} on rerun",
                               load_same ? "byte-identical" : "DIFFERENT",
                               nwap_same ? "byte-identical" : "DIFFERENT")};
  });

  fmt::print("{} of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
