#include "hfo/generator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "hfo/error.hpp"
#include "hfo/random.hpp"

namespace hfo {

namespace {

using namespace std::chrono;

constexpr std::array<const char*, 4> kPartitions = {"m100_usr_prod", "m100_usr_dbg",
                                                    "m100_all_serial", "m100_fua_prod"};
constexpr std::array<const char*, 4> kQos = {"normal", "qos_dbg", "qos_prio", "qos_lowprio"};
constexpr std::array<std::int64_t, 6> kTimeLimits = {30, 60, 120, 240, 720, 1440};
constexpr std::array<std::int64_t, 5> kCoresPerNode = {4, 8, 16, 32, 128};
constexpr std::array<std::int64_t, 6> kFailExitCodes = {2, 9, 127, 134, 137, 255};

// Sub-streams, so that adding draws to one phase leaves the others intact.
enum Stream : std::uint64_t { kUsers = 1, kArrivals, kExclusion, kOutcome, kLifecycle, kStates };

struct UserProfile {
  std::int64_t user_id;
  std::int64_t group_id;
  std::string account;
  std::vector<std::string> partitions;
  std::vector<std::optional<std::int64_t>> time_limits;
  std::string qos;
  std::int64_t max_nodes;
  std::int64_t cores_per_node;
  std::int64_t gpus_per_node;
  std::optional<std::int64_t> tasks_per_socket;
  double weight;
};

struct Draft {
  JobRecord rec;
  std::size_t batch;
  std::size_t index_in_batch;
  int month;
  bool cancelled = false;
  bool node_fail = false;
  bool failed = false;
};

int month_index(Timestamp start, Timestamp t) {
  const auto a = month_of(start);
  const auto b = month_of(t);
  return static_cast<int>((b - a).count());
}

std::vector<UserProfile> make_users(const GeneratorConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, kUsers));
  const int n_groups = std::max(1, cfg.n_users / 5);
  std::vector<UserProfile> users;
  for (int u = 0; u < cfg.n_users; ++u) {
    UserProfile p;
    p.user_id = 1000 + u;
    p.group_id = 100 + u % n_groups;
    p.account = "acct_" + std::to_string(p.group_id);
    const std::size_t first = rng.below(kPartitions.size());
    p.partitions.push_back(kPartitions[first]);
    if (rng.coin()) p.partitions.push_back(kPartitions[(first + 1 + rng.below(3)) % 4]);
    for (int k = 0; k < 2; ++k) {
      if (rng.bernoulli(0.15))
        p.time_limits.push_back(std::nullopt);
      else
        p.time_limits.push_back(kTimeLimits[rng.below(kTimeLimits.size())]);
    }
    p.qos = kQos[rng.bernoulli(0.6) ? 0 : 1 + rng.below(3)];
    p.max_nodes = 1 + static_cast<std::int64_t>(rng.below(4));
    p.cores_per_node = kCoresPerNode[rng.below(kCoresPerNode.size())];
    p.gpus_per_node = static_cast<std::int64_t>(rng.below(5));
    if (rng.bernoulli(0.4)) p.tasks_per_socket = 1 + static_cast<std::int64_t>(rng.below(16));
    p.weight = 1.0 / std::pow(static_cast<double>(u + 1), 0.6);
    users.push_back(std::move(p));
  }
  return users;
}

std::size_t pick_weighted(Rng& rng, const std::vector<double>& cumulative) {
  const double x = rng.uniform() * cumulative.back();
  return static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), x) -
                                  cumulative.begin());
}

// Monthly target rates: +jitter in even rule segments, -jitter in odd ones
// (random sign per month when there is no drift), recentred to the overall rate.
std::vector<double> monthly_targets(const GeneratorConfig& cfg, const std::vector<int>& segment) {
  Rng rng(derive_seed(cfg.seed, kOutcome + 100));
  const bool drifting = segment.back() > 0;
  std::vector<double> sign(cfg.months);
  for (int m = 0; m < cfg.months; ++m)
    sign[m] = drifting ? (segment[m] % 2 == 0 ? 1.0 : -1.0) : (rng.coin() ? 1.0 : -1.0);
  const double mean = std::accumulate(sign.begin(), sign.end(), 0.0) / cfg.months;
  std::vector<double> out(cfg.months);
  for (int m = 0; m < cfg.months; ++m)
    out[m] = std::clamp(cfg.overall_fail_rate + cfg.monthly_fail_rate_jitter * (sign[m] - mean),
                        0.001, 0.999);
  return out;
}

}  // namespace

void GeneratorConfig::validate() const {
  auto bad = [](const std::string& what) { throw ConfigError("generator: " + what); };
  if (n_users < 1) bad("n_users must be >= 1");
  if (months < 2) bad("months must be >= 2");
  if (!(jobs_per_day_mean > 0)) bad("jobs_per_day_mean must be positive");
  if (!(batch_size_mean > 0)) bad("batch_size_mean must be positive");
  if (!(overall_fail_rate > 0 && overall_fail_rate < 1)) bad("overall_fail_rate must be in (0,1)");
  if (!(monthly_fail_rate_jitter >= 0)) bad("monthly_fail_rate_jitter must be >= 0");
  if (!(discrepancy_rate >= 0 && discrepancy_rate < 1)) bad("discrepancy_rate must be in [0,1)");
  if (!(label_noise >= 0 && label_noise <= 1)) bad("label_noise must be in [0,1]");
  if (!(cancel_rate >= 0 && node_fail_rate >= 0 && cancel_rate + node_fail_rate < 1))
    bad("cancel_rate + node_fail_rate must be in [0,1)");
  for (const auto& d : drift_schedule)
    if (d.month_index < 0 || d.month_index >= months) bad("drift month outside the trace");
}

double failure_rule_score(int rule_id, std::int64_t user_id, std::string_view partition,
                          const std::optional<std::int64_t>& time_limit) {
  const std::string key = std::to_string(rule_id) + "|" + std::to_string(user_id) + "|" +
                          std::string(partition) + "|" +
                          (time_limit ? std::to_string(*time_limit) : std::string("inf"));
  return static_cast<double>(mix64(fnv1a(key)) >> 11) * 0x1.0p-53;
}

GeneratedTrace generate(const GeneratorConfig& cfg) {
  cfg.validate();
  const auto users = make_users(cfg);
  std::vector<double> cumulative;
  for (const auto& u : users) cumulative.push_back((cumulative.empty() ? 0.0 : cumulative.back()) + u.weight);

  const Timestamp trace_end =
      Timestamp{sys_days{year_month_day{day_of(cfg.start)} + months{cfg.months}}};

  // Arrivals: per-day Poisson batches from weighted users.
  std::vector<Draft> drafts;
  {
    Rng rng(derive_seed(cfg.seed, kArrivals));
    std::size_t batch = 0;
    const double batches_per_day = cfg.jobs_per_day_mean / std::max(1.0, cfg.batch_size_mean);
    for (sys_days day = day_of(cfg.start); Timestamp{day} < trace_end; day += days{1}) {
      const auto n_batches = rng.poisson(batches_per_day);
      for (std::uint64_t b = 0; b < n_batches; ++b, ++batch) {
        const auto& u = users[pick_weighted(rng, cumulative)];
        const std::size_t size = 1 + rng.poisson(std::max(0.0, cfg.batch_size_mean - 1.0));
        const auto& partition = u.partitions[rng.below(u.partitions.size())];
        const auto& time_limit = u.time_limits[rng.below(u.time_limits.size())];
        const std::int64_t nodes = 1 + static_cast<std::int64_t>(rng.below(u.max_nodes));
        std::vector<std::string> requested;
        if (rng.bernoulli(0.05)) {
          const auto count = 1 + rng.below(2);
          for (std::uint64_t k = 0; k < count; ++k)
            requested.push_back("r" + std::to_string(200 + rng.below(56)) + "n" +
                                std::to_string(1 + rng.below(20)));
        }
        Timestamp t = Timestamp{day} + seconds{static_cast<long long>(rng.below(86400))};
        for (std::size_t i = 0; i < size; ++i) {
          if (i > 0) t += seconds{1 + static_cast<long long>(rng.exponential(300.0))};
          if (t >= trace_end) break;
          Draft d;
          d.batch = batch;
          d.index_in_batch = i;
          d.month = month_index(cfg.start, t);
          JobRecord& r = d.rec;
          r.name = "job" + std::to_string(batch) + "_" + std::to_string(i);
          r.command = "/home/u" + std::to_string(u.user_id) + "/run_job" + std::to_string(batch) + ".sh";
          r.account = u.account;
          r.user_id = u.user_id;
          r.group_id = u.group_id;
          r.requested_nodes = requested;
          r.num_tasks_per_socket = u.tasks_per_socket;
          r.partition = partition;
          r.time_limit = time_limit;
          r.qos = u.qos;
          r.num_nodes = nodes;
          r.num_cpu = nodes * u.cores_per_node;
          r.num_gpus = nodes * u.gpus_per_node;
          r.submit_time = t;
          if (i > 0 && rng.bernoulli(0.1)) r.dependency = "afterok:prev";
          drafts.push_back(std::move(d));
        }
      }
    }
  }
  std::stable_sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) {
    return a.rec.submit_time < b.rec.submit_time;
  });
  {
    // Job ids follow submission order; dependencies point at the previous
    // job of the same batch.
    std::vector<std::int64_t> last_in_batch;
    for (std::size_t i = 0; i < drafts.size(); ++i) {
      auto& d = drafts[i];
      d.rec.job_id = 100000 + static_cast<std::int64_t>(i);
      if (last_in_batch.size() <= d.batch) last_in_batch.resize(d.batch + 1, -1);
      if (!d.rec.dependency.empty()) {
        d.rec.dependency = last_in_batch[d.batch] >= 0
                               ? "afterok:" + std::to_string(last_in_batch[d.batch])
                               : std::string();
      }
      last_in_batch[d.batch] = d.rec.job_id;
    }
  }

  // Exclusions.
  {
    Rng rng(derive_seed(cfg.seed, kExclusion));
    for (auto& d : drafts) {
      const double x = rng.uniform();
      d.cancelled = x < cfg.cancel_rate;
      d.node_fail = !d.cancelled && x < cfg.cancel_rate + cfg.node_fail_rate;
    }
  }

  // Rule per month and rule segments.
  std::vector<int> rule(cfg.months, 0), segment(cfg.months, 0);
  {
    auto schedule = cfg.drift_schedule;
    std::stable_sort(schedule.begin(), schedule.end(),
                     [](const DriftPoint& a, const DriftPoint& b) { return a.month_index < b.month_index; });
    int seg = 0;
    std::size_t next = 0;
    int current = 0;
    for (int m = 0; m < cfg.months; ++m) {
      while (next < schedule.size() && schedule[next].month_index == m) {
        if (m > 0) ++seg;
        current = schedule[next].rule_id;
        ++next;
      }
      rule[m] = current;
      segment[m] = seg;
    }
  }
  const auto targets = monthly_targets(cfg, segment);

  // Rule thresholds: within each segment the lowest-scoring keys are
  // failure-prone, covering the segment's mean target fraction of jobs.
  std::vector<double> score(drafts.size());
  for (std::size_t i = 0; i < drafts.size(); ++i) {
    const auto& r = drafts[i].rec;
    score[i] = failure_rule_score(rule[drafts[i].month], r.user_id, r.partition, r.time_limit);
  }
  const int n_segments = segment.back() + 1;
  std::vector<double> threshold(n_segments, 0.0);
  for (int s = 0; s < n_segments; ++s) {
    std::vector<double> scores;
    double target = 0.0;
    int n_months = 0;
    for (int m = 0; m < cfg.months; ++m)
      if (segment[m] == s) target += targets[m], ++n_months;
    target /= n_months;
    for (std::size_t i = 0; i < drafts.size(); ++i)
      if (segment[drafts[i].month] == s && !drafts[i].cancelled && !drafts[i].node_fail)
        scores.push_back(score[i]);
    if (scores.empty()) continue;
    // Whole keys only: take the prefix of distinct scores whose job count is
    // closest to the target.
    std::sort(scores.begin(), scores.end());
    const double want = target * static_cast<double>(scores.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < scores.size();) {
      std::size_t j = i;
      while (j < scores.size() && scores[j] == scores[i]) ++j;
      if (std::abs(static_cast<double>(j) - want) < std::abs(static_cast<double>(best) - want)) best = j;
      i = j;
    }
    threshold[s] = best < scores.size() ? scores[best] : 1.0;
  }
  auto prone = [&](std::size_t i) { return score[i] < threshold[segment[drafts[i].month]]; };

  // Outcomes: follow the rule, except a label_noise fraction drawn at the
  // residual rate that brings each month's expectation to its target.
  {
    std::vector<double> kept(cfg.months, 0.0), prone_count(cfg.months, 0.0);
    for (std::size_t i = 0; i < drafts.size(); ++i) {
      if (drafts[i].cancelled || drafts[i].node_fail) continue;
      kept[drafts[i].month] += 1;
      if (prone(i)) prone_count[drafts[i].month] += 1;
    }
    std::vector<double> residual(cfg.months, 0.0);
    for (int m = 0; m < cfg.months; ++m) {
      const double pi = kept[m] > 0 ? prone_count[m] / kept[m] : 0.0;
      if (cfg.label_noise > 0)
        residual[m] =
            std::clamp((targets[m] - (1.0 - cfg.label_noise) * pi) / cfg.label_noise, 0.0, 1.0);
    }
    Rng rng(derive_seed(cfg.seed, kOutcome));
    for (std::size_t i = 0; i < drafts.size(); ++i) {
      const bool noisy = rng.bernoulli(cfg.label_noise);
      const bool noisy_fail = rng.bernoulli(residual[drafts[i].month]);
      drafts[i].failed = noisy ? noisy_fail : prone(i);
    }
  }

  GeneratedTrace out;
  auto& st = out.stats;
  for (int m = 0; m < cfg.months; ++m) {
    const auto ym = month_of(cfg.start) + std::chrono::months{m};
    st.months.push_back(MonthStats{ym, rule[m], targets[m]});
  }

  Rng life(derive_seed(cfg.seed, kLifecycle));
  Rng states(derive_seed(cfg.seed, kStates));
  out.jobs.reserve(drafts.size());
  for (auto& d : drafts) {
    JobRecord& r = d.rec;
    const double wait = life.exponential(600.0);
    const double u = life.uniform();
    const double v = life.uniform();
    const double never_started = life.uniform();
    const double ec_pick = life.uniform();
    const double state_pick = states.uniform();
    const bool inject = states.bernoulli(cfg.discrepancy_rate);
    const double inject_pick = states.uniform();

    const Timestamp start = r.submit_time + seconds{static_cast<long long>(wait)};
    const double limit_s = r.time_limit ? static_cast<double>(*r.time_limit) * 60.0 : 2.0 * 86400.0;
    if (d.cancelled) {
      r.exit_code = 0;
      r.original_state = JobState::Cancelled;
      if (never_started < 0.5) {
        r.end_time = r.submit_time + seconds{1 + static_cast<long long>(wait * u)};
      } else {
        r.start_time = start;
        r.end_time = start + seconds{1 + static_cast<long long>(limit_s * u)};
      }
    } else if (d.node_fail) {
      r.start_time = start;
      r.end_time = start + seconds{1 + static_cast<long long>(limit_s * u)};
      r.exit_code = 1;
      r.original_state = JobState::NodeFail;
    } else {
      r.start_time = start;
      if (d.failed) {
        const bool timeout = r.time_limit && state_pick < 0.12;
        const double dur = timeout ? limit_s : std::min(limit_s, 1.0 + 900.0 * -std::log1p(-u));
        r.end_time = start + seconds{static_cast<long long>(dur)};
        r.exit_code = ec_pick < 0.8 ? 1 : kFailExitCodes[static_cast<std::size_t>(v * kFailExitCodes.size())];
        r.original_state = timeout ? JobState::Timeout
                                   : (state_pick < 0.9 ? JobState::Failed : JobState::OutOfMemory);
      } else {
        // Log-uniform between one minute and the limit.
        const double dur = std::exp(std::log(60.0) + u * (std::log(limit_s) - std::log(60.0)));
        r.end_time = start + seconds{static_cast<long long>(dur)};
        r.exit_code = 0;
        r.original_state = JobState::Completed;
      }
      if (inject) {
        if (*r.exit_code == 0) {
          constexpr std::array<JobState, 4> wrong = {JobState::Failed, JobState::Timeout,
                                                     JobState::OutOfMemory, JobState::Preempted};
          r.original_state = wrong[static_cast<std::size_t>(inject_pick * wrong.size())];
        } else {
          r.original_state = JobState::Completed;
        }
      }
    }

    ++st.total;
    if (*r.end_time > trace_end) {
      // Still running when the trace was cut.
      r.end_time.reset();
      r.exit_code.reset();
      r.original_state.reset();
      if (r.start_time && *r.start_time > trace_end) r.start_time.reset();
      ++st.unfinished;
    } else {
      const bool ec_zero = *r.exit_code == 0;
      const bool completed = *r.original_state == JobState::Completed;
      if (!completed && ec_zero) ++st.not_completed_ec_zero;
      if (completed && !ec_zero) ++st.completed_ec_nonzero;
      if (d.cancelled) {
        ++st.cancelled;
      } else if (d.node_fail) {
        ++st.node_fail;
      } else {
        if (inject) ++st.injected_discrepancies;
        ++st.labeled;
        ++st.months[d.month].labeled;
        if (d.failed) {
          ++st.labeled_failed;
          ++st.months[d.month].failed;
        }
      }
    }
    out.jobs.push_back(std::move(r));
  }
  return out;
}

}  // namespace hfo
