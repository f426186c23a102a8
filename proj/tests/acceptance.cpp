// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hfo/distance.hpp"
#include "hfo/error.hpp"
#include "hfo/evaluation.hpp"
#include "hfo/generator.hpp"
#include "hfo/harness.hpp"
#include "hfo/knn.hpp"
#include "hfo/logistic_regression.hpp"
#include "hfo/random.hpp"
#include "hfo/report.hpp"
#include "knn_oracle.hpp"
#include "knn_refit_oracle.hpp"
#include "lr_oracle.hpp"
#include "metrics_oracle.hpp"

using namespace hfo;

namespace {

constexpr auto C = ExitOutcome::Completed;
constexpr auto F = ExitOutcome::Failed;

// With a 30-day window a June 1 start makes the first scored day July 1, so
// no month is a one-day stub.
const Timestamp kJuneFirst{std::chrono::sys_days{std::chrono::year{2020} / 6 / 1}};

// Collects the reasons a criterion failed; an empty list means PASS.
struct Check {
  std::vector<std::string> failures;
  std::ostringstream notes;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

ClassifierSpec spec_of(ModelKind kind, std::uint64_t seed = 42) {
  ClassifierSpec s;
  s.kind = kind;
  s.seed = seed;
  return s;
}

PreparedTrace trace_of(const GeneratorConfig& cfg) { return prepare_trace(generate(cfg).jobs); }

void metric_oracle(Check& c) {
  Rng rng(1);
  double worst = 0;
  for (int s = 0; s < 1000; ++s) {
    const double bias = rng.uniform();
    std::vector<std::pair<ExitOutcome, ExitOutcome>> pairs;
    ConfusionCounts counts;
    for (int i = 0; i < 200; ++i) {
      const auto y = rng.bernoulli(bias) ? F : C;
      const auto p = rng.bernoulli(0.5) ? F : C;
      pairs.emplace_back(p, y);
      counts = accumulate(counts, p, y);
    }
    const auto got = compute_metrics(counts);
    const auto want = test::metrics_oracle(pairs);
    for (auto [g, w] : {std::pair{got.completed, want.completed}, {got.failed, want.failed}, {got.macro, want.macro}})
      worst = std::max({worst, std::abs(g.precision - w.precision), std::abs(g.recall - w.recall),
                        std::abs(g.f1 - w.f1)});
  }
  c.expect(worst <= 1e-12, "max deviation " + std::to_string(worst));
  c.notes << "max deviation " << worst;
}

void majority_row(Check& c) {
  GeneratorConfig cfg;
  cfg.months = 4;
  cfg.jobs_per_day_mean = 40;
  const auto trace = trace_of(cfg);
  const auto spec = spec_of(ModelKind::Majority);
  const auto off = run_offline(trace.labeled(), spec, Encoding::Int, {}).headline();
  const auto on = run_online(trace.jobs, spec, Encoding::Int, {}).headline();
  for (const auto* m : {&off, &on}) {
    c.expect(m->completed.recall == 1.0, "completed recall " + fmt(m->completed.recall));
    c.expect(m->failed.precision == 0.0 && m->failed.recall == 0.0 && m->failed.f1 == 0.0, "failed row not zero");
  }
  c.notes << "C Rec " << fmt(off.completed.recall, 2) << "/" << fmt(on.completed.recall, 2) << ", F P/R/F1 "
          << fmt(on.failed.precision, 2) << "/" << fmt(on.failed.recall, 2) << "/" << fmt(on.failed.f1, 2);
}

void random_row(Check& c) {
  GeneratorConfig cfg;
  cfg.months = 8;
  cfg.jobs_per_day_mean = 260;
  cfg.label_noise = 0.2;
  const auto trace = trace_of(cfg);
  // Everything before the first boundary trains; the next 50,000 labeled
  // jobs are scored.
  std::vector<const StreamJob*> order;
  for (const auto& j : trace.jobs)
    if (j.outcome) order.push_back(&j);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) {
    return std::pair(a->record.submit_time, a->record.job_id) < std::pair(b->record.submit_time, b->record.job_id);
  });
  const Timestamp t0 = order.front()->record.submit_time + Days{30};
  std::vector<StreamJob> stream;
  std::size_t tested = 0;
  for (auto* j : order) {
    if (j->record.submit_time >= t0) {
      if (tested == 50000) break;
      ++tested;
    }
    stream.push_back(*j);
  }
  c.expect(tested == 50000, "trace too short: " + std::to_string(tested));
  const auto rep = run_online(stream, spec_of(ModelKind::Random, 7), Encoding::Int, {});
  c.expect(rep.evaluated == 50000, "evaluated " + std::to_string(rep.evaluated));
  const auto& m = rep.headline();
  const auto& pooled = rep.metrics.pooled;
  for (double r : {m.completed.recall, m.failed.recall, pooled.completed.recall, pooled.failed.recall})
    c.expect(std::abs(r - 0.5) <= 0.02, "recall " + fmt(r));
  c.notes << rep.evaluated << " jobs, C Rec " << fmt(m.completed.recall) << ", F Rec " << fmt(m.failed.recall);
}

void knn_oracle(Check& c) {
  Rng rng(4);
  std::size_t queries = 0, mismatches = 0;
  for (int q = 0; q < 100; ++q) {
    const std::size_t d = 2 + rng.below(14);
    const std::size_t n = 1 + rng.below(500);
    TrainingSet refs(d);
    std::vector<double> x(d);
    for (std::size_t i = 0; i < n; ++i) {
      // Small integer grid: plenty of exact distance ties.
      for (auto& v : x) v = static_cast<double>(rng.below(4));
      if (rng.bernoulli(0.1)) x = std::vector<double>(d, 1.0);
      refs.add(x, rng.bernoulli(0.3) ? F : C, i);
    }
    for (auto& v : x) v = static_cast<double>(rng.below(4)) + (rng.bernoulli(0.5) ? 0.5 : 0.0);
    for (auto metric : {Distance::Cosine, Distance::Minkowski}) {
      const auto model = KnnModel::fit(refs, 5, metric, 2);
      ++queries;
      mismatches += model.predict(x) != test::knn_oracle(refs, x, 5, metric, 2);
    }
  }
  c.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
  c.notes << queries << " queries, " << mismatches << " mismatches";
}

void no_leakage(Check& c) {
  GeneratorConfig cfg;
  cfg.months = 6;
  cfg.jobs_per_day_mean = 24;
  const auto trace = trace_of(cfg);
  RunOptions opt;
  opt.verify = true;
  int runs = 0;
  for (auto kind : {ModelKind::DecisionTree, ModelKind::RandomForest, ModelKind::LogisticRegression, ModelKind::Knn,
                    ModelKind::Majority, ModelKind::Random})
    for (auto enc : {Encoding::Int, Encoding::Sb}) {
      try {
        run_online(trace.jobs, spec_of(kind), enc, {}, opt);
        ++runs;
      } catch (const LeakageError& e) {
        c.expect(false, spec_of(kind).label(enc) + ": " + e.what());
      }
    }
  int caught = 0;
  for (auto kind : {ModelKind::RandomForest, ModelKind::Knn}) {
    RunOptions bad = opt;
    bad.fault = BoundaryFault{40, Days{1}};
    try {
      run_online(trace.jobs, spec_of(kind), Encoding::Int, {}, bad);
      c.expect(false, "shifted boundary not detected for " + spec_of(kind).label(Encoding::Int));
    } catch (const LeakageError&) {
      ++caught;
    }
  }
  c.notes << runs << "/12 clean runs, " << caught << "/2 mutations detected";
}

void incremental_knn(Check& c) {
  GeneratorConfig cfg;
  cfg.months = 2;
  cfg.jobs_per_day_mean = 40;
  const auto trace = trace_of(cfg);
  OnlineConfig online;
  online.knn_evict = true;
  std::size_t total = 0, mismatches = 0;
  for (auto enc : {Encoding::Sb, Encoding::Int})
    for (auto metric : {Distance::Minkowski, Distance::Cosine}) {
      auto spec = spec_of(ModelKind::Knn);
      spec.distance = metric;
      std::vector<ScoredJob> scored;
      RunOptions opt;
      opt.scored = &scored;
      opt.verify = true;
      const auto rep = run_online(trace.jobs, spec, enc, online, opt);
      const auto oracle = test::knn_refit_oracle(trace.jobs, spec, enc, online);
      c.expect(rep.batches >= 28, "only " + std::to_string(rep.batches) + " daily batches");
      c.expect(scored.size() == oracle.size(), "scored counts differ");
      for (std::size_t i = 0; i < std::min(scored.size(), oracle.size()); ++i)
        mismatches += scored[i].job_id != oracle[i].job_id || scored[i].predicted != oracle[i].predicted;
      total += scored.size();
    }
  c.expect(mismatches == 0, std::to_string(mismatches) + " mismatches");
  c.notes << total << " predictions over 4 configurations, " << mismatches << " mismatches";
}

void drift_direction(Check& c) {
  const auto rf = spec_of(ModelKind::RandomForest);
  auto knn = spec_of(ModelKind::Knn);
  knn.distance = Distance::Minkowski;

  GeneratorConfig cfg;
  cfg.start = kJuneFirst;
  cfg.months = 6;
  cfg.n_users = 12;
  cfg.jobs_per_day_mean = 150;
  cfg.label_noise = 0.1;
  cfg.monthly_fail_rate_jitter = 0.0;

  GeneratorConfig drift = cfg;
  drift.drift_schedule = {{5, 1}};
  const auto int_drift = inject_drift_experiment(drift, std::span(&rf, 1), Encoding::Int);
  const auto sb_drift = inject_drift_experiment(drift, std::span(&knn, 1), Encoding::Sb);

  const auto control = trace_of(cfg);
  const auto int_ctl = compare_settings(control, std::span(&rf, 1), Encoding::Int, {}, {});
  const auto sb_ctl = compare_settings(control, std::span(&knn, 1), Encoding::Sb, {}, {});

  for (const auto* r : {&int_drift[0], &sb_drift[0]}) {
    c.expect(r->delta() >= 0.10, r->model + " drift delta " + fmt(r->delta()));
    c.notes << r->model << " drift " << fmt(r->offline_failed_f1, 2) << "->" << fmt(r->online_failed_f1, 2) << "; ";
  }
  for (const auto* r : {&int_ctl[0], &sb_ctl[0]}) {
    c.expect(std::abs(r->delta()) <= 0.05, r->model + " control delta " + fmt(r->delta()));
    c.notes << r->model << " control " << fmt(r->offline_failed_f1, 2) << "->" << fmt(r->online_failed_f1, 2)
            << "; ";
  }
}

void separability(Check& c) {
  GeneratorConfig cfg;
  cfg.start = kJuneFirst;
  cfg.months = 3;
  cfg.n_users = 10;
  cfg.jobs_per_day_mean = 80;
  cfg.label_noise = 0.0;
  cfg.monthly_fail_rate_jitter = 0.0;
  const auto trace = trace_of(cfg);
  for (auto kind : {ModelKind::DecisionTree, ModelKind::RandomForest}) {
    const auto rep = run_online(trace.jobs, spec_of(kind), Encoding::Int, {});
    const double f1 = rep.headline().failed.f1;
    c.expect(f1 >= 0.95, rep.model + " F F1 " + fmt(f1));
    c.notes << rep.model << " F F1 " << fmt(f1) << "; ";
  }
}

void lr_gradient(Check& c) {
  Rng rng(9);
  double worst = 0;
  for (int rep = 0; rep < 20; ++rep) {
    auto p = test::random_lr_problem(rng);
    std::vector<double> grad(p.params.size());
    regularized_log_loss(p.data, p.params, p.l2, grad);
    auto f = [&](const std::vector<double>& x) { return regularized_log_loss(p.data, x, p.l2, {}); };
    for (std::size_t i = 0; i < p.params.size(); ++i) {
      const double fd = test::central_difference(f, p.params, i);
      worst = std::max(worst, std::abs(fd - grad[i]) / std::max(std::abs(grad[i]), 1e-3));
    }
  }
  c.expect(worst < 1e-4, "relative error " + std::to_string(worst));
  c.notes << "max relative error " << worst;
}

void distances(Check& c) {
  const std::vector<double> v{0.3, -1.2, 4.0}, a{1, 0}, b{0, 1}, anti{-0.3, 1.2, -4.0};
  c.expect(std::abs(cosine_distance(v, v)) < 1e-12, "CD(v,v)");
  c.expect(std::abs(cosine_distance(a, b) - 1.0) < 1e-12, "CD orthogonal");
  c.expect(std::abs(cosine_distance(v, anti) - 2.0) < 1e-12, "CD antiparallel");
  c.expect(std::abs(minkowski_distance(std::vector<double>{0, 0}, std::vector<double>{3, 4}, 2) - 5.0) < 1e-12,
           "MWD_2 3-4-5");
  Rng rng(10);
  std::size_t violations = 0;
  for (int t = 0; t < 10000; ++t) {
    const std::size_t d = 1 + rng.below(16);
    const int p = 1 + static_cast<int>(rng.below(4));
    std::vector<double> x(d), y(d), z(d);
    for (std::size_t i = 0; i < d; ++i) {
      x[i] = rng.uniform() * 10 - 5;
      y[i] = rng.uniform() * 10 - 5;
      z[i] = rng.uniform() * 10 - 5;
    }
    const double xz = minkowski_distance(x, z, p), xy = minkowski_distance(x, y, p), yz = minkowski_distance(y, z, p);
    violations += xz > xy + yz + 1e-9;
  }
  c.expect(violations == 0, std::to_string(violations) + " triangle violations");
  c.notes << "10000 triples, " << violations << " violations";
}

void determinism(Check& c) {
  GeneratorConfig cfg;
  cfg.months = 3;
  cfg.jobs_per_day_mean = 40;
  auto kn = spec_of(ModelKind::Knn);
  kn.distance = Distance::Cosine;
  const std::vector<std::pair<ClassifierSpec, Encoding>> runs{{spec_of(ModelKind::RandomForest), Encoding::Int},
                                                              {spec_of(ModelKind::Random), Encoding::Int},
                                                              {spec_of(ModelKind::LogisticRegression), Encoding::Sb},
                                                              {kn, Encoding::Sb}};
  auto once = [&](const ClassifierSpec& spec, Encoding enc, bool online) {
    const auto trace = trace_of(cfg);
    auto j = to_json(online ? run_online(trace.jobs, spec, enc, {}) : run_offline(trace.labeled(), spec, enc, {}));
    j.erase("timing");
    return j.dump(2);
  };
  int identical = 0;
  for (const auto& [spec, enc] : runs)
    for (bool online : {true, false}) {
      const bool same = once(spec, enc, online) == once(spec, enc, online);
      c.expect(same, spec.label(enc) + " differs");
      identical += same;
    }
  c.notes << identical << "/8 runs byte-identical";
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<void(Check&)> run;
};

}  // namespace

// Optional arguments select criteria by number; the default runs all.
int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const std::vector<Criterion> criteria{
      {1, "metric oracle", 5, metric_oracle},
      {2, "majority baseline row", 10, majority_row},
      {3, "random baseline row", 60, random_row},
      {4, "KNN oracle equivalence", 10, knn_oracle},
      {5, "no-leakage suite", 300, no_leakage},
      {6, "incremental KNN consistency", 120, incremental_knn},
      {7, "drift direction", 300, drift_direction},
      {8, "separability", 120, separability},
      {9, "LR gradient check", 5, lr_gradient},
      {10, "distance units", 5, distances},
      {11, "determinism", 120, determinism},
  };
  int failed = 0, ran = 0;
  for (const auto& cr : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), cr.id) == only.end()) continue;
    ++ran;
    Check c;
    const auto t = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
    if (secs > cr.limit_seconds) c.failures.push_back("took " + fmt(secs, 1) + "s, limit " + fmt(cr.limit_seconds, 0) + "s");
    const bool ok = c.failures.empty();
    failed += !ok;
    std::printf("%s %d %s (%.2fs): %s\n", ok ? "PASS" : "FAIL", cr.id, cr.name, secs, c.notes.str().c_str());
    for (const auto& f : c.failures) std::printf("    %s\n", f.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
