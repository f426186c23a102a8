#include "hfo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include "hfo/error.hpp"
#include "hfo/random.hpp"
#include "hfo/time.hpp"

namespace hfo {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const Embedder& embedder_or_default(const RunOptions& options) {
  static const HashEmbedder fallback;
  return options.embedder ? *options.embedder : fallback;
}

bool chronological(const JobRecord& a, const JobRecord& b) {
  return std::tie(a.submit_time, a.job_id) < std::tie(b.submit_time, b.job_id);
}

// Feature access by canonical job index. INT vectors depend on the current
// dictionary and are encoded on demand; SB vectors are cached per job.
class Features {
 public:
  Features(std::vector<const JobRecord*> records, Encoding encoding, const Embedder& embedder)
      : records_(std::move(records)),
        encoding_(encoding),
        embedder_(embedder),
        scratch_(dimension(encoding)) {
    if (encoding_ == Encoding::Sb) cache_.resize(records_.size());
  }

  std::size_t dim() const { return dimension(encoding_); }

  void refit(std::span<const std::size_t> idx) {
    if (encoding_ != Encoding::Int || idx.empty()) return;
    std::vector<const JobRecord*> fit_on;
    fit_on.reserve(idx.size());
    for (auto i : idx) fit_on.push_back(records_[i]);
    dict_ = fit_int_encoder(std::span<const JobRecord* const>(fit_on));
  }

  void prefetch(std::span<const std::size_t> idx) {
    if (encoding_ != Encoding::Sb) return;
    std::vector<std::size_t> missing;
    std::vector<std::string> texts;
    for (auto i : idx) {
      if (!cache_[i].empty()) continue;
      missing.push_back(i);
      texts.push_back(render_job_string(*records_[i]));
    }
    if (texts.empty()) return;
    auto vectors = embedder_.embed_batch(texts);
    if (vectors.size() != texts.size()) throw EmbedderUnavailable("embedder returned a wrong vector count");
    for (std::size_t k = 0; k < missing.size(); ++k) {
      if (vectors[k].size() != kSbDim) throw EmbedderUnavailable("embedder returned a wrong dimension");
      cache_[missing[k]] = std::move(vectors[k]);
    }
  }

  // Valid until the next call.
  std::span<const double> get(std::size_t i) {
    if (encoding_ == Encoding::Int) {
      encode_int_into(*records_[i], dict_, scratch_);
      return scratch_;
    }
    if (cache_[i].empty()) {
      const std::size_t one[] = {i};
      prefetch(one);
    }
    return cache_[i];
  }

 private:
  std::vector<const JobRecord*> records_;
  Encoding encoding_;
  const Embedder& embedder_;
  CategoricalDictionary dict_;
  std::vector<double> scratch_;
  std::vector<std::vector<double>> cache_;
};

std::vector<std::string> merged_warnings(const ClassifierSpec& spec) {
  return spec.validate();
}

void finish_report(EvalReport& rep, const std::map<std::chrono::sys_days, ConfusionCounts>& daily) {
  std::vector<DailyCounts> rows;
  rows.reserve(daily.size());
  for (const auto& [day, counts] : daily) rows.push_back({day, counts});
  rep.metrics = aggregate_monthly(rows);
  rep.warnings.insert(rep.warnings.end(), rep.metrics.warnings.begin(), rep.metrics.warnings.end());
}

}  // namespace

std::string_view to_string(Setting s) { return s == Setting::Offline ? "offline" : "online"; }

std::optional<Setting> parse_setting(std::string_view text) {
  if (text == "offline") return Setting::Offline;
  if (text == "online") return Setting::Online;
  return std::nullopt;
}

std::string_view to_string(WindowMembership m) { return m == WindowMembership::Submit ? "submit" : "end"; }

std::optional<WindowMembership> parse_membership(std::string_view text) {
  if (text == "submit") return WindowMembership::Submit;
  if (text == "end") return WindowMembership::End;
  return std::nullopt;
}

std::vector<std::string> OnlineConfig::validate() const {
  if (alpha_days < 1) throw ConfigError("alpha must be at least 1 day");
  if (omega_days < 1) throw ConfigError("omega must be at least 1 day");
  std::vector<std::string> warnings;
  if (alpha_days < omega_days)
    warnings.push_back("alpha (" + std::to_string(alpha_days) + " d) is shorter than omega (" +
                       std::to_string(omega_days) + " d)");
  return warnings;
}

std::vector<LabeledJob> PreparedTrace::labeled() const {
  std::vector<LabeledJob> out;
  out.reserve(jobs.size());
  for (const auto& j : jobs)
    if (j.outcome) out.push_back({j.record, *j.outcome});
  return out;
}

PreparedTrace prepare_trace(std::span<const JobRecord> records) {
  PreparedTrace out;
  out.jobs.reserve(records.size());
  for (const auto& r : records) {
    if (!r.finished()) {
      ++out.unfinished;
      out.jobs.push_back({r, std::nullopt});
      continue;
    }
    auto result = relabel(r);
    if (auto* ex = std::get_if<Excluded>(&result)) {
      if (ex->original_state == JobState::Cancelled)
        ++out.excluded_cancelled;
      else
        ++out.excluded_node_fail;
      continue;
    }
    out.jobs.push_back({r, std::get<LabeledJob>(result).outcome});
  }
  return out;
}

EvalReport run_offline(std::span<const LabeledJob> jobs, const ClassifierSpec& spec, Encoding encoding,
                       const OfflineConfig& config, const RunOptions& options) {
  if (!(config.split_fraction > 0.0 && config.split_fraction < 1.0))
    throw ConfigError("split fraction must lie strictly between 0 and 1");
  EvalReport rep;
  rep.model = spec.label(encoding);
  rep.spec = spec;
  rep.encoding = encoding;
  rep.setting = Setting::Offline;
  rep.offline = config;
  rep.warnings = merged_warnings(spec);

  std::vector<const LabeledJob*> sorted;
  sorted.reserve(jobs.size());
  for (const auto& j : jobs) sorted.push_back(&j);
  std::sort(sorted.begin(), sorted.end(),
            [](const LabeledJob* a, const LabeledJob* b) { return chronological(a->record, b->record); });

  const std::size_t n = sorted.size();
  const auto n_train = static_cast<std::size_t>(std::floor(config.split_fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train >= n)
    throw ConfigError("split of " + std::to_string(n) + " jobs leaves an empty train or test side");

  if (options.verify && sorted[n_train - 1]->record.submit_time > sorted[n_train]->record.submit_time)
    throw LeakageError("offline test job submitted before a training job");

  std::vector<const JobRecord*> records;
  records.reserve(n);
  for (auto* j : sorted) records.push_back(&j->record);
  Features features(records, encoding, embedder_or_default(options));

  std::vector<std::size_t> train_idx(n_train);
  std::iota(train_idx.begin(), train_idx.end(), std::size_t{0});

  const auto t_train = Clock::now();
  features.refit(train_idx);
  features.prefetch(train_idx);
  TrainingSet train(features.dim());
  train.reserve(n_train);
  for (auto i : train_idx) train.add(features.get(i), sorted[i]->outcome, i);
  const FittedModel model = fit(spec, train);
  rep.timing.train_seconds_per_day = seconds_since(t_train);
  if (options.final_model) *options.final_model = model;

  std::map<std::chrono::sys_days, ConfusionCounts> daily;
  double infer = 0.0;
  std::vector<std::size_t> test_idx(n - n_train);
  std::iota(test_idx.begin(), test_idx.end(), n_train);
  const auto t_pre = Clock::now();
  features.prefetch(test_idx);
  infer += seconds_since(t_pre);
  // A fixed KNN reference set is scored in one tiled pass.
  std::vector<ExitOutcome> knn_out;
  if (const auto* knn = std::get_if<KnnModel>(&model.state)) {
    const auto t_knn = Clock::now();
    std::vector<double> block;
    block.reserve(test_idx.size() * features.dim());
    for (auto i : test_idx) {
      const auto x = features.get(i);
      block.insert(block.end(), x.begin(), x.end());
    }
    knn_out = knn->predict_many(block);
    infer += seconds_since(t_knn);
  }
  for (auto i : test_idx) {
    const auto t0 = Clock::now();
    const ExitOutcome y = knn_out.empty() ? predict(model, features.get(i)) : knn_out[i - n_train];
    infer += seconds_since(t0);
    auto& c = daily[day_of(sorted[i]->record.submit_time)];
    c = accumulate(c, y, sorted[i]->outcome);
    if (options.scored) options.scored->push_back({sorted[i]->record.job_id, y, sorted[i]->outcome});
  }
  rep.evaluated = test_idx.size();
  rep.timing.infer_seconds_per_job = infer / static_cast<double>(test_idx.size());
  rep.batches = 1;
  finish_report(rep, daily);
  return rep;
}

EvalReport run_online(std::span<const StreamJob> jobs, const ClassifierSpec& spec, Encoding encoding,
                      const OnlineConfig& config, const RunOptions& options) {
  EvalReport rep;
  rep.model = spec.label(encoding);
  rep.spec = spec;
  rep.encoding = encoding;
  rep.setting = Setting::Online;
  rep.online = config;
  rep.warnings = merged_warnings(spec);
  for (auto& w : config.validate()) rep.warnings.push_back(std::move(w));
  if (jobs.empty()) throw EmptyTrace("online run over an empty trace");

  std::vector<const StreamJob*> js;
  js.reserve(jobs.size());
  for (const auto& j : jobs) js.push_back(&j);
  std::sort(js.begin(), js.end(),
            [](const StreamJob* a, const StreamJob* b) { return chronological(a->record, b->record); });
  const std::size_t n = js.size();
  auto submit = [&](std::size_t i) { return js[i]->record.submit_time; };
  auto finish = [&](std::size_t i) { return *js[i]->record.end_time; };
  auto labeled = [&](std::size_t i) { return js[i]->outcome.has_value(); };
  auto first_at_or_after = [&](Timestamp t) {
    std::size_t lo = 0, hi = n;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (submit(mid) < t)
        lo = mid + 1;
      else
        hi = mid;
    }
    return lo;
  };

  const Days alpha{config.alpha_days};
  const Days omega{config.omega_days};
  const Timestamp t_first = submit(0);
  const Timestamp t0 = t_first + alpha;
  if (submit(n - 1) < t0)
    throw ConfigError("trace spans less than alpha = " + std::to_string(config.alpha_days) + " days");

  // Labeled jobs ordered by completion, for end-time windows and KNN growth.
  std::vector<std::size_t> by_end;
  for (std::size_t i = 0; i < n; ++i)
    if (labeled(i)) by_end.push_back(i);
  std::sort(by_end.begin(), by_end.end(),
            [&](std::size_t a, std::size_t b) { return std::pair(finish(a), a) < std::pair(finish(b), b); });

  std::vector<const JobRecord*> records;
  records.reserve(n);
  for (auto* j : js) records.push_back(&j->record);
  Features features(records, encoding, embedder_or_default(options));

  auto training_window = [&](Timestamp cutoff) {
    std::vector<std::size_t> idx;
    if (config.membership == WindowMembership::Submit) {
      const std::size_t lo = first_at_or_after(cutoff - alpha), hi = first_at_or_after(cutoff);
      for (std::size_t i = lo; i < hi; ++i)
        if (labeled(i) && finish(i) < cutoff) idx.push_back(i);
    } else {
      for (auto i : by_end)
        if (finish(i) >= cutoff - alpha && finish(i) < cutoff) idx.push_back(i);
      std::sort(idx.begin(), idx.end());
    }
    return idx;
  };
  auto shift_for = [&](std::size_t batch) {
    return options.fault && options.fault->batch == batch ? options.fault->shift : std::chrono::seconds{0};
  };

  std::map<std::chrono::sys_days, ConfusionCounts> daily;
  std::vector<char> scored(options.verify ? n : 0, 0);
  double train_time = 0.0, infer_time = 0.0;
  std::size_t trained_batches = 0;

  // KNN state: reference tags are canonical job indices.
  KnnModel knn(features.dim(), spec.k, spec.distance, spec.p);
  std::size_t end_pos = 0;
  std::size_t min_tag = std::numeric_limits<std::size_t>::max();
  auto recompute_min_tag = [&] {
    min_tag = std::numeric_limits<std::size_t>::max();
    for (std::size_t r = 0; r < knn.size(); ++r) min_tag = std::min<std::size_t>(min_tag, knn.tag(r));
  };

  std::size_t pos = first_at_or_after(t0);
  while (pos < n) {
    const auto batch = static_cast<std::size_t>((submit(pos) - t0) / omega);
    const Timestamp tb = t0 + omega * static_cast<long long>(batch);
    const std::size_t batch_end = first_at_or_after(tb + omega);

    std::vector<std::size_t> test;
    for (std::size_t i = pos; i < batch_end; ++i) {
      if (labeled(i))
        test.push_back(i);
      else
        ++rep.skipped;
    }
    pos = batch_end;
    if (test.empty()) continue;

    if (options.verify) {
      for (auto i : test) {
        if (submit(i) < tb || submit(i) >= tb + omega)
          throw LeakageError("test job outside its batch interval");
        if (scored[i]++) throw LeakageError("test job scored twice");
      }
    }

    const Timestamp cutoff = tb + shift_for(batch);

    if (spec.supervised()) {
      const auto window = training_window(cutoff);
      if (window.empty()) {
        rep.warnings.push_back("batch " + format_day(day_of(tb)) + " skipped: empty training window");
        rep.skipped += test.size();
        continue;
      }
      if (options.verify) {
        for (auto i : window)
          if (!labeled(i) || finish(i) >= tb || submit(i) >= tb)
            throw LeakageError("training job " + std::to_string(js[i]->record.job_id) +
                               " finished at or after the batch boundary " + format_iso(tb));
      }

      const auto t_fit = Clock::now();
      features.refit(window);
      features.prefetch(window);
      TrainingSet train(features.dim());
      train.reserve(window.size());
      for (auto i : window) train.add(features.get(i), *js[i]->outcome, i);
      ClassifierSpec batch_spec = spec;
      batch_spec.seed = derive_seed(spec.seed, batch);
      const FittedModel model = fit(batch_spec, train);
      train_time += seconds_since(t_fit);
      ++trained_batches;
      if (options.final_model) *options.final_model = model;

      const auto t_pre = Clock::now();
      features.prefetch(test);
      infer_time += seconds_since(t_pre);
      for (auto i : test) {
        const auto t_inf = Clock::now();
        const ExitOutcome y = predict(model, features.get(i));
        infer_time += seconds_since(t_inf);
        auto& c = daily[day_of(submit(i))];
        c = accumulate(c, y, *js[i]->outcome);
        if (options.scored) options.scored->push_back({js[i]->record.job_id, y, *js[i]->outcome});
        ++rep.evaluated;
      }
      ++rep.batches;
      continue;
    }

    // KNN: the INT dictionary follows the batch's training window; the
    // reference set grows job by job.
    if (encoding == Encoding::Int) {
      const auto t_fit = Clock::now();
      const auto window = training_window(cutoff);
      if (!window.empty()) {
        features.refit(window);
        std::vector<std::size_t> tags;
        tags.reserve(knn.size());
        for (std::size_t r = 0; r < knn.size(); ++r) tags.push_back(knn.tag(r));
        knn.clear();
        for (auto t : tags) knn.add(features.get(t), *js[t]->outcome, t);
      }
      train_time += seconds_since(t_fit);
      ++trained_batches;
    }

    const auto t_pre = Clock::now();
    features.prefetch(test);
    infer_time += seconds_since(t_pre);

    bool warned = false;
    std::size_t scored_in_batch = 0;
    for (auto j : test) {
      const auto t_inf = Clock::now();
      const Timestamp c = submit(j) + shift_for(batch);
      while (end_pos < by_end.size() && finish(by_end[end_pos]) < c) {
        const std::size_t i = by_end[end_pos++];
        if (config.knn_evict && submit(i) < c - alpha) continue;
        knn.add(features.get(i), *js[i]->outcome, i);
        min_tag = std::min(min_tag, i);
      }
      if (config.knn_evict) {
        const std::size_t low = first_at_or_after(c - alpha);
        if (min_tag < low) {
          knn.remove_if([low](std::uint64_t t) { return t < low; });
          recompute_min_tag();
        }
      }
      if (knn.size() == 0) {
        infer_time += seconds_since(t_inf);
        ++rep.skipped;
        if (!warned) {
          rep.warnings.push_back("batch " + format_day(day_of(tb)) + ": empty reference set, jobs skipped");
          warned = true;
        }
        continue;
      }
      if (options.verify) {
        for (std::size_t r = 0; r < knn.size(); ++r) {
          const auto t = static_cast<std::size_t>(knn.tag(r));
          if (!labeled(t) || finish(t) >= submit(j))
            throw LeakageError("reference job " + std::to_string(js[t]->record.job_id) +
                               " finished at or after test submission " + format_iso(submit(j)));
          if (config.knn_evict && submit(t) < submit(j) - alpha)
            throw LeakageError("reference job older than the alpha window");
        }
      }
      const ExitOutcome y = knn.predict(features.get(j));
      infer_time += seconds_since(t_inf);
      auto& cnt = daily[day_of(submit(j))];
      cnt = accumulate(cnt, y, *js[j]->outcome);
      if (options.scored) options.scored->push_back({js[j]->record.job_id, y, *js[j]->outcome});
      ++rep.evaluated;
      ++scored_in_batch;
    }
    if (scored_in_batch > 0) ++rep.batches;
  }

  if (!spec.supervised() && options.final_model) *options.final_model = FittedModel{spec, knn.dim(), knn};
  if (trained_batches > 0)
    rep.timing.train_seconds_per_day = train_time / static_cast<double>(trained_batches * config.omega_days);
  if (rep.evaluated > 0) rep.timing.infer_seconds_per_job = infer_time / static_cast<double>(rep.evaluated);
  finish_report(rep, daily);
  return rep;
}

std::vector<SettingComparison> compare_settings(const PreparedTrace& trace,
                                                std::span<const ClassifierSpec> specs, Encoding encoding,
                                                const OfflineConfig& offline, const OnlineConfig& online,
                                                const RunOptions& options) {
  const auto labeled = trace.labeled();
  std::vector<SettingComparison> out;
  for (const auto& spec : specs) {
    const auto off = run_offline(labeled, spec, encoding, offline, options);
    const auto on = run_online(trace.jobs, spec, encoding, online, options);
    out.push_back({spec.label(encoding), off.headline().failed.f1, on.headline().failed.f1});
  }
  return out;
}

std::vector<SettingComparison> inject_drift_experiment(const GeneratorConfig& config,
                                                       std::span<const ClassifierSpec> specs,
                                                       Encoding encoding, const OfflineConfig& offline,
                                                       const OnlineConfig& online, const RunOptions& options) {
  if (config.drift_schedule.empty()) throw ConfigError("drift experiment needs at least one drift point");
  const auto generated = generate(config);
  const auto prepared = prepare_trace(generated.jobs);
  return compare_settings(prepared, specs, encoding, offline, online, options);
}

}  // namespace hfo
