#include "hfo/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include "hfo/error.hpp"
#include "hfo/generator.hpp"
#include "hfo/harness.hpp"
#include "hfo/model_io.hpp"
#include "hfo/random.hpp"
#include "hfo/report.hpp"
#include "hfo/time.hpp"
#include "hfo/trace_io.hpp"

namespace hfo {

namespace {

struct GenerateArgs {
  GeneratorConfig config;
  std::string out;
  std::vector<std::string> drift;
};

struct PrepareArgs {
  std::string in;
  std::string out;
};

struct AuditArgs {
  std::string in;
  std::string distribution;
};

struct RunArgs {
  std::string in;
  std::string out;
  std::string model = "rf";
  std::string encoding = "int";
  std::string encoder = "hash";
  std::string encoder_url;
  std::string distance = "minkowski";
  int p = 2;
  int k = 5;
  std::uint64_t seed = 42;
  std::string setting = "online";
  int alpha = 30;
  int omega = 1;
  double split = 0.7;
  std::string knn_evict = "on";
  std::string membership = "submit";
  bool verify = false;
  unsigned jobs = 1;
  std::string save_model;
};

struct ReportArgs {
  std::vector<std::string> files;
};

DriftPoint parse_drift(const std::string& text) {
  const auto colon = text.find(':');
  DriftPoint d;
  try {
    if (colon == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    d.month_index = std::stoi(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(text);
    const auto rule = text.substr(colon + 1);
    d.rule_id = std::stoi(rule, &used);
    if (used != rule.size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw ConfigError("--drift expects MONTH:RULE, got '" + text + "'");
  }
  return d;
}

void cmd_generate(GenerateArgs& a, std::ostream& out) {
  for (const auto& d : a.drift) a.config.drift_schedule.push_back(parse_drift(d));
  a.config.validate();
  const auto trace = generate(a.config);
  write_trace(trace.jobs, std::filesystem::path(a.out));

  const auto& s = trace.stats;
  nlohmann::ordered_json months = nlohmann::ordered_json::array();
  for (const auto& m : s.months)
    months.push_back({{"month", format_month(m.month)},
                      {"rule", m.rule_id},
                      {"target_fail_rate", m.target_fail_rate},
                      {"labeled", m.labeled},
                      {"failed", m.failed}});
  nlohmann::ordered_json meta = {{"seed", a.config.seed},
                                 {"prng", Rng::kAlgorithm},
                                 {"jobs", s.total},
                                 {"unfinished", s.unfinished},
                                 {"cancelled", s.cancelled},
                                 {"node_fail", s.node_fail},
                                 {"labeled", s.labeled},
                                 {"labeled_failed", s.labeled_failed},
                                 {"realized_fail_rate", s.realized_fail_rate()},
                                 {"injected_discrepancies", s.injected_discrepancies},
                                 {"months", std::move(months)}};
  const std::string meta_path = a.out + ".meta.json";
  std::ofstream mf(meta_path);
  if (!(mf << meta.dump(2) << '\n')) throw IoError("cannot write " + meta_path);

  char rate[32];
  std::snprintf(rate, sizeof rate, "%.4f", s.realized_fail_rate());
  out << "wrote " << s.total << " jobs to " << a.out << " (labeled " << s.labeled << ", failed rate " << rate
      << ", unfinished " << s.unfinished << ")\n";
}

void cmd_prepare(const PrepareArgs& a, std::ostream& out) {
  const auto records = read_trace(std::filesystem::path(a.in));
  const auto prepared = prepare_trace(records);
  std::vector<JobRecord> rewritten;
  rewritten.reserve(prepared.jobs.size());
  for (const auto& j : prepared.jobs) {
    JobRecord r = j.record;
    if (j.outcome) r.original_state = *j.outcome == ExitOutcome::Completed ? JobState::Completed : JobState::Failed;
    rewritten.push_back(std::move(r));
  }
  write_trace(rewritten, std::filesystem::path(a.out));
  out << "kept " << rewritten.size() << " jobs (" << prepared.unfinished << " unfinished)\n"
      << "excluded cancelled: " << prepared.excluded_cancelled << '\n'
      << "excluded node_fail: " << prepared.excluded_node_fail << '\n';
}

void cmd_audit(const AuditArgs& a, std::ostream& out) {
  const auto records = read_trace(std::filesystem::path(a.in));
  std::vector<JobRecord> finished;
  for (const auto& r : records)
    if (r.finished()) finished.push_back(r);
  const auto rep = audit_labels(finished);
  out << "finished jobs: " << rep.total << " (" << records.size() - finished.size() << " unfinished skipped)\n"
      << "state != COMPLETED with exit code 0: " << rep.discrepancy_not_completed_ec_zero << '\n'
      << "state == COMPLETED with exit code != 0: " << rep.discrepancy_completed_ec_nonzero << "\n\n";
  char line[128];
  std::snprintf(line, sizeof line, "%-14s %10s %8s %10s\n", "State", "Jobs", "%", "EC=0");
  out << line;
  for (auto s : kAllJobStates) {
    const auto& b = rep.of(s);
    std::snprintf(line, sizeof line, "%-14s %10zu %8.2f %10zu\n", std::string(to_string(s)).c_str(), b.count,
                  b.percent, b.exit_code_zero);
    out << line;
  }

  if (!a.distribution.empty()) {
    const auto labeled = prepare_trace(records).labeled();
    std::ofstream csv(a.distribution);
    csv << "month,completed,failed\n";
    for (const auto& m : monthly_distribution(labeled))
      csv << format_month(m.month) << ',' << m.completed << ',' << m.failed << '\n';
    if (!csv) throw IoError("cannot write " + a.distribution);
  }
}

void cmd_run(const RunArgs& a, std::ostream& out, std::ostream& err) {
  ClassifierSpec spec;
  spec.kind = *parse_model_kind(a.model);
  spec.k = static_cast<std::size_t>(a.k);
  spec.distance = *parse_distance(a.distance);
  spec.p = a.p;
  spec.seed = a.seed;
  spec.threads = a.jobs;
  const Encoding encoding = *parse_encoding(a.encoding);
  const Setting setting = *parse_setting(a.setting);

  OfflineConfig offline{a.split};
  OnlineConfig online;
  online.alpha_days = a.alpha;
  online.omega_days = a.omega;
  online.knn_evict = a.knn_evict == "on";
  online.membership = *parse_membership(a.membership);
  online.validate();
  spec.validate();

  std::unique_ptr<Embedder> embedder;
  if (encoding == Encoding::Sb) {
    if (a.encoder == "external") {
      std::string url = a.encoder_url;
      if (url.empty())
        if (const char* env = std::getenv("HFO_ENCODER_URL")) url = env;
      if (url.empty()) throw ConfigError("--encoder external needs --encoder-url or HFO_ENCODER_URL");
      auto ext = std::make_unique<ExternalEmbedder>(url);
      ext->check_health();
      embedder = std::move(ext);
    } else {
      embedder = std::make_unique<HashEmbedder>();
    }
    verify_embedder(*embedder);
  }

  const auto records = read_trace(std::filesystem::path(a.in));
  const auto prepared = prepare_trace(records);

  RunOptions options;
  options.verify = a.verify;
  options.embedder = embedder.get();
  FittedModel last;
  if (!a.save_model.empty()) options.final_model = &last;

  const EvalReport rep = setting == Setting::Offline
                             ? run_offline(prepared.labeled(), spec, encoding, offline, options)
                             : run_online(prepared.jobs, spec, encoding, online, options);

  if (!a.out.empty()) {
    std::ofstream f(a.out);
    if (!(f << to_json(rep).dump(2) << '\n')) throw IoError("cannot write " + a.out);
  }
  if (!a.save_model.empty()) save_model_file(last, a.save_model);
  for (const auto& w : rep.warnings) err << "warning: " << w << '\n';
  const ReportRow row = summarize(rep);
  out << render_table(std::span(&row, 1));
  out << "evaluated " << rep.evaluated << " jobs, skipped " << rep.skipped << '\n';
}

void cmd_report(const ReportArgs& a, std::ostream& out) {
  std::vector<ReportRow> rows;
  for (const auto& f : a.files) rows.push_back(load_report_row(f));
  out << render_table(rows);
}

template <class Fn>
int guarded(Fn&& fn, std::ostream& err) {
  try {
    fn();
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const EmbedderUnavailable& e) {
    err << "embedder unavailable: " << e.what() << '\n';
    return kExitExternal;
  } catch (const LeakageError& e) {
    err << "leakage: " << e.what() << '\n';
    return kExitLeakage;
  } catch (const Error& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Online job-failure prediction on HPC traces", "hfo"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic trace");
  g->add_option("--out", gen.out, "Output CSV")->required();
  g->add_option("--seed", gen.config.seed, "PRNG seed")->capture_default_str();
  g->add_option("--months", gen.config.months, "Trace length in months")->capture_default_str();
  g->add_option("--users", gen.config.n_users, "Number of users")->capture_default_str();
  g->add_option("--jobs-per-day", gen.config.jobs_per_day_mean, "Mean submissions per day")->capture_default_str();
  g->add_option("--batch-size", gen.config.batch_size_mean, "Mean jobs per submission batch")->capture_default_str();
  g->add_option("--fail-rate", gen.config.overall_fail_rate, "Overall failed fraction")->capture_default_str();
  g->add_option("--fail-rate-jitter", gen.config.monthly_fail_rate_jitter, "Monthly failed-rate jitter")
      ->capture_default_str();
  g->add_option("--label-noise", gen.config.label_noise, "Fraction of outcomes drawn off-rule")
      ->capture_default_str();
  g->add_option("--discrepancy-rate", gen.config.discrepancy_rate, "Fraction of state/exit-code mismatches")
      ->capture_default_str();
  g->add_option("--cancel-rate", gen.config.cancel_rate, "Fraction of cancelled jobs")->capture_default_str();
  g->add_option("--drift", gen.drift, "Rule change MONTH:RULE (repeatable)");

  PrepareArgs prep;
  auto* p = app.add_subcommand("prepare", "Relabel a trace from exit codes");
  p->add_option("--in", prep.in, "Input CSV")->required();
  p->add_option("--out", prep.out, "Output CSV")->required();

  AuditArgs aud;
  auto* au = app.add_subcommand("audit", "Compare scheduler states with exit codes");
  au->add_option("--in", aud.in, "Input CSV")->required();
  au->add_option("--distribution", aud.distribution, "Write monthly completed/failed counts as CSV");

  RunArgs run;
  auto* r = app.add_subcommand("run", "Train and evaluate one model");
  r->add_option("--in", run.in, "Input CSV")->required();
  r->add_option("--out", run.out, "Report JSON");
  r->add_option("--model", run.model)->check(CLI::IsMember({"dt", "rf", "lr", "knn", "majority", "random"}))
      ->capture_default_str();
  r->add_option("--encoding", run.encoding)->check(CLI::IsMember({"int", "sb"}))->capture_default_str();
  r->add_option("--encoder", run.encoder)->check(CLI::IsMember({"hash", "external"}))->capture_default_str();
  r->add_option("--encoder-url", run.encoder_url, "Embedding service, e.g. http://127.0.0.1:8080");
  r->add_option("--distance", run.distance)->check(CLI::IsMember({"cosine", "minkowski"}))->capture_default_str();
  r->add_option("--p", run.p, "Minkowski order")->capture_default_str();
  r->add_option("--k", run.k, "Neighbors")->capture_default_str();
  r->add_option("--seed", run.seed)->capture_default_str();
  r->add_option("--setting", run.setting)->check(CLI::IsMember({"offline", "online"}))->capture_default_str();
  r->add_option("--alpha", run.alpha, "Training window, days")->capture_default_str();
  r->add_option("--omega", run.omega, "Test batch, days")->capture_default_str();
  r->add_option("--split", run.split, "Offline training fraction")->capture_default_str();
  r->add_option("--knn-evict", run.knn_evict)->check(CLI::IsMember({"on", "off"}))->capture_default_str();
  r->add_option("--window-membership", run.membership)->check(CLI::IsMember({"submit", "end"}))
      ->capture_default_str();
  r->add_flag("--verify", run.verify, "Assert no leakage at runtime");
  r->add_option("--jobs", run.jobs, "Worker threads")->capture_default_str();
  r->add_option("--save-model", run.save_model, "Write the last fitted model as JSON");

  ReportArgs rep;
  auto* re = app.add_subcommand("report", "Merge report JSON files into one table");
  re->add_option("files", rep.files, "Report JSON files")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*g) return guarded([&] { cmd_generate(gen, out); }, err);
  if (*p) return guarded([&] { cmd_prepare(prep, out); }, err);
  if (*au) return guarded([&] { cmd_audit(aud, out); }, err);
  if (*r) return guarded([&] { cmd_run(run, out, err); }, err);
  return guarded([&] { cmd_report(rep, out); }, err);
}

}  // namespace hfo
