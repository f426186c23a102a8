#include "hfo/embedder.hpp"

#include <httplib.h>

#include <cmath>
#include <json.hpp>

#include "hfo/error.hpp"
#include "hfo/random.hpp"

namespace hfo {

namespace {

constexpr std::uint64_t kSignBasis = 0x84222325cbf29ce4ULL;

bool is_separator(char c) {
  return c == ',' || c == '/' || c == '_' || c == '.' || c == ' ' || c == '\t' || c == '\n' ||
         c == '\r' || c == '\v' || c == '\f';
}

}  // namespace

std::vector<double> Embedder::embed(const std::string& text) const {
  auto out = embed_batch(std::span<const std::string>(&text, 1));
  if (out.size() != 1) throw EmbedderUnavailable(name() + ": wrong vector count");
  return std::move(out.front());
}

std::vector<double> hash_embed(std::string_view text) {
  std::vector<double> v(kSbDim, 0.0);
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_separator(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_separator(text[j])) ++j;
    if (j > i) {
      const auto token = text.substr(i, j - i);
      const std::size_t bucket = fnv1a(token) % kSbDim;
      v[bucket] += (fnv1a(token, kSignBasis) & 1U) ? 1.0 : -1.0;
    }
    i = j;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm > 0) {
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }
  return v;
}

std::vector<std::vector<double>> HashEmbedder::embed_batch(std::span<const std::string> texts) const {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(hash_embed(t));
  return out;
}

ExternalEmbedder::ExternalEmbedder(std::string base_url, double timeout_seconds)
    : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  if (base_url_.empty()) throw EmbedderUnavailable("empty embedder URL");
}

std::string ExternalEmbedder::name() const {
  return "external(" + base_url_ + (model_.empty() ? "" : ", " + model_) + ")";
}

std::vector<std::vector<double>> ExternalEmbedder::embed_batch(
    std::span<const std::string> texts) const {
  httplib::Client client(base_url_);
  const auto secs = static_cast<time_t>(timeout_seconds_);
  client.set_connection_timeout(secs, 0);
  client.set_read_timeout(secs, 0);
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (std::size_t lo = 0; lo < texts.size(); lo += kMaxBatch) {
    const std::size_t hi = std::min(texts.size(), lo + kMaxBatch);
    nlohmann::json body;
    body["texts"] = nlohmann::json::array();
    for (std::size_t i = lo; i < hi; ++i) body["texts"].push_back(texts[i]);
    auto res = client.Post("/embed", body.dump(), "application/json");
    if (!res) throw EmbedderUnavailable("POST " + base_url_ + "/embed: " + httplib::to_string(res.error()));
    if (res->status != 200)
      throw EmbedderUnavailable("POST " + base_url_ + "/embed returned HTTP " + std::to_string(res->status));
    try {
      const auto reply = nlohmann::json::parse(res->body);
      if (reply.at("dim").get<std::size_t>() != kSbDim)
        throw EmbedderUnavailable("embedder advertises dim " + reply.at("dim").dump());
      const auto& vectors = reply.at("vectors");
      if (vectors.size() != hi - lo) throw EmbedderUnavailable("embedder returned wrong vector count");
      if (reply.contains("model")) model_ = reply["model"].get<std::string>();
      for (const auto& v : vectors) {
        auto values = v.get<std::vector<double>>();
        if (values.size() != kSbDim) throw EmbedderUnavailable("embedder returned a vector of wrong length");
        out.push_back(std::move(values));
      }
    } catch (const nlohmann::json::exception& e) {
      throw EmbedderUnavailable(std::string("malformed /embed reply: ") + e.what());
    }
  }
  return out;
}

void ExternalEmbedder::check_health() const {
  httplib::Client client(base_url_);
  const auto secs = static_cast<time_t>(timeout_seconds_);
  client.set_connection_timeout(secs, 0);
  client.set_read_timeout(secs, 0);
  auto res = client.Get("/health");
  if (!res) throw EmbedderUnavailable("GET " + base_url_ + "/health: " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw EmbedderUnavailable("GET " + base_url_ + "/health returned HTTP " + std::to_string(res->status));
  try {
    const auto reply = nlohmann::json::parse(res->body);
    if (reply.at("status").get<std::string>() != "ok" || reply.at("dim").get<std::size_t>() != kSbDim)
      throw EmbedderUnavailable("unhealthy embedder: " + res->body);
  } catch (const nlohmann::json::exception& e) {
    throw EmbedderUnavailable(std::string("malformed /health reply: ") + e.what());
  }
}

void verify_embedder(const Embedder& embedder) {
  const std::string probe = "job1, run_job1.sh, [1, 10], 2020-10-01 15:30:00";
  const auto a = embedder.embed(probe);
  const auto b = embedder.embed(probe);
  if (a.size() != kSbDim) throw EmbedderUnavailable(embedder.name() + ": probe vector has wrong length");
  if (a != b) throw EmbedderUnavailable(embedder.name() + ": non-deterministic output");
  for (double x : a)
    if (!std::isfinite(x)) throw EmbedderUnavailable(embedder.name() + ": non-finite output");
}

}  // namespace hfo
