#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hfo/encoding.hpp"

namespace hfo {

/// Sentence-embedding backend. Implementations must be deterministic and
/// always return kSbDim values per text.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::string name() const = 0;
  virtual std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts) const = 0;

  std::vector<double> embed(const std::string& text) const;
};

/// Signed feature hashing over tokens split on commas, whitespace, '/', '_'
/// and '.', L2-normalized. Texts sharing tokens get positive cosine
/// similarity; the empty text maps to the zero vector.
std::vector<double> hash_embed(std::string_view text);

class HashEmbedder final : public Embedder {
 public:
  std::string name() const override { return "hash-384"; }
  std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts) const override;
};

/// Client of the embedding sidecar: POST /embed {"texts": [...]} ->
/// {"vectors": [[...]], "model": str, "dim": 384}; GET /health.
/// Any transport failure, non-200 reply or malformed body throws
/// EmbedderUnavailable.
class ExternalEmbedder final : public Embedder {
 public:
  static constexpr std::size_t kMaxBatch = 64;

  /// base_url like "http://127.0.0.1:8080".
  explicit ExternalEmbedder(std::string base_url, double timeout_seconds = 30.0);

  std::string name() const override;
  std::vector<std::vector<double>> embed_batch(std::span<const std::string> texts) const override;
  /// Checks GET /health reports status ok and dim 384.
  void check_health() const;

 private:
  std::string base_url_;
  double timeout_seconds_;
  mutable std::string model_;
};

/// Registration check: a probe text embedded twice must give identical
/// kSbDim-long vectors. Throws EmbedderUnavailable otherwise.
void verify_embedder(const Embedder& embedder);

}  // namespace hfo
