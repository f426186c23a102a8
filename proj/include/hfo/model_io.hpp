#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "hfo/learners.hpp"

namespace hfo {

inline constexpr std::string_view kModelFormatTag = "hfo-model-v1";

/// Self-describing JSON blob: {"format": "hfo-model-v1", "kind": ..., "spec": {...},
/// "dim": d, "state": {...}}. Doubles round-trip exactly.
std::string save_model(const FittedModel& model);
/// Throws ConfigError on an unknown format tag or malformed state.
FittedModel load_model(std::string_view blob);

void save_model_file(const FittedModel& model, const std::filesystem::path& path);
FittedModel load_model_file(const std::filesystem::path& path);

}  // namespace hfo
