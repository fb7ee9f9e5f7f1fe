#pragma once

#include "pactopo/config.hpp"

#include <array>
#include <string_view>

namespace pac {

/// Experiment presets: T1R* are the four 2D strip experiments, T2R* the four
/// 3D plate experiments.
enum class PresetId { T1R1, T1R2, T1R3, T1R4, T2R1, T2R2, T2R3, T2R4 };

inline constexpr std::array<PresetId, 8> kAllPresets = {PresetId::T1R1, PresetId::T1R2, PresetId::T1R3,
                                                        PresetId::T1R4, PresetId::T2R1, PresetId::T2R2,
                                                        PresetId::T2R3, PresetId::T2R4};

std::string_view to_string(PresetId id);
std::optional<PresetId> parse_preset_id(std::string_view name);

/// One-line description for listings.
std::string_view preset_summary(PresetId id);

/// Full run configuration for a preset. The mesh uses about
/// round(scale * 2 / epsilon) cells per unit length, so scale = 1 gives
/// h ~ epsilon / 2.
RunConfig preset(PresetId id, double scale = 1.0);
/// Throws ConfigError for unknown ids.
RunConfig preset(std::string_view id, double scale = 1.0);

} // namespace pac
