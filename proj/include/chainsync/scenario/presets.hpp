#pragma once

#include "chainsync/scenario/scenario.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace chainsync::scenario {

struct Preset {
    std::string id;
    std::string description;
    std::string ini;
};

[[nodiscard]] const std::vector<Preset>& presets();
[[nodiscard]] const Preset* find_preset(std::string_view id);

/// Loads a preset by id with overrides applied. Throws ScenarioError for an
/// unknown id.
[[nodiscard]] Scenario load_preset(std::string_view id, const std::vector<std::string>& overrides = {},
                                   std::vector<std::string>* log = nullptr);

} // namespace chainsync::scenario
