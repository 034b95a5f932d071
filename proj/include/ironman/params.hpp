#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ironman/lpn.hpp"

namespace ironman {

struct ParamPreset {
    std::string name;
    LpnParams params;
};

/// Production parameter sets p20..p24 plus small "toy" presets for tests.
const std::vector<ParamPreset>& param_presets();
std::optional<LpnParams> find_preset(const std::string& name);

}  // namespace ironman
