#include "ironman/params.hpp"

namespace ironman {

const std::vector<ParamPreset>& param_presets() {
    // LpnParams fields: n, k, t, ell, d
    static const std::vector<ParamPreset> presets = {
        {"p20", {1221516, 168000, 480, 4096, 10}},
        {"p21", {2365652, 262000, 600, 4096, 10}},
        {"p22", {4531924, 328000, 740, 8192, 10}},
        {"p23", {8866608, 452000, 1024, 8192, 10}},
        {"p24", {17262496, 480000, 2100, 8192, 10}},
        {"toy", {1024, 128, 16, 64, 4}},
        {"toy2", {4096, 512, 32, 128, 6}},
    };
    return presets;
}

std::optional<LpnParams> find_preset(const std::string& name) {
    for (const auto& p : param_presets())
        if (p.name == name) return p.params;
    return std::nullopt;
}

}  // namespace ironman
