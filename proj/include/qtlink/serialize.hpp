#pragma once

#include "qtlink/montecarlo.hpp"
#include "qtlink/quantum.hpp"

#include <json.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace qtlink {

// {labels: ["mw@src", ...], amplitudes: [[re, im], ...]}
inline nlohmann::json to_json(const PureState& psi) {
    nlohmann::json j;
    j["labels"] = nlohmann::json::array();
    for (const ModeLabel& label : psi.labels()) j["labels"].push_back(to_string(label));
    j["amplitudes"] = nlohmann::json::array();
    for (const cplx& a : psi.amplitudes()) j["amplitudes"].push_back({a.real(), a.imag()});
    return j;
}

inline PureState pure_state_from_json(const nlohmann::json& j) {
    std::vector<ModeLabel> labels;
    for (const auto& item : j.at("labels")) labels.push_back(parse_mode_label(item.get<std::string>()));
    std::vector<cplx> amplitudes;
    for (const auto& item : j.at("amplitudes")) {
        amplitudes.emplace_back(item.at(0).get<double>(), item.at(1).get<double>());
    }
    return PureState(std::move(labels), std::move(amplitudes));
}

inline nlohmann::json to_json(const McEstimate& estimate) {
    nlohmann::json j;
    j["trials"] = estimate.trials;
    j["p_e_hat"] = estimate.p_e_hat;
    j["herald_rate"] = estimate.herald_rate;
    j["dark_count_fraction"] = estimate.dark_count_fraction;
    j["std_error"] = estimate.std_error;
    j["seed"] = estimate.seed;
    if (std::isnan(estimate.avg_teleport_fidelity)) {
        j["avg_teleport_fidelity"] = nullptr;
    } else {
        j["avg_teleport_fidelity"] = estimate.avg_teleport_fidelity;
    }
    return j;
}

} // namespace qtlink
