#pragma once

#include "qtlink/archetypes.hpp"
#include "qtlink/version.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qtlink {

enum class SweepTarget { Fig5, Fig8a, Fig8b, Fig8c, Fig9, Custom };
enum class SweepFormat { Csv, Json };

inline std::string to_string(SweepTarget target) {
    switch (target) {
        case SweepTarget::Fig5: return "fig5";
        case SweepTarget::Fig8a: return "fig8a";
        case SweepTarget::Fig8b: return "fig8b";
        case SweepTarget::Fig8c: return "fig8c";
        case SweepTarget::Fig9: return "fig9";
        case SweepTarget::Custom: return "custom";
    }
    return "?";
}

inline std::optional<SweepTarget> sweep_target_from_string(const std::string& name) {
    if (name == "fig5") return SweepTarget::Fig5;
    if (name == "fig8a") return SweepTarget::Fig8a;
    if (name == "fig8b") return SweepTarget::Fig8b;
    if (name == "fig8c") return SweepTarget::Fig8c;
    if (name == "fig9") return SweepTarget::Fig9;
    if (name == "custom") return SweepTarget::Custom;
    return std::nullopt;
}

struct AxisSpec {
    std::string name;  // C, C_source, C_destination, zeta_product, fiber_length_km
    double min = 0.0;
    double max = 1.0;
    int steps = 101;

    double at(int i) const { return min + (max - min) * static_cast<double>(i) / (steps - 1); }

    void validate() const {
        if (steps < 2) throw std::invalid_argument("axis needs at least 2 steps");
        if (!(min <= max)) throw std::invalid_argument("axis range inverted");
        if (name == "zeta_product") {
            if (min < 0.0 || max > 1.0) throw std::invalid_argument("zeta_product range outside [0,1]");
        } else if (!(min >= 0.0)) {
            throw std::invalid_argument("axis '" + name + "' must be nonnegative");
        }
    }
};

struct SweepSpec {
    SweepTarget target = SweepTarget::Fig5;
    std::vector<AxisSpec> axes;                // empty picks the target default
    std::map<std::string, double> fixed;       // fiber_length_km, attenuation_db_per_km, C_source, ...
    std::optional<Archetype> archetype;        // Custom p_e sweeps
    std::string output_path;
    SweepFormat format = SweepFormat::Csv;
};

// Column-oriented result plus ordered metadata; rows iterate the first axis
// slowest, so output ordering is deterministic.
struct Dataset {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

inline std::string format_value(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.9g", v);
    return buffer;
}

// Point of the archetype comparison sweep at symmetric cooperativity C with
// unit extraction ratios. The EGT+DQT source transducer is capped at
// 3 - 2 sqrt(2); its destination conversion uses the uncapped efficiency.
struct Fig9Point {
    double p_edqt = 0.0;
    double p_egt_dqt = 0.0;
    double p_egt_swap = 0.0;
};

inline Fig9Point fig9_point(double c, const FiberLink& fiber) {
    const Efficiency eta = eta_from_cooperativity_capped(c);
    const Efficiency eta_capped = eta_from_cooperativity_capped(c, kHalfEfficiencyCooperativity);
    Fig9Point point;
    point.p_edqt = p_e_edqt(eta, eta, fiber);
    point.p_egt_dqt = p_e_egt_dqt(eta_capped, eta, fiber);
    point.p_egt_swap = p_e_egt_swap(eta, eta, fiber);
    return point;
}

namespace detail {

inline double fixed_or(const SweepSpec& spec, const std::string& key, double fallback) {
    auto it = spec.fixed.find(key);
    return it == spec.fixed.end() ? fallback : it->second;
}

inline FiberLink sweep_fiber(const SweepSpec& spec, double length_override) {
    return FiberLink(length_override, fixed_or(spec, "attenuation_db_per_km", 0.2));
}

inline void push_metadata(Dataset& data, const SweepSpec& spec) {
    data.metadata.emplace_back("qtlink_version", QTLINK_VERSION);
    data.metadata.emplace_back("target", to_string(spec.target));
    if (spec.archetype) data.metadata.emplace_back("archetype", to_string(*spec.archetype));
    for (const AxisSpec& axis : spec.axes) {
        data.metadata.emplace_back(
            "axis", axis.name + " min=" + format_value(axis.min) + " max=" + format_value(axis.max) +
                        " steps=" + std::to_string(axis.steps));
    }
    for (const auto& [key, value] : spec.fixed) {
        data.metadata.emplace_back("fixed", key + "=" + format_value(value));
    }
}

inline Dataset sweep_efficiency(const SweepSpec& spec) {
    const AxisSpec& c_axis = spec.axes[0];
    const AxisSpec& zeta_axis = spec.axes[1];
    Dataset data;
    push_metadata(data, spec);
    data.metadata.emplace_back("formula", "eta = 4 * zeta_o*zeta_m * C / (1 + C)^2");
    data.metadata.emplace_back("formula", "one_way_positive: eta > 1/sqrt(2), symmetric conversions");
    data.columns = {"C", "zeta_product", "eta", "one_way_positive"};
    const double threshold = 1.0 / std::numbers::sqrt2;
    for (int i = 0; i < c_axis.steps; ++i) {
        const double c = c_axis.at(i);
        for (int j = 0; j < zeta_axis.steps; ++j) {
            const double zeta = zeta_axis.at(j);
            const double eta = conversion_efficiency(c, zeta, 1.0).value();
            data.rows.push_back({c, zeta, eta, eta > threshold ? 1.0 : 0.0});
        }
    }
    return data;
}

inline Dataset sweep_fig8(const SweepSpec& spec, Archetype archetype) {
    const AxisSpec& source_axis = spec.axes[0];
    const AxisSpec& destination_axis = spec.axes[1];
    const FiberLink fiber = sweep_fiber(spec, fixed_or(spec, "fiber_length_km", 0.0));
    Dataset data;
    push_metadata(data, spec);
    data.metadata.emplace_back("assumption", "zeta_o = zeta_m = 1 on both transducers");
    data.columns = {"C_source", "C_destination", "p_e"};
    for (int i = 0; i < source_axis.steps; ++i) {
        const Efficiency eta_s = eta_from_cooperativity_capped(source_axis.at(i));
        for (int j = 0; j < destination_axis.steps; ++j) {
            const Efficiency eta_d = eta_from_cooperativity_capped(destination_axis.at(j));
            double p = 0.0;
            switch (archetype) {
                case Archetype::EDqt: p = p_e_edqt(eta_s, eta_d, fiber); break;
                case Archetype::EgtWithDqt: p = p_e_egt_dqt(eta_s, eta_d, fiber); break;
                case Archetype::EgtWithSwapping: p = p_e_egt_swap(eta_s, eta_d, fiber); break;
            }
            data.rows.push_back({source_axis.at(i), destination_axis.at(j), p});
        }
    }
    return data;
}

inline Dataset sweep_fig9(const SweepSpec& spec) {
    const AxisSpec& c_axis = spec.axes[0];
    const FiberLink fiber = sweep_fiber(spec, fixed_or(spec, "fiber_length_km", 0.0));
    Dataset data;
    push_metadata(data, spec);
    data.metadata.emplace_back("assumption", "C symmetric per curve; zeta_o = zeta_m = 1");
    data.metadata.emplace_back("assumption",
                               "egt-dqt source cooperativity capped at 3-2*sqrt(2) = " +
                                   format_value(kHalfEfficiencyCooperativity));
    data.columns = {"C", "p_e_edqt", "p_e_egt_dqt", "p_e_egt_swap"};
    for (int i = 0; i < c_axis.steps; ++i) {
        const double c = c_axis.at(i);
        const Fig9Point point = fig9_point(c, fiber);
        data.rows.push_back({c, point.p_edqt, point.p_egt_dqt, point.p_egt_swap});
    }
    return data;
}

inline Dataset sweep_custom(const SweepSpec& spec) {
    if (!spec.archetype) throw std::invalid_argument("custom sweep needs an archetype");
    for (const AxisSpec& axis : spec.axes) {
        if (axis.name != "C_source" && axis.name != "C_destination" && axis.name != "fiber_length_km") {
            throw std::invalid_argument("custom axis must be C_source, C_destination or fiber_length_km");
        }
    }
    Dataset data;
    push_metadata(data, spec);
    data.columns.clear();
    for (const AxisSpec& axis : spec.axes) data.columns.push_back(axis.name);
    data.columns.push_back("p_e");

    auto evaluate = [&](const std::map<std::string, double>& point) {
        const double c_source = point.count("C_source") ? point.at("C_source")
                                                        : fixed_or(spec, "C_source", 1.0);
        const double c_destination = point.count("C_destination") ? point.at("C_destination")
                                                                  : fixed_or(spec, "C_destination", 1.0);
        const double length = point.count("fiber_length_km") ? point.at("fiber_length_km")
                                                             : fixed_or(spec, "fiber_length_km", 0.0);
        const Efficiency eta_s = eta_from_cooperativity_capped(c_source);
        const Efficiency eta_d = eta_from_cooperativity_capped(c_destination);
        const FiberLink fiber = sweep_fiber(spec, length);
        switch (*spec.archetype) {
            case Archetype::EDqt: return p_e_edqt(eta_s, eta_d, fiber);
            case Archetype::EgtWithDqt: return p_e_egt_dqt(eta_s, eta_d, fiber);
            case Archetype::EgtWithSwapping: return p_e_egt_swap(eta_s, eta_d, fiber);
        }
        throw std::invalid_argument("unknown archetype");
    };

    if (spec.axes.size() == 1) {
        const AxisSpec& axis = spec.axes[0];
        for (int i = 0; i < axis.steps; ++i) {
            std::map<std::string, double> point{{axis.name, axis.at(i)}};
            data.rows.push_back({axis.at(i), evaluate(point)});
        }
    } else {
        const AxisSpec& outer = spec.axes[0];
        const AxisSpec& inner = spec.axes[1];
        for (int i = 0; i < outer.steps; ++i) {
            for (int j = 0; j < inner.steps; ++j) {
                std::map<std::string, double> point{{outer.name, outer.at(i)}, {inner.name, inner.at(j)}};
                data.rows.push_back({outer.at(i), inner.at(j), evaluate(point)});
            }
        }
    }
    return data;
}

} // namespace detail

// Fills in the per-target default axes when the spec leaves them empty.
inline SweepSpec with_default_axes(SweepSpec spec) {
    if (!spec.axes.empty()) return spec;
    switch (spec.target) {
        case SweepTarget::Fig5:
            spec.axes = {{"C", 0.0, 2.0, 101}, {"zeta_product", 0.0, 1.0, 101}};
            break;
        case SweepTarget::Fig8a:
        case SweepTarget::Fig8b:
        case SweepTarget::Fig8c:
            spec.axes = {{"C_source", 0.0, 1.0, 101}, {"C_destination", 0.0, 1.0, 101}};
            break;
        case SweepTarget::Fig9:
            spec.axes = {{"C", 0.0, 1.0, 201}};
            break;
        case SweepTarget::Custom:
            throw std::invalid_argument("custom sweep needs explicit axes");
    }
    return spec;
}

inline Dataset run_sweep(const SweepSpec& raw_spec) {
    SweepSpec spec = with_default_axes(raw_spec);
    for (const AxisSpec& axis : spec.axes) axis.validate();
    switch (spec.target) {
        case SweepTarget::Fig5:
            if (spec.axes.size() != 2) throw std::invalid_argument("fig5 needs two axes");
            return detail::sweep_efficiency(spec);
        case SweepTarget::Fig8a:
            if (spec.axes.size() != 2) throw std::invalid_argument("fig8 needs two axes");
            return detail::sweep_fig8(spec, Archetype::EDqt);
        case SweepTarget::Fig8b:
            if (spec.axes.size() != 2) throw std::invalid_argument("fig8 needs two axes");
            return detail::sweep_fig8(spec, Archetype::EgtWithDqt);
        case SweepTarget::Fig8c:
            if (spec.axes.size() != 2) throw std::invalid_argument("fig8 needs two axes");
            return detail::sweep_fig8(spec, Archetype::EgtWithSwapping);
        case SweepTarget::Fig9:
            if (spec.axes.size() != 1) throw std::invalid_argument("fig9 needs one axis");
            return detail::sweep_fig9(spec);
        case SweepTarget::Custom:
            if (spec.axes.empty() || spec.axes.size() > 2) {
                throw std::invalid_argument("custom sweep needs one or two axes");
            }
            return detail::sweep_custom(spec);
    }
    throw std::invalid_argument("unknown sweep target");
}

inline void write_dataset(const Dataset& data, std::ostream& out, SweepFormat format) {
    if (format == SweepFormat::Csv) {
        for (const auto& [key, value] : data.metadata) out << "# " << key << ": " << value << '\n';
        for (std::size_t i = 0; i < data.columns.size(); ++i) {
            if (i) out << ',';
            out << data.columns[i];
        }
        out << '\n';
        for (const auto& row : data.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << ',';
                out << format_value(row[i]);
            }
            out << '\n';
        }
        return;
    }
    nlohmann::ordered_json j;
    nlohmann::ordered_json meta = nlohmann::ordered_json::array();
    for (const auto& [key, value] : data.metadata) meta.push_back({{"key", key}, {"value", value}});
    j["metadata"] = meta;
    j["columns"] = data.columns;
    j["rows"] = data.rows;
    out << j.dump(2) << '\n';
}

} // namespace qtlink
