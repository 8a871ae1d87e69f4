#pragma once

#include "qtlink/channel.hpp"
#include "qtlink/quantum.hpp"
#include "qtlink/transducer.hpp"

#include <algorithm>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qtlink {

// Cooperativity at which a unit-extraction transducer reaches eta = 0.5;
// also the source-side cap used by the EGT+DQT comparison sweep.
inline constexpr double kHalfEfficiencyCooperativity = 3.0 - 2.0 * std::numbers::sqrt2;

enum class Archetype { EDqt, EgtWithDqt, EgtWithSwapping };
enum class GenerationLocation { Source, Midpoint, BothEndpoints };

inline std::string to_string(Archetype a) {
    switch (a) {
        case Archetype::EDqt: return "edqt";
        case Archetype::EgtWithDqt: return "egt-dqt";
        case Archetype::EgtWithSwapping: return "egt-swap";
    }
    return "?";
}

// Closed-form EPR distribution probability, entanglement generated at the
// source in the microwave domain and distributed through two conversions:
//   p_e = eta_up_s * eta_down_d * exp(-l/L0)
inline double p_e_edqt(Efficiency eta_up_source, Efficiency eta_down_destination, const FiberLink& fiber) {
    return eta_up_source.value() * eta_down_destination.value() * transmissivity(fiber, Segment::Full);
}

// Hybrid pair generated at the source, optical half transmitted and
// down-converted at the destination:
//   p_e = S(eta_up_s) * eta_down_d * exp(-l/L0)
inline double p_e_egt_dqt(Efficiency eta_up_source, Efficiency eta_down_destination, const FiberLink& fiber) {
    return binary_entropy(eta_up_source.value()) * eta_down_destination.value() *
           transmissivity(fiber, Segment::Full);
}

// Hybrid pairs generated at both endpoints, swapped by a midpoint BSM:
//   p_e = S(eta_min) * [eta_s(1-eta_d) + eta_d(1-eta_s)] * exp(-l/(2 L0))
// where eta_min is whichever of the two efficiencies minimizes S (ties pick
// the source; the value is identical either way).
inline double p_e_egt_swap(Efficiency eta_up_source, Efficiency eta_up_destination, const FiberLink& fiber) {
    const double es = eta_up_source.value();
    const double ed = eta_up_destination.value();
    const double entropy = std::min(binary_entropy(es), binary_entropy(ed));
    const double exactly_one = es * (1.0 - ed) + ed * (1.0 - es);
    return entropy * exactly_one * transmissivity(fiber, Segment::Half);
}

// The efficiency among the pair that minimizes S; ties resolve to the source.
inline Efficiency swap_min_entropy_efficiency(Efficiency eta_up_source, Efficiency eta_up_destination) {
    if (binary_entropy(eta_up_destination.value()) < binary_entropy(eta_up_source.value())) {
        return eta_up_destination;
    }
    return eta_up_source;
}

// Erasure-channel capacities of a link with success probability p_e:
// two-way capacity equals p_e, one-way capacity is max(0, 2 p_e - 1).
// Thresholds: one-way positive iff p_e > 1/2, two-way positive iff p_e > 0.
inline std::pair<double, double> capacities(double p_e) {
    if (!(p_e >= 0.0 && p_e <= 1.0)) throw std::domain_error("p_e outside [0,1]");
    return {std::max(0.0, 2.0 * p_e - 1.0), p_e};
}

// Efficiency from cooperativity with unit extraction ratios, optionally
// capping C first. The comparison sweep caps the EGT+DQT source transducer
// at 3 - 2 sqrt(2) so its generation stage never passes eta = 0.5.
inline Efficiency eta_from_cooperativity_capped(double cooperativity_value,
                                                std::optional<double> cap = std::nullopt) {
    if (!(cooperativity_value >= 0.0)) throw std::domain_error("cooperativity must be >= 0");
    double c = cooperativity_value;
    if (cap) c = std::min(c, *cap);
    return conversion_efficiency(c, 1.0, 1.0);
}

struct DistributionOutcome {
    double p_e = 0.0;
    double q_one_way = 0.0;
    double q_two_way = 0.0;
    std::string notes;
};

// One source-destination link: archetype, its per-node efficiencies and the
// fiber. Unused efficiencies stay unset; validate() enforces the per-
// archetype requirements.
struct LinkConfig {
    Archetype archetype = Archetype::EDqt;
    std::optional<Efficiency> eta_up_source;
    std::optional<Efficiency> eta_down_destination;
    std::optional<Efficiency> eta_up_destination;
    FiberLink fiber{0.0};
    GenerationLocation generation_location = GenerationLocation::Source;

    static LinkConfig edqt(Efficiency up_source, Efficiency down_destination, FiberLink fiber) {
        return {Archetype::EDqt, up_source, down_destination, std::nullopt, fiber,
                GenerationLocation::Source};
    }

    static LinkConfig egt_with_dqt(Efficiency up_source, Efficiency down_destination, FiberLink fiber) {
        return {Archetype::EgtWithDqt, up_source, down_destination, std::nullopt, fiber,
                GenerationLocation::Source};
    }

    static LinkConfig egt_with_swapping(Efficiency up_source, Efficiency up_destination, FiberLink fiber) {
        return {Archetype::EgtWithSwapping, up_source, std::nullopt, up_destination, fiber,
                GenerationLocation::BothEndpoints};
    }

    void validate() const {
        switch (archetype) {
            case Archetype::EDqt:
            case Archetype::EgtWithDqt:
                if (!eta_up_source || !eta_down_destination) {
                    throw std::invalid_argument("archetype requires eta_up_source and eta_down_destination");
                }
                break;
            case Archetype::EgtWithSwapping:
                if (!eta_up_source || !eta_up_destination) {
                    throw std::invalid_argument("archetype requires eta_up_source and eta_up_destination");
                }
                break;
        }
    }
};

inline DistributionOutcome distribute(const LinkConfig& config) {
    config.validate();
    DistributionOutcome outcome;
    switch (config.archetype) {
        case Archetype::EDqt:
            outcome.p_e = p_e_edqt(*config.eta_up_source, *config.eta_down_destination, config.fiber);
            outcome.notes = "p_e = eta_up_s * eta_down_d * exp(-l/L0)";
            break;
        case Archetype::EgtWithDqt:
            outcome.p_e = p_e_egt_dqt(*config.eta_up_source, *config.eta_down_destination, config.fiber);
            outcome.notes = "p_e = S(eta_up_s) * eta_down_d * exp(-l/L0)";
            break;
        case Archetype::EgtWithSwapping:
            outcome.p_e = p_e_egt_swap(*config.eta_up_source, *config.eta_up_destination, config.fiber);
            outcome.notes = "p_e = S(eta_min) * [eta_s(1-eta_d) + eta_d(1-eta_s)] * exp(-l/(2 L0))";
            break;
    }
    auto [one_way, two_way] = capacities(std::min(outcome.p_e, 1.0));
    outcome.q_one_way = one_way;
    outcome.q_two_way = two_way;
    return outcome;
}

// ---------------------------------------------------------------------------
// Generalized placements: where the pair is generated, whether it comes from
// the transducer itself (intrinsic) or an external source (extrinsic), and
// the domain the external pair lives in.

enum class EntanglementType { Intrinsic, Extrinsic };
enum class PairDomain { MicrowaveMicrowave, OpticalOptical, Hybrid };

class UnsupportedVariantError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Table4Params {
    std::vector<Efficiency> conversion_etas;  // one per DQT stage, pipeline order
    std::vector<Efficiency> egt_etas;         // one per intrinsic generation
    FiberLink fiber{0.0};
};

// A composed link variant: p_e multiplies one DQT factor per conversion, one
// S(eta) factor per intrinsic generation and the fiber factor of each
// traversed segment. The both-endpoints intrinsic cell is the swapping
// archetype and keeps its heralding bracket.
struct Table4Variant {
    GenerationLocation location;
    EntanglementType type;
    PairDomain frequencies;
    int conversion_count = 0;
    int egt_count = 0;
    int full_segments = 0;  // optically traversed full links
    int half_segments = 0;  // optically traversed half links
    std::string description;

    double evaluate(const Table4Params& params) const {
        if (params.conversion_etas.size() != static_cast<std::size_t>(conversion_count)) {
            throw std::invalid_argument("variant needs exactly " + std::to_string(conversion_count) +
                                        " conversion efficiencies");
        }
        if (params.egt_etas.size() != static_cast<std::size_t>(egt_count)) {
            throw std::invalid_argument("variant needs exactly " + std::to_string(egt_count) +
                                        " generation efficiencies");
        }
        if (location == GenerationLocation::BothEndpoints) {
            return p_e_egt_swap(params.egt_etas[0], params.egt_etas[1], params.fiber);
        }
        double p = 1.0;
        for (const Efficiency& eta : params.conversion_etas) p *= eta.value();
        for (const Efficiency& eta : params.egt_etas) p *= binary_entropy(eta.value());
        for (int i = 0; i < full_segments; ++i) p *= transmissivity(params.fiber, Segment::Full);
        for (int i = 0; i < half_segments; ++i) p *= transmissivity(params.fiber, Segment::Half);
        return p;
    }
};

// Valid cells and their composition. Meaningless placements (for instance an
// extrinsic optical pair generated at a superconducting source node) raise
// UnsupportedVariantError.
inline Table4Variant table4_variant(GenerationLocation location, EntanglementType type,
                                    PairDomain frequencies) {
    if (type == EntanglementType::Intrinsic && frequencies != PairDomain::Hybrid) {
        throw UnsupportedVariantError("intrinsic generation always produces a hybrid pair");
    }
    if (type == EntanglementType::Extrinsic && frequencies == PairDomain::Hybrid) {
        throw UnsupportedVariantError("extrinsic hybrid sources are not modeled");
    }

    Table4Variant v{location, type, frequencies, 0, 0, 0, 0, ""};
    switch (location) {
        case GenerationLocation::Source:
            if (type == EntanglementType::Intrinsic) {
                // EGT at the source, one down-conversion at the destination.
                v.conversion_count = 1;
                v.egt_count = 1;
                v.full_segments = 1;
                v.description = "intrinsic hybrid pair at source; optical ebit to destination";
            } else if (frequencies == PairDomain::MicrowaveMicrowave) {
                // Microwave pair at the source: up at source, down at destination.
                v.conversion_count = 2;
                v.egt_count = 0;
                v.full_segments = 1;
                v.description = "extrinsic microwave pair at source; one ebit converted twice";
            } else {
                throw UnsupportedVariantError(
                    "extrinsic optical generation at the source is meaningless for superconducting nodes");
            }
            break;
        case GenerationLocation::Midpoint:
            if (type == EntanglementType::Intrinsic) {
                // Hybrid pair at the midpoint: optical ebit down-converted at one
                // endpoint; microwave ebit up-converted, transmitted, down-converted.
                v.conversion_count = 3;
                v.egt_count = 1;
                v.half_segments = 2;
                v.description = "intrinsic hybrid pair at midpoint";
            } else if (frequencies == PairDomain::MicrowaveMicrowave) {
                v.conversion_count = 4;
                v.egt_count = 0;
                v.half_segments = 2;
                v.description = "extrinsic microwave pair at midpoint; two up- and two down-conversions";
            } else {
                v.conversion_count = 2;
                v.egt_count = 0;
                v.half_segments = 2;
                v.description = "extrinsic optical pair at midpoint; one down-conversion per endpoint";
            }
            break;
        case GenerationLocation::BothEndpoints:
            if (type != EntanglementType::Intrinsic) {
                throw UnsupportedVariantError(
                    "extrinsic generation at both endpoints needs external nodes outside this model");
            }
            v.conversion_count = 0;
            v.egt_count = 2;
            v.half_segments = 1;
            v.description = "intrinsic hybrid pairs at both endpoints, midpoint swap";
            break;
    }
    return v;
}

} // namespace qtlink
