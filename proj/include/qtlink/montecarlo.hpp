#pragma once

#include "qtlink/archetypes.hpp"
#include "qtlink/channel.hpp"
#include "qtlink/rng.hpp"
#include "qtlink/teleport.hpp"
#include "qtlink/transducer.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtlink {

enum class DetectorKind { Pnrd, Spd };

inline std::string to_string(DetectorKind kind) {
    return kind == DetectorKind::Pnrd ? "pnrd" : "spd";
}

// Heralding detector: photon-number-resolving or click/no-click, with a
// per-photon detection probability.
struct DetectorModel {
    DetectorKind kind = DetectorKind::Pnrd;
    double efficiency = 1.0;

    void validate() const {
        if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
            throw std::domain_error("detector efficiency outside [0,1]");
        }
    }
};

struct TrialOutcome {
    bool herald = false;
    bool true_entanglement = false;
    double distributed_ebits = 0.0;
    bool double_generation = false;
};

// Aggregated estimate. p_e_hat is the mean of distributed ebits per attempt,
// std_error the sample standard deviation over sqrt(trials). Identical
// (config, trials, seed) reproduce this struct bit for bit.
struct McEstimate {
    std::uint64_t trials = 0;
    double p_e_hat = 0.0;
    double herald_rate = 0.0;
    double dark_count_fraction = 0.0;
    double std_error = 0.0;
    std::uint64_t seed = 0;
    // Herald-weighted mean teleportation fidelity over the conditional
    // states; NaN when no trial heralded.
    double avg_teleport_fidelity = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

// Per-trial values are 0 or a constant, so integer counts aggregate exactly
// and the result is independent of trial order.
struct ScaledBernoulliStats {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double value_on_success = 0.0;

    double mean() const { return value_on_success * static_cast<double>(successes) / static_cast<double>(trials); }

    double std_error() const {
        if (trials < 2) return 0.0;
        const double n = static_cast<double>(trials);
        const double m = static_cast<double>(successes);
        const double c = value_on_success;
        double var = c * c * (m - m * m / n) / (n - 1.0);
        if (var < 0.0) var = 0.0;
        return std::sqrt(var / n);
    }
};

inline constexpr int kFidelityInputs = 128;

// Fidelity of teleporting over the unentangled |0 0> pair left behind by a
// false herald.
inline double false_herald_fidelity(std::uint64_t seed) {
    ModeLabel src{Domain::Microwave, Location::Source, 0};
    ModeLabel dst{Domain::Microwave, Location::Destination, 0};
    PureState vacuum({src, dst}, {cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}});
    return average_fidelity(vacuum, kFidelityInputs, seed, ResourceConvention::PhiPlusLike);
}

inline double herald_weighted_fidelity(std::uint64_t n_true, std::uint64_t n_false, double true_fidelity,
                                       std::uint64_t seed) {
    const std::uint64_t heralds = n_true + n_false;
    if (heralds == 0) return std::numeric_limits<double>::quiet_NaN();
    double total = static_cast<double>(n_true) * true_fidelity;
    if (n_false > 0) total += static_cast<double>(n_false) * false_herald_fidelity(seed);
    return total / static_cast<double>(heralds);
}

} // namespace detail

// e-DQT attempt: up-conversion, full-fiber survival, down-conversion, each an
// independent Bernoulli draw in that order. Success distributes one ebit (the
// shared state is a maximal pair).
inline McEstimate run_edqt(const LinkConfig& config, std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (config.archetype != Archetype::EDqt) throw std::invalid_argument("config archetype must be edqt");
    config.validate();

    const double eta_up = config.eta_up_source->value();
    const double eta_down = config.eta_down_destination->value();
    const double survival = transmissivity(config.fiber, Segment::Full);

    std::uint64_t successes = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        Substream rng(seed, i);
        const bool converted_up = rng.uniform() < eta_up;
        const bool survived = rng.uniform() < survival;
        const bool converted_down = rng.uniform() < eta_down;
        if (converted_up && survived && converted_down) ++successes;
    }

    detail::ScaledBernoulliStats stats{trials, successes, 1.0};
    McEstimate estimate;
    estimate.trials = trials;
    estimate.seed = seed;
    estimate.p_e_hat = stats.mean();
    estimate.herald_rate = static_cast<double>(successes) / static_cast<double>(trials);
    estimate.dark_count_fraction = 0.0;
    estimate.std_error = stats.std_error();
    if (successes > 0) {
        ModeLabel src{Domain::Microwave, Location::Source, 0};
        ModeLabel dst{Domain::Microwave, Location::Destination, 0};
        estimate.avg_teleport_fidelity = average_fidelity(make_bell(BellKind::PhiPlus, src, dst),
                                                          detail::kFidelityInputs, seed ^ 0xf1de11ull,
                                                          ResourceConvention::PhiPlusLike);
    }
    return estimate;
}

// EGT+DQT attempt: the hybrid pair exists with the beam-splitter amplitude
// structure; the optical branch is transmitted (full-fiber Bernoulli) and
// down-converted (Bernoulli). A surviving trial shares the
// sqrt(eta)|0 1> + sqrt(1-eta)|1 0> microwave pair and therefore distributes
// S(eta_up_source) ebits.
inline McEstimate run_egt_dqt(const LinkConfig& config, std::uint64_t trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (config.archetype != Archetype::EgtWithDqt) throw std::invalid_argument("config archetype must be egt-dqt");
    config.validate();

    const double eta_up = config.eta_up_source->value();
    const double eta_down = config.eta_down_destination->value();
    const double survival = transmissivity(config.fiber, Segment::Full);
    const double ebits = binary_entropy(eta_up);

    std::uint64_t successes = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        Substream rng(seed, i);
        const bool survived = rng.uniform() < survival;
        const bool converted_down = rng.uniform() < eta_down;
        if (survived && converted_down) ++successes;
    }

    detail::ScaledBernoulliStats stats{trials, successes, ebits};
    McEstimate estimate;
    estimate.trials = trials;
    estimate.seed = seed;
    estimate.p_e_hat = stats.mean();
    estimate.herald_rate = static_cast<double>(successes) / static_cast<double>(trials);
    estimate.dark_count_fraction = 0.0;
    estimate.std_error = stats.std_error();
    if (successes > 0) {
        ModeLabel src{Domain::Microwave, Location::Source, 0};
        ModeLabel dst{Domain::Microwave, Location::Destination, 0};
        std::vector<cplx> amps = {cplx{0.0, 0.0}, cplx{std::sqrt(eta_up), 0.0},
                                  cplx{std::sqrt(1.0 - eta_up), 0.0}, cplx{0.0, 0.0}};
        PureState conditional({src, dst}, std::move(amps));
        estimate.avg_teleport_fidelity = average_fidelity(conditional, detail::kFidelityInputs,
                                                          seed ^ 0xf1de11ull, ResourceConvention::PsiPlusLike);
    }
    return estimate;
}

// One EGT-with-swapping attempt.
//
// Each side generates an optical photon with its up-conversion efficiency.
// Fiber loss is a single half-link survival draw gating the optical signal
// as a whole (so the heralded mean matches the closed form's single
// exp(-l/(2 L0)) factor); with independent_photon_loss every generated
// photon draws its own survival, which lets a two-photon emission arrive as
// a lone photon. Every arriving photon is detected with the detector
// efficiency.
//
// Classification:
//   PNRD  count == 1 and one side generated  -> herald, true entanglement
//         count == 1 and both generated      -> herald, false (dark count)
//         count == 2                          -> resolved double, discarded
//   SPD   count >= 1                          -> herald, true iff one side
//                                               generated (a coincident pair
//                                               is indistinguishable from a
//                                               single photon)
// A true herald distributes S(eta_min) ebits, eta_min per the closed form.
inline TrialOutcome swap_trial(double eta_source, double eta_destination, double half_survival,
                               const DetectorModel& detector, bool independent_photon_loss,
                               double ebits_on_success, Substream& rng) {
    const bool generated_source = rng.uniform() < eta_source;
    const bool generated_destination = rng.uniform() < eta_destination;
    const int generated = (generated_source ? 1 : 0) + (generated_destination ? 1 : 0);

    TrialOutcome outcome;
    outcome.double_generation = generated == 2;
    if (generated == 0) return outcome;

    int arrivals = 0;
    if (independent_photon_loss) {
        for (int i = 0; i < generated; ++i) {
            if (rng.uniform() < half_survival) ++arrivals;
        }
    } else {
        arrivals = rng.uniform() < half_survival ? generated : 0;
    }

    int count = 0;
    for (int i = 0; i < arrivals; ++i) {
        if (rng.uniform() < detector.efficiency) ++count;
    }
    if (count == 0) return outcome;

    if (detector.kind == DetectorKind::Pnrd && count >= 2) return outcome;  // resolved and discarded

    outcome.herald = true;
    outcome.true_entanglement = generated == 1;
    if (outcome.true_entanglement) outcome.distributed_ebits = ebits_on_success;
    return outcome;
}

inline McEstimate run_egt_swap(const LinkConfig& config, const DetectorModel& detector,
                               std::uint64_t trials, std::uint64_t seed,
                               bool independent_photon_loss = false) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (config.archetype != Archetype::EgtWithSwapping) {
        throw std::invalid_argument("config archetype must be egt-swap");
    }
    config.validate();
    detector.validate();

    const double eta_s = config.eta_up_source->value();
    const double eta_d = config.eta_up_destination->value();
    const double half_survival = transmissivity(config.fiber, Segment::Half);
    const Efficiency eta_min = swap_min_entropy_efficiency(*config.eta_up_source, *config.eta_up_destination);
    const double ebits = binary_entropy(eta_min.value());

    std::uint64_t heralds = 0, true_heralds = 0, false_heralds = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        Substream rng(seed, i);
        TrialOutcome outcome =
            swap_trial(eta_s, eta_d, half_survival, detector, independent_photon_loss, ebits, rng);
        if (outcome.herald) {
            ++heralds;
            if (outcome.true_entanglement) ++true_heralds;
            else ++false_heralds;
        }
    }

    detail::ScaledBernoulliStats stats{trials, true_heralds, ebits};
    McEstimate estimate;
    estimate.trials = trials;
    estimate.seed = seed;
    estimate.p_e_hat = stats.mean();
    estimate.herald_rate = static_cast<double>(heralds) / static_cast<double>(trials);
    estimate.dark_count_fraction =
        heralds == 0 ? 0.0 : static_cast<double>(false_heralds) / static_cast<double>(heralds);
    estimate.std_error = stats.std_error();
    if (heralds > 0) {
        ModeLabel src{Domain::Microwave, Location::Source, 0};
        ModeLabel dst{Domain::Microwave, Location::Destination, 0};
        const double w = eta_min.value();
        std::vector<cplx> amps = {cplx{0.0, 0.0}, cplx{std::sqrt(w), 0.0},
                                  cplx{std::sqrt(1.0 - w), 0.0}, cplx{0.0, 0.0}};
        PureState conditional({src, dst}, std::move(amps));
        const double true_fidelity = average_fidelity(conditional, detail::kFidelityInputs,
                                                      seed ^ 0xf1de11ull, ResourceConvention::PsiPlusLike);
        estimate.avg_teleport_fidelity =
            detail::herald_weighted_fidelity(true_heralds, false_heralds, true_fidelity, seed ^ 0xda2cull);
    }
    return estimate;
}

// Convenience dispatch; swapping runs use the given detector.
inline McEstimate run_archetype(const LinkConfig& config, const DetectorModel& detector,
                                std::uint64_t trials, std::uint64_t seed,
                                bool independent_photon_loss = false) {
    switch (config.archetype) {
        case Archetype::EDqt: return run_edqt(config, trials, seed);
        case Archetype::EgtWithDqt: return run_egt_dqt(config, trials, seed);
        case Archetype::EgtWithSwapping:
            return run_egt_swap(config, detector, trials, seed, independent_photon_loss);
    }
    throw std::invalid_argument("unknown archetype");
}

inline double closed_form_p_e(const LinkConfig& config) {
    return distribute(config).p_e;
}

struct ValidationRow {
    std::string label;
    double p_e_hat = 0.0;
    double p_e_closed = 0.0;
    double std_error = 0.0;
    double z_score = 0.0;
    bool flagged = false;
};

// z-score of an estimate against a reference value. Zero-variance runs
// score z = 0 when the two agree exactly and +-inf otherwise; |z| > 4 flags.
inline ValidationRow make_validation_row(const McEstimate& estimate, double p_e_closed,
                                         const std::string& label) {
    ValidationRow row;
    row.label = label;
    row.p_e_hat = estimate.p_e_hat;
    row.p_e_closed = p_e_closed;
    row.std_error = estimate.std_error;
    const double diff = estimate.p_e_hat - p_e_closed;
    if (estimate.std_error == 0.0) {
        row.z_score = diff == 0.0 ? 0.0
                                  : std::copysign(std::numeric_limits<double>::infinity(), diff);
    } else {
        row.z_score = diff / estimate.std_error;
    }
    row.flagged = !(std::abs(row.z_score) <= 4.0);
    return row;
}

// Compares the Monte-Carlo mean against the closed form.
inline ValidationRow estimate_vs_closed_form(const LinkConfig& config, const DetectorModel& detector,
                                             std::uint64_t trials, std::uint64_t seed,
                                             bool independent_photon_loss = false) {
    const McEstimate estimate = run_archetype(config, detector, trials, seed, independent_photon_loss);
    return make_validation_row(estimate, closed_form_p_e(config), to_string(config.archetype));
}

// The 12-point grid per archetype used by the validation command: four
// efficiency pairs crossed with three fiber lengths, 0.2 dB/km, ideal PNRD.
inline std::vector<LinkConfig> validation_preset() {
    const double lengths[] = {0.0, 10.0, 50.0};
    const std::pair<double, double> edqt_pairs[] = {{0.15, 0.15}, {0.3, 0.3}, {0.5, 0.5}, {0.85, 0.85}};
    const std::pair<double, double> egt_dqt_pairs[] = {{0.15, 0.15}, {0.3, 0.6}, {0.5, 1.0}, {0.85, 0.4}};
    const std::pair<double, double> swap_pairs[] = {{0.15, 0.15}, {0.3, 0.7}, {0.5, 0.5}, {0.85, 0.25}};

    std::vector<LinkConfig> grid;
    for (double l : lengths) {
        FiberLink fiber(l);
        for (auto [a, b] : edqt_pairs) grid.push_back(LinkConfig::edqt(Efficiency(a), Efficiency(b), fiber));
        for (auto [a, b] : egt_dqt_pairs) {
            grid.push_back(LinkConfig::egt_with_dqt(Efficiency(a), Efficiency(b), fiber));
        }
        for (auto [a, b] : swap_pairs) {
            grid.push_back(LinkConfig::egt_with_swapping(Efficiency(a), Efficiency(b), fiber));
        }
    }
    return grid;
}

} // namespace qtlink
