#pragma once

#include "qtlink/quantum.hpp"
#include "qtlink/rng.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

namespace qtlink {

// The qubit to transmit, a|0> + b|1>, unit-normalized.
struct InformationalQubit {
    cplx a;
    cplx b;

    InformationalQubit(cplx a_, cplx b_) : a(a_), b(b_) {
        if (std::abs(std::norm(a) + std::norm(b) - 1.0) > kNormTolerance) {
            throw std::invalid_argument("informational qubit is not normalized");
        }
    }
};

// Classical result of the Bell state measurement: the first bit comes from
// the informational qubit (after H), the second from the source ebit.
struct BsmOutcome {
    int m1 = 0;
    int m2 = 0;
    double probability = 0.0;
};

// Which Bell state the resource is shaped like. The correction rule assumes
// a PhiPlus resource; a PsiPlus-shaped resource (the form the swap and
// beam-splitter pipelines deliver) maps onto it by a pre-agreed local X on
// the destination ebit.
enum class ResourceConvention { PhiPlusLike, PsiPlusLike };

struct TeleportResult {
    BsmOutcome outcome;
    PureState destination;
};

namespace detail {

struct TeleportSetup {
    ModeLabel info;
    ModeLabel source_ebit;
    ModeLabel destination_ebit;
};

inline TeleportSetup teleport_setup(const PureState& epr) {
    if (epr.mode_count() != 2) throw std::invalid_argument("EPR resource must be a two-mode state");
    TeleportSetup s{};
    s.source_ebit = epr.labels()[0];
    s.destination_ebit = epr.labels()[1];
    for (int ord = 0; ord < 256; ++ord) {
        ModeLabel candidate{Domain::Microwave, Location::Source, static_cast<std::uint8_t>(ord)};
        if (!(candidate == s.source_ebit) && !(candidate == s.destination_ebit)) {
            s.info = candidate;
            return s;
        }
    }
    throw std::invalid_argument("no free label for the informational qubit");
}

} // namespace detail

// One teleportation branch for a fixed BSM outcome (m1, m2): CNOT from the
// informational qubit onto the source ebit, H on the informational qubit,
// projective measurement of both, then X^m2 Z^m1 on the destination ebit.
// Returns the branch probability and the destination state (|0> placeholder
// for zero-probability branches).
inline TeleportResult teleport_outcome(const InformationalQubit& psi, const PureState& epr,
                                       int m1, int m2,
                                       ResourceConvention convention = ResourceConvention::PhiPlusLike) {
    if ((m1 != 0 && m1 != 1) || (m2 != 0 && m2 != 1)) {
        throw std::invalid_argument("BSM bits must be 0 or 1");
    }
    const auto setup = detail::teleport_setup(epr);

    PureState resource = epr;
    if (convention == ResourceConvention::PsiPlusLike) {
        resource = apply_single_mode_gate(resource, setup.destination_ebit, gates::pauli_x());
    }

    PureState total = tensor(PureState({setup.info}, {psi.a, psi.b}), resource);
    total = apply_two_mode_gate(total, setup.info, setup.source_ebit, gates::cnot());
    total = apply_single_mode_gate(total, setup.info, gates::hadamard());

    auto [p1, after_first] = project_mode(total, setup.info, m1);
    if (!after_first) {
        return {BsmOutcome{m1, m2, 0.0}, PureState({setup.destination_ebit}, {cplx{1.0, 0.0}, cplx{0.0, 0.0}})};
    }
    auto [p2, after_second] = project_mode(*after_first, setup.source_ebit, m2);
    if (!after_second) {
        return {BsmOutcome{m1, m2, 0.0}, PureState({setup.destination_ebit}, {cplx{1.0, 0.0}, cplx{0.0, 0.0}})};
    }

    PureState destination = *after_second;
    if (m2 == 1) destination = apply_single_mode_gate(destination, setup.destination_ebit, gates::pauli_x());
    if (m1 == 1) destination = apply_single_mode_gate(destination, setup.destination_ebit, gates::pauli_z());
    return {BsmOutcome{m1, m2, p1 * p2}, std::move(destination)};
}

inline std::array<TeleportResult, 4> teleport_all_outcomes(
    const InformationalQubit& psi, const PureState& epr,
    ResourceConvention convention = ResourceConvention::PhiPlusLike) {
    return {teleport_outcome(psi, epr, 0, 0, convention), teleport_outcome(psi, epr, 0, 1, convention),
            teleport_outcome(psi, epr, 1, 0, convention), teleport_outcome(psi, epr, 1, 1, convention)};
}

// Samples the BSM outcome from a uniform draw in [0, 1).
inline TeleportResult teleport(const InformationalQubit& psi, const PureState& epr, double draw,
                               ResourceConvention convention = ResourceConvention::PhiPlusLike) {
    if (!(draw >= 0.0 && draw < 1.0)) throw std::domain_error("draw must lie in [0,1)");
    auto branches = teleport_all_outcomes(psi, epr, convention);
    double cumulative = 0.0;
    for (std::size_t i = 0; i < branches.size(); ++i) {
        cumulative += branches[i].outcome.probability;
        if (draw < cumulative || i + 1 == branches.size()) return branches[i];
    }
    return branches.back();
}

// Haar-random qubit from four uniforms.
inline InformationalQubit random_qubit(Substream& rng) {
    cplx a{rng.normal(), rng.normal()};
    cplx b{rng.normal(), rng.normal()};
    double norm = std::sqrt(std::norm(a) + std::norm(b));
    if (norm == 0.0) return InformationalQubit(cplx{1.0, 0.0}, cplx{0.0, 0.0});
    return InformationalQubit(a / norm, b / norm);
}

// Mean teleportation fidelity over sampled inputs with exact averaging over
// the four BSM outcomes; 1 for any maximally entangled resource under the
// matching convention.
inline double average_fidelity(const PureState& epr, int n_inputs, std::uint64_t seed,
                               ResourceConvention convention = ResourceConvention::PhiPlusLike) {
    if (n_inputs < 1) throw std::invalid_argument("n_inputs must be >= 1");
    const auto setup = detail::teleport_setup(epr);
    double total = 0.0;
    for (int i = 0; i < n_inputs; ++i) {
        Substream rng(seed, static_cast<std::uint64_t>(i));
        InformationalQubit psi = random_qubit(rng);
        PureState expected({setup.destination_ebit}, {psi.a, psi.b});
        double mean_fidelity = 0.0;
        for (const TeleportResult& branch : teleport_all_outcomes(psi, epr, convention)) {
            if (branch.outcome.probability == 0.0) continue;
            mean_fidelity += branch.outcome.probability * fidelity(expected, branch.destination);
        }
        total += mean_fidelity;
    }
    return total / n_inputs;
}

} // namespace qtlink
