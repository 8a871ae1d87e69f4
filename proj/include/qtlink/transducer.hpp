#pragma once

#include "qtlink/quantum.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qtlink {

// Electro-optic transducer hardware parameters. Rates in Hz; the pump
// photon number is dimensionless.
struct TransducerParams {
    double g0_hz = 0.0;          // single-photon electro-optic coupling rate
    double pump_photons = 0.0;   // n_p
    double kappa_o_hz = 0.0;     // total dissipation rate, optical mode
    double kappa_m_hz = 0.0;     // total dissipation rate, microwave mode
    double kappa_oe_hz = 0.0;    // external coupling rate, optical mode
    double kappa_me_hz = 0.0;    // external coupling rate, microwave mode

    void validate() const {
        if (!(g0_hz >= 0.0)) throw std::domain_error("g0 must be >= 0");
        if (!(pump_photons >= 0.0)) throw std::domain_error("pump photon number must be >= 0");
        if (!(kappa_o_hz > 0.0) || !(kappa_m_hz > 0.0)) {
            throw std::domain_error("total dissipation rates must be > 0");
        }
        if (!(kappa_oe_hz >= 0.0) || kappa_oe_hz > kappa_o_hz) {
            throw std::domain_error("kappa_oe must lie in [0, kappa_o]");
        }
        if (!(kappa_me_hz >= 0.0) || kappa_me_hz > kappa_m_hz) {
            throw std::domain_error("kappa_me must lie in [0, kappa_m]");
        }
    }
};

// Conversion success probability, always in [0, 1]. One value serves both
// conversion directions (the interaction is reciprocal); link-level code may
// still carry distinct up/down values.
class Efficiency {
public:
    explicit Efficiency(double value) : value_(value) {
        if (!(value >= 0.0 && value <= 1.0)) throw std::domain_error("efficiency outside [0,1]");
    }

    double value() const { return value_; }

    friend bool operator==(const Efficiency&, const Efficiency&) = default;

private:
    double value_;
};

// C = 4 g0^2 n_p / (kappa_o kappa_m).
inline double cooperativity(const TransducerParams& p) {
    p.validate();
    return 4.0 * p.g0_hz * p.g0_hz * p.pump_photons / (p.kappa_o_hz * p.kappa_m_hz);
}

// (zeta_o, zeta_m) with zeta_x = kappa_xe / kappa_x.
inline std::pair<double, double> extraction_ratios(const TransducerParams& p) {
    p.validate();
    return {p.kappa_oe_hz / p.kappa_o_hz, p.kappa_me_hz / p.kappa_m_hz};
}

// eta = 4 zeta_o zeta_m C / (1 + C)^2; maximal in C at C = 1.
inline Efficiency conversion_efficiency(double cooperativity_value, double zeta_o, double zeta_m) {
    if (!(cooperativity_value >= 0.0)) throw std::domain_error("cooperativity must be >= 0");
    if (!(zeta_o >= 0.0 && zeta_o <= 1.0) || !(zeta_m >= 0.0 && zeta_m <= 1.0)) {
        throw std::domain_error("extraction ratio outside [0,1]");
    }
    const double denom = (1.0 + cooperativity_value) * (1.0 + cooperativity_value);
    return Efficiency(4.0 * zeta_o * zeta_m * cooperativity_value / denom);
}

inline Efficiency conversion_efficiency(const TransducerParams& p) {
    auto [zeta_o, zeta_m] = extraction_ratios(p);
    return conversion_efficiency(cooperativity(p), zeta_o, zeta_m);
}

// g0 / 2pi at or below 1 kHz is typical of integrated electro-optic devices;
// the CLI flags this regime on parameter echo.
inline bool integrated_electro_optic_regime(const TransducerParams& p) {
    return p.g0_hz / 6.283185307179586476925286766559 <= 1e3;
}

enum class ConversionOutcome { Converted, Lost };

// Erasure branch of a single conversion attempt: Converted iff draw < eta.
// Deterministic given the draw; the stochastic contract lives with the
// Monte-Carlo runner.
inline ConversionOutcome dqt_branch(Efficiency eta, double draw) {
    return draw < eta.value() ? ConversionOutcome::Converted : ConversionOutcome::Lost;
}

// A successful conversion preserves the state and flips the mode's domain
// (microwave <-> optical). Amplitudes are unchanged up to the canonical
// reordering of the relabeled mode.
inline PureState dqt_relabel(const PureState& psi, const ModeLabel& label) {
    std::size_t pos = psi.index_of(label);
    std::vector<ModeLabel> labels = psi.labels();
    labels[pos].domain = labels[pos].domain == Domain::Microwave ? Domain::Optical : Domain::Microwave;
    return PureState(std::move(labels), psi.amplitudes());
}

enum class EgtKind { TwoModeSqueezing, BeamSplitterInitialized };

namespace detail {

inline void require_egt_labels(const ModeLabel& microwave, const ModeLabel& optical) {
    if (microwave.domain != Domain::Microwave) {
        throw std::invalid_argument("first EGT label must be a microwave mode");
    }
    if (optical.domain != Domain::Optical) {
        throw std::invalid_argument("second EGT label must be an optical mode");
    }
}

} // namespace detail

// Beam-splitter EGT with a single-photon microwave initialization:
//   sqrt(eta)|0_m 1_o> + sqrt(1 - eta)|1_m 0_o>.
// The optical photon is present with probability exactly eta.
inline PureState egt_generate(Efficiency eta_up, const ModeLabel& microwave, const ModeLabel& optical) {
    detail::require_egt_labels(microwave, optical);
    std::vector<cplx> amps(4, cplx{0.0, 0.0});
    amps[0b01] = std::sqrt(eta_up.value());
    amps[0b10] = std::sqrt(1.0 - eta_up.value());
    return PureState({microwave, optical}, std::move(amps));
}

// Two-mode-squeezing EGT: alpha|0_m 0_o> + beta|1_m 1_o>. The coefficients
// come from the hardware (no closed form here) and must be normalized.
inline PureState egt_generate(cplx alpha, cplx beta, const ModeLabel& microwave, const ModeLabel& optical) {
    detail::require_egt_labels(microwave, optical);
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10) {
        throw std::invalid_argument("two-mode squeezing amplitudes must satisfy |alpha|^2 + |beta|^2 = 1");
    }
    std::vector<cplx> amps(4, cplx{0.0, 0.0});
    amps[0b00] = alpha;
    amps[0b11] = beta;
    return PureState({microwave, optical}, std::move(amps));
}

} // namespace qtlink
