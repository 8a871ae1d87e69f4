#include "qtlink/quantum.hpp"
#include "qtlink/transducer.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace qtlink;

namespace {

const ModeLabel kMw{Domain::Microwave, Location::Source, 0};
const ModeLabel kOpt{Domain::Optical, Location::Source, 0};

// 4*0.3/1.69 and 4*0.1/1.21, evaluated independently.
constexpr double kEtaAt03 = 0.7100591715976331;
constexpr double kCooperativityHalf = 0.17157287525380990;  // 3 - 2 sqrt(2)

} // namespace

TEST_CASE("cooperativity") {
    TransducerParams p{1e3, 1e6, 2e6, 2e6, 2e6, 2e6};
    CHECK_THAT(cooperativity(p), Catch::Matchers::WithinAbs(1.0, 1e-15));

    p.pump_photons = 0.0;
    CHECK(cooperativity(p) == 0.0);

    p.kappa_o_hz = 0.0;
    CHECK_THROWS_AS(cooperativity(p), std::domain_error);

    SECTION("kHz-scale coupling flags the integrated electro-optic regime") {
        TransducerParams integrated{2.0 * std::numbers::pi * 1e3, 1e6, 2e6, 2e6, 2e6, 2e6};
        CHECK(integrated_electro_optic_regime(integrated));
        TransducerParams optomech{2.0 * std::numbers::pi * 1e4, 1e6, 2e6, 2e6, 2e6, 2e6};
        CHECK_FALSE(integrated_electro_optic_regime(optomech));
    }
}

TEST_CASE("extraction ratios") {
    TransducerParams p{1e3, 1e6, 2e6, 4e6, 2e6, 0.0};
    auto [zeta_o, zeta_m] = extraction_ratios(p);
    CHECK(zeta_o == 1.0);
    CHECK(zeta_m == 0.0);

    // Experimentally measured order 0.1-0.2 passes validation untouched.
    TransducerParams measured{1e3, 1e6, 2e6, 2e6, 0.3e6, 0.4e6};
    auto [zo, zm] = extraction_ratios(measured);
    CHECK_THAT(zo, Catch::Matchers::WithinAbs(0.15, 1e-15));
    CHECK_THAT(zm, Catch::Matchers::WithinAbs(0.2, 1e-15));

    TransducerParams bad{1e3, 1e6, 2e6, 2e6, 3e6, 0.0};
    CHECK_THROWS_AS(extraction_ratios(bad), std::domain_error);
}

TEST_CASE("conversion efficiency") {
    CHECK_THAT(conversion_efficiency(1.0, 1.0, 1.0).value(), Catch::Matchers::WithinAbs(1.0, 1e-15));
    CHECK_THAT(conversion_efficiency(kCooperativityHalf, 1.0, 1.0).value(),
               Catch::Matchers::WithinAbs(0.5, 1e-12));
    CHECK_THAT(conversion_efficiency(0.3, 1.0, 1.0).value(),
               Catch::Matchers::WithinAbs(kEtaAt03, 1e-15));

    CHECK_THROWS_AS(conversion_efficiency(-0.1, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(conversion_efficiency(1.0, 1.5, 1.0), std::domain_error);

    SECTION("symmetric in the extraction ratios") {
        std::mt19937 gen(5);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int rep = 0; rep < 50; ++rep) {
            double c = 3.0 * unit(gen);
            double a = unit(gen), b = unit(gen);
            CHECK(conversion_efficiency(c, a, b).value() == conversion_efficiency(c, b, a).value());
        }
    }

    SECTION("eta(C) equals eta(1/C)") {
        std::mt19937 gen(6);
        std::uniform_real_distribution<double> unit(0.01, 1.0);
        for (int rep = 0; rep < 50; ++rep) {
            double c = unit(gen) * 10.0;
            double lhs = conversion_efficiency(c, 1.0, 1.0).value();
            double rhs = conversion_efficiency(1.0 / c, 1.0, 1.0).value();
            CHECK_THAT(lhs - rhs, Catch::Matchers::WithinAbs(0.0, 1e-12));
        }
    }

    SECTION("monotone up to C = 1, monotone down after") {
        double prev = 0.0;
        for (int i = 1; i <= 20; ++i) {
            double eta = conversion_efficiency(i / 20.0, 1.0, 1.0).value();
            CHECK(eta > prev);
            prev = eta;
        }
        for (int i = 1; i <= 20; ++i) {
            double eta = conversion_efficiency(1.0 + i * 0.5, 1.0, 1.0).value();
            CHECK(eta < prev);
            prev = eta;
        }
    }
}

TEST_CASE("dqt branch thresholds") {
    CHECK(dqt_branch(Efficiency(1.0), 0.0) == ConversionOutcome::Converted);
    CHECK(dqt_branch(Efficiency(1.0), 0.999999) == ConversionOutcome::Converted);
    CHECK(dqt_branch(Efficiency(0.0), 0.0) == ConversionOutcome::Lost);
    CHECK(dqt_branch(Efficiency(0.5), 0.25) == ConversionOutcome::Converted);
    CHECK(dqt_branch(Efficiency(0.5), 0.75) == ConversionOutcome::Lost);
}

TEST_CASE("dqt relabel flips the domain and keeps amplitudes") {
    // EPR held locally as two co-located microwave modes, then one half
    // up-converted in place.
    ModeLabel mw0{Domain::Microwave, Location::Source, 0};
    ModeLabel mw1{Domain::Microwave, Location::Source, 1};
    PureState local = make_bell(BellKind::PhiPlus, mw0, mw1);

    PureState converted = dqt_relabel(local, mw1);
    REQUIRE(converted.labels()[0] == mw0);
    REQUIRE(converted.labels()[1] == (ModeLabel{Domain::Optical, Location::Source, 1}));
    CHECK(converted.amplitudes() == local.amplitudes());

    SECTION("relabeling twice restores the original label") {
        PureState back = dqt_relabel(converted, {Domain::Optical, Location::Source, 1});
        CHECK(back.labels() == local.labels());
        CHECK(back.amplitudes() == local.amplitudes());
    }

    SECTION("entanglement entropy is unchanged") {
        CHECK_THAT(entropy_of_entanglement(local, {mw0}) -
                       entropy_of_entanglement(converted, {mw0}),
                   Catch::Matchers::WithinAbs(0.0, 1e-12));
    }

    SECTION("missing or colliding labels rejected") {
        CHECK_THROWS_AS(dqt_relabel(local, {Domain::Optical, Location::Destination, 0}),
                        std::invalid_argument);
        PureState mixed = make_bell(BellKind::PhiPlus, kMw, kOpt);
        CHECK_THROWS_AS(dqt_relabel(mixed, kMw), std::invalid_argument);  // would collide with kOpt
    }
}

TEST_CASE("beam-splitter EGT") {
    SECTION("eta = 1/2 is the hybrid Bell state") {
        PureState psi = egt_generate(Efficiency(0.5), kMw, kOpt);
        const double r = 1.0 / std::sqrt(2.0);
        CHECK_THAT(psi.amplitudes()[0b01].real(), Catch::Matchers::WithinAbs(r, 1e-15));
        CHECK_THAT(psi.amplitudes()[0b10].real(), Catch::Matchers::WithinAbs(r, 1e-15));
        CHECK_THAT(fidelity(psi, make_bell(BellKind::PsiPlus, kMw, kOpt)),
                   Catch::Matchers::WithinAbs(1.0, 1e-12));
    }

    SECTION("eta = 1 converts deterministically, no entanglement") {
        PureState psi = egt_generate(Efficiency(1.0), kMw, kOpt);
        CHECK(psi.amplitudes()[0b01] == cplx{1.0, 0.0});
        CHECK_THAT(entropy_of_entanglement(psi, {kMw}), Catch::Matchers::WithinAbs(0.0, 1e-12));
    }

    SECTION("optical photon present with probability eta") {
        for (int i = 0; i <= 10; ++i) {
            double eta = i / 10.0;
            PureState psi = egt_generate(Efficiency(eta), kMw, kOpt);
            // optical mode is the second label; photon present on indices x1
            double p = std::norm(psi.amplitudes()[0b01]) + std::norm(psi.amplitudes()[0b11]);
            CHECK_THAT(p, Catch::Matchers::WithinAbs(eta, 1e-12));
        }
    }

    SECTION("entropy across the hybrid cut equals the binary entropy") {
        for (int i = 0; i <= 50; ++i) {
            double eta = i / 50.0;
            PureState psi = egt_generate(Efficiency(eta), kMw, kOpt);
            CHECK_THAT(entropy_of_entanglement(psi, {kMw}) - binary_entropy(eta),
                       Catch::Matchers::WithinAbs(0.0, 1e-10));
        }
    }

    SECTION("label domains must match the roles") {
        CHECK_THROWS_AS(egt_generate(Efficiency(0.5), kOpt, kMw), std::invalid_argument);
    }
}

TEST_CASE("two-mode-squeezing EGT") {
    const double r = 1.0 / std::sqrt(2.0);

    SECTION("balanced amplitudes give one ebit") {
        PureState psi = egt_generate(cplx{r, 0.0}, cplx{r, 0.0}, kMw, kOpt);
        CHECK_THAT(entropy_of_entanglement(psi, {kMw}), Catch::Matchers::WithinAbs(1.0, 1e-12));
        CHECK(psi.amplitudes()[0b00] == cplx{r, 0.0});
        CHECK(psi.amplitudes()[0b11] == cplx{r, 0.0});
    }

    SECTION("unnormalized coefficients rejected") {
        CHECK_THROWS_AS(egt_generate(cplx{0.9, 0.0}, cplx{0.9, 0.0}, kMw, kOpt), std::invalid_argument);
    }

    SECTION("entropy matches the beam-splitter state when |beta|^2 = eta") {
        for (int i = 1; i < 20; ++i) {
            double eta = i / 20.0;
            PureState squeezed =
                egt_generate(cplx{std::sqrt(1.0 - eta), 0.0}, cplx{std::sqrt(eta), 0.0}, kMw, kOpt);
            PureState split = egt_generate(Efficiency(eta), kMw, kOpt);
            CHECK_THAT(entropy_of_entanglement(squeezed, {kMw}) - entropy_of_entanglement(split, {kMw}),
                       Catch::Matchers::WithinAbs(0.0, 1e-10));
        }
    }
}
