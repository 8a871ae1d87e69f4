#include "qtlink/quantum.hpp"
#include "qtlink/serialize.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

using namespace qtlink;

namespace {

const ModeLabel kMwSrc{Domain::Microwave, Location::Source, 0};
const ModeLabel kMwDst{Domain::Microwave, Location::Destination, 0};
const ModeLabel kOptSrc{Domain::Optical, Location::Source, 0};
const ModeLabel kOptDst{Domain::Optical, Location::Destination, 0};

// Evaluated independently at high precision: -0.15 log2 0.15 - 0.85 log2 0.85.
constexpr double kEntropy015 = 0.6098403047164004;

PureState random_three_mode_state(std::mt19937& gen) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<cplx> amps(8);
    double norm2 = 0.0;
    for (cplx& a : amps) {
        a = cplx{normal(gen), normal(gen)};
        norm2 += std::norm(a);
    }
    for (cplx& a : amps) a /= std::sqrt(norm2);
    return PureState({kMwSrc, kOptSrc, kMwDst}, amps);
}

} // namespace

TEST_CASE("bell states match their definitions") {
    const double r = 1.0 / std::sqrt(2.0);

    PureState phi_plus = make_bell(BellKind::PhiPlus, kMwSrc, kMwDst);
    CHECK(phi_plus.amplitudes()[0b00] == cplx{r, 0.0});
    CHECK(phi_plus.amplitudes()[0b11] == cplx{r, 0.0});
    CHECK(phi_plus.amplitudes()[0b01] == cplx{0.0, 0.0});

    PureState psi_plus = make_bell(BellKind::PsiPlus, kMwSrc, kMwDst);
    CHECK(psi_plus.amplitudes()[0b01] == cplx{r, 0.0});
    CHECK(psi_plus.amplitudes()[0b10] == cplx{r, 0.0});

    PureState phi_minus = make_bell(BellKind::PhiMinus, kMwSrc, kMwDst);
    double total = 0.0;
    for (const cplx& a : phi_minus.amplitudes()) total += std::norm(a);
    CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-15));
    CHECK(phi_minus.amplitudes()[0b11] == cplx{-r, 0.0});

    CHECK_THROWS_AS(make_bell(BellKind::PhiPlus, kMwSrc, kMwSrc), std::invalid_argument);
}

TEST_CASE("construction canonicalizes label order") {
    // |1_dst 0_src> handed over in (dst, src) order must land on the
    // canonical (src, dst) index 0b01.
    std::vector<cplx> amps = {cplx{0.0, 0.0}, cplx{0.0, 0.0}, cplx{1.0, 0.0}, cplx{0.0, 0.0}};
    PureState psi({kMwDst, kMwSrc}, amps);
    REQUIRE(psi.labels()[0] == kMwSrc);
    REQUIRE(psi.labels()[1] == kMwDst);
    CHECK(psi.amplitudes()[0b01] == cplx{1.0, 0.0});
    CHECK(psi.amplitudes()[0b10] == cplx{0.0, 0.0});
}

TEST_CASE("construction validates shape and norm") {
    CHECK_THROWS_AS(PureState({kMwSrc}, {cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(PureState({kMwSrc}, {cplx{1.0, 0.0}, cplx{0.5, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(PureState({kMwSrc, kMwSrc}, std::vector<cplx>(4, cplx{0.5, 0.0})),
                    std::invalid_argument);
}

TEST_CASE("partial trace") {
    SECTION("one mode of a Bell state is maximally mixed") {
        DensityMatrix rho = DensityMatrix::from_pure(make_bell(BellKind::PhiPlus, kMwSrc, kMwDst));
        DensityMatrix reduced = partial_trace(rho, {kMwSrc});
        CHECK_THAT(reduced.matrix()(0, 0).real(), Catch::Matchers::WithinAbs(0.5, 1e-12));
        CHECK_THAT(reduced.matrix()(1, 1).real(), Catch::Matchers::WithinAbs(0.5, 1e-12));
        CHECK_THAT(std::abs(reduced.matrix()(0, 1)), Catch::Matchers::WithinAbs(0.0, 1e-12));
    }

    SECTION("product state reduces to its factor") {
        std::vector<cplx> amps = {cplx{0.0, 0.0}, cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}};
        PureState psi({kMwSrc, kMwDst}, amps);  // |0_src 1_dst>
        DensityMatrix reduced = partial_trace(DensityMatrix::from_pure(psi), {kMwSrc});
        CHECK_THAT(reduced.matrix()(0, 0).real(), Catch::Matchers::WithinAbs(1.0, 1e-12));
        CHECK_THAT(reduced.matrix()(1, 1).real(), Catch::Matchers::WithinAbs(0.0, 1e-12));
    }

    SECTION("matches direct 4x4 arithmetic on a weighted state") {
        std::vector<cplx> amps = {cplx{0.0, 0.0}, cplx{std::sqrt(0.15), 0.0},
                                  cplx{std::sqrt(0.85), 0.0}, cplx{0.0, 0.0}};
        PureState psi({kMwSrc, kMwDst}, amps);
        DensityMatrix rho = DensityMatrix::from_pure(psi);

        // Oracle: reduced[i][j] = sum_t rho[i*2+t][j*2+t], first mode kept.
        cplx oracle[2][2];
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                oracle[i][j] = rho.matrix()(i * 2 + 0, j * 2 + 0) + rho.matrix()(i * 2 + 1, j * 2 + 1);
            }
        }
        DensityMatrix reduced = partial_trace(rho, {kMwSrc});
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                CHECK_THAT(std::abs(reduced.matrix()(i, j) - oracle[i][j]),
                           Catch::Matchers::WithinAbs(0.0, 1e-14));
            }
        }
        CHECK_THAT(reduced.matrix()(0, 0).real(), Catch::Matchers::WithinAbs(0.15, 1e-12));
        CHECK_THAT(reduced.matrix()(1, 1).real(), Catch::Matchers::WithinAbs(0.85, 1e-12));
    }

    SECTION("trace is preserved on random states") {
        std::mt19937 gen(7);
        for (int rep = 0; rep < 10; ++rep) {
            DensityMatrix rho = DensityMatrix::from_pure(random_three_mode_state(gen));
            DensityMatrix reduced = partial_trace(rho, {kMwSrc, kOptSrc});
            CHECK_THAT(std::abs(reduced.matrix().trace() - cplx{1.0, 0.0}),
                       Catch::Matchers::WithinAbs(0.0, 1e-12));
        }
    }

    SECTION("unknown label rejected") {
        DensityMatrix rho = DensityMatrix::from_pure(make_bell(BellKind::PhiPlus, kMwSrc, kMwDst));
        CHECK_THROWS_AS(partial_trace(rho, {kOptSrc}), std::invalid_argument);
        CHECK_THROWS_AS(partial_trace(rho, {}), std::invalid_argument);
    }
}

TEST_CASE("density matrix validation") {
    Eigen::MatrixXcd bad(2, 2);
    bad << cplx{1.0, 0.0}, cplx{0.5, 0.0}, cplx{-0.5, 0.0}, cplx{0.0, 0.0};
    CHECK_THROWS_AS(DensityMatrix({kMwSrc}, bad), std::invalid_argument);

    Eigen::MatrixXcd wrong_trace = Eigen::MatrixXcd::Identity(2, 2);
    CHECK_THROWS_AS(DensityMatrix({kMwSrc}, wrong_trace), std::invalid_argument);

    Eigen::MatrixXcd negative(2, 2);
    negative << cplx{1.5, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}, cplx{-0.5, 0.0};
    CHECK_THROWS_AS(DensityMatrix({kMwSrc}, negative), std::invalid_argument);
}

TEST_CASE("entropy of entanglement") {
    SECTION("bell states carry one ebit") {
        for (BellKind kind : {BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus, BellKind::PsiMinus}) {
            PureState psi = make_bell(kind, kMwSrc, kMwDst);
            CHECK_THAT(entropy_of_entanglement(psi, {kMwSrc}), Catch::Matchers::WithinAbs(1.0, 1e-12));
        }
    }

    SECTION("product states carry none") {
        PureState psi = tensor(PureState({kMwSrc}, {cplx{1.0, 0.0}, cplx{0.0, 0.0}}),
                               PureState({kMwDst}, {cplx{0.0, 0.0}, cplx{1.0, 0.0}}));
        CHECK_THAT(entropy_of_entanglement(psi, {kMwSrc}), Catch::Matchers::WithinAbs(0.0, 1e-12));
    }

    SECTION("weighted state matches the frozen oracle value") {
        std::vector<cplx> amps = {cplx{0.0, 0.0}, cplx{std::sqrt(0.15), 0.0},
                                  cplx{std::sqrt(0.85), 0.0}, cplx{0.0, 0.0}};
        PureState psi({kMwSrc, kMwDst}, amps);
        CHECK_THAT(entropy_of_entanglement(psi, {kMwSrc}),
                   Catch::Matchers::WithinAbs(kEntropy015, 1e-12));
    }

    SECTION("cut must be proper and nonempty") {
        PureState psi = make_bell(BellKind::PhiPlus, kMwSrc, kMwDst);
        CHECK_THROWS_AS(entropy_of_entanglement(psi, {}), std::invalid_argument);
        CHECK_THROWS_AS(entropy_of_entanglement(psi, {kMwSrc, kMwDst}), std::invalid_argument);
    }

    SECTION("equal on both sides of the cut") {
        std::mt19937 gen(11);
        for (int rep = 0; rep < 20; ++rep) {
            PureState psi = random_three_mode_state(gen);
            double left = entropy_of_entanglement(psi, {kMwSrc});
            double right = entropy_of_entanglement(psi, {kOptSrc, kMwDst});
            CHECK_THAT(left - right, Catch::Matchers::WithinAbs(0.0, 1e-9));
            double pair = entropy_of_entanglement(psi, {kMwSrc, kOptSrc});
            CHECK(pair >= -1e-10);
            CHECK(pair <= 1.0 + 1e-10);  // min(|cut|, k-|cut|) = 1
        }
    }
}

TEST_CASE("binary entropy") {
    CHECK(binary_entropy(0.5) == 1.0);
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK_THAT(binary_entropy(0.15), Catch::Matchers::WithinAbs(kEntropy015, 1e-15));
    CHECK_THROWS_AS(binary_entropy(-0.01), std::domain_error);
    CHECK_THROWS_AS(binary_entropy(1.01), std::domain_error);

    SECTION("matches the two-mode weighted-state entropy on a grid") {
        for (int i = 1; i < 40; ++i) {
            double eta = i / 40.0;
            std::vector<cplx> amps = {cplx{0.0, 0.0}, cplx{std::sqrt(eta), 0.0},
                                      cplx{std::sqrt(1.0 - eta), 0.0}, cplx{0.0, 0.0}};
            PureState psi({kMwSrc, kMwDst}, amps);
            CHECK_THAT(entropy_of_entanglement(psi, {kMwSrc}) - binary_entropy(eta),
                       Catch::Matchers::WithinAbs(0.0, 1e-10));
        }
    }
}

TEST_CASE("fidelity") {
    PureState phi_plus = make_bell(BellKind::PhiPlus, kMwSrc, kMwDst);
    PureState psi_plus = make_bell(BellKind::PsiPlus, kMwSrc, kMwDst);
    CHECK_THAT(fidelity(phi_plus, phi_plus), Catch::Matchers::WithinAbs(1.0, 1e-15));
    CHECK_THAT(fidelity(phi_plus, psi_plus), Catch::Matchers::WithinAbs(0.0, 1e-15));

    PureState zero({kMwSrc}, {cplx{1.0, 0.0}, cplx{0.0, 0.0}});
    PureState one({kMwSrc}, {cplx{0.0, 0.0}, cplx{1.0, 0.0}});
    CHECK_THAT(fidelity(zero, one), Catch::Matchers::WithinAbs(0.0, 1e-15));

    PureState other({kMwDst}, {cplx{1.0, 0.0}, cplx{0.0, 0.0}});
    CHECK_THROWS_AS(fidelity(zero, other), std::invalid_argument);
}

TEST_CASE("gates") {
    PureState zero({kMwSrc}, {cplx{1.0, 0.0}, cplx{0.0, 0.0}});

    SECTION("X flips, H superposes") {
        PureState flipped = apply_single_mode_gate(zero, kMwSrc, gates::pauli_x());
        CHECK(flipped.amplitudes()[1] == cplx{1.0, 0.0});

        PureState plus = apply_single_mode_gate(zero, kMwSrc, gates::hadamard());
        CHECK_THAT(plus.amplitudes()[0].real(), Catch::Matchers::WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
        CHECK_THAT(plus.amplitudes()[1].real(), Catch::Matchers::WithinAbs(1.0 / std::sqrt(2.0), 1e-15));
    }

    SECTION("standard Bell preparation") {
        PureState two = tensor(zero, PureState({kMwDst}, {cplx{1.0, 0.0}, cplx{0.0, 0.0}}));
        two = apply_single_mode_gate(two, kMwSrc, gates::hadamard());
        two = apply_two_mode_gate(two, kMwSrc, kMwDst, gates::cnot());
        CHECK_THAT(fidelity(two, make_bell(BellKind::PhiPlus, kMwSrc, kMwDst)),
                   Catch::Matchers::WithinAbs(1.0, 1e-12));
    }

    SECTION("norm preserved through a gate chain") {
        std::mt19937 gen(3);
        PureState psi = random_three_mode_state(gen);
        psi = apply_single_mode_gate(psi, kOptSrc, gates::hadamard());
        psi = apply_two_mode_gate(psi, kMwSrc, kMwDst, gates::cnot());
        psi = apply_single_mode_gate(psi, kMwDst, gates::pauli_z());
        double norm2 = 0.0;
        for (const cplx& a : psi.amplitudes()) norm2 += std::norm(a);
        CHECK_THAT(norm2, Catch::Matchers::WithinAbs(1.0, 1e-12));
    }

    SECTION("non-unitary matrices rejected") {
        Eigen::Matrix2cd bad;
        bad << 1, 1, 0, 1;
        CHECK_THROWS_AS(apply_single_mode_gate(zero, kMwSrc, bad), std::invalid_argument);
        CHECK_THROWS_AS(apply_single_mode_gate(zero, kMwDst, gates::pauli_x()), std::invalid_argument);
    }
}

TEST_CASE("projection removes the measured mode") {
    PureState phi_plus = make_bell(BellKind::PhiPlus, kMwSrc, kMwDst);
    auto [p0, post0] = project_mode(phi_plus, kMwSrc, 0);
    CHECK_THAT(p0, Catch::Matchers::WithinAbs(0.5, 1e-12));
    REQUIRE(post0.has_value());
    CHECK(post0->labels() == std::vector<ModeLabel>{kMwDst});
    CHECK_THAT(std::norm(post0->amplitudes()[0]), Catch::Matchers::WithinAbs(1.0, 1e-12));

    PureState zero_state({kMwSrc, kMwDst},
                         {cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}, cplx{0.0, 0.0}});
    auto [p1, post1] = project_mode(zero_state, kMwSrc, 1);
    CHECK(p1 == 0.0);
    CHECK_FALSE(post1.has_value());
}

TEST_CASE("json round trip") {
    PureState psi = make_bell(BellKind::PsiMinus, kMwSrc, kOptDst);
    nlohmann::json j = to_json(psi);
    CHECK(j["labels"][0] == "mw@src");
    CHECK(j["labels"][1] == "opt@dst");
    PureState back = pure_state_from_json(j);
    CHECK(back.labels() == psi.labels());
    CHECK_THAT(fidelity(back, psi), Catch::Matchers::WithinAbs(1.0, 1e-12));

    CHECK(to_string(ModeLabel{Domain::Optical, Location::Midpoint, 2}) == "opt@mid#2");
    ModeLabel parsed = parse_mode_label("opt@mid#2");
    CHECK(parsed == (ModeLabel{Domain::Optical, Location::Midpoint, 2}));
    CHECK_THROWS_AS(parse_mode_label("laser@src"), std::invalid_argument);
}
