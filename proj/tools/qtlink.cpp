// qtlink command line front end: closed-form link evaluation, Monte-Carlo
// validation, figure-style parameter sweeps and a teleportation demo.
//
// Exit codes: 0 success, 1 usage error, 2 validation failure, 3 I/O error.

#include "qtlink/archetypes.hpp"
#include "qtlink/channel.hpp"
#include "qtlink/config.hpp"
#include "qtlink/montecarlo.hpp"
#include "qtlink/serialize.hpp"
#include "qtlink/sweep.hpp"
#include "qtlink/teleport.hpp"
#include "qtlink/transducer.hpp"
#include "qtlink/version.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

constexpr std::uint64_t kDefaultSeed = 1;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) { return qtlink::format_value(v); }

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const qtlink::ConfigFile& config) {
    if (flag) return *flag;
    if (auto from_config = config.get_u64("seed")) return *from_config;
    if (const char* env = std::getenv("QTLINK_SEED")) {
        try {
            return static_cast<std::uint64_t>(std::stoull(env));
        } catch (const std::exception&) {
            throw UsageError("QTLINK_SEED is not an integer");
        }
    }
    return kDefaultSeed;
}

qtlink::ConfigFile load_config(const std::string& path) {
    if (path.empty()) return {};
    try {
        return qtlink::ConfigFile::parse_file(path);
    } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
    }
}

qtlink::Efficiency resolve_efficiency(const std::optional<double>& flag, const qtlink::ConfigFile& config,
                                      const std::string& role_key, const std::string& flag_name) {
    if (flag) return qtlink::Efficiency(*flag);
    if (auto from_config = qtlink::efficiency_from_config(config, role_key)) return *from_config;
    throw UsageError("missing efficiency: pass " + flag_name + " or config key " + role_key);
}

qtlink::FiberLink resolve_fiber(const std::optional<double>& length_flag,
                                const std::optional<double>& attenuation_flag,
                                const qtlink::ConfigFile& config) {
    double length = 0.0;
    double attenuation = 0.2;
    if (auto v = config.get_double("fiber_length_km")) length = *v;
    if (auto v = config.get_double("attenuation_db_per_km")) attenuation = *v;
    if (length_flag) length = *length_flag;
    if (attenuation_flag) attenuation = *attenuation_flag;
    return qtlink::FiberLink(length, attenuation);
}

qtlink::DetectorModel resolve_detector(const std::string& kind_flag, const std::optional<double>& eff_flag,
                                       const qtlink::ConfigFile& config) {
    qtlink::DetectorModel detector;
    if (auto name = config.get_string("detector")) {
        auto kind = qtlink::detector_from_string(*name);
        if (!kind) throw UsageError("config key detector: expected pnrd or spd");
        detector.kind = *kind;
    }
    if (auto eff = config.get_double("detector_efficiency")) detector.efficiency = *eff;
    if (!kind_flag.empty()) {
        auto kind = qtlink::detector_from_string(kind_flag);
        if (!kind) throw UsageError("--detector: expected pnrd or spd");
        detector.kind = *kind;
    }
    if (eff_flag) detector.efficiency = *eff_flag;
    detector.validate();
    return detector;
}

qtlink::AxisSpec parse_axis(const std::string& text) {
    // name:min:max:steps
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 4) throw UsageError("--axis expects name:min:max:steps, got '" + text + "'");
    qtlink::AxisSpec axis;
    axis.name = parts[0];
    try {
        axis.min = std::stod(parts[1]);
        axis.max = std::stod(parts[2]);
        axis.steps = std::stoi(parts[3]);
    } catch (const std::exception&) {
        throw UsageError("--axis expects numeric min:max:steps in '" + text + "'");
    }
    return axis;
}

void write_output(const qtlink::Dataset& data, const std::string& path, qtlink::SweepFormat format) {
    if (path.empty() || path == "-") {
        qtlink::write_dataset(data, std::cout, format);
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    qtlink::write_dataset(data, out, format);
    if (!out.good()) throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------------------

struct EfficiencyArgs {
    std::optional<double> c, zeta_o, zeta_m;
    qtlink::TransducerParams params;
    bool have_params = false;
    std::string config_path;
    std::string grid_path;
    std::string format = "csv";
};

int cmd_efficiency(const EfficiencyArgs& args) {
    qtlink::ConfigFile config = load_config(args.config_path);

    double c = 0.0;
    double zeta_o = args.zeta_o.value_or(1.0);
    double zeta_m = args.zeta_m.value_or(1.0);
    std::optional<qtlink::TransducerParams> params;
    if (args.have_params) {
        params = args.params;
    } else if (auto from_config = qtlink::transducer_from_config(config)) {
        params = from_config;
    }

    if (args.c) {
        c = *args.c;
    } else if (params) {
        c = qtlink::cooperativity(*params);
        auto [zo, zm] = qtlink::extraction_ratios(*params);
        if (!args.zeta_o) zeta_o = zo;
        if (!args.zeta_m) zeta_m = zm;
    } else {
        throw UsageError("pass --C or the six transducer parameters");
    }

    const qtlink::Efficiency eta = qtlink::conversion_efficiency(c, zeta_o, zeta_m);
    std::cout << "C = " << fmt(c) << "\n";
    std::cout << "zeta_o = " << fmt(zeta_o) << ", zeta_m = " << fmt(zeta_m) << "\n";
    std::cout << "eta = " << fmt(eta.value()) << "\n";
    if (params && qtlink::integrated_electro_optic_regime(*params)) {
        std::cout << "note: g0/2pi <= 1 kHz, integrated electro-optical regime\n";
    }

    if (!args.grid_path.empty()) {
        qtlink::SweepSpec spec;
        spec.target = qtlink::SweepTarget::Fig5;
        spec.format = args.format == "json" ? qtlink::SweepFormat::Json : qtlink::SweepFormat::Csv;
        write_output(qtlink::run_sweep(spec), args.grid_path, spec.format);
        std::cout << "grid written to " << args.grid_path << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct PeArgs {
    std::string archetype;
    std::optional<double> eta_up, eta_down, eta_up_s, eta_up_d;
    std::optional<double> length_km, attenuation;
    std::string config_path;
    bool mc = false;
    std::optional<std::uint64_t> trials_flag;
    std::optional<std::uint64_t> seed_flag;
    std::string detector_kind;
    std::optional<double> detector_efficiency;
    bool independent_photon_loss = false;
    bool json = false;
};

qtlink::LinkConfig resolve_link(const PeArgs& args, const qtlink::ConfigFile& config) {
    std::string archetype_name = args.archetype;
    if (archetype_name.empty()) {
        archetype_name = config.get_string("archetype").value_or("");
    }
    auto archetype = qtlink::archetype_from_string(archetype_name);
    if (!archetype) throw UsageError("--archetype: expected edqt, egt-dqt or egt-swap");

    const qtlink::FiberLink fiber = resolve_fiber(args.length_km, args.attenuation, config);
    switch (*archetype) {
        case qtlink::Archetype::EDqt:
            return qtlink::LinkConfig::edqt(
                resolve_efficiency(args.eta_up, config, "eta_up_source", "--eta-up"),
                resolve_efficiency(args.eta_down, config, "eta_down_destination", "--eta-down"), fiber);
        case qtlink::Archetype::EgtWithDqt:
            return qtlink::LinkConfig::egt_with_dqt(
                resolve_efficiency(args.eta_up, config, "eta_up_source", "--eta-up"),
                resolve_efficiency(args.eta_down, config, "eta_down_destination", "--eta-down"), fiber);
        case qtlink::Archetype::EgtWithSwapping:
            return qtlink::LinkConfig::egt_with_swapping(
                resolve_efficiency(args.eta_up_s, config, "eta_up_source", "--eta-up-s"),
                resolve_efficiency(args.eta_up_d, config, "eta_up_destination", "--eta-up-d"), fiber);
    }
    throw UsageError("unknown archetype");
}

int cmd_pe(const PeArgs& args) {
    qtlink::ConfigFile config = load_config(args.config_path);
    const qtlink::LinkConfig link = resolve_link(args, config);
    const qtlink::DistributionOutcome outcome = qtlink::distribute(link);

    nlohmann::ordered_json j;
    j["archetype"] = qtlink::to_string(link.archetype);
    j["p_e"] = outcome.p_e;
    j["q_one_way"] = outcome.q_one_way;
    j["q_two_way"] = outcome.q_two_way;
    j["notes"] = outcome.notes;

    if (!args.json) {
        std::cout << "archetype = " << qtlink::to_string(link.archetype) << "\n";
        std::cout << "p_e = " << fmt(outcome.p_e) << "\n";
        std::cout << "q_one_way = " << fmt(outcome.q_one_way) << "\n";
        std::cout << "q_two_way = " << fmt(outcome.q_two_way) << "\n";
        std::cout << "formula: " << outcome.notes << "\n";
    }

    if (args.mc) {
        std::uint64_t trials = args.trials_flag ? *args.trials_flag
                                                : config.get_u64("trials").value_or(1000000ull);
        if (trials < 1) throw UsageError("--trials must be >= 1");
        const std::uint64_t seed = resolve_seed(args.seed_flag, config);
        qtlink::DetectorModel detector = resolve_detector(args.detector_kind, args.detector_efficiency, config);
        bool independent_loss = args.independent_photon_loss ||
                                config.get_bool("independent_photon_loss").value_or(false);
        const qtlink::McEstimate estimate =
            qtlink::run_archetype(link, detector, trials, seed, independent_loss);
        const qtlink::ValidationRow row =
            qtlink::make_validation_row(estimate, qtlink::closed_form_p_e(link), qtlink::to_string(link.archetype));
        j["mc"] = qtlink::to_json(estimate);
        j["mc"]["p_e_closed"] = row.p_e_closed;
        j["mc"]["z_score"] = row.z_score;
        j["mc"]["flagged"] = row.flagged;
        if (!args.json) {
            std::cout << "mc: trials = " << trials << ", seed = " << seed << "\n";
            std::cout << "mc: p_e_hat = " << fmt(estimate.p_e_hat) << " +- " << fmt(estimate.std_error)
                      << ", herald_rate = " << fmt(estimate.herald_rate)
                      << ", dark_count_fraction = " << fmt(estimate.dark_count_fraction) << "\n";
            std::cout << "mc: z = " << fmt(row.z_score) << (row.flagged ? " (FLAGGED |z| > 4)" : "") << "\n";
        }
    }

    if (args.json) std::cout << j.dump(2) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
    std::string target = "fig9";
    std::string out;
    std::string format = "csv";
    std::vector<std::string> axes;
    std::vector<std::string> fixed;
    std::string archetype;
};

int cmd_sweep(const SweepArgs& args) {
    qtlink::SweepSpec spec;
    auto target = qtlink::sweep_target_from_string(args.target);
    if (!target) throw UsageError("--target: expected fig5, fig8a, fig8b, fig8c, fig9 or custom");
    spec.target = *target;
    spec.format = args.format == "json" ? qtlink::SweepFormat::Json : qtlink::SweepFormat::Csv;
    spec.output_path = args.out;
    for (const std::string& axis : args.axes) spec.axes.push_back(parse_axis(axis));
    for (const std::string& fix : args.fixed) {
        auto eq = fix.find('=');
        if (eq == std::string::npos) throw UsageError("--fix expects key=value, got '" + fix + "'");
        try {
            spec.fixed[fix.substr(0, eq)] = std::stod(fix.substr(eq + 1));
        } catch (const std::exception&) {
            throw UsageError("--fix expects a numeric value in '" + fix + "'");
        }
    }
    if (!args.archetype.empty()) {
        auto archetype = qtlink::archetype_from_string(args.archetype);
        if (!archetype) throw UsageError("--archetype: expected edqt, egt-dqt or egt-swap");
        spec.archetype = archetype;
    }

    qtlink::Dataset data;
    try {
        data = qtlink::run_sweep(spec);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    write_output(data, spec.output_path, spec.format);
    if (!spec.output_path.empty() && spec.output_path != "-") {
        std::cout << "wrote " << data.rows.size() << " rows to " << spec.output_path << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
    std::uint64_t trials = 1000000;
    std::optional<std::uint64_t> seed_flag;
    std::string preset = "default";
};

int cmd_validate(const ValidateArgs& args) {
    if (args.trials < 10000) throw UsageError("--trials must be >= 10000");
    if (args.preset != "default") throw UsageError("unknown grid preset: " + args.preset);
    const std::uint64_t seed = resolve_seed(args.seed_flag, {});

    std::printf("validate: preset=default trials=%llu seed=%llu\n",
                static_cast<unsigned long long>(args.trials), static_cast<unsigned long long>(seed));
    std::printf("%-10s %-12s %-12s %-12s %-12s %-10s %s\n", "archetype", "eta_a", "eta_b", "length_km",
                "p_e_closed", "p_e_hat", "z");

    bool all_ok = true;
    std::uint64_t row_seed = seed;
    for (const qtlink::LinkConfig& link : qtlink::validation_preset()) {
        const qtlink::ValidationRow row =
            qtlink::estimate_vs_closed_form(link, qtlink::DetectorModel{}, args.trials, row_seed);
        const double eta_a = link.eta_up_source->value();
        const double eta_b = link.archetype == qtlink::Archetype::EgtWithSwapping
                                 ? link.eta_up_destination->value()
                                 : link.eta_down_destination->value();
        std::printf("%-10s %-12s %-12s %-12s %-12s %-10s %s%s\n", row.label.c_str(), fmt(eta_a).c_str(),
                    fmt(eta_b).c_str(), fmt(link.fiber.length_km()).c_str(), fmt(row.p_e_closed).c_str(),
                    fmt(row.p_e_hat).c_str(), fmt(row.z_score).c_str(), row.flagged ? "  FLAGGED" : "");
        all_ok = all_ok && !row.flagged;
        ++row_seed;
    }
    std::printf("validate: %s\n", all_ok ? "PASS (all |z| <= 4)" : "FAIL (|z| > 4 rows listed above)");
    return all_ok ? kExitOk : kExitValidation;
}

// ---------------------------------------------------------------------------

struct TeleportArgs {
    std::string resource = "phi+";
    int inputs = 100;
    std::optional<std::uint64_t> seed_flag;
};

int cmd_teleport_demo(const TeleportArgs& args) {
    using namespace qtlink;
    const ModeLabel src{Domain::Microwave, Location::Source, 0};
    const ModeLabel dst{Domain::Microwave, Location::Destination, 0};

    std::optional<PureState> resource;
    ResourceConvention convention = ResourceConvention::PhiPlusLike;
    if (args.resource == "phi+") {
        resource = make_bell(BellKind::PhiPlus, src, dst);
    } else if (args.resource == "phi-") {
        resource = make_bell(BellKind::PhiMinus, src, dst);
    } else if (args.resource == "psi+") {
        resource = make_bell(BellKind::PsiPlus, src, dst);
        convention = ResourceConvention::PsiPlusLike;
    } else if (args.resource == "psi-") {
        resource = make_bell(BellKind::PsiMinus, src, dst);
        convention = ResourceConvention::PsiPlusLike;
    } else if (args.resource.rfind("bs:", 0) == 0) {
        double eta = 0.0;
        try {
            eta = std::stod(args.resource.substr(3));
        } catch (const std::exception&) {
            throw UsageError("--resource bs:<eta> needs a numeric eta");
        }
        PureState hybrid = egt_generate(Efficiency(eta), src, ModeLabel{Domain::Optical, Location::Destination, 0});
        std::vector<cplx> amps = {cplx{0.0, 0.0}, cplx{std::sqrt(eta), 0.0},
                                  cplx{std::sqrt(1.0 - eta), 0.0}, cplx{0.0, 0.0}};
        resource = PureState({src, dst}, amps);
        convention = ResourceConvention::PsiPlusLike;
        std::cout << "hybrid pair entropy = "
                  << fmt(entropy_of_entanglement(hybrid, {src})) << " ebits\n";
    } else {
        throw UsageError("--resource: expected phi+, phi-, psi+, psi-, or bs:<eta>");
    }
    if (args.inputs < 1) throw UsageError("--inputs must be >= 1");
    const std::uint64_t seed = resolve_seed(args.seed_flag, {});

    std::cout << "resource = " << args.resource << "\n";
    InformationalQubit sample_input = [&] {
        Substream rng(seed, 0);
        return random_qubit(rng);
    }();
    std::cout << "sample input, BSM outcome probabilities:";
    for (const TeleportResult& branch : teleport_all_outcomes(sample_input, *resource, convention)) {
        std::cout << " p(" << branch.outcome.m1 << branch.outcome.m2 << ")=" << fmt(branch.outcome.probability);
    }
    std::cout << "\n";
    const double avg = average_fidelity(*resource, args.inputs, seed, convention);
    std::cout << "average fidelity over " << args.inputs << " random inputs = " << fmt(avg) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"microwave-optical transduction link simulator"};
    app.set_version_flag("--version", std::string("qtlink ") + QTLINK_VERSION);
    app.require_subcommand(1);

    EfficiencyArgs eff;
    auto* eff_cmd = app.add_subcommand("efficiency", "conversion efficiency from C and extraction ratios");
    eff_cmd->add_option("--C", eff.c, "cooperativity");
    eff_cmd->add_option("--zeta-o", eff.zeta_o, "optical extraction ratio (default 1)");
    eff_cmd->add_option("--zeta-m", eff.zeta_m, "microwave extraction ratio (default 1)");
    auto* g0 = eff_cmd->add_option("--g0-hz", eff.params.g0_hz, "single-photon coupling rate [Hz]");
    eff_cmd->add_option("--pump-photons", eff.params.pump_photons, "pump photon number")->needs(g0);
    eff_cmd->add_option("--kappa-o-hz", eff.params.kappa_o_hz, "optical dissipation rate [Hz]")->needs(g0);
    eff_cmd->add_option("--kappa-m-hz", eff.params.kappa_m_hz, "microwave dissipation rate [Hz]")->needs(g0);
    eff_cmd->add_option("--kappa-oe-hz", eff.params.kappa_oe_hz, "optical external coupling [Hz]")->needs(g0);
    eff_cmd->add_option("--kappa-me-hz", eff.params.kappa_me_hz, "microwave external coupling [Hz]")->needs(g0);
    eff_cmd->add_option("--config", eff.config_path, "flat key=value config file");
    eff_cmd->add_option("--grid", eff.grid_path, "emit the efficiency grid dataset to this path");
    eff_cmd->add_option("--format", eff.format, "grid format: csv or json")->check(CLI::IsMember({"csv", "json"}));

    PeArgs pe;
    auto* pe_cmd = app.add_subcommand("pe", "EPR distribution probability and capacities for one link");
    pe_cmd->add_option("--archetype", pe.archetype, "edqt, egt-dqt or egt-swap");
    pe_cmd->add_option("--eta-up", pe.eta_up, "up-conversion efficiency at the source");
    pe_cmd->add_option("--eta-down", pe.eta_down, "down-conversion efficiency at the destination");
    pe_cmd->add_option("--eta-up-s", pe.eta_up_s, "source generation efficiency (egt-swap)");
    pe_cmd->add_option("--eta-up-d", pe.eta_up_d, "destination generation efficiency (egt-swap)");
    pe_cmd->add_option("--length-km", pe.length_km, "fiber length [km]");
    pe_cmd->add_option("--attenuation-db-per-km", pe.attenuation, "fiber attenuation [dB/km], default 0.2");
    pe_cmd->add_option("--config", pe.config_path, "flat key=value config file");
    pe_cmd->add_flag("--mc", pe.mc, "append a Monte-Carlo estimate and z-score");
    pe_cmd->add_option("--trials", pe.trials_flag, "Monte-Carlo trials (default 1000000)");
    pe_cmd->add_option("--seed", pe.seed_flag, "RNG seed (default: QTLINK_SEED or 1)");
    pe_cmd->add_option("--detector", pe.detector_kind, "pnrd or spd (egt-swap)");
    pe_cmd->add_option("--detector-efficiency", pe.detector_efficiency, "per-photon detection probability");
    pe_cmd->add_flag("--independent-photon-loss", pe.independent_photon_loss,
                     "sample per-photon fiber survival in egt-swap");
    pe_cmd->add_flag("--json", pe.json, "emit JSON instead of text");

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "emit a plot-ready dataset");
    sweep_cmd->add_option("--target", sweep.target, "fig5, fig8a, fig8b, fig8c, fig9 or custom");
    sweep_cmd->add_option("--out", sweep.out, "output path ('-' for stdout)");
    sweep_cmd->add_option("--format", sweep.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_option("--axis", sweep.axes, "axis as name:min:max:steps (repeatable)");
    sweep_cmd->add_option("--fix", sweep.fixed, "fixed parameter as key=value (repeatable)");
    sweep_cmd->add_option("--archetype", sweep.archetype, "archetype for custom sweeps");

    ValidateArgs validate;
    auto* validate_cmd = app.add_subcommand("validate", "Monte-Carlo vs closed-form agreement over the preset grid");
    validate_cmd->add_option("--trials", validate.trials, "trials per grid point (default 1000000, min 10000)");
    validate_cmd->add_option("--seed", validate.seed_flag, "RNG seed (default: QTLINK_SEED or 1)");
    validate_cmd->add_option("--preset", validate.preset, "grid preset (default)");

    TeleportArgs teleport;
    auto* teleport_cmd = app.add_subcommand("teleport-demo", "teleportation over a chosen EPR resource");
    teleport_cmd->add_option("--resource", teleport.resource, "phi+, phi-, psi+, psi-, or bs:<eta>");
    teleport_cmd->add_option("--inputs", teleport.inputs, "number of random input qubits (default 100)");
    teleport_cmd->add_option("--seed", teleport.seed_flag, "RNG seed (default: QTLINK_SEED or 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (eff_cmd->parsed()) {
            eff.have_params = g0->count() > 0;
            return cmd_efficiency(eff);
        }
        if (pe_cmd->parsed()) return cmd_pe(pe);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep);
        if (validate_cmd->parsed()) return cmd_validate(validate);
        if (teleport_cmd->parsed()) return cmd_teleport_demo(teleport);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
