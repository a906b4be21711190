// Command-line driver: named-state projections, tangle and fidelity sweeps,
// witness evaluation and raw source-simulation dumps.
//
// Exit codes: 0 success, 2 validation error, 3 degenerate result
// (annihilated projection, empty postselection and friends).

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "dickesim/entanglement.hpp"
#include "dickesim/fock.hpp"
#include "dickesim/json_io.hpp"
#include "dickesim/symstate.hpp"

using namespace dsim;
using namespace dsim::symstate;
namespace ent = dsim::entanglement;
namespace fk = dsim::fock;
using nlohmann::json;

namespace {

constexpr double pi = std::numbers::pi;
const double isq2 = 1.0 / std::sqrt(2.0);

std::string fmt6(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string fmt_complex(cd z) {
    if (std::abs(z.imag()) < 5e-13) return fmt6(z.real());
    return fmt6(z.real()) + (z.imag() < 0 ? "-" : "+") + fmt6(std::abs(z.imag())) + "i";
}

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Named-state registry; Dicke states, filter targets and parametric families
/// are addressable directly from the command line.
PureState parse_state(const std::string& spec) {
    if (!spec.empty() && spec[0] == '@') return pure_state_from_json(read_file(spec.substr(1)));

    if (spec == "GHZ3")
        return superpose({{isq2, PureState::basis("HHH")}, {isq2, PureState::basis("VVV")}});
    if (spec == "GHZ3-")
        return superpose({{isq2, PureState::basis("HHH")}, {-isq2, PureState::basis("VVV")}});
    if (spec == "GHZ3+")
        return superpose(
            {{std::sqrt(0.75), dicke({3, 1})}, {std::sqrt(0.25), dicke({3, 3})}});
    if (spec == "GHZ4+") return superpose({{1.0, dicke({4, 1})}, {1.0, dicke({4, 3})}});
    if (spec == "GHZ4-")
        return superpose({{isq2, PureState::basis("HHHH")}, {-isq2, PureState::basis("VVVV")}});
    if (spec == "W3") return dicke({3, 1});
    if (spec == "W3bar") return dicke({3, 2});
    if (spec == "W4") return dicke({4, 1});
    if (spec == "W4bar") return dicke({4, 3});
    if (spec == "G3+") return superpose({{1.0, dicke({3, 1})}, {1.0, dicke({3, 2})}});
    if (spec == "G3-") return superpose({{1.0, dicke({3, 1})}, {-1.0, dicke({3, 2})}});

    if (spec.rfind("delta5:", 0) == 0) {
        const auto v = parse_csv_doubles(spec.substr(7));
        if (v.size() != 2) throw std::domain_error("delta5 needs alpha,eps");
        return delta5(v[0], v[1]);
    }
    if (spec.rfind("delta4:", 0) == 0) {
        const auto v = parse_csv_doubles(spec.substr(7));
        if (v.size() != 4) throw std::domain_error("delta4 needs alpha,eps,alpha1,eps1");
        return delta4_formula(v[0], v[1], v[2], v[3]);
    }
    if (spec.rfind("delta3:", 0) == 0) {
        const auto v = parse_csv_doubles(spec.substr(7));
        if (v.size() != 6) throw std::domain_error("delta3 needs six parameters");
        return delta3(v[0], v[1], v[2], v[3], v[4], v[5]);
    }

    // D<N>_<m>
    if (spec.size() >= 4 && spec[0] == 'D') {
        const auto us = spec.find('_');
        if (us != std::string::npos) {
            try {
                return dicke({std::stoi(spec.substr(1, us - 1)), std::stoi(spec.substr(us + 1))});
            } catch (const std::invalid_argument&) {
            }
        }
    }

    if (spec.find_first_not_of("HV") == std::string::npos && !spec.empty())
        return PureState::basis(spec);

    throw std::domain_error("unknown state spec: " + spec);
}

void print_state(const PureState& psi) {
    const PureState c = psi.canonical();
    std::printf("state (canonical):\n");
    for (std::size_t i = 0; i < c.dim(); ++i) {
        if (std::abs(c.amp(i)) < 5e-13) continue;
        std::string ket;
        for (int q = c.n() - 1; q >= 0; --q) ket += ((i >> q) & 1u) ? 'V' : 'H';
        std::printf("  %s |%s>\n", fmt_complex(c.amp(i)).c_str(), ket.c_str());
    }
}

/// Buffered output: files are only written after the full computation succeeds.
void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::domain_error("cannot write " + path);
    out << text;
}

fk::Jones parse_polarization(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "H") return fk::jones(1.0, 0.0);
        if (s == "V") return fk::jones(0.0, 1.0);
        if (s == "L") return fk::jones_weight_phase(isq2, pi / 2);
        if (s == "R") return fk::jones_weight_phase(isq2, -pi / 2);
        throw std::domain_error("unknown polarization name: " + s);
    }
    if (j.is_array() && j.size() == 2 && j[0].is_number())
        return fk::jones_weight_phase(j[0].get<double>(), j[1].get<double>());
    if (j.is_array() && j.size() == 2)
        return fk::jones(cd{j[0][0].get<double>(), j[0][1].get<double>()},
                         cd{j[1][0].get<double>(), j[1][1].get<double>()});
    throw std::domain_error("polarization must be a name, [alpha, eps] or [[re,im],[re,im]]");
}

fk::Scenario parse_scenario(const json& cfg) {
    fk::Scenario sc;
    const json& src = cfg.at("source");
    sc.source.z_dc = src.value("z_dc", 0.17);
    sc.source.z_w = std::polar(src.value("z_w", 0.0), src.value("phi_w", 0.0));
    sc.source.wcb_polarization =
        src.contains("wcb_polarization") ? parse_polarization(src["wcb_polarization"])
                                         : fk::jones(1.0, 0.0);
    sc.source.n_max = cfg.value("n_max", src.value("n_max", 6));

    const json& net = cfg.at("network");
    for (const auto& o : net.at("outputs")) sc.outputs.push_back(o.get<std::string>());
    if (net.contains("weights"))
        for (const auto& w : net["weights"]) sc.weights.push_back(w.get<double>());

    if (cfg.contains("loss")) {
        sc.loss.eta_c = cfg["loss"].value("eta_c", 1.0);
        sc.loss.eta_d = cfg["loss"].value("eta_d", 1.0);
    }

    const json analysis = cfg.value("analysis", json::object());
    for (const auto& p : cfg.at("pattern")) {
        fk::AnalyzedMode m;
        m.spatial = p.at("mode").get<std::string>();
        const std::string req = p.value("require", "qubit");
        if (req == "qubit") {
            m.kind = fk::AnalyzedMode::Kind::Qubit;
        } else if (req == "project") {
            m.kind = fk::AnalyzedMode::Kind::Project;
            if (!analysis.contains(m.spatial))
                throw std::domain_error("projective mode " + m.spatial +
                                        " needs an analysis entry");
            const json& a = analysis[m.spatial];
            m.projector = ProjectorSpec(a.at("alpha").get<double>(), a.value("eps", 0.0));
        } else {
            throw std::domain_error("pattern require must be qubit or project");
        }
        sc.pattern.modes.push_back(std::move(m));
    }
    return sc;
}

// ---- subcommands ------------------------------------------------------------

int cmd_project(const std::string& state_spec, int qubit, double alpha, double eps) {
    const PureState psi = parse_state(state_spec);
    const auto [cond, p] = project_qubit(psi, qubit, ProjectorSpec(alpha, eps));
    std::printf("probability %s\n", fmt6(p).c_str());
    print_state(cond);
    return 0;
}

int cmd_tangle_sweep(int samples, bool filtered, const std::string& out_path) {
    const auto curve = ent::tangle_curve(samples, filtered);
    std::string csv = "theta,tau3\n";
    for (const auto& [theta, tau] : curve)
        csv += fmt6(theta) + "," + fmt6(tau) + "\n";
    emit(csv, out_path);
    return 0;
}

int cmd_witness(const std::string& target_spec, double offset, const std::string& state_spec) {
    const PureState target = parse_state(target_spec);
    const ent::WitnessSpec w(target, offset);

    double value = 0.0;
    if (!state_spec.empty() && state_spec[0] == '@' &&
        json_is_density(read_file(state_spec.substr(1)))) {
        value = ent::witness_value(w, density_from_json(read_file(state_spec.substr(1))));
    } else {
        value = ent::witness_value(w, parse_state(state_spec));
    }
    json report{{"target", target_spec},
                {"offset", offset},
                {"value", value},
                {"entangled", value < 0.0}};
    std::printf("%s\n", report.dump(2).c_str());
    return 0;
}

struct SweepArgs {
    std::string target = "W4";
    double z_dc = 0.17;
    double zw_min = 0.05, zw_max = 0.8;
    int zw_steps = 16;
    double phiw_min = 0.0, phiw_max = pi;
    int phiw_steps = 5;
    double eta_c = 1.0, eta_d = 1.0;
    bool six_photon = false;
    int n_max = 0;
    std::string out_path;
    std::string config_path;
};

int cmd_fidelity_sweep(SweepArgs a) {
    if (!a.config_path.empty()) {
        const json cfg = json::parse(read_file(a.config_path));
        a.target = cfg.value("target", a.target);
        a.z_dc = cfg.value("z_dc", a.z_dc);
        a.six_photon = cfg.value("six_photon", a.six_photon);
        a.n_max = cfg.value("n_max", a.n_max);
        if (cfg.contains("zw")) {
            a.zw_min = cfg["zw"].value("min", a.zw_min);
            a.zw_max = cfg["zw"].value("max", a.zw_max);
            a.zw_steps = cfg["zw"].value("steps", a.zw_steps);
        }
        if (cfg.contains("phiw")) {
            a.phiw_min = cfg["phiw"].value("min", a.phiw_min);
            a.phiw_max = cfg["phiw"].value("max", a.phiw_max);
            a.phiw_steps = cfg["phiw"].value("steps", a.phiw_steps);
        }
        if (cfg.contains("loss")) {
            a.eta_c = cfg["loss"].value("eta_c", a.eta_c);
            a.eta_d = cfg["loss"].value("eta_d", a.eta_d);
        }
    }
    fk::SweepTarget target;
    if (a.target == "W4")
        target = fk::SweepTarget::W4;
    else if (a.target == "GHZ4+")
        target = fk::SweepTarget::GHZ4Plus;
    else
        throw std::domain_error("target must be W4 or GHZ4+");
    if (a.zw_steps < 1 || a.phiw_steps < 1)
        throw std::domain_error("grid needs at least one point per axis");

    auto axis = [](double lo, double hi, int n) {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
        return v;
    };
    const auto zws = axis(a.zw_min, a.zw_max, a.zw_steps);
    const auto phis = axis(a.phiw_min, a.phiw_max, a.phiw_steps);

    const auto points = fk::fidelity_sweep(target, zws, phis, a.z_dc,
                                           fk::LossModel{a.eta_c, a.eta_d}, a.six_photon,
                                           a.n_max);
    std::string csv = "z_w,phi_w,fidelity,probability\n";
    const fk::SweepPoint* best = &points.front();
    for (const auto& p : points) {
        csv += fmt6(p.z_w) + "," + fmt6(p.phi_w) + "," + fmt6(p.fidelity) + "," +
               fmt6(p.probability) + "\n";
        if (p.fidelity > best->fidelity) best = &p;
    }
    emit(csv, a.out_path);
    std::printf("max_fidelity %s at z_w %s phi_w %s\n", fmt6(best->fidelity).c_str(),
                fmt6(best->z_w).c_str(), fmt6(best->phi_w).c_str());
    return 0;
}

int cmd_source_sim(const std::string& config_path, const std::string& out_path,
                   bool dump_terms) {
    const fk::Scenario sc = parse_scenario(json::parse(read_file(config_path)));
    const auto [rho, prob] = fk::run_scenario(sc);

    json out;
    out["probability"] = prob;
    out["n"] = rho.n();
    json rows = json::array();
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < rho.dim(); ++j)
            row.push_back(json::array({rho(i, j).real(), rho(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    out["rho"] = std::move(rows);

    if (dump_terms) {
        const fk::FockExpansion state = fk::build_distributed_state(sc);
        json terms = json::array();
        for (const auto& [occ, amp] : state.terms()) {
            json t;
            json o = json::object();
            for (std::size_t i = 0; i < occ.size(); ++i) {
                if (occ[i] == 0) continue;
                const fk::Mode& m = state.modes()[i];
                o[m.spatial + (m.pol == fk::Pol::H ? ":H" : ":V")] = occ[i];
            }
            t["occupation"] = std::move(o);
            t["amp"] = json::array({amp.real(), amp.imag()});
            terms.push_back(std::move(t));
        }
        out["terms"] = std::move(terms);
    }
    emit(out.dump(2) + "\n", out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dicke-state projection toolkit and photonic source simulator"};
    app.require_subcommand(1);

    // project
    auto* project = app.add_subcommand("project", "project one qubit of a named state");
    std::string state_spec;
    int qubit = 0;
    double alpha = 1.0, eps = 0.0;
    project->add_option("--state", state_spec, "state spec (named, DN_m, delta5:a,e, kets, @file)")
        ->required();
    project->add_option("--qubit", qubit, "1-based qubit index")->required();
    project->add_option("--alpha", alpha, "projector H weight in [0,1]")->required();
    project->add_option("--eps", eps, "projector phase");

    // tangle-sweep
    auto* tangle = app.add_subcommand("tangle-sweep", "tau3 along the projected-Dicke family");
    int samples = 101;
    bool filtered = false;
    std::string tangle_out;
    tangle->add_option("--samples", samples, "number of theta samples");
    tangle->add_flag("--filtered", filtered, "apply the T+ filter before measuring");
    tangle->add_option("-o,--output", tangle_out, "CSV output path (default stdout)");

    // fidelity-sweep
    auto* sweep = app.add_subcommand("fidelity-sweep", "simulated fidelity over (z_w, phi_w)");
    SweepArgs sa;
    sweep->add_option("--target", sa.target, "W4 or GHZ4+");
    sweep->add_option("--zdc", sa.z_dc, "pair-source strength");
    sweep->add_option("--zw-min", sa.zw_min);
    sweep->add_option("--zw-max", sa.zw_max);
    sweep->add_option("--zw-steps", sa.zw_steps);
    sweep->add_option("--phiw-min", sa.phiw_min);
    sweep->add_option("--phiw-max", sa.phiw_max);
    sweep->add_option("--phiw-steps", sa.phiw_steps);
    sweep->add_option("--eta-c", sa.eta_c, "coupling transmission");
    sweep->add_option("--eta-d", sa.eta_d, "detector efficiency");
    sweep->add_flag("--six-photon", sa.six_photon, "include the six-photon noise order");
    sweep->add_option("--n-max", sa.n_max, "override the photon-number truncation");
    sweep->add_option("-o,--output", sa.out_path, "CSV output path (default stdout)");
    sweep->add_option("--config", sa.config_path, "JSON config overriding the flags");

    // witness
    auto* witness = app.add_subcommand("witness", "generic witness value offset - fidelity");
    std::string w_target, w_state;
    double w_offset = 2.0 / 3.0;
    witness->add_option("--target", w_target, "witness target state")->required();
    witness->add_option("--offset", w_offset, "witness offset in (0,1)")->required();
    witness->add_option("--state", w_state, "probe state (spec or @file, pure or rho)")
        ->required();

    // source-sim
    auto* sim = app.add_subcommand("source-sim", "raw pipeline run from a JSON scenario");
    std::string sim_config, sim_out;
    bool dump_terms = false;
    sim->add_option("--config", sim_config, "scenario JSON")->required();
    sim->add_option("-o,--output", sim_out, "output path (default stdout)");
    sim->add_flag("--dump-terms", dump_terms, "include the pre-detection expansion");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (project->parsed()) return cmd_project(state_spec, qubit, alpha, eps);
        if (tangle->parsed()) return cmd_tangle_sweep(samples, filtered, tangle_out);
        if (sweep->parsed()) return cmd_fidelity_sweep(sa);
        if (witness->parsed()) return cmd_witness(w_target, w_offset, w_state);
        if (sim->parsed()) return cmd_source_sim(sim_config, sim_out, dump_terms);
    } catch (const annihilation_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const degenerate_input_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const empty_postselection_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const not_in_family_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const not_retargetable_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
