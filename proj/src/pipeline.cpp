#include <algorithm>
#include <cmath>
#include <numbers>

#include "dickesim/fock.hpp"

namespace dsim::fock {

namespace {

using symstate::dicke;
using symstate::ProjectorSpec;
using symstate::PureState;

// phi_w is defined relative to the pair-emission amplitude, which carries a
// factor i per pair; the operator-level weak-beam phase is phi_w + pi/2.
cd weak_beam_amplitude(cd z_w) { return z_w * cd{0.0, 1.0}; }

FockExpansion combined_source(const SourceParams& p) {
    return combine(spdc_state(p.z_dc, p.n_max),
                   wcb_state(weak_beam_amplitude(p.z_w), p.wcb_polarization, p.n_max));
}

/// Drops terms that can never fire a detector in every listed spatial mode.
FockExpansion drop_unfillable(const FockExpansion& state,
                              const std::vector<AnalyzedMode>& analyzed) {
    std::vector<std::pair<int, int>> slots;
    for (const AnalyzedMode& m : analyzed)
        slots.emplace_back(state.mode_index({m.spatial, Pol::H}),
                           state.mode_index({m.spatial, Pol::V}));
    FockExpansion out(state.modes(), state.n_max());
    for (const auto& [occ, amp] : state.terms()) {
        bool viable = true;
        for (const auto& [ih, iv] : slots)
            if ((ih < 0 ? 0 : occ[ih]) + (iv < 0 ? 0 : occ[iv]) == 0) {
                viable = false;
                break;
            }
        if (viable) out.add_amplitude(occ, amp);
    }
    return out;
}

struct TargetConfig {
    PureState target;
    Jones polarization;
    ProjectorSpec mode_e;
};

TargetConfig target_config(SweepTarget target) {
    switch (target) {
        case SweepTarget::W4:
            // weak beam H-polarized, mode e projected onto V
            return {dicke({4, 1}), jones(1.0, 0.0), ProjectorSpec(0.0, 0.0)};
        case SweepTarget::GHZ4Plus:
            return {symstate::superpose({{1.0, dicke({4, 1})}, {1.0, dicke({4, 3})}}),
                    jones_weight_phase(1.0 / std::sqrt(2.0), std::numbers::pi / 2.0),
                    ProjectorSpec(1.0 / std::sqrt(2.0), -std::numbers::pi / 2.0)};
    }
    throw std::domain_error("fidelity_sweep: unknown target");
}

const std::vector<std::string> kFiveModes{"a", "b", "c", "d", "e"};

CoincidencePattern five_mode_pattern(const ProjectorSpec& mode_e) {
    CoincidencePattern pattern;
    for (const char* m : {"a", "b", "c", "d"})
        pattern.modes.push_back({m, AnalyzedMode::Kind::Qubit, ProjectorSpec(1.0, 0.0)});
    pattern.modes.push_back({"e", AnalyzedMode::Kind::Project, mode_e});
    return pattern;
}

}  // namespace

std::vector<SweepPoint> fidelity_sweep(SweepTarget target, std::span<const double> z_w_values,
                                       std::span<const double> phi_w_values, double z_dc_abs,
                                       const LossModel& loss, bool six_photons,
                                       int n_max_override) {
    if (z_dc_abs <= 0.0 || z_dc_abs >= 1.0)
        throw std::domain_error("fidelity_sweep: need 0 < |z_dc| < 1");
    const int n_max = n_max_override > 0 ? n_max_override : (six_photons ? 6 : 5);
    if (n_max < 5) throw std::domain_error("fidelity_sweep: truncation below five photons");

    const TargetConfig cfg = target_config(target);
    const CoincidencePattern pattern = five_mode_pattern(cfg.mode_e);

    std::vector<SweepPoint> out;
    out.reserve(z_w_values.size() * phi_w_values.size());
    for (double z_w : z_w_values)
        for (double phi_w : phi_w_values) {
            SourceParams params{z_dc_abs, std::polar(z_w, phi_w), cfg.polarization, n_max};
            FockExpansion state = restrict_photon_number(combined_source(params), 5, n_max);
            state = distribute(state, "s", kFiveModes);
            state = drop_unfillable(state, pattern.modes);
            if (loss.eta() < 1.0) {
                state = apply_loss(state, loss);
                state = drop_unfillable(state, pattern.modes);
            }
            const PostselectResult r = postselect(state, pattern);
            out.push_back({z_w, phi_w, r.rho.fidelity(cfg.target), r.probability});
        }
    return out;
}

FockExpansion build_distributed_state(const Scenario& scenario) {
    FockExpansion state = combined_source(scenario.source);
    state = restrict_photon_number(state, static_cast<int>(scenario.pattern.modes.size()),
                                   scenario.source.n_max);
    if (scenario.weights.empty())
        state = distribute(state, "s", scenario.outputs);
    else
        state = distribute(state, "s", scenario.outputs, scenario.weights);
    state = drop_unfillable(state, scenario.pattern.modes);
    if (scenario.loss.eta() < 1.0) {
        state = apply_loss(state, scenario.loss);
        state = drop_unfillable(state, scenario.pattern.modes);
    }
    return state;
}

PostselectResult run_scenario(const Scenario& scenario) {
    return postselect(build_distributed_state(scenario), scenario.pattern);
}

DensityMatrix phase_averaged_rho(const Scenario& scenario, int phase_samples) {
    if (phase_samples < 1) throw std::domain_error("phase_averaged_rho: need >= 1 samples");
    const double z_w_abs = std::abs(scenario.source.z_w);
    std::vector<cd> acc;
    double total_prob = 0.0;
    int n_qubits = 0;
    for (int k = 0; k < phase_samples; ++k) {
        Scenario s = scenario;
        s.source.z_w = std::polar(z_w_abs, 2.0 * std::numbers::pi * k / phase_samples);
        const PostselectResult r = run_scenario(s);
        if (acc.empty()) {
            acc.assign(r.rho.elements().size(), cd{0.0, 0.0});
            n_qubits = r.rho.n();
        }
        for (std::size_t i = 0; i < acc.size(); ++i)
            acc[i] += r.probability * r.rho.elements()[i];
        total_prob += r.probability;
    }
    for (cd& x : acc) x /= total_prob;
    return DensityMatrix(n_qubits, std::move(acc));
}

namespace {

/// Probability that every "required" detector group holds at least one photon
/// while every "forbidden" group is empty; groups are lists of mode slots.
double click_probability(const FockExpansion& state,
                         const std::vector<std::vector<Mode>>& required,
                         const std::vector<std::vector<Mode>>& forbidden) {
    auto indices = [&](const std::vector<std::vector<Mode>>& groups) {
        std::vector<std::vector<int>> out;
        for (const auto& g : groups) {
            std::vector<int> idx;
            for (const Mode& m : g) {
                const int i = state.mode_index(m);
                if (i >= 0) idx.push_back(i);
            }
            out.push_back(std::move(idx));
        }
        return out;
    };
    const auto req = indices(required), forb = indices(forbidden);
    double p = 0.0;
    for (const auto& [occ, amp] : state.terms()) {
        bool ok = true;
        for (const auto& g : req) {
            int n = 0;
            for (int i : g) n += occ[i];
            if (n == 0) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        for (const auto& g : forb) {
            int n = 0;
            for (int i : g) n += occ[i];
            if (n > 0) {
                ok = false;
                break;
            }
        }
        if (ok) p += std::norm(amp);
    }
    return p;
}

}  // namespace

double enhancement_ratio(double z_dc_abs, double z_w_abs, int n_max, double eta) {
    if (z_w_abs < 1e-12)
        throw std::domain_error("enhancement_ratio: undefined without a weak-beam photon");
    if (z_dc_abs <= 0.0 || z_dc_abs >= 1.0)
        throw std::domain_error("enhancement_ratio: need 0 < |z_dc| < 1");
    if (n_max < 3) throw std::domain_error("enhancement_ratio: need n_max >= 3");

    const Jones pol_h = jones(1.0, 0.0);
    const std::vector<std::string> outs{"a", "b", "c"};
    const LossModel loss{eta, 1.0};

    // Coherent overlap: one fiber, one splitter.
    FockExpansion coh = combine(spdc_state(z_dc_abs, n_max), wcb_state(z_w_abs, pol_h, n_max));
    coh = distribute(coh, "s", outs);
    if (eta < 1.0) coh = apply_loss(coh, loss);
    const double p_coh = click_probability(
        coh, {{{"a", Pol::H}}, {{"b", Pol::H}}, {{"c", Pol::V}}},
        {{{"a", Pol::V}}, {{"b", Pol::V}}, {{"c", Pol::H}}});

    // Distinguishable photons: the weak beam feeds tagged copies of the same
    // detectors, so clicks add over both copies of each output.
    const std::vector<std::string> tagged{"ta", "tb", "tc"};
    FockExpansion dist = tensor_product(spdc_state(z_dc_abs, n_max),
                                        wcb_state(z_w_abs, pol_h, n_max));
    dist = distribute(dist, "s", outs);
    dist = distribute(dist, "w", tagged);
    if (eta < 1.0) dist = apply_loss(dist, loss);
    const double p_dist = click_probability(
        dist,
        {{{"a", Pol::H}, {"ta", Pol::H}}, {{"b", Pol::H}, {"tb", Pol::H}},
         {{"c", Pol::V}, {"tc", Pol::V}}},
        {{{"a", Pol::V}, {"ta", Pol::V}}, {{"b", Pol::V}, {"tb", Pol::V}},
         {{"c", Pol::H}, {"tc", Pol::H}}});

    if (p_dist <= 0.0)
        throw empty_postselection_error("enhancement_ratio: no threefold coincidences");
    return p_coh / p_dist;
}

}  // namespace dsim::fock
