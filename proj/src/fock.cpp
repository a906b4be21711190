#include "dickesim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace dsim::fock {

namespace {

constexpr int kMaxFactorial = 20;

const std::array<double, kMaxFactorial + 1>& factorial_table() {
    static const auto table = [] {
        std::array<double, kMaxFactorial + 1> t{};
        t[0] = 1.0;
        for (int i = 1; i <= kMaxFactorial; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    return table;
}

double factorial(int n) { return factorial_table()[n]; }

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

/// sqrt(prod n_i!) — converts monomial coefficients to Fock amplitudes.
double amp_factor(const Occupation& occ) {
    double f = 1.0;
    for (std::uint8_t n : occ) f *= factorial(n);
    return std::sqrt(f);
}

/// Integer power by repeated multiplication; cpow(0, 0) = 1, unlike std::pow
/// on complex arguments.
cd cpow(cd base, int e) {
    cd r{1.0, 0.0};
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

constexpr const char* kLossPrefix = "loss:";

}  // namespace

bool is_loss_mode(const Mode& m) { return m.spatial.rfind(kLossPrefix, 0) == 0; }

Mode loss_partner(const Mode& m) { return Mode{kLossPrefix + m.spatial, m.pol}; }

int total_photons(const Occupation& occ) {
    int t = 0;
    for (std::uint8_t n : occ) t += n;
    return t;
}

FockExpansion::FockExpansion(std::vector<Mode> modes, int n_max)
    : modes_(std::move(modes)), n_max_(n_max) {
    if (n_max_ < 0) throw std::domain_error("FockExpansion: negative truncation");
    for (std::size_t i = 0; i < modes_.size(); ++i)
        for (std::size_t j = i + 1; j < modes_.size(); ++j)
            if (modes_[i] == modes_[j])
                throw std::domain_error("FockExpansion: duplicate mode " + modes_[i].spatial);
}

void FockExpansion::add_amplitude(const Occupation& occ, cd amp) {
    if (occ.size() != modes_.size())
        throw std::domain_error("FockExpansion: occupation length mismatch");
    if (total_photons(occ) > n_max_) return;
    auto [it, inserted] = terms_.try_emplace(occ, amp);
    if (!inserted) it->second += amp;
    if (std::abs(it->second) < kPruneTol) terms_.erase(it);
}

cd FockExpansion::amplitude(const Occupation& occ) const {
    const auto it = terms_.find(occ);
    return it == terms_.end() ? cd{0.0, 0.0} : it->second;
}

cd FockExpansion::monomial_coefficient(const Occupation& occ) const {
    return amplitude(occ) / amp_factor(occ);
}

double FockExpansion::norm_squared() const {
    double n2 = 0.0;
    for (const auto& [occ, amp] : terms_) n2 += std::norm(amp);
    return n2;
}

int FockExpansion::mode_index(const Mode& m) const {
    const auto it = std::find(modes_.begin(), modes_.end(), m);
    return it == modes_.end() ? -1 : static_cast<int>(it - modes_.begin());
}

void FockExpansion::prune(double tol) {
    std::erase_if(terms_, [tol](const auto& kv) { return std::abs(kv.second) < tol; });
}

Jones jones(cd h, cd v) {
    if (std::abs(std::norm(h) + std::norm(v) - 1.0) > 1e-12)
        throw std::domain_error("jones: polarization vector must be normalized");
    return Jones{h, v};
}

Jones jones_weight_phase(double alpha, double eps) {
    if (alpha < 0.0 || alpha > 1.0) throw std::domain_error("jones: weight must lie in [0, 1]");
    const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    return Jones{alpha, beta * std::polar(1.0, eps)};
}

FockExpansion spdc_state(cd z_dc, int n_max) {
    if (std::abs(z_dc) >= 1.0) throw std::domain_error("spdc_state: need |z_dc| < 1");
    if (n_max < 0) throw std::domain_error("spdc_state: negative truncation");
    FockExpansion out({{"s", Pol::H}, {"s", Pol::V}}, n_max);
    const double pref = std::sqrt(1.0 - std::norm(z_dc));
    const cd iz = cd{0.0, 1.0} * z_dc;
    cd power{1.0, 0.0};
    for (int n = 0; n <= n_max / 2; ++n) {
        // (s_H^dag s_V^dag)^n |vac> = n! |n, n>, so the amplitude is pref * (i z)^n
        out.add_amplitude({std::uint8_t(n), std::uint8_t(n)}, pref * power);
        power *= iz;
    }
    return out;
}

FockExpansion wcb_state(cd z_w, const Jones& polarization, int n_max) {
    if (n_max < 0) throw std::domain_error("wcb_state: negative truncation");
    FockExpansion out({{"w", Pol::H}, {"w", Pol::V}}, n_max);
    const double pref = std::exp(-0.5 * std::norm(z_w));
    cd zn{1.0, 0.0};
    for (int n = 0; n <= n_max; ++n) {
        // (w_j^dag)^n expands binomially over (w_H^dag)^k (w_V^dag)^{n-k}
        for (int k = 0; k <= n; ++k) {
            const cd coeff = pref * zn / factorial(n) * binomial(n, k) *
                             cpow(polarization.h, k) * cpow(polarization.v, n - k);
            if (coeff != cd{0.0, 0.0})
                out.add_amplitude({std::uint8_t(k), std::uint8_t(n - k)},
                                  coeff * std::sqrt(factorial(k) * factorial(n - k)));
        }
        zn *= z_w;
    }
    out.prune();
    return out;
}

FockExpansion combine(const FockExpansion& spdc, const FockExpansion& wcb) {
    for (const Mode& m : spdc.modes())
        if (m.spatial != "s") throw std::domain_error("combine: first source must live in mode s");
    for (const Mode& m : wcb.modes())
        if (m.spatial != "w") throw std::domain_error("combine: second source must live in mode w");

    const int n_max = std::max(spdc.n_max(), wcb.n_max());
    FockExpansion out({{"s", Pol::H}, {"s", Pol::V}}, n_max);
    const int h_a = spdc.mode_index({"s", Pol::H}), v_a = spdc.mode_index({"s", Pol::V});
    const int h_b = wcb.mode_index({"w", Pol::H}), v_b = wcb.mode_index({"w", Pol::V});

    for (const auto& [ta, ca] : spdc.terms()) {
        const int ph_a = h_a >= 0 ? ta[h_a] : 0, pv_a = v_a >= 0 ? ta[v_a] : 0;
        const cd coeff_a = ca / amp_factor(ta);
        for (const auto& [tb, cb] : wcb.terms()) {
            const int ph = ph_a + (h_b >= 0 ? tb[h_b] : 0);
            const int pv = pv_a + (v_b >= 0 ? tb[v_b] : 0);
            if (ph + pv > n_max) continue;
            const Occupation occ{std::uint8_t(ph), std::uint8_t(pv)};
            out.add_amplitude(occ, coeff_a * (cb / amp_factor(tb)) * amp_factor(occ));
        }
    }
    return out;
}

FockExpansion tensor_product(const FockExpansion& a, const FockExpansion& b) {
    std::vector<Mode> modes = a.modes();
    for (const Mode& m : b.modes()) {
        if (std::find(modes.begin(), modes.end(), m) != modes.end())
            throw std::domain_error("tensor_product: mode sets must be disjoint");
        modes.push_back(m);
    }
    const int n_max = std::max(a.n_max(), b.n_max());
    FockExpansion out(std::move(modes), n_max);
    for (const auto& [ta, ca] : a.terms())
        for (const auto& [tb, cb] : b.terms()) {
            if (total_photons(ta) + total_photons(tb) > n_max) continue;
            Occupation occ(ta);
            occ.insert(occ.end(), tb.begin(), tb.end());
            out.add_amplitude(occ, ca * cb);
        }
    return out;
}

namespace {

/// Enumerates all ways of writing n as an ordered sum of k non-negative parts.
void for_each_composition(int n, int k, std::vector<int>& parts,
                          const std::function<void(const std::vector<int>&)>& fn) {
    if (k == 1) {
        parts.push_back(n);
        fn(parts);
        parts.pop_back();
        return;
    }
    for (int i = 0; i <= n; ++i) {
        parts.push_back(i);
        for_each_composition(n - i, k - 1, parts, fn);
        parts.pop_back();
    }
}

double multinomial(int n, const std::vector<int>& parts) {
    double m = factorial(n);
    for (int p : parts) m /= factorial(p);
    return m;
}

}  // namespace

FockExpansion distribute(const FockExpansion& state, const std::string& from_spatial,
                         std::span<const std::string> outputs,
                         std::span<const double> weights) {
    if (outputs.empty()) throw std::domain_error("distribute: no output modes");
    if (outputs.size() != weights.size())
        throw std::domain_error("distribute: one weight per output required");
    double w2 = 0.0;
    for (double w : weights) w2 += w * w;
    if (std::abs(w2 - 1.0) > 1e-12)
        throw std::domain_error("distribute: squared weights must sum to 1");

    const int src_h = state.mode_index({from_spatial, Pol::H});
    const int src_v = state.mode_index({from_spatial, Pol::V});
    if (src_h < 0 && src_v < 0)
        throw std::domain_error("distribute: source mode " + from_spatial + " not present");

    std::vector<Mode> modes;
    std::vector<int> keep;  // indices of surviving input slots
    for (std::size_t i = 0; i < state.modes().size(); ++i)
        if (static_cast<int>(i) != src_h && static_cast<int>(i) != src_v) {
            keep.push_back(static_cast<int>(i));
            modes.push_back(state.modes()[i]);
        }
    const std::size_t out_base = modes.size();
    const int k = static_cast<int>(outputs.size());
    for (const std::string& o : outputs) {
        const Mode mh{o, Pol::H}, mv{o, Pol::V};
        if (std::find(modes.begin(), modes.end(), mh) != modes.end())
            throw std::domain_error("distribute: output mode " + o + " already in use");
        modes.push_back(mh);
        modes.push_back(mv);
    }

    FockExpansion out(std::move(modes), state.n_max());
    std::vector<int> parts_h, parts_v;
    for (const auto& [occ, amp] : state.terms()) {
        const int p = src_h >= 0 ? occ[src_h] : 0;
        const int q = src_v >= 0 ? occ[src_v] : 0;
        const cd coeff = amp / amp_factor(occ);

        Occupation base(out_base + 2 * k, 0);
        for (std::size_t i = 0; i < keep.size(); ++i) base[i] = occ[keep[i]];

        for_each_composition(p, k, parts_h, [&](const std::vector<int>& ph) {
            double wh = multinomial(p, ph);
            for (int i = 0; i < k; ++i) wh *= std::pow(weights[i], ph[i]);
            for_each_composition(q, k, parts_v, [&](const std::vector<int>& qv) {
                double wv = multinomial(q, qv);
                for (int i = 0; i < k; ++i) wv *= std::pow(weights[i], qv[i]);
                Occupation occ_out(base);
                for (int i = 0; i < k; ++i) {
                    occ_out[out_base + 2 * i] = std::uint8_t(ph[i]);
                    occ_out[out_base + 2 * i + 1] = std::uint8_t(qv[i]);
                }
                out.add_amplitude(occ_out, coeff * wh * wv * amp_factor(occ_out));
            });
        });
    }
    return out;
}

FockExpansion distribute(const FockExpansion& state, const std::string& from_spatial,
                         std::span<const std::string> outputs) {
    const std::vector<double> weights(outputs.size(), 1.0 / std::sqrt(double(outputs.size())));
    return distribute(state, from_spatial, outputs, weights);
}

FockExpansion apply_loss(const FockExpansion& state, const LossModel& loss) {
    const double eta = loss.eta();
    if (eta < 0.0 || eta > 1.0) throw std::domain_error("apply_loss: eta must lie in [0, 1]");
    for (const Mode& m : state.modes())
        if (is_loss_mode(m)) throw std::domain_error("apply_loss: state already carries loss modes");
    if (eta == 1.0) return state;

    const std::size_t nd = state.modes().size();
    std::vector<Mode> modes = state.modes();
    for (std::size_t i = 0; i < nd; ++i) modes.push_back(loss_partner(state.modes()[i]));

    const double t = std::sqrt(eta), r = std::sqrt(1.0 - eta);
    FockExpansion out(std::move(modes), state.n_max());

    Occupation occ_out(2 * nd, 0);
    std::function<void(const Occupation&, std::size_t, cd)> split =
        [&](const Occupation& occ, std::size_t slot, cd coeff) {
            if (slot == nd) {
                out.add_amplitude(occ_out, coeff * amp_factor(occ_out));
                return;
            }
            const int n = occ[slot];
            for (int m = 0; m <= n; ++m) {
                occ_out[slot] = std::uint8_t(m);
                occ_out[nd + slot] = std::uint8_t(n - m);
                split(occ, slot + 1,
                      coeff * binomial(n, m) * std::pow(t, m) * std::pow(r, n - m));
            }
            occ_out[slot] = 0;
            occ_out[nd + slot] = 0;
        };
    for (const auto& [occ, amp] : state.terms()) split(occ, 0, amp / amp_factor(occ));
    return out;
}

FockExpansion restrict_photon_number(const FockExpansion& state, int min_total, int max_total) {
    FockExpansion out(state.modes(), state.n_max());
    for (const auto& [occ, amp] : state.terms()) {
        const int t = total_photons(occ);
        if (t >= min_total && t <= max_total) out.add_amplitude(occ, amp);
    }
    return out;
}

namespace {

/// Rewrites one spatial mode's (H, V) slots in its analyzer basis: afterwards
/// the H slot counts photons at the transmitted (v) detector and the V slot
/// photons at the reflected (v-perp) detector.
FockExpansion rotate_analyzer(const FockExpansion& state, const std::string& spatial,
                              const symstate::ProjectorSpec& proj) {
    if (proj.alpha == 1.0 && proj.eps == 0.0) return state;
    const int ih = state.mode_index({spatial, Pol::H});
    const int iv = state.mode_index({spatial, Pol::V});
    if (ih < 0 || iv < 0)
        throw std::domain_error("postselect: analyzed mode " + spatial + " not present");

    // a_H^dag = a av^dag - b e^{i eps} aperp^dag,  a_V^dag = b e^{-i eps} av^dag + a aperp^dag
    const double a = proj.alpha, b = proj.beta();
    const cd refl_h = -b * std::polar(1.0, proj.eps);
    const cd trans_v = b * std::polar(1.0, -proj.eps);

    FockExpansion out(state.modes(), state.n_max());
    for (const auto& [occ, amp] : state.terms()) {
        const int p = occ[ih], q = occ[iv];
        const cd coeff = amp / amp_factor(occ);
        for (int i = 0; i <= p; ++i)
            for (int j = 0; j <= q; ++j) {
                const cd c = coeff * binomial(p, i) * binomial(q, j) *
                             std::pow(a, i + q - j) * cpow(refl_h, p - i) * cpow(trans_v, j);
                Occupation o(occ);
                o[ih] = std::uint8_t(i + j);
                o[iv] = std::uint8_t((p - i) + (q - j));
                out.add_amplitude(o, c * amp_factor(o));
            }
    }
    out.prune();
    return out;
}

}  // namespace

PostselectResult postselect(const FockExpansion& state, const CoincidencePattern& pattern) {
    if (pattern.modes.empty()) throw std::domain_error("postselect: empty pattern");
    int n_qubits = 0;
    for (const AnalyzedMode& m : pattern.modes)
        if (m.kind == AnalyzedMode::Kind::Qubit) ++n_qubits;
    if (n_qubits < 1 || n_qubits > symstate::kMaxQubits)
        throw std::domain_error("postselect: pattern must read 1..8 qubit modes");

    FockExpansion rotated = state;
    for (const AnalyzedMode& m : pattern.modes)
        if (m.kind == AnalyzedMode::Kind::Project)
            rotated = rotate_analyzer(rotated, m.spatial, m.projector);

    struct SlotPair {
        int h, v;
        AnalyzedMode::Kind kind;
    };
    std::vector<SlotPair> slots;
    std::vector<bool> analyzed(rotated.modes().size(), false);
    for (const AnalyzedMode& m : pattern.modes) {
        const int ih = rotated.mode_index({m.spatial, Pol::H});
        const int iv = rotated.mode_index({m.spatial, Pol::V});
        if (ih < 0 || iv < 0)
            throw std::domain_error("postselect: analyzed mode " + m.spatial + " not present");
        if (analyzed[ih])
            throw std::domain_error("postselect: mode " + m.spatial + " listed twice");
        analyzed[ih] = analyzed[iv] = true;
        slots.push_back({ih, iv, m.kind});
    }

    // Group terms by everything that is traced out: loss and spectator
    // occupations, per-mode photon counts, and the reading of any detector
    // that caught more than one photon. Readings of single-photon detectors
    // stay coherent within a group.
    std::map<std::vector<int>, std::map<std::size_t, cd>> groups;
    double prob = 0.0;
    std::vector<int> aux;
    for (const auto& [occ, amp] : rotated.terms()) {
        aux.clear();
        std::size_t q = 0;
        bool ok = true;
        for (const SlotPair& s : slots) {
            const int nh = occ[s.h], nv = occ[s.v];
            if (s.kind == AnalyzedMode::Kind::Project) {
                if (nh < 1 || nv != 0) {  // click at v, silence at v-perp
                    ok = false;
                    break;
                }
                aux.push_back(nh);
            } else {
                if ((nh > 0) == (nv > 0)) {  // no click, or both detectors fired
                    ok = false;
                    break;
                }
                const int reading = nv > 0 ? 1 : 0;
                const int count = nh + nv;
                q = (q << 1) | std::size_t(reading);
                aux.push_back(count);
                aux.push_back(count >= 2 ? reading : -1);
            }
        }
        if (!ok) continue;
        for (std::size_t i = 0; i < occ.size(); ++i)
            if (!analyzed[i]) aux.push_back(occ[i]);
        groups[aux][q] += amp;
        prob += std::norm(amp);
    }

    if (groups.empty() || prob < 1e-300)
        throw empty_postselection_error("postselect: pattern matched no term");

    const std::size_t dim = std::size_t{1} << n_qubits;
    std::vector<cd> rho(dim * dim, cd{0.0, 0.0});
    for (const auto& [key, vec] : groups)
        for (const auto& [qi, ai] : vec)
            for (const auto& [qj, aj] : vec) rho[qi * dim + qj] += ai * std::conj(aj) / prob;

    return PostselectResult{DensityMatrix(n_qubits, std::move(rho)), prob};
}

FockExpansion five_photon_terms(const SourceParams& params) {
    if (params.n_max < 5) throw std::domain_error("five_photon_terms: need n_max >= 5");
    const FockExpansion product =
        tensor_product(wcb_state(params.z_w, params.wcb_polarization, 5),
                       spdc_state(params.z_dc, 5));
    FockExpansion sector = restrict_photon_number(product, 5, 5);

    // Drop the vacuum prefactors common to every term.
    const double pref =
        std::sqrt(1.0 - std::norm(params.z_dc)) * std::exp(-0.5 * std::norm(params.z_w));
    FockExpansion out(sector.modes(), sector.n_max());
    for (const auto& [occ, amp] : sector.terms()) out.add_amplitude(occ, amp / pref);
    return out;
}

double f_w4_analytic(double z_dc_abs, double z_w_abs) {
    if (z_dc_abs <= 0.0) throw std::domain_error("f_w4_analytic: need |z_dc| > 0");
    return 1.0 / (1.0 + std::pow(z_w_abs, 4) / (9.0 * z_dc_abs * z_dc_abs));
}

double f_ghz4_analytic(double z_dc_abs, double z_w_abs, double phi_w) {
    if (z_dc_abs <= 0.0 || z_w_abs <= 0.0)
        throw std::domain_error("f_ghz4_analytic: need |z_dc| > 0 and |z_w| > 0");
    const double k = z_dc_abs / (z_w_abs * z_w_abs);
    const double den = 2.0 + 36.0 * k * k - 12.0 * k * std::cos(2.0 * phi_w);
    if (std::abs(den) < 1e-300) throw std::domain_error("f_ghz4_analytic: zero denominator");
    return 1.0 - 1.0 / den;
}

}  // namespace dsim::fock
