// Acceptance suite: one criterion per function, one PASS/FAIL line each.
// Returns the number of failed criteria as the exit code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "dickesim/entanglement.hpp"
#include "dickesim/fock.hpp"
#include "dickesim/symstate.hpp"

using namespace dsim;
using namespace dsim::symstate;
namespace ent = dsim::entanglement;
namespace fk = dsim::fock;

namespace {

constexpr double pi = std::numbers::pi;
const double isq2 = 1.0 / std::sqrt(2.0);

struct Criterion {
    int failures = 0;
    double worst = 0.0;

    void expect(bool ok, double deviation = 0.0) {
        if (!ok) ++failures;
        worst = std::max(worst, deviation);
    }
    void expect_near(double value, double reference, double tol) {
        const double dev = std::abs(value - reference);
        expect(dev <= tol, dev);
    }
};

using CriterionFn = void (*)(Criterion&);

PureState ghz3() {
    return superpose({{isq2, PureState::basis("HHH")}, {isq2, PureState::basis("VVV")}});
}
PureState ghz4_plus() { return superpose({{1.0, dicke({4, 1})}, {1.0, dicke({4, 3})}}); }

double mismatch(const PureState& a, const PureState& b) {
    return std::abs(fidelity_pure(a, b) - 1.0);
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

// 1. Table I: the four non-generic single-projection results on |D_4^(2)>.
void criterion1(Criterion& c) {
    const PureState d42 = dicke({4, 2});
    const PureState w3bar = dicke({3, 2});
    const PureState w3 = dicke({3, 1});
    const PureState g3p = superpose({{1.0, w3}, {1.0, w3bar}});
    const PureState g3m = superpose({{1.0, w3}, {-1.0, w3bar}});

    c.expect_near(mismatch(project_qubit(d42, 4, {1.0, 0.0}).first, w3bar), 0.0, 1e-10);
    c.expect_near(mismatch(project_qubit(d42, 4, {0.0, 0.0}).first, w3), 0.0, 1e-10);
    c.expect_near(mismatch(project_qubit(d42, 4, {isq2, 0.0}).first, g3p), 0.0, 1e-10);
    c.expect_near(mismatch(project_qubit(d42, 4, {isq2, pi}).first, g3m), 0.0, 1e-10);
}

// 2. Three-tangle curve: endpoints zero, peak 1/3, filtered peak 1.
void criterion2(Criterion& c) {
    const auto curve = ent::tangle_curve(201, false);
    c.expect_near(curve.front().second, 0.0, 1e-9);
    c.expect_near(curve.back().second, 0.0, 1e-9);
    c.expect_near(curve[100].second, 1.0 / 3.0, 1e-9);

    const auto filtered = ent::tangle_curve(201, true);
    double peak = 0.0;
    for (const auto& [theta, tau] : filtered) peak = std::max(peak, tau);
    c.expect_near(filtered[100].second, 1.0, 1e-9);
    c.expect_near(peak, 1.0, 1e-9);
}

// 3. The T+ filter on every qubit maps G3+ onto GHZ3/3 with probability 1/9.
void criterion3(Criterion& c) {
    const PureState g3p = superpose({{1.0, dicke({3, 1})}, {1.0, dicke({3, 2})}});
    const std::vector<LocalOperator> tp(3, ent::t_plus());
    const auto [state, p] = apply_local(g3p, tp);
    const PureState target = ghz3();
    double worst = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i)
        worst = std::max(worst, std::abs(state.amp(i) * std::sqrt(p) - target.amp(i) / 3.0));
    c.expect(worst <= 1e-12, worst);
    c.expect_near(p, 1.0 / 9.0, 1e-12);
}

// 4. Table II: six rows via delta5 + project_qubit.
void criterion4(Criterion& c) {
    struct Row {
        double a, e, a1, e1;
        PureState target;
    };
    const double th = 0.683, eps = 1.234;  // generic angles for the last row
    const PureState generic = superpose(
        {{std::cos(th) * std::cos(th), dicke({4, 1})},
         {-std::sin(th) * std::sin(th) * std::polar(1.0, 2 * eps), dicke({4, 3})}});
    const std::vector<Row> rows{
        {1.0, 0.0, 1.0, 0.0, dicke({4, 2})},
        {0.0, 0.0, 0.0, 0.0, dicke({4, 2})},
        {1.0, 0.0, 0.0, 0.0, dicke({4, 1})},
        {0.0, 0.0, 1.0, 0.0, dicke({4, 3})},
        {isq2, pi / 2, isq2, -pi / 2, ghz4_plus()},
        {std::cos(th), eps, std::sin(th), eps - pi, generic},
    };
    for (const Row& row : rows) {
        const PureState out =
            project_qubit(delta5(row.a, row.e), 5, {row.a1, row.e1}).first;
        c.expect_near(mismatch(out, row.target), 0.0, 1e-10);
    }
}

// 5. Formula-evaluated four- and three-qubit states equal the projection
//    pipeline on 100 random parameter points.
void criterion5(Criterion& c) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const double a = uni(rng), e = 2 * pi * uni(rng);
        const double a1 = uni(rng), e1 = 2 * pi * uni(rng);
        const double a2 = uni(rng), e2 = 2 * pi * uni(rng);
        const PureState d4 = project_qubit(delta5(a, e), 5, {a1, e1}).first;
        const PureState d3 = project_qubit(d4, 4, {a2, e2}).first;
        c.expect_near(mismatch(delta4_formula(a, e, a1, e1), d4), 0.0, 1e-10);
        c.expect_near(mismatch(delta3(a, e, a1, e1, a2, e2), d3), 0.0, 1e-10);
    }
}

// 6. Five-photon-only pipeline equals the closed forms on a 20x20 grid,
//    and both fidelities exceed 0.99 below |z_w| = 0.2.
void criterion6(Criterion& c) {
    const auto zws = linspace(0.03, 0.60, 20);
    const auto phis = linspace(0.0, pi, 20);
    const fk::LossModel no_loss{1.0, 1.0};

    const auto w4 = fk::fidelity_sweep(fk::SweepTarget::W4, zws, phis, 0.17, no_loss, false);
    for (const auto& p : w4) {
        c.expect_near(p.fidelity, fk::f_w4_analytic(0.17, p.z_w), 1e-10);
        if (p.z_w < 0.2) c.expect(p.fidelity > 0.99);
    }
    const auto ghz =
        fk::fidelity_sweep(fk::SweepTarget::GHZ4Plus, zws, phis, 0.17, no_loss, false);
    for (const auto& p : ghz) {
        c.expect_near(p.fidelity, fk::f_ghz4_analytic(0.17, p.z_w, p.phi_w), 1e-10);
        if (p.z_w < 0.2) c.expect(p.fidelity > 0.99);
    }
}

// 7. Six-photon truncation with eta_c = eta_d = 1/3: peak fidelities and
//    optimum locations of both targets, W4 phase independence, GHZ optimum
//    at phi_w = pi/2, unique interior maxima.
void criterion7(Criterion& c) {
    const fk::LossModel loss{1.0 / 3.0, 1.0 / 3.0};
    const std::vector<double> phi_probe{0.0, 0.9, pi / 2, 2.3};

    const auto zw_w4 = linspace(0.30, 0.48, 19);
    const std::vector<double> phi0{0.0};
    const auto w4 = fk::fidelity_sweep(fk::SweepTarget::W4, zw_w4, phi0, 0.17, loss, true);
    std::size_t best = 0;
    for (std::size_t i = 0; i < w4.size(); ++i)
        if (w4[i].fidelity > w4[best].fidelity) best = i;
    c.expect_near(w4[best].fidelity, 0.776, 0.02);
    c.expect_near(w4[best].z_w, 0.39, 0.03);
    c.expect(best > 0 && best + 1 < w4.size());  // interior maximum

    const std::vector<double> zw_peak{0.39};
    const auto w4_phi = fk::fidelity_sweep(fk::SweepTarget::W4, zw_peak, phi_probe, 0.17, loss, true);
    double lo = 2.0, hi = -1.0;
    for (const auto& p : w4_phi) {
        lo = std::min(lo, p.fidelity);
        hi = std::max(hi, p.fidelity);
    }
    c.expect(hi - lo < 1e-6, hi - lo);

    const auto zw_ghz = linspace(0.50, 0.70, 21);
    const std::vector<double> phi_half{pi / 2};
    const auto ghz = fk::fidelity_sweep(fk::SweepTarget::GHZ4Plus, zw_ghz, phi_half, 0.17, loss, true);
    best = 0;
    for (std::size_t i = 0; i < ghz.size(); ++i)
        if (ghz[i].fidelity > ghz[best].fidelity) best = i;
    c.expect_near(ghz[best].fidelity, 0.701, 0.02);
    c.expect_near(ghz[best].z_w, 0.60, 0.03);
    c.expect(best > 0 && best + 1 < ghz.size());

    const std::vector<double> zw_06{0.60};
    const auto ghz_phi =
        fk::fidelity_sweep(fk::SweepTarget::GHZ4Plus, zw_06, phi_probe, 0.17, loss, true);
    const auto ghz_opt =
        fk::fidelity_sweep(fk::SweepTarget::GHZ4Plus, zw_06, phi_half, 0.17, loss, true);
    for (const auto& p : ghz_phi) c.expect(ghz_opt[0].fidelity >= p.fidelity - 1e-12);
}

// 8. Bosonic enhancement: factor 2 in the low-power limit (double-pair
//    emission suppressed, |z_dc| << |z_w|^2), strictly between 1 and 2 at
//    finite power with higher orders and loss included.
void criterion8(Criterion& c) {
    c.expect_near(fk::enhancement_ratio(3e-8, 3e-4, 5), 2.0, 1e-6);
    const double finite = fk::enhancement_ratio(0.17, 0.3, 5, 1.0 / 9.0);
    c.expect(finite > 1.0 && finite < 2.0, finite);
}

// 9. Witness arithmetic on a state of fidelity 0.844.
void criterion9(Criterion& c) {
    const PureState d42 = dicke({4, 2});
    const PureState noise = PureState::basis("HHHH");
    std::vector<cd> rho(256);
    const auto sig = DensityMatrix::from_pure(d42).elements();
    const auto bg = DensityMatrix::from_pure(noise).elements();
    for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = 0.844 * sig[i] + 0.156 * bg[i];
    const double value =
        ent::witness_value(ent::WitnessSpec(d42, 2.0 / 3.0), DensityMatrix(4, std::move(rho)));
    c.expect_near(value, -0.177, 5e-4);
}

// 10. Randomized property suites across the modules, >= 1000 cases.
void criterion10(Criterion& c) {
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss;
    int cases = 0;

    auto random_state = [&](int n) {
        std::vector<cd> amp(std::size_t{1} << n);
        for (auto& a : amp) a = {gauss(rng), gauss(rng)};
        return PureState(n, std::move(amp));
    };

    // normalization + probability completeness over orthogonal projections
    for (int rep = 0; rep < 250; ++rep, ++cases) {
        const int n = 2 + int(rng() % 4);
        const PureState psi = random_state(n);
        c.expect(std::abs(psi.norm_squared() - 1.0) < 1e-12);
        const double alpha = uni(rng), eps = 2 * pi * uni(rng);
        const int qubit = 1 + int(rng() % n);
        double p = 0.0, q = 0.0;
        try {
            const auto [cond, pp] = project_qubit(psi, qubit, {alpha, eps});
            p = pp;
            c.expect(std::abs(cond.norm_squared() - 1.0) < 1e-12);
        } catch (const annihilation_error&) {
        }
        const ProjectorSpec v(alpha, eps);
        try {
            q = project_qubit(psi, qubit, {v.beta(), eps + pi}).second;
        } catch (const annihilation_error&) {
        }
        c.expect(std::abs(p + q - 1.0) < 1e-12, std::abs(p + q - 1.0));
    }

    // permutation symmetry of Dicke states
    for (int rep = 0; rep < 250; ++rep, ++cases) {
        const int n = 2 + int(rng() % 5);
        const int m = int(rng() % (n + 1));
        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i + 1;
        std::shuffle(perm.begin(), perm.end(), rng);
        c.expect(mismatch(permute_qubits(dicke({n, m}), perm), dicke({n, m})) < 1e-12);
    }

    // local-unitary invariance of the three-tangle
    for (int rep = 0; rep < 250; ++rep, ++cases) {
        const PureState psi = random_state(3);
        std::vector<LocalOperator> ops;
        for (int qq = 0; qq < 3; ++qq) {
            cd a{gauss(rng), gauss(rng)}, b{gauss(rng), gauss(rng)};
            const double nn = std::sqrt(std::norm(a) + std::norm(b));
            a /= nn;
            b /= nn;
            ops.push_back(LocalOperator::unitary({a, b, -std::conj(b), std::conj(a)}));
        }
        const double before = ent::three_tangle(psi).value;
        const double after = ent::three_tangle(apply_local(psi, ops).first).value;
        c.expect(std::abs(before - after) < 1e-9, std::abs(before - after));
    }

    // photon-number conservation and norm preservation under distribution
    const std::vector<std::string> outs{"a", "b", "c"};
    for (int rep = 0; rep < 150; ++rep, ++cases) {
        fk::FockExpansion st({{"s", fk::Pol::H}, {"s", fk::Pol::V}}, 4);
        std::set<int> totals;
        for (int t = 0; t < 4; ++t)
            st.add_amplitude({std::uint8_t(rng() % 3), std::uint8_t(rng() % 3)},
                             cd{gauss(rng), gauss(rng)});
        for (const auto& [occ, amp] : st.terms()) totals.insert(fk::total_photons(occ));
        const fk::FockExpansion out = fk::distribute(st, "s", outs);
        c.expect(std::abs(out.norm_squared() - st.norm_squared()) < 1e-12);
        bool conserved = true;
        for (const auto& [occ, amp] : out.terms())
            conserved = conserved && totals.count(fk::total_photons(occ)) == 1;
        c.expect(conserved);
    }

    // conditional density matrices are Hermitian, positive and unit-trace
    for (int rep = 0; rep < 120; ++rep, ++cases) {
        fk::Scenario sc;
        const double zdc = 0.05 + 0.3 * uni(rng);
        const double zw = 0.1 + 0.5 * uni(rng);
        sc.source = fk::SourceParams{zdc, std::polar(zw, 2 * pi * uni(rng)),
                                     fk::jones_weight_phase(uni(rng), 2 * pi * uni(rng)), 5};
        sc.outputs = {"a", "b", "c", "d", "e"};
        sc.loss = fk::LossModel{0.4 + 0.6 * uni(rng), 1.0};
        for (const char* m : {"a", "b", "c", "d"})
            sc.pattern.modes.push_back({m, fk::AnalyzedMode::Kind::Qubit, {1.0, 0.0}});
        sc.pattern.modes.push_back(
            {"e", fk::AnalyzedMode::Kind::Project, {uni(rng), 2 * pi * uni(rng)}});
        try {
            const auto [rho, prob] = fk::run_scenario(sc);
            double trace = 0.0;
            for (std::size_t i = 0; i < rho.dim(); ++i) trace += rho(i, i).real();
            c.expect(std::abs(trace - 1.0) < 1e-9);
            c.expect(rho.min_eigenvalue() > -1e-10);
            c.expect(prob > 0.0 && prob < 1.0);
        } catch (const empty_postselection_error&) {
            c.expect(true);
        }
    }

    std::printf("         criterion 10 ran %d randomized cases\n", cases);
    c.expect(cases >= 1000);
}

}  // namespace

int main() {
    struct Entry {
        const char* label;
        CriterionFn fn;
        double time_limit;  // seconds
    };
    const std::vector<Entry> entries{
        {"1: Table I single-projection rows (fid 1 within 1e-10)", criterion1, 1.0},
        {"2: tangle curve endpoints 0, peak 1/3, filtered peak 1", criterion2, 60.0},
        {"3: T+ filter maps G3+ onto GHZ3/3, success 1/9", criterion3, 60.0},
        {"4: Table II rows from delta5 + projection (fid 1 within 1e-10)", criterion4, 60.0},
        {"5: formula/projection equivalence on 100 random points", criterion5, 60.0},
        {"6: five-photon sweep matches closed forms on 20x20 grid", criterion6, 300.0},
        {"7: six-photon optima 0.776@0.39 (W4), 0.701@0.6 (GHZ4+)", criterion7, 300.0},
        {"8: bosonic enhancement 2.0 in the low-power limit", criterion8, 60.0},
        {"9: witness on fidelity-0.844 state yields -0.177", criterion9, 60.0},
        {"10: randomized invariant suites (>= 1000 cases)", criterion10, 60.0},
    };

    int failed = 0;
    for (const Entry& e : entries) {
        Criterion c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            e.fn(c);
        } catch (const std::exception& ex) {
            std::printf("[FAIL] criterion %s (exception: %s)\n", e.label, ex.what());
            ++failed;
            continue;
        }
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (dt > e.time_limit) ++c.failures;
        if (c.failures == 0) {
            std::printf("[PASS] criterion %s (worst dev %.2e, %.2f s)\n", e.label, c.worst, dt);
        } else {
            std::printf("[FAIL] criterion %s (%d checks failed, worst dev %.2e, %.2f s)\n",
                        e.label, c.failures, c.worst, dt);
            ++failed;
        }
    }
    std::printf("%d/%zu criteria passed\n", int(entries.size()) - failed, entries.size());
    return failed;
}
