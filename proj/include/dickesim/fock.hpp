#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dickesim/density.hpp"
#include "dickesim/errors.hpp"
#include "dickesim/symstate.hpp"

// Truncated multimode bosonic simulator: photon-pair and weak-coherent sources,
// symmetric distribution onto spatial modes, beam-splitter loss channels and
// threshold-detector coincidence postselection.
//
// Amplitudes are stored in the occupation-number basis (<n|n> = 1). The
// substitution operations (mode overlap, distribution, loss, analyzer
// rotation) convert internally to creation-operator monomial coefficients,
// amp = coeff * sqrt(prod n_i!), which makes bosonic enhancement factors
// fall out of the bookkeeping automatically.

namespace dsim::fock {

using cd = std::complex<double>;

inline constexpr double kPruneTol = 1e-15;

enum class Pol : std::uint8_t { H = 0, V = 1 };

struct Mode {
    std::string spatial;
    Pol pol;
    auto operator<=>(const Mode&) const = default;
};

/// Loss ancillas are tagged by prefixing the spatial label.
bool is_loss_mode(const Mode& m);
Mode loss_partner(const Mode& m);

using Occupation = std::vector<std::uint8_t>;

int total_photons(const Occupation& occ);

/// Sparse bosonic state over a fixed, ordered mode list, truncated at a total
/// photon number. Terms with amplitude below kPruneTol are dropped.
class FockExpansion {
  public:
    FockExpansion(std::vector<Mode> modes, int n_max);

    const std::vector<Mode>& modes() const { return modes_; }
    int n_max() const { return n_max_; }
    const std::map<Occupation, cd>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    /// Accumulates; silently drops occupations beyond the truncation.
    void add_amplitude(const Occupation& occ, cd amp);

    cd amplitude(const Occupation& occ) const;
    /// Coefficient of the creation-operator monomial, amp / sqrt(prod n_i!).
    cd monomial_coefficient(const Occupation& occ) const;

    double norm_squared() const;
    int mode_index(const Mode& m) const;  // -1 when absent
    void prune(double tol = kPruneTol);

  private:
    std::vector<Mode> modes_;
    int n_max_;
    std::map<Occupation, cd> terms_;
};

/// Normalized polarization vector h|H> + v|V>.
struct Jones {
    cd h;
    cd v;
};
Jones jones(cd h, cd v);
/// alpha|H> + sqrt(1-alpha^2) e^{i eps}|V>.
Jones jones_weight_phase(double alpha, double eps);

struct SourceParams {
    cd z_dc;                 // pair-source strength, |z_dc| < 1
    cd z_w;                  // weak-beam amplitude |z_w| e^{i phi_w}
    Jones wcb_polarization;  // polarization of the weak beam
    int n_max = 6;           // total-photon truncation
};

struct LossModel {
    double eta_c = 1.0;  // fiber-coupling transmission
    double eta_d = 1.0;  // detector efficiency
    double eta() const { return eta_c * eta_d; }
};

/// Collinear type-II pair source in spatial mode s:
/// sqrt(1-|z|^2) sum_n (i z)^n / n! (s_H^dag s_V^dag)^n |vac>, pairs up to n_max/2.
FockExpansion spdc_state(cd z_dc, int n_max);

/// Weak coherent beam in spatial mode w with Poissonian photon statistics:
/// e^{-|z|^2/2} sum_n z^n / n! (w_j^dag)^n |vac>.
FockExpansion wcb_state(cd z_w, const Jones& polarization, int n_max);

/// Coherent overlap of the two sources in one fiber: w_j^dag -> s_j^dag,
/// re-truncated at the larger of the two truncations.
FockExpansion combine(const FockExpansion& spdc, const FockExpansion& wcb);

/// Product state over disjoint mode sets (sources kept distinguishable).
FockExpansion tensor_product(const FockExpansion& a, const FockExpansion& b);

/// Multiport substitution from_j^dag -> sum_k weight_k out_{k,j}^dag.
/// Weights must satisfy sum w^2 = 1; photon number is preserved per term.
FockExpansion distribute(const FockExpansion& state, const std::string& from_spatial,
                         std::span<const std::string> outputs, std::span<const double> weights);
/// Symmetric split, weight 1/sqrt(k) on every output.
FockExpansion distribute(const FockExpansion& state, const std::string& from_spatial,
                         std::span<const std::string> outputs);

/// One beam splitter per detectable mode: transmission sqrt(eta) stays
/// detectable, reflection sqrt(1-eta) goes to a fresh loss ancilla.
FockExpansion apply_loss(const FockExpansion& state, const LossModel& loss);

/// Terms with total photon number in [min_total, max_total].
FockExpansion restrict_photon_number(const FockExpansion& state, int min_total, int max_total);

/// One analyzed spatial mode of a coincidence pattern. A Qubit mode is read in
/// the H/V basis and contributes one logical qubit (exactly one of its two
/// detectors may fire). A Project mode requires a click in the projector
/// direction and silence in the orthogonal one, and is consumed.
struct AnalyzedMode {
    std::string spatial;
    enum class Kind { Qubit, Project } kind = Kind::Qubit;
    symstate::ProjectorSpec projector{1.0, 0.0};
};

struct CoincidencePattern {
    std::vector<AnalyzedMode> modes;  // qubit order = listing order
};

struct PostselectResult {
    DensityMatrix rho;
    double probability;  // raw event probability of the coincidence pattern
};

/// Threshold-detector postselection. Every analyzed mode must see at least one
/// photon in its required detector and none in the non-required one. Loss
/// modes, photon-number ambiguity and the readings of multi-photon detectors
/// are traced out; single-photon readings keep their coherences.
PostselectResult postselect(const FockExpansion& state, const CoincidencePattern& pattern);

/// The three five-photon emission terms of the combined source, before the
/// fiber overlap (modes w and s kept separate), with the global vacuum
/// prefactors divided out.
FockExpansion five_photon_terms(const SourceParams& params);

// Closed-form five-photon fidelities of the two sweep targets.
double f_w4_analytic(double z_dc_abs, double z_w_abs);
double f_ghz4_analytic(double z_dc_abs, double z_w_abs, double phi_w);

// ---- pipeline driver (pipeline.cpp) ----------------------------------------
//
// phi_w below is the weak-beam phase relative to the pair-emission amplitude
// of the SPDC source (which carries a factor i per pair); the operator phase
// handed to wcb_state is therefore phi_w + pi/2.

enum class SweepTarget { W4, GHZ4Plus };

struct SweepPoint {
    double z_w;
    double phi_w;
    double fidelity;
    double probability;
};

/// Full pipeline (sources -> overlap -> five-way split -> loss -> fivefold
/// coincidence with a projective measurement on mode e) evaluated on a grid.
/// Five-photon truncation reproduces the analytic formulas; six-photon
/// truncation adds the leading correlated-noise order.
std::vector<SweepPoint> fidelity_sweep(SweepTarget target, std::span<const double> z_w_values,
                                       std::span<const double> phi_w_values, double z_dc_abs,
                                       const LossModel& loss, bool six_photons,
                                       int n_max_override = 0);

/// Scenario = one fully specified pipeline run.
struct Scenario {
    SourceParams source;
    std::vector<std::string> outputs;
    std::vector<double> weights;  // empty -> symmetric
    LossModel loss;
    CoincidencePattern pattern;
};

/// State right before postselection (after distribution and loss).
FockExpansion build_distributed_state(const Scenario& scenario);
PostselectResult run_scenario(const Scenario& scenario);

/// Conditional state averaged over a uniform phi_w grid (models an
/// unstabilized relative phase); weights each phase by its event probability.
DensityMatrix phase_averaged_rho(const Scenario& scenario, int phase_samples);

/// Ratio of coherent-overlap to distinguishable-overlap threefold HHV
/// coincidence rates for an H-polarized weak beam; 2 in the low-power limit.
double enhancement_ratio(double z_dc_abs, double z_w_abs, int n_max = 5, double eta = 1.0);

}  // namespace dsim::fock
