#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dpa/params.hpp"
#include "dpa/roots.hpp"

namespace dpa {

struct ClassicalValues {
    double kappa_b = 0.5;
    double kappa_c = 0.5;
    double loss = 0.0;
    double phi = 0.0;
    double tau = 0.0;
    double delta = 0.0;
    double kappa_p = 1.0;  // pump mode decay rate
    double x = 0.0;        // dimensionless drive
};

/// Parameters of the pump-depleted classical model. Validated at construction.
class ClassicalParams {
public:
    ClassicalParams() : ClassicalParams(ClassicalValues{}) {}
    explicit ClassicalParams(const ClassicalValues& v);

    /// kappa = 1 cavity whose mirror split yields feedback strength k.
    static ClassicalParams with_feedback_strength(double k, ClassicalValues rest);

    double kappa_b() const { return v_.kappa_b; }
    double kappa_c() const { return v_.kappa_c; }
    double loss() const { return v_.loss; }
    double phi() const { return v_.phi; }
    double tau() const { return v_.tau; }
    double delta() const { return v_.delta; }
    double kappa_p() const { return v_.kappa_p; }
    double x() const { return v_.x; }
    const ClassicalValues& values() const { return v_; }

    double kappa() const { return v_.kappa_b + v_.kappa_c; }
    double feedback() const;

    ClassicalParams with_x(double x) const;
    ClassicalParams with_tau(double tau) const;
    ClassicalParams with_kappa_p(double kappa_p) const;

    /// Undepleted-pump counterpart: pump amplitude |eps| = kappa x with phase 0.
    SystemParams undepleted() const;

private:
    ClassicalValues v_;
};

/// Real canonical state (Re eps, Im eps, Re eps_p, Im eps_p).
using State = std::array<double, 4>;

inline cplx signal_of(const State& s) { return {s[0], s[1]}; }
inline cplx pump_of(const State& s) { return {s[2], s[3]}; }
inline State make_state(cplx signal, cplx pump) { return {signal.real(), signal.imag(), pump.real(), pump.imag()}; }

/// Right-hand side of the signal/pump delay equations. `delayed` is the state
/// at t - tau (only its signal part enters).
State dde_rhs(const State& s, const State& delayed, const ClassicalParams& p);

/// Nodes of a method-of-steps run with the slopes needed for cubic Hermite
/// interpolation between them.
class ClassicalTrajectory {
public:
    ClassicalTrajectory(double tau, double kappa, double step, State history);

    void append(double t, const State& s, const State& slope);

    const std::vector<double>& times() const { return times_; }
    const std::vector<State>& states() const { return states_; }
    const std::vector<State>& slopes() const { return slopes_; }
    double tau() const { return tau_; }
    double kappa() const { return kappa_; }
    double step() const { return step_; }
    const State& history() const { return history_; }
    double t_end() const { return times_.empty() ? 0.0 : times_.back(); }

    /// Dense output. t <= 0 returns the constant history; node times return
    /// the stored node exactly.
    State state_at(double t) const;
    cplx signal_at(double t) const { return signal_of(state_at(t)); }
    cplx pump_at(double t) const { return pump_of(state_at(t)); }

private:
    double tau_;
    double kappa_;
    double step_;
    State history_;
    std::vector<double> times_;
    std::vector<State> states_;
    std::vector<State> slopes_;
};

/// min(tau / 40, 0.01 / kappa), shrunk so that tau is an integer number of steps.
double default_step(const ClassicalParams& p);

/// Classical RK4 with a constant history equal to `initial` on [-tau, 0].
/// For tau > 0 the step is reduced to tau / ceil(tau / step) so delayed
/// lookups fall on nodes and midpoints; requires step <= tau. Nodes are
/// recorded every `record_stride` steps (the final node is always kept).
/// Throws NumericalError on a non-finite state.
ClassicalTrajectory integrate(const ClassicalParams& p, const State& initial, double t_end, double step,
                              std::size_t record_stride = 1);

enum class Branch { trivial, upper, lower };

std::string to_string(Branch b);

struct SteadyState {
    cplx signal;
    cplx pump;
    Branch branch = Branch::trivial;
    bool stable = false;
    double x = 0.0;
};

/// x_th = |1 + (k / kappa) e^{i phi}|.
double threshold_drive(const ClassicalParams& p);

/// Trivial state always; the two pitchfork branches for x > x_th.
/// Stability flags come from the rightmost root of the delayed linearisation.
/// Requires Delta = 0 for the nontrivial branches. With `assess` false the
/// stability flags are left unset.
std::vector<SteadyState> steady_states(const ClassicalParams& p, bool assess = true);

/// Linearisation d/dt u = A u(t) + B u(t - tau) in the real 4-dimensional state.
struct DelayedLinearization {
    Eigen::Matrix4d A;
    Eigen::Matrix4d B;
    double tau = 0.0;

    /// det(lambda I - A - B e^{-lambda tau}), its derivative and a magnitude scale
    /// (product over rows of |lambda| + sum |A_ij| + |e^{-lambda tau}| sum |B_ij|).
    CharEval eval(cplx lambda) const;
    cplx characteristic(cplx lambda) const { return eval(lambda).value; }
    /// Bound on |lambda| for roots with Re(lambda) >= 0.
    double unstable_root_bound() const;
};

DelayedLinearization linearize_at(const ClassicalParams& p, const SteadyState& ss);

/// Characteristic roots of a linearisation; default region mirrors the
/// undepleted-pump search region.
RootSearchResult linearized_roots(const DelayedLinearization& lin, double kappa,
                                  std::optional<Region> region = std::nullopt);

/// Number of characteristic roots with Re(lambda) > -margin.
int unstable_root_count(const CharacteristicFn& g, double bound, double margin = 1e-9);

enum class LongtimeVerdict { converged, oscillating, growing, undecidable };

std::string to_string(LongtimeVerdict v);

struct LongtimeClassification {
    LongtimeVerdict verdict = LongtimeVerdict::undecidable;
    double peak_to_peak = 0.0;     // of the signal over the final 20 % of the run
    double period = 0.0;           // oscillating only
    double envelope_change = 0.0;  // relative change of the peak |eps| between window halves
    std::string note;
};

/// Long-time behaviour from the final 20 % of a trajectory.
LongtimeClassification classify_longtime(const ClassicalTrajectory& traj);

}  // namespace dpa
