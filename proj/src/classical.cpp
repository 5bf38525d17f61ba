#include "dpa/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "dpa/errors.hpp"

namespace dpa {

namespace {

void require(bool ok, const std::string& what)
{
    if (!ok) throw std::invalid_argument("ClassicalParams: " + what);
}

State axpy(const State& y, double a, const State& k)
{
    return {y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2], y[3] + a * k[3]};
}

bool finite(const State& s)
{
    return std::all_of(s.begin(), s.end(), [](double v) { return std::isfinite(v); });
}

State hermite(const State& y0, const State& s0, const State& y1, const State& s1, double h, double th)
{
    const double t2 = th * th;
    const double t3 = t2 * th;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + th;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    State out;
    for (std::size_t j = 0; j < 4; ++j) out[j] = h00 * y0[j] + h10 * h * s0[j] + h01 * y1[j] + h11 * h * s1[j];
    return out;
}

// Nodes of the last N + 2 steps; enough for every delayed lookup when tau = N h.
class RollingHistory {
public:
    RollingHistory(std::size_t capacity, double h, State initial)
        : h_(h), initial_(initial), y_(capacity), s_(capacity)
    {
    }

    void set_state(std::size_t n, const State& y) { y_[n % y_.size()] = y; }
    void set_slope(std::size_t n, const State& s) { s_[n % s_.size()] = s; }

    State at(double t) const
    {
        if (t <= 0.0) return initial_;
        const double r = t / h_;
        const double nearest = std::round(r);
        if (std::abs(r - nearest) < 1e-9) return y_[static_cast<std::size_t>(nearest) % y_.size()];
        const auto i = static_cast<std::size_t>(std::floor(r));
        const std::size_t a = i % y_.size();
        const std::size_t b = (i + 1) % y_.size();
        return hermite(y_[a], s_[a], y_[b], s_[b], h_, r - static_cast<double>(i));
    }

private:
    double h_;
    State initial_;
    std::vector<State> y_;
    std::vector<State> s_;
};

Eigen::Matrix4cd char_matrix(const DelayedLinearization& lin, cplx lambda, Eigen::Matrix4cd* dmat)
{
    const cplx decay = std::exp(-lambda * lin.tau);
    Eigen::Matrix4cd m = -lin.A.cast<cplx>() - lin.B.cast<cplx>() * decay;
    m.diagonal().array() += lambda;
    if (dmat) {
        *dmat = lin.B.cast<cplx>() * (lin.tau * decay);
        dmat->diagonal().array() += 1.0;
    }
    return m;
}

}  // namespace

ClassicalParams::ClassicalParams(const ClassicalValues& v) : v_(v)
{
    require(std::isfinite(v.kappa_b) && std::isfinite(v.kappa_c) && std::isfinite(v.loss) && std::isfinite(v.phi) &&
                std::isfinite(v.tau) && std::isfinite(v.delta) && std::isfinite(v.kappa_p) && std::isfinite(v.x),
            "all parameters must be finite");
    require(v.kappa_b >= 0.0 && v.kappa_c >= 0.0, "mirror rates must be >= 0");
    require(v.kappa_b + v.kappa_c > 0.0, "kappa_b + kappa_c must be > 0");
    require(v.loss >= 0.0 && v.loss <= 1.0, "loss must lie in [0, 1]");
    require(v.tau >= 0.0, "tau must be >= 0");
    require(v.kappa_p > 0.0, "kappa_p must be > 0");
    require(v.x >= 0.0, "x must be >= 0");
}

ClassicalParams ClassicalParams::with_feedback_strength(double k, ClassicalValues rest)
{
    ParamValues pv;
    pv.phi = rest.phi;
    pv.tau = rest.tau;
    pv.delta = rest.delta;
    const SystemParams sp = SystemParams::with_feedback_strength(k, rest.loss, pv);
    rest.kappa_b = sp.kappa_b();
    rest.kappa_c = sp.kappa_c();
    return ClassicalParams(rest);
}

double ClassicalParams::feedback() const { return 2.0 * std::sqrt(v_.kappa_b * v_.kappa_c * (1.0 - v_.loss)); }

ClassicalParams ClassicalParams::with_x(double x) const
{
    auto v = v_;
    v.x = x;
    return ClassicalParams(v);
}

ClassicalParams ClassicalParams::with_tau(double tau) const
{
    auto v = v_;
    v.tau = tau;
    return ClassicalParams(v);
}

ClassicalParams ClassicalParams::with_kappa_p(double kappa_p) const
{
    auto v = v_;
    v.kappa_p = kappa_p;
    return ClassicalParams(v);
}

SystemParams ClassicalParams::undepleted() const
{
    ParamValues pv;
    pv.kappa_b = v_.kappa_b;
    pv.kappa_c = v_.kappa_c;
    pv.loss = v_.loss;
    pv.phi = v_.phi;
    pv.tau = v_.tau;
    pv.delta = v_.delta;
    pv.eps_mag = kappa() * v_.x;
    return SystemParams(pv);
}

State dde_rhs(const State& s, const State& delayed, const ClassicalParams& p)
{
    const cplx e = signal_of(s);
    const cplx ep = pump_of(s);
    const cplx ed = signal_of(delayed);
    const double kappa = p.kappa();
    const cplx feedback = std::polar(p.feedback(), p.phi());
    const cplx de = -cplx(kappa, p.delta()) * e + kappa * std::conj(e) * ep - feedback * ed;
    const cplx dp = -p.kappa_p() * (ep + e * e - p.x());
    return make_state(de, dp);
}

ClassicalTrajectory::ClassicalTrajectory(double tau, double kappa, double step, State history)
    : tau_(tau), kappa_(kappa), step_(step), history_(history)
{
}

void ClassicalTrajectory::append(double t, const State& s, const State& slope)
{
    if (!times_.empty() && !(t > times_.back()))
        throw std::invalid_argument("ClassicalTrajectory: node times must increase");
    times_.push_back(t);
    states_.push_back(s);
    slopes_.push_back(slope);
}

State ClassicalTrajectory::state_at(double t) const
{
    if (t <= 0.0 || times_.empty()) return history_;
    if (t > times_.back()) throw std::out_of_range("ClassicalTrajectory: time beyond the integrated span");
    auto it = std::lower_bound(times_.begin(), times_.end(), t);
    const auto j = static_cast<std::size_t>(it - times_.begin());
    if (*it == t) return states_[j];
    if (j == 0) return history_;
    const double h = times_[j] - times_[j - 1];
    return hermite(states_[j - 1], slopes_[j - 1], states_[j], slopes_[j], h, (t - times_[j - 1]) / h);
}

double default_step(const ClassicalParams& p)
{
    double h = 0.01 / p.kappa();
    if (p.tau() > 0.0) {
        h = std::min(h, p.tau() / 40.0);
        h = p.tau() / std::ceil(p.tau() / h - 1e-9);
    }
    return h;
}

ClassicalTrajectory integrate(const ClassicalParams& p, const State& initial, double t_end, double step,
                              std::size_t record_stride)
{
    if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("integrate: step must be > 0");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("integrate: t_end must be >= 0");
    if (!finite(initial)) throw std::invalid_argument("integrate: initial state must be finite");
    if (record_stride == 0) record_stride = 1;
    const double tau = p.tau();
    if (tau > 0.0 && step > tau * (1.0 + 1e-12))
        throw std::invalid_argument("integrate: step must not exceed the delay");

    std::size_t lag = 0;
    double h = step;
    if (tau > 0.0) {
        lag = static_cast<std::size_t>(std::ceil(tau / step - 1e-9));
        h = tau / static_cast<double>(lag);
    }

    ClassicalTrajectory traj(tau, p.kappa(), h, initial);
    RollingHistory hist(lag + 2, h, initial);
    auto f = [&](const State& y, double t) { return dde_rhs(y, tau > 0.0 ? hist.at(t - tau) : y, p); };

    const auto full = static_cast<std::size_t>(std::floor(t_end / h + 1e-9));
    const double tail = t_end - static_cast<double>(full) * h;
    const std::size_t total = full + (tail > 1e-9 * h ? 1 : 0);

    State y = initial;
    double t = 0.0;
    hist.set_state(0, y);
    for (std::size_t n = 0; n < total; ++n) {
        const double hh = n < full ? h : tail;
        const State k1 = f(y, t);
        hist.set_slope(n, k1);
        if (n % record_stride == 0) traj.append(t, y, k1);
        const State k2 = f(axpy(y, 0.5 * hh, k1), t + 0.5 * hh);
        const State k3 = f(axpy(y, 0.5 * hh, k2), t + 0.5 * hh);
        const State k4 = f(axpy(y, hh, k3), t + hh);
        for (std::size_t j = 0; j < 4; ++j) y[j] += hh / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        t = n + 1 <= full ? static_cast<double>(n + 1) * h : t_end;
        if (!finite(y))
            throw NumericalError("integrate: non-finite state at t = " + std::to_string(t) +
                                 " (overflow; the trajectory diverged)");
        hist.set_state(n + 1, y);
    }
    const State last = f(y, t);
    traj.append(t, y, last);
    return traj;
}

std::string to_string(Branch b)
{
    switch (b) {
    case Branch::trivial: return "trivial";
    case Branch::upper: return "upper";
    case Branch::lower: return "lower";
    }
    return "unknown";
}

double threshold_drive(const ClassicalParams& p)
{
    return std::abs(1.0 + p.feedback() / p.kappa() * std::exp(cplx(0.0, p.phi())));
}

namespace {

bool linearization_stable(const ClassicalParams& p, const DelayedLinearization& lin)
{
    if (p.tau() == 0.0) {
        Eigen::EigenSolver<Eigen::Matrix4d> es(lin.A + lin.B, false);
        return es.eigenvalues().real().maxCoeff() < 0.0;
    }
    const CharacteristicFn g = [&lin](cplx z) { return lin.eval(z); };
    return unstable_root_count(g, lin.unstable_root_bound(), 1e-9) == 0;
}

}  // namespace

std::vector<SteadyState> steady_states(const ClassicalParams& p, bool assess)
{
    std::vector<SteadyState> out;
    SteadyState trivial;
    trivial.signal = 0.0;
    trivial.pump = p.x();
    trivial.branch = Branch::trivial;
    trivial.x = p.x();
    out.push_back(trivial);

    const double x = p.x();
    if (x > threshold_drive(p)) {
        if (p.delta() != 0.0)
            throw std::domain_error("steady_states: nontrivial branches are only available for Delta = 0");
        const double kr = p.feedback() / p.kappa();
        const double s = kr * std::sin(p.phi());
        const double xi = std::sqrt(x * x - s * s);
        const double zeta = xi - (1.0 + kr * std::cos(p.phi()));
        const double sgn = phase_is_real(p.phi()) ? 0.0 : (s > 0.0 ? 1.0 : -1.0);
        // 1 - xi / x = s^2 / (x (x + xi)) without cancellation
        const cplx shape(std::sqrt(1.0 + xi / x), -sgn * std::sqrt(s * s / (x * (x + xi))));
        const cplx amp = std::sqrt(zeta / 2.0) * shape;
        const cplx pump = cplx(x * x - xi * zeta, zeta * s) / x;
        for (Branch b : {Branch::upper, Branch::lower}) {
            SteadyState ss;
            ss.signal = b == Branch::upper ? amp : -amp;
            ss.pump = pump;
            ss.branch = b;
            ss.x = x;
            out.push_back(ss);
        }
    }
    if (assess)
        for (auto& ss : out) ss.stable = linearization_stable(p, linearize_at(p, ss));
    return out;
}

DelayedLinearization linearize_at(const ClassicalParams& p, const SteadyState& ss)
{
    const double kappa = p.kappa();
    const cplx e = ss.signal;
    const cplx ep = ss.pump;
    const cplx feedback = std::polar(p.feedback(), p.phi());
    DelayedLinearization lin;
    lin.tau = p.tau();
    lin.A.setZero();
    lin.B.setZero();
    for (int j = 0; j < 4; ++j) {
        State u{0.0, 0.0, 0.0, 0.0};
        u[static_cast<std::size_t>(j)] = 1.0;
        const cplx de = signal_of(u);
        const cplx dp = pump_of(u);
        const cplx a_sig = -cplx(kappa, p.delta()) * de + kappa * (std::conj(de) * ep + std::conj(e) * dp);
        const cplx a_pump = -p.kappa_p() * (dp + 2.0 * e * de);
        const cplx b_sig = -feedback * de;
        lin.A.col(j) << a_sig.real(), a_sig.imag(), a_pump.real(), a_pump.imag();
        lin.B.col(j) << b_sig.real(), b_sig.imag(), 0.0, 0.0;
    }
    return lin;
}

CharEval DelayedLinearization::eval(cplx lambda) const
{
    Eigen::Matrix4cd dm;
    const Eigen::Matrix4cd m = char_matrix(*this, lambda, &dm);
    CharEval ev;
    ev.value = m.determinant();
    // d det / d lambda = sum over columns of det with that column differentiated
    cplx d = 0.0;
    for (int j = 0; j < 4; ++j) {
        Eigen::Matrix4cd mj = m;
        mj.col(j) = dm.col(j);
        d += mj.determinant();
    }
    ev.derivative = d;
    // product of cancellation-free row magnitudes
    const double decay = std::abs(std::exp(-lambda * tau));
    double bound = 1.0;
    for (int i = 0; i < 4; ++i) bound *= std::abs(lambda) + A.row(i).cwiseAbs().sum() + decay * B.row(i).cwiseAbs().sum();
    ev.scale = std::max(bound, std::numeric_limits<double>::min());
    return ev;
}

double DelayedLinearization::unstable_root_bound() const { return A.norm() + B.norm(); }

RootSearchResult linearized_roots(const DelayedLinearization& lin, double kappa, std::optional<Region> region)
{
    const double bound = lin.unstable_root_bound();
    Region reg;
    if (region) {
        reg = *region;
    } else {
        double half = std::max(10.0 * kappa, bound + kappa);
        if (lin.tau > 0.0) half = std::max(half, 6.0 * kPi / lin.tau);
        reg.re_min = -5.0 * kappa;
        reg.re_max = std::max(2.0 * kappa, bound + 0.1 * kappa);
        reg.im_min = -half;
        reg.im_max = half;
    }
    // undelayed and delay-free eigenvalues as extra Newton seeds
    std::vector<cplx> seeds;
    for (const Eigen::Matrix4d& m : {Eigen::Matrix4d(lin.A), Eigen::Matrix4d(lin.A + lin.B)}) {
        Eigen::EigenSolver<Eigen::Matrix4d> es(m, false);
        for (int i = 0; i < 4; ++i) seeds.push_back(es.eigenvalues()(i));
    }
    const CharacteristicFn g = [&lin](cplx z) { return lin.eval(z); };
    RootSearchOptions opt;
    opt.seed_step = 0.25 * kappa;
    opt.leaf_size = 2.0 * kappa;
    opt.initial_step = lin.tau > 0.0 ? std::min(0.05 * kappa, 0.25 / lin.tau) : 0.05 * kappa;
    return find_roots(g, reg, opt, seeds);
}

int unstable_root_count(const CharacteristicFn& g, double bound, double margin)
{
    const double r = bound + 0.1;
    for (int attempt = 0; attempt < 5; ++attempt) {
        const double shift = 1e-3 * attempt;
        Region reg;
        reg.re_min = -margin * (1.0 + 0.37 * attempt);
        reg.re_max = r + 0.61 * shift;
        reg.im_min = -r - 0.29 * shift;
        reg.im_max = r + 0.53 * shift;
        try {
            return count_zeros(g, reg, 0.05);
        } catch (const ContourError&) {
        }
    }
    throw NumericalError("unstable_root_count: contour kept meeting zeros");
}

std::string to_string(LongtimeVerdict v)
{
    switch (v) {
    case LongtimeVerdict::converged: return "converged";
    case LongtimeVerdict::oscillating: return "oscillating";
    case LongtimeVerdict::growing: return "growing";
    case LongtimeVerdict::undecidable: return "undecidable";
    }
    return "unknown";
}

LongtimeClassification classify_longtime(const ClassicalTrajectory& traj)
{
    LongtimeClassification c;
    const double span = traj.t_end();
    const double needed = std::max(10.0 * traj.tau(), 50.0 / traj.kappa());
    if (span < needed) {
        c.note = "trajectory shorter than max(10 tau, 50 / kappa); run longer";
        return c;
    }
    const auto& t = traj.times();
    const auto& y = traj.states();
    const double start = 0.8 * span;
    const auto first = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), start) - t.begin());
    const std::size_t n = t.size() - first;
    if (n < 8) {
        c.note = "too few recorded nodes in the final window";
        return c;
    }

    double lo[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    double hi[2] = {-lo[0], -lo[1]};
    double amp_lo = lo[0];
    double amp_hi = hi[0];
    double peak_a = 0.0;
    double peak_b = 0.0;
    double mean[2] = {0.0, 0.0};
    const double mid = 0.5 * (start + span);
    for (std::size_t i = first; i < t.size(); ++i) {
        for (int j = 0; j < 2; ++j) {
            lo[j] = std::min(lo[j], y[i][static_cast<std::size_t>(j)]);
            hi[j] = std::max(hi[j], y[i][static_cast<std::size_t>(j)]);
            mean[j] += y[i][static_cast<std::size_t>(j)];
        }
        const double a = std::abs(signal_of(y[i]));
        amp_lo = std::min(amp_lo, a);
        amp_hi = std::max(amp_hi, a);
        (t[i] < mid ? peak_a : peak_b) = std::max(t[i] < mid ? peak_a : peak_b, a);
    }
    c.peak_to_peak = std::max({amp_hi - amp_lo, hi[0] - lo[0], hi[1] - lo[1]});
    if (c.peak_to_peak < 1e-6) {
        c.verdict = LongtimeVerdict::converged;
        return c;
    }
    c.envelope_change = (peak_b - peak_a) / std::max(peak_a, std::numeric_limits<double>::min());

    const double a0 = std::abs(signal_of(traj.history()));
    if (peak_b > 10.0 * std::max(a0, 1e-12) && peak_b > peak_a) {
        c.verdict = LongtimeVerdict::growing;
        return c;
    }
    if (std::abs(c.envelope_change) > 0.02) {
        c.note = c.envelope_change < 0.0 ? "envelope still decaying; run longer" : "envelope still changing; run longer";
        return c;
    }

    // zero crossings of the detrended quadrature with the larger swing
    const int q = (hi[0] - lo[0]) >= (hi[1] - lo[1]) ? 0 : 1;
    const double centre = mean[q] / static_cast<double>(n);
    std::vector<double> ups;
    for (std::size_t i = first + 1; i < t.size(); ++i) {
        const double u0 = y[i - 1][static_cast<std::size_t>(q)] - centre;
        const double u1 = y[i][static_cast<std::size_t>(q)] - centre;
        if (u0 < 0.0 && u1 >= 0.0) ups.push_back(t[i - 1] + (t[i] - t[i - 1]) * (-u0) / (u1 - u0));
    }
    if (ups.size() < 3) {
        c.note = "fewer than three oscillation cycles in the final window; run longer";
        return c;
    }
    double sum = 0.0;
    for (std::size_t i = 1; i < ups.size(); ++i) sum += ups[i] - ups[i - 1];
    const double period = sum / static_cast<double>(ups.size() - 1);
    double dev = 0.0;
    for (std::size_t i = 1; i < ups.size(); ++i) dev = std::max(dev, std::abs(ups[i] - ups[i - 1] - period));
    if (dev > 0.05 * period) {
        c.note = "bounded but not periodic";
        return c;
    }
    c.verdict = LongtimeVerdict::oscillating;
    c.period = period;
    return c;
}

}  // namespace dpa
