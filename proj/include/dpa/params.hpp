#pragma once

#include <complex>

namespace dpa {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Raw parameter bundle used to build a SystemParams. All rates are in units
/// of the total cavity decay rate unless the caller chooses otherwise; every
/// formula in the library uses kappa = kappa_b + kappa_c explicitly.
struct ParamValues {
    double kappa_b = 0.5;   // left mirror field decay rate
    double kappa_c = 0.5;   // right mirror field decay rate
    double loss = 0.0;      // power loss fraction L of the feedback loop
    double phi = 0.0;       // feedback loop phase shift
    double tau = 0.0;       // feedback delay
    double delta = 0.0;     // detuning omega_a - omega_p / 2
    double eps_mag = 0.0;   // pump strength |eps|
    double eps_phase = 0.0; // pump phase theta
};

/// Validated, immutable physical parameters of the DPA with delayed coherent
/// feedback. Construction throws std::invalid_argument on any violation, so
/// every downstream routine may assume validity.
class SystemParams {
public:
    SystemParams() : SystemParams(ParamValues{}) {}
    explicit SystemParams(const ParamValues& v);

    /// Symmetric-or-skewed cavity with kappa = 1 chosen so that the feedback
    /// strength 2 sqrt(kappa_b kappa_c (1 - L)) equals `k`. The larger rate is
    /// assigned to kappa_b. Requires k^2 <= 1 - L.
    static SystemParams with_feedback_strength(double k, double loss, ParamValues rest);

    double kappa_b() const { return v_.kappa_b; }
    double kappa_c() const { return v_.kappa_c; }
    double loss() const { return v_.loss; }
    double phi() const { return v_.phi; }
    double tau() const { return v_.tau; }
    double delta() const { return v_.delta; }
    double eps_mag() const { return v_.eps_mag; }
    double eps_phase() const { return v_.eps_phase; }
    const ParamValues& values() const { return v_; }

    SystemParams with_tau(double tau) const;
    SystemParams with_eps(double eps_mag) const;
    SystemParams with_delta(double delta) const;
    SystemParams with_phi(double phi) const;
    SystemParams with_loss(double loss) const;

private:
    ParamValues v_;
};

/// kappa = kappa_b + kappa_c.
double total_kappa(const SystemParams& p);

/// k = 2 sqrt(kappa_b kappa_c (1 - L)).
double feedback_strength(const SystemParams& p);

/// |eps_Delta| = sqrt(|eps|^2 - Delta^2). Throws std::domain_error for |Delta| > |eps|.
double detuned_pump(const SystemParams& p);

/// True when sin(phi) vanishes to 1e-12, i.e. phi is a multiple of pi.
bool phase_is_real(double phi);

/// Complex response functions of the linearised cavity at one sideband frequency.
struct ResponseValues {
    double nu = 0.0;
    cplx d_plus;
    cplx d_minus;
    cplx m;
    cplx f_b;
    cplx f_c;
};

cplx d_plus(const SystemParams& p, double nu);
cplx d_minus(const SystemParams& p, double nu);
cplx f_b(const SystemParams& p, double nu);
cplx f_c(const SystemParams& p, double nu);

ResponseValues response_at(const SystemParams& p, double nu);

}  // namespace dpa
