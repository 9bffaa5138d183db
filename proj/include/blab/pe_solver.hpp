#pragma once

#include <functional>
#include <string>
#include <vector>

#include "blab/decomposition.hpp"
#include "blab/schedule.hpp"

namespace blab {

/// Prognostic variables of the transformed system: q, the mean shear
/// vz = d_z vbar (k1 = k2 = 0 only), lap_chi = Delta3 chi and phi_zz.
struct QxfState {
  SpectralField q, vz_u, vz_v, lap_chi, phi_zz;

  static QxfState zero(const Grid& g);
  const Grid& grid() const { return q.grid(); }
  QxfState& axpy(double s, const QxfState& o);
  QxfState& operator*=(double s);
  bool finite() const;
};

QxfState to_qxf(const QGDecomposition& d);
QGDecomposition from_qxf(const QxfState& s);
/// phi from phi_zz: -phi_zz / k3'^2 off k3 = 0, the k3 = 0 constant fixed by
/// phi(z=0) = 0 on (k1,k2) != 0.
SpectralField phi_from_phizz(const SpectralField& phi_zz);

struct RhsOptions {
  bool nonlinear = true;
  /// Include the O(1/eps) skew terms and diffusion. Integrating-factor stages
  /// evaluate only the remainder.
  bool linear = true;
  bool forcing = true;
};

/// Advection terms u.grad(u), u.grad(v), u.grad(rho) of a full state with
/// diagnosed w, evaluated alias-free and dealiased.
struct Advection {
  SpectralField nu, nv, nrho;
};
Advection advect(const SpectralField& u, const SpectralField& v, const SpectralField& w,
                 const SpectralField& rho);

/// Tendency of (u, v, rho), rigid-lid projected.
PrimitiveState rhs_primitive(const PrimitiveState& W, const Schedule& sch, const ForcingSet& f,
                             const RhsOptions& opt = {});
/// Tendency of (q, vz, Delta3 chi, phi_zz).
QxfState rhs_qxf(const QGDecomposition& d, const Schedule& sch, const ForcingSet& f,
                 const RhsOptions& opt = {});
QxfState rhs_qxf(const QxfState& s, const Schedule& sch, const ForcingSet& f,
                 const RhsOptions& opt = {});

/// Skew part only: -(1/eps)(v_perp + grad p) and (1/eps) w.
PrimitiveState skew_tendency(const PrimitiveState& W, const Schedule& sch);

/// Exact exponential of the linear part over time h, applied in place.
void apply_propagator(QxfState& s, const Schedule& sch, double h);

enum class Scheme { if_rk2, if_rk4 };

struct StepperConfig {
  double dt = 0;
  Scheme scheme = Scheme::if_rk4;
  double t_end = 1.0;
  RhsOptions rhs{};

  /// dt = 0.25 eps min(1, min_k |k3'|/|k'|) over retained modes with k3 != 0.
  static StepperConfig make_default(const Grid& g, const Schedule& sch, double t_end = 1.0);
  /// Throws Error unless dt satisfies both CFL limits.
  void validate(const Grid& g, const Schedule& sch) const;
};

/// min over retained k with k3 != 0 of |k3'| / |k'|.
double min_vertical_ratio(const Grid& g);

QxfState step(const QxfState& s, const Schedule& sch, const StepperConfig& cfg,
              const ForcingSet& f);

struct TrajectoryRow {
  double t, v_l2, rho_l2, energy, parity_error;
};

/// Raised when a step produces non-finite values; carries the last good
/// state and time.
class BlowUp : public Error {
 public:
  BlowUp(const std::string& msg, QxfState state, double t)
      : Error(msg), last_good(std::move(state)), time(t) {}
  QxfState last_good;
  double time;
};

using Observer = std::function<void(double t, const PrimitiveState& W)>;

struct Trajectory {
  std::vector<TrajectoryRow> rows;
  QxfState final_state;
};

/// Integrates from t = 0 to cfg.t_end, calling observe at t = 0 and after
/// every output_every steps and at the final time.
Trajectory integrate(const PrimitiveState& W0, const Schedule& sch, const StepperConfig& cfg,
                     const ForcingSet& f, int output_every = 1, const Observer& observe = {});

TrajectoryRow trajectory_row(double t, const PrimitiveState& W);
void write_trajectory_csv(const std::string& path, const std::vector<TrajectoryRow>& rows);

}  // namespace blab
