#pragma once

#include <memory>
#include <string>
#include <vector>

#include "blab/band.hpp"
#include "blab/decomposition.hpp"
#include "blab/schedule.hpp"

namespace blab {

struct BalanceOptions {
  enum class Mode { automatic, numeric, formal };
  /// automatic: formal series when eps^(levels-1) < 1e-10, else numeric.
  Mode mode = Mode::automatic;
  /// Formal truncation order is (highest level) + extra_orders.
  int extra_orders = 1;
};

/// Band, multipliers and truncated forcing shared by every level.
class BalanceContext {
 public:
  BalanceContext(const Grid& g, const Schedule& sch, const ForcingSet& f, bool formal, int P);

  const Schedule& schedule() const { return sch_; }
  const BandSpace& space() const { return space_; }
  bool formal() const { return formal_; }
  int order() const { return P_; }
  double eps() const { return sch_.eps; }
  double mu() const { return sch_.mu; }
  LayoutPtr base_layout() const;

  // multipliers over the band
  std::vector<cplx> dx, dy, dz, dzz, lap3, inv_lap3, inv_lap2;
  /// w = -d_z^{-1} Delta2 chi.
  std::vector<cplx> w_of_chi;
  /// (k1,k2) = (0,0), k != 0.
  std::vector<cplx> xy_mean;
  /// (k1,k2) != (0,0): the complement of the horizontal mean.
  std::vector<cplx> pz;
  /// (k1,k2) != (0,0) and k3 != 0: where chi and phi live.
  std::vector<cplx> interior;
  /// truncated forcing
  std::vector<cplx> f_q, f_chi, fbar_u, fbar_v, f_phi_zz;

  std::vector<cplx> restrict(const SpectralField& f) const { return space_.restrict(f); }

 private:
  Schedule sch_;
  BandSpace space_;
  bool formal_;
  int P_;
};

/// Slaved fields at one level: mean-shear profile (vu, vv), X and Phi.
struct JetFields {
  BandPoly vu, vv, chi, phi;
  static JetFields zero(const BalanceContext& c, LayoutPtr l);
};

/// P<(u.grad u, u.grad v, u.grad rho) of the state reconstructed from
/// (q, U).
struct JetAdvection {
  BandPoly nu, nv, nrho;
};

JetAdvection jet_advection(const BalanceContext& c, const BandPoly& q, const JetFields& U);
/// P<[mu Delta3 q + f_q - curl(N_v) + d_z N_rho]
BandPoly jet_g(const BalanceContext& c, const BandPoly& q, const JetAdvection& a);
/// Next level from level-n fields, their advection and D U^n G^n.
JetFields jet_update(const BalanceContext& c, const JetFields& U, const JetAdvection& a,
                     const JetFields& D);
/// D U^n(q) . G, by evaluating level n along q + e G with a new direction.
JetFields jet_derivative(const BalanceContext& c, int n, const BandPoly& q, const BandPoly& G);
/// Levels 0..L at q.
std::vector<JetFields> jet_chain(const BalanceContext& c, int L, const BandPoly& q);

/// Slaved fields at one level on the grid, evaluated at the schedule's eps.
struct BalanceSet {
  int n = 0;
  SpectralField vbar_u, vbar_v, X, Phi;
};

/// Directional derivatives of one level.
struct BalanceTangent {
  int n = 0;
  SpectralField dvbar_u, dvbar_v, dX, dPhi;
};

struct BalanceRun {
  std::shared_ptr<const BalanceContext> context;
  BandPoly q;
  std::vector<JetFields> jets;
  std::vector<BalanceSet> levels;
};

/// Resolves the mode for computing levels 0..L.
bool use_formal(const Schedule& sch, int L, const BalanceOptions& opt);

std::shared_ptr<const BalanceContext> make_balance_context(const Grid& g, const Schedule& sch,
                                                           const ForcingSet& f, int L,
                                                           const BalanceOptions& opt = {});

/// Throws unless qtilde is even and supported on |k| < kappa.
void check_slow_state(const SpectralField& qtilde, const Schedule& sch);

/// Levels 0..n_target; n_target <= n_star.
BalanceRun iterate_balance(const SpectralField& qtilde, const Schedule& sch, const ForcingSet& f,
                           int n_target, const BalanceOptions& opt = {});
/// Levels 0..L with a given context and no n_star check.
BalanceRun compute_levels(std::shared_ptr<const BalanceContext> ctx, const SpectralField& qtilde,
                          int L);

std::vector<BalanceTangent> tangent_balance(const SpectralField& qtilde,
                                            const SpectralField& direction, const Schedule& sch,
                                            const ForcingSet& f, int n_target,
                                            const BalanceOptions& opt = {});

/// G at level n of a run, on the grid.
SpectralField g_slow(const BalanceRun& run, int n);
SpectralField g_slow(const SpectralField& qtilde, const Schedule& sch, const ForcingSet& f, int n);

/// (v, rho) of the state reconstructed from qtilde and one level.
PrimitiveState slaved_state(const SpectralField& qtilde, const BalanceSet& B);
PrimitiveState well_prepared_init(const SpectralField& qtilde, const Schedule& sch,
                                  const ForcingSet& f, int n, const BalanceOptions& opt = {});

/// Arrays Vbar_u_<n>, Vbar_v_<n>, X_<n>, Phi_<n> for every level.
void write_balance_checkpoint(const std::string& path, const BalanceRun& run);

}  // namespace blab
