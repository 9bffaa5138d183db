#pragma once

#include "blab/operators.hpp"

namespace blab {

/// Prognostic primitive variables: horizontal velocity (u, v), even in z,
/// and density perturbation rho, odd in z.
struct PrimitiveState {
  SpectralField u, v, rho;

  static PrimitiveState zero(const Grid& g);
  const Grid& grid() const { return u.grid(); }
  PrimitiveState& operator+=(const PrimitiveState& o);
  PrimitiveState& axpy(double s, const PrimitiveState& o);
};

/// The transformed variables. phi is stored with its z-constant so that
/// phi(z=0) = 0; that constant never reaches (v, rho).
struct QGDecomposition {
  SpectralField q;
  SpectralField vbar_u, vbar_v;
  SpectralField chi;
  SpectralField phi;

  static QGDecomposition zero(const Grid& g);
  const Grid& grid() const { return q.grid(); }
};

struct Reconstruction {
  PrimitiveState W;
  SpectralField w;
  SpectralField p;
};

struct ForcingSet {
  SpectralField fu, fv, frho;
  SpectralField f_q;
  SpectralField f_chi;
  SpectralField fbar_u, fbar_v;
  /// d_zz f_phi; f_phi itself is never needed.
  SpectralField f_phi_zz;

  bool is_zero() const;
};

/// Throws Error if u, v are not even, rho not odd (relative tolerance tol),
/// or if the state carries barotropic divergence, which the rigid lid forbids.
void check_state(const PrimitiveState& W, double tol = 1e-12);

QGDecomposition decompose(const PrimitiveState& W);
Reconstruction reconstruct(const QGDecomposition& d);

ForcingSet derive_forcings(const SpectralField& fu, const SpectralField& fv,
                           const SpectralField& frho);
ForcingSet zero_forcing(const Grid& g);

/// Removes the divergent part of the k3 = 0, (k1,k2) != 0 sector of a
/// horizontal vector field: the rigid-lid surface pressure projection.
void remove_barotropic_divergence(SpectralField& a, SpectralField& b);

/// Total energy (|v|_0^2 + |rho|_0^2) / 2.
double energy(const PrimitiveState& W);
/// max of parity_error over the components.
double parity_error(const PrimitiveState& W);

}  // namespace blab
