#pragma once

#include "blab/spectral_field.hpp"

namespace blab {

struct NormReport {
  double sobolev_s = 0;
  double gevrey_sigma = 0;
  double l2 = 0;
};

/// |f|_0 = (sum_k |W_k|^2)^{1/2}, i.e. the L2 norm per unit volume.
double l2_norm(const SpectralField& f);
/// (sum_k (1+|k'|^2)^s |W_k|^2)^{1/2}
double sobolev_norm(const SpectralField& f, double s);
/// (sum_k e^{2 sigma |k|} |W_k|^2)^{1/2}, +inf if a term overflows.
double gevrey_norm(const SpectralField& f, double sigma);
NormReport norms(const SpectralField& f, double s, double sigma);

/// sum_k Re(a_k conj(b_k)) = (1/vol) int a b dx for real fields.
double inner(const SpectralField& a, const SpectralField& b);

/// Largest |W_k + s W_{k1,k2,-k3}| over k, s = -1 (even) or +1 (odd), i.e.
/// the departure from the tagged parity; 0 for Parity::none.
double parity_error(const SpectralField& f);

}  // namespace blab
