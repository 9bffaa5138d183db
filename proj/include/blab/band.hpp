#pragma once

// Band-limited algebra for the slaving hierarchy. Fields live on the modes
// with integer |k| < kappa; each value is a jet: components indexed by a
// subset S of nilpotent directions (e_i^2 = 0) and, in formal mode, by the
// power j of eps. A formal component (S, j) is kept while j + w(S) <= P,
// where w(S) counts directions that carry one power of eps.

#include <array>
#include <memory>
#include <vector>

#include "blab/fft.hpp"
#include "blab/spectral_field.hpp"

namespace blab {

struct JetLayout {
  int dims = 0;
  unsigned weighted = 0;
  int P = 0;
  bool formal = false;
  std::vector<int> offset, count;
  int ncomp = 0;
  /// (out, a, b) component triples of the product, ordered by output.
  std::vector<std::array<int, 3>> pairs;

  int comp(unsigned S, int j) const { return offset[S] + j; }
  int weight(unsigned S) const;
};
using LayoutPtr = std::shared_ptr<const JetLayout>;

/// Cached layouts; numeric layouts ignore P and weights (one coefficient per
/// subset).
LayoutPtr jet_layout(int dims, unsigned weighted, int P, bool formal);
LayoutPtr numeric_layout(int dims);
/// Same layout with one more direction appended.
LayoutPtr extended_layout(const JetLayout& l, bool weighted);
/// Layout without its last direction.
LayoutPtr reduced_layout(const JetLayout& l);

/// Modes |k| < kappa of a grid and the padded product grid.
class BandSpace {
 public:
  BandSpace(const Grid& g, double kappa);

  const Grid& grid() const { return grid_; }
  double kappa() const { return kappa_; }
  std::size_t size() const { return modes_.size(); }
  const std::vector<IVec3>& modes() const { return modes_; }
  const Shape& phys_shape() const { return M_; }
  std::size_t phys_size() const { return shape_size(M_); }
  /// Per-mode k' components.
  double kx(std::size_t m) const { return kp_[m][0]; }
  double ky(std::size_t m) const { return kp_[m][1]; }
  double kz(std::size_t m) const { return kp_[m][2]; }
  /// Index of the mode -k.
  std::size_t neg(std::size_t m) const { return neg_[m]; }

  std::vector<cplx> restrict(const SpectralField& f) const;
  SpectralField expand(const std::vector<cplx>& c, Parity p) const;

  /// Table of fn(kx', ky', kz') over the band.
  template <class F>
  std::vector<cplx> multiplier(F&& fn) const {
    std::vector<cplx> m(size());
    for (std::size_t i = 0; i < size(); ++i) m[i] = fn(kp_[i][0], kp_[i][1], kp_[i][2]);
    return m;
  }

  // c2r / r2c index maps into the half spectrum of the product grid.
  std::size_t half_size() const;
  const std::vector<std::size_t>& half_index() const { return half_idx_; }
  const std::vector<char>& half_conj() const { return half_conj_; }

 private:
  Grid grid_;
  double kappa_;
  std::vector<IVec3> modes_;
  std::vector<std::array<double, 3>> kp_;
  std::vector<std::size_t> neg_;
  Shape M_;
  std::vector<std::size_t> half_idx_;
  std::vector<char> half_conj_;
};

/// Jet-valued band field: data[comp * size + mode].
struct BandPoly {
  const BandSpace* space = nullptr;
  LayoutPtr layout;
  std::vector<cplx> data;

  BandPoly() = default;
  BandPoly(const BandSpace& s, LayoutPtr l);
  /// Constant (component (0,0)) jet.
  static BandPoly constant(const BandSpace& s, LayoutPtr l, const std::vector<cplx>& c);

  std::size_t nb() const { return space->size(); }
  cplx* comp(int c) { return data.data() + static_cast<std::size_t>(c) * nb(); }
  const cplx* comp(int c) const { return data.data() + static_cast<std::size_t>(c) * nb(); }

  BandPoly& operator+=(const BandPoly& o);
  BandPoly& operator-=(const BandPoly& o);
  BandPoly& axpy(double s, const BandPoly& o);
  BandPoly& operator*=(double s);
  /// Adds c to the (empty subset, order 0) component.
  BandPoly& add_constant(const std::vector<cplx>& c, double s = 1.0);
  double max_abs() const;
};

BandPoly operator+(BandPoly a, const BandPoly& b);
BandPoly operator-(BandPoly a, const BandPoly& b);
BandPoly operator*(double s, BandPoly a);

/// Per-mode multiplier applied to every component.
BandPoly apply_modes(const BandPoly& a, const std::vector<cplx>& mult);

/// Multiplication by eps: a shift in formal mode, a scale otherwise.
BandPoly eps_mul(const BandPoly& a, double eps);
/// Division by eps; in formal mode the top order of each subset becomes 0.
/// Every (S, 0) component must vanish.
BandPoly eps_div(const BandPoly& a, double eps);

/// a embedded in layout l (one more direction, zero there).
BandPoly extend(const BandPoly& a, LayoutPtr l);
/// Components not involving the last direction.
BandPoly reduce(const BandPoly& a);
/// Coefficient of the last direction, as a jet in the reduced layout.
BandPoly last_direction(const BandPoly& a);
/// a + e_last * b, for b in the reduced layout and a in the extended one.
BandPoly with_last_direction(const BandPoly& a, const BandPoly& b);

/// Value of subset S at a numeric eps (sum over orders, lowest first).
std::vector<cplx> evaluate(const BandPoly& a, double eps, unsigned S = 0);
/// Order-j coefficient of subset S (formal) or the subset coefficient.
std::vector<cplx> coefficient(const BandPoly& a, unsigned S, int j);

/// Jet-valued physical samples: data[comp * npts + point].
struct PhysPoly {
  LayoutPtr layout;
  std::size_t npts = 0;
  std::vector<double> data;
  PhysPoly() = default;
  PhysPoly(LayoutPtr l, std::size_t n)
      : layout(std::move(l)), npts(n), data(static_cast<std::size_t>(layout->ncomp) * n, 0.0) {}
  double* comp(int c) { return data.data() + static_cast<std::size_t>(c) * npts; }
  const double* comp(int c) const { return data.data() + static_cast<std::size_t>(c) * npts; }
};

/// Samples on the product grid; each component transformed on its own so
/// that a component's bits never depend on the others.
PhysPoly to_phys(const BandPoly& a);
/// Band coefficients of physical samples (alias-free for products of two
/// band fields).
BandPoly from_phys(const PhysPoly& p, const BandSpace& s);

/// out += a * b in the jet algebra.
void jet_mul_acc(PhysPoly& out, const PhysPoly& a, const PhysPoly& b);
namespace serial {
void jet_mul_acc(PhysPoly& out, const PhysPoly& a, const PhysPoly& b);
}

}  // namespace blab
