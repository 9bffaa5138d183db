#pragma once

#include <string>
#include <utility>
#include <vector>

#include "blab/spectral_field.hpp"

namespace blab {

using NamedField = std::pair<std::string, SpectralField>;

/// Binary container:
///   "BLAB1" | L1 L2 L3 (f64) | N1 N2 N3 (u32) | count (u32) |
///   count x [ name_len (u32) | name | parity (u8) | coefficients ]
/// Coefficients are (re, im) f64 pairs for every k with |k_i| < N_i/2, in
/// lexicographic order of (k1, k2, k3) from most negative upwards. All
/// numbers are little-endian.
struct Checkpoint {
  Grid grid;
  std::vector<NamedField> arrays;

  const SpectralField& get(const std::string& name) const;
};

void write_checkpoint(const std::string& path, const Grid& g, const std::vector<NamedField>& arrays);
Checkpoint read_checkpoint(const std::string& path);

}  // namespace blab
