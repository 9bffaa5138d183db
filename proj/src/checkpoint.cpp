#include "blab/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace blab {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian host");

constexpr char kMagic[5] = {'B', 'L', 'A', 'B', '1'};

template <class T>
void put(std::ofstream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
  T v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw Error("checkpoint: truncated file");
  return v;
}

template <class F>
void for_each_lex(const Grid& g, F&& f) {
  const int h0 = g.N[0] / 2, h1 = g.N[1] / 2, h2 = g.N[2] / 2;
  for (int a = -h0 + 1; a < h0; ++a)
    for (int b = -h1 + 1; b < h1; ++b)
      for (int c = -h2 + 1; c < h2; ++c) f(IVec3{a, b, c});
}

}  // namespace

const SpectralField& Checkpoint::get(const std::string& name) const {
  for (const auto& [n, f] : arrays)
    if (n == name) return f;
  throw Error("checkpoint: no array named '" + name + "'");
}

void write_checkpoint(const std::string& path, const Grid& g, const std::vector<NamedField>& arrays) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("checkpoint: cannot open '" + path + "' for writing");
  os.write(kMagic, 5);
  for (double l : g.L) put<double>(os, l);
  for (int n : g.N) put<std::uint32_t>(os, static_cast<std::uint32_t>(n));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(arrays.size()));
  for (const auto& [name, f] : arrays) {
    require_same_grid(g, f.grid(), "write_checkpoint");
    put<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    put<std::uint8_t>(os, static_cast<std::uint8_t>(f.parity()));
    for_each_lex(g, [&](const IVec3& k) {
      const cplx c = f.coeffs()[g.flat_k(k)];
      put<double>(os, c.real());
      put<double>(os, c.imag());
    });
  }
  if (!os) throw Error("checkpoint: write failed for '" + path + "'");
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("checkpoint: cannot open '" + path + "'");
  char magic[5];
  if (!is.read(magic, 5) || std::memcmp(magic, kMagic, 5) != 0)
    throw Error("checkpoint: bad magic in '" + path + "'");
  Checkpoint cp;
  for (double& l : cp.grid.L) l = get<double>(is);
  for (int& n : cp.grid.N) n = static_cast<int>(get<std::uint32_t>(is));
  cp.grid.validate();
  const auto count = get<std::uint32_t>(is);
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto len = get<std::uint32_t>(is);
    if (len > 4096) throw Error("checkpoint: implausible array name length");
    std::string name(len, '\0');
    if (!is.read(name.data(), len)) throw Error("checkpoint: truncated file");
    const auto par = get<std::uint8_t>(is);
    if (par > 2) throw Error("checkpoint: bad parity tag");
    SpectralField f(cp.grid, static_cast<Parity>(par));
    for_each_lex(cp.grid, [&](const IVec3& k) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      f.coeffs()[cp.grid.flat_k(k)] = cplx(re, im);
    });
    cp.arrays.emplace_back(std::move(name), std::move(f));
  }
  return cp;
}

}  // namespace blab
