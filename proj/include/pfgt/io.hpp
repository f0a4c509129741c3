// io.hpp -- bit-exact writers and readers: PFGT1 snapshots, diagnostics CSV,
// and P5 PGM renderings
#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "pfgt/diagnostics.hpp"
#include "pfgt/errors.hpp"
#include "pfgt/grid.hpp"

namespace pfgt {

namespace iodetail {

// Shortest decimal form that round-trips a double (>= 17 significant digits).
inline std::string fmt_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::uint64_t to_le_bits(double x) {
  std::uint64_t u;
  std::memcpy(&u, &x, sizeof(u));
  if constexpr (std::endian::native == std::endian::big) {
    u = __builtin_bswap64(u);
  }
  return u;
}

inline double from_le_bits(std::uint64_t u) {
  if constexpr (std::endian::native == std::endian::big) {
    u = __builtin_bswap64(u);
  }
  double x;
  std::memcpy(&x, &u, sizeof(x));
  return x;
}

}  // namespace iodetail

// Snapshot file: one ASCII header line
//   PFGT1 <dim> <nx> <ny> <hx> <hy> <time>\n
// (ny = 1 and hy = 0 in 1D) followed by nx*ny little-endian IEEE-754 doubles,
// row-major with y outer.
struct SnapshotData {
  int dim = 1, nx = 0, ny = 1;
  double hx = 0.0, hy = 0.0;
  double time = 0.0;
  std::vector<double> values;
};

inline void write_snapshot(const ScalarField& phi, double time,
                           const std::string& path) {
  const Grid& g = phi.grid;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw format_error("write_snapshot: cannot open " + path);
  out << "PFGT1 " << g.dim << ' ' << g.nx << ' ' << (g.dim == 2 ? g.ny : 1) << ' '
      << iodetail::fmt_g17(g.hx) << ' '
      << iodetail::fmt_g17(g.dim == 2 ? g.hy : 0.0) << ' '
      << iodetail::fmt_g17(time) << '\n';
  std::vector<std::uint64_t> bits(phi.v.size());
  for (std::size_t i = 0; i < phi.v.size(); ++i)
    bits[i] = iodetail::to_le_bits(phi.v[i]);
  out.write(reinterpret_cast<const char*>(bits.data()),
            static_cast<std::streamsize>(bits.size() * sizeof(std::uint64_t)));
  if (!out) throw format_error("write_snapshot: short write to " + path);
}

inline SnapshotData read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("read_snapshot: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw format_error("read_snapshot: missing header");
  SnapshotData s;
  char magic[16] = {0};
  if (std::sscanf(line.c_str(), "%15s %d %d %d %lf %lf %lf", magic, &s.dim, &s.nx,
                  &s.ny, &s.hx, &s.hy, &s.time) != 7 ||
      std::string(magic) != "PFGT1")
    throw format_error("read_snapshot: bad header in " + path);
  if (s.dim != 1 && s.dim != 2)
    throw format_error("read_snapshot: bad dimension");
  if (s.nx <= 0 || s.ny <= 0) throw format_error("read_snapshot: bad shape");
  const std::size_t n = static_cast<std::size_t>(s.nx) * s.ny;
  std::vector<std::uint64_t> bits(n);
  in.read(reinterpret_cast<char*>(bits.data()),
          static_cast<std::streamsize>(n * sizeof(std::uint64_t)));
  if (static_cast<std::size_t>(in.gcount()) != n * sizeof(std::uint64_t))
    throw format_error("read_snapshot: truncated payload in " + path);
  s.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.values[i] = iodetail::from_le_bits(bits[i]);
  return s;
}

// Load a snapshot into a field on `expected`; shape and spacing must match.
inline ScalarField read_snapshot_field(const std::string& path,
                                       const Grid& expected) {
  SnapshotData s = read_snapshot(path);
  if (s.dim != expected.dim || s.nx != expected.nx ||
      (expected.dim == 2 && s.ny != expected.ny))
    throw format_error("read_snapshot: shape does not match the configured grid");
  ScalarField f(expected);
  f.v = std::move(s.values);
  return f;
}

// CSV schema: header `t,energy,mass,min_phi,max_phi,dissipation`, one row per
// record, every value with >= 17 significant digits.
inline void write_csv(const DiagnosticsSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw format_error("write_csv: cannot open " + path);
  out << "t,energy,mass,min_phi,max_phi,dissipation\n";
  for (const auto& r : series.rows)
    out << iodetail::fmt_g17(r.t) << ',' << iodetail::fmt_g17(r.energy) << ','
        << iodetail::fmt_g17(r.mass) << ',' << iodetail::fmt_g17(r.min_phi) << ','
        << iodetail::fmt_g17(r.max_phi) << ',' << iodetail::fmt_g17(r.dissipation)
        << '\n';
  if (!out) throw format_error("write_csv: short write to " + path);
}

// Binary P5, maxval 255, [min phi, max phi] mapped linearly onto [0, 255];
// constant fields render as mid-gray 128.
inline void write_pgm(const ScalarField& phi, const std::string& path) {
  const Grid& g = phi.grid;
  const int ny = g.dim == 2 ? g.ny : 1;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw format_error("write_pgm: cannot open " + path);
  double mn = phi.v[0], mx = phi.v[0];
  for (double x : phi.v) {
    mn = std::min(mn, x);
    mx = std::max(mx, x);
  }
  out << "P5\n" << g.nx << ' ' << ny << "\n255\n";
  std::vector<unsigned char> row(g.nx);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < g.nx; ++ix) {
      const double x = phi(ix, iy);
      row[ix] = mx > mn ? static_cast<unsigned char>(
                              std::lround(255.0 * (x - mn) / (mx - mn)))
                        : static_cast<unsigned char>(128);
    }
    out.write(reinterpret_cast<const char*>(row.data()), g.nx);
  }
  if (!out) throw format_error("write_pgm: short write to " + path);
}

}  // namespace pfgt
