#include "shearflow/io.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace shearflow {

namespace {

constexpr char kMagic[4] = {'S', 'F', 'L', 'B'};
constexpr std::uint32_t kVersion = 1;

#pragma pack(push, 1)
struct RawHeader {
  char magic[4];
  std::uint32_t version;
  std::uint32_t N1, N2, N3;
  std::uint32_t pad0;
  double L1, L2, b;
  char pad1[16];
};
#pragma pack(pop)
static_assert(sizeof(RawHeader) == 64, "dump header must be 64 bytes");

void write_raw(const std::string& path, std::uint32_t N1, std::uint32_t N2,
               std::uint32_t N3, double L1, double L2, double b,
               std::span<const double> data) {
  RawHeader h{};
  std::memcpy(h.magic, kMagic, 4);
  h.version = kVersion;
  h.N1 = N1;
  h.N2 = N2;
  h.N3 = N3;
  h.pad0 = 0;
  h.L1 = L1;
  h.L2 = L2;
  h.b = b;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("write_field: cannot open " + path);
  f.write(reinterpret_cast<const char*>(&h), sizeof(h));
  f.write(reinterpret_cast<const char*>(data.data()),
          (std::streamsize)(data.size() * sizeof(double)));
  if (!f) throw std::runtime_error("write_field: write failed for " + path);
}

RawHeader read_raw(std::ifstream& f, const std::string& path) {
  RawHeader h{};
  f.read(reinterpret_cast<char*>(&h), sizeof(h));
  if (!f || std::memcmp(h.magic, kMagic, 4) != 0)
    throw std::runtime_error("read_field: bad magic in " + path);
  if (h.version != kVersion)
    throw std::runtime_error("read_field: unsupported version in " + path);
  return h;
}

}  // namespace

void write_field(const std::string& path, const VolumeField& f) {
  const Grid& g = f.grid();
  write_raw(path, g.N1(), g.N2(), g.N3(), g.L1(), g.L2(), g.b(), f.phys());
}

void write_field(const std::string& path, const SurfaceField& f) {
  const Grid& g = f.grid();
  write_raw(path, g.N1(), g.N2(), 1, g.L1(), g.L2(), g.b(), f.phys());
}

DumpHeader read_dump_header(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_field: cannot open " + path);
  RawHeader h = read_raw(f, path);
  return {h.version, h.N1, h.N2, h.N3, h.L1, h.L2, h.b};
}

VolumeField read_volume_field(const std::string& path, const Grid& g) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_field: cannot open " + path);
  RawHeader h = read_raw(f, path);
  if ((int)h.N1 != g.N1() || (int)h.N2 != g.N2() || (int)h.N3 != g.N3())
    throw std::runtime_error("read_field: size mismatch in " + path);
  VolumeField out(g);
  auto ph = out.phys_mut();
  f.read(reinterpret_cast<char*>(ph.data()),
         (std::streamsize)(ph.size() * sizeof(double)));
  if (!f) throw std::runtime_error("read_field: truncated data in " + path);
  return out;
}

SurfaceField read_surface_field(const std::string& path, const Grid& g) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_field: cannot open " + path);
  RawHeader h = read_raw(f, path);
  if ((int)h.N1 != g.N1() || (int)h.N2 != g.N2() || h.N3 != 1)
    throw std::runtime_error("read_field: size mismatch in " + path);
  SurfaceField out(g);
  auto ph = out.phys_mut();
  f.read(reinterpret_cast<char*>(ph.data()),
         (std::streamsize)(ph.size() * sizeof(double)));
  if (!f) throw std::runtime_error("read_field: truncated data in " + path);
  return out;
}

}  // namespace shearflow
