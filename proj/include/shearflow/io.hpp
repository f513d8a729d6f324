#pragma once

#include <string>

#include "shearflow/field.hpp"

namespace shearflow {

/// Binary field dump: 64-byte header {magic "SFLB", u32 version, u32 N1,
/// u32 N2, u32 N3, zero padding, f64 L1, f64 L2, f64 b, zero padding}
/// followed by little-endian f64 values, row-major with x1 fastest.
/// Surface fields are written with N3 = 1.
void write_field(const std::string& path, const VolumeField& f);
void write_field(const std::string& path, const SurfaceField& f);
VolumeField read_volume_field(const std::string& path, const Grid& g);
SurfaceField read_surface_field(const std::string& path, const Grid& g);

struct DumpHeader {
  std::uint32_t version;
  std::uint32_t N1, N2, N3;
  double L1, L2, b;
};
DumpHeader read_dump_header(const std::string& path);

}  // namespace shearflow
