#ifndef RLAB_SNAPSHOT_HPP
#define RLAB_SNAPSHOT_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlab/field.hpp"

namespace rlab {

// Snapshot layout (little endian):
//   0  char[4]  "RLAB"
//   4  u32      version (1)
//   8  u32      n
//  12  f64      box length L
//  20  u8       repr (0 physical, 1 frequency)
//  21  u8[11]   zero padding
//  32  n^3 pairs of f32 (re, im), same sample order as Field::data()
inline constexpr std::uint32_t kSnapshotVersion = 1;
inline constexpr std::size_t kSnapshotHeaderBytes = 32;

class SnapshotError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::vector<unsigned char> encode_snapshot(const Field& f);
Field decode_snapshot(const std::vector<unsigned char>& bytes);

void write_snapshot(const std::filesystem::path& path, const Field& f);
Field read_snapshot(const std::filesystem::path& path);

} // namespace rlab

#endif
