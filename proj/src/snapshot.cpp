#include "rlab/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

namespace rlab {

namespace {

template <class T>
void put_le(std::vector<unsigned char>& out, std::size_t offset, T value) {
  unsigned char raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(std::begin(raw), std::end(raw));
  std::copy(std::begin(raw), std::end(raw), out.begin() + offset);
}

template <class T>
T get_le(const std::vector<unsigned char>& in, std::size_t offset) {
  unsigned char raw[sizeof(T)];
  std::copy(in.begin() + offset, in.begin() + offset + sizeof(T), raw);
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(std::begin(raw), std::end(raw));
  T value;
  std::memcpy(&value, raw, sizeof(T));
  return value;
}

} // namespace

std::vector<unsigned char> encode_snapshot(const Field& f) {
  const Grid& g = f.grid();
  std::vector<unsigned char> out(kSnapshotHeaderBytes + g.size() * 8, 0);
  std::memcpy(out.data(), "RLAB", 4);
  put_le<std::uint32_t>(out, 4, kSnapshotVersion);
  put_le<std::uint32_t>(out, 8, static_cast<std::uint32_t>(g.n()));
  put_le<double>(out, 12, g.length());
  out[20] = static_cast<unsigned char>(f.repr());
  std::size_t off = kSnapshotHeaderBytes;
  for (Eigen::Index i = 0; i < f.data().size(); ++i, off += 8) {
    put_le<float>(out, off, static_cast<float>(f.data()[i].real()));
    put_le<float>(out, off + 4, static_cast<float>(f.data()[i].imag()));
  }
  return out;
}

Field decode_snapshot(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < kSnapshotHeaderBytes ||
      std::memcmp(bytes.data(), "RLAB", 4) != 0)
    throw SnapshotError("not an RLAB snapshot");
  const auto version = get_le<std::uint32_t>(bytes, 4);
  if (version != kSnapshotVersion)
    throw SnapshotError("unsupported snapshot version " +
                        std::to_string(version));
  const auto n = static_cast<int>(get_le<std::uint32_t>(bytes, 8));
  const auto length = get_le<double>(bytes, 12);
  const auto repr = bytes[20];
  if (repr > 1) throw SnapshotError("bad representation tag");
  Grid g(n, length);
  if (bytes.size() != kSnapshotHeaderBytes + g.size() * 8)
    throw SnapshotError("snapshot payload size does not match header");
  Eigen::ArrayXcd data(g.size());
  std::size_t off = kSnapshotHeaderBytes;
  for (Eigen::Index i = 0; i < data.size(); ++i, off += 8)
    data[i] = Complex(get_le<float>(bytes, off), get_le<float>(bytes, off + 4));
  return Field(g, static_cast<Repr>(repr), std::move(data));
}

void write_snapshot(const std::filesystem::path& path, const Field& f) {
  const auto bytes = encode_snapshot(f);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SnapshotError("cannot open " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

Field read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  return decode_snapshot(bytes);
}

} // namespace rlab
