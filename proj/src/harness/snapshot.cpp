#include "smap/harness/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "smap/spectral.hpp"

namespace smap::harness {

namespace {

constexpr char kMagic[8] = {'S', 'M', 'A', 'P', 'F', 'L', 'D', '1'};

template <typename T>
void put(std::vector<unsigned char>& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.insert(out.end(), bytes, bytes + sizeof(T));
}

template <typename T>
T get(const std::vector<unsigned char>& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw FormatError("snapshot truncated");
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  pos += sizeof(T);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

std::vector<unsigned char> header(const GridSpec& g, double time, std::uint8_t kind) {
  std::vector<unsigned char> out(kMagic, kMagic + 8);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.d));
  for (int a = 0; a < g.d; ++a) put<std::uint32_t>(out, static_cast<std::uint32_t>(g.n));
  put<double>(out, g.period);
  put<double>(out, time);
  out.push_back(kind);
  return out;
}

void flush(const std::string& path, const std::vector<unsigned char>& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FormatError("cannot open '" + path + "' for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw FormatError("write to '" + path + "' failed");
}

}  // namespace

void write_snapshot(const std::string& path, const ComplexFieldd& field) {
  const ComplexFieldd u = to_physical(field);
  auto bytes = header(u.grid(), u.time(), 0);
  for (Eigen::Index i = 0; i < u.values().size(); ++i) {
    put<double>(bytes, u.values()(i).real());
    put<double>(bytes, u.values()(i).imag());
  }
  flush(path, bytes);
}

void write_snapshot(const std::string& path, const SphereFieldd& field) {
  auto bytes = header(field.grid(), field.time(), 1);
  for (Eigen::Index i = 0; i < field.values().rows(); ++i)
    for (int l = 0; l < 3; ++l) put<double>(bytes, field.values()(i, l));
  flush(path, bytes);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open '" + path + "'");
  const std::vector<unsigned char> in((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (in.size() < 8 || std::memcmp(in.data(), kMagic, 8) != 0) throw FormatError("bad magic in '" + path + "'");
  std::size_t pos = 8;
  GridSpec g;
  g.d = static_cast<int>(get<std::uint32_t>(in, pos));
  if (g.d < 1 || g.d > 16) throw FormatError("implausible dimension " + std::to_string(g.d));
  for (int a = 0; a < g.d; ++a) {
    const int n = static_cast<int>(get<std::uint32_t>(in, pos));
    if (a > 0 && n != g.n) throw FormatError("non-cubic grids are not supported");
    g.n = n;
  }
  g.period = get<double>(in, pos);
  const double time = get<double>(in, pos);
  const std::uint8_t kind = get<std::uint8_t>(in, pos);
  try {
    g.validate();
  } catch (const InvalidGrid& e) {
    throw FormatError(std::string("header describes an invalid grid: ") + e.what());
  }
  if (kind > 1) throw FormatError("unknown field kind " + std::to_string(kind));
  const std::size_t per_point = kind == 0 ? 2 : 3;
  const std::size_t expected = pos + g.size() * per_point * sizeof(double);
  if (in.size() != expected)
    throw FormatError("payload length " + std::to_string(in.size() - pos) + " does not match header (" +
                      std::to_string(expected - pos) + ")");
  const auto size = static_cast<Eigen::Index>(g.size());
  if (kind == 0) {
    ComplexValues<double> v(size);
    for (Eigen::Index i = 0; i < size; ++i) {
      const double re = get<double>(in, pos);
      v(i) = {re, get<double>(in, pos)};
    }
    return ComplexFieldd(g, std::move(v), Representation::physical, time);
  }
  Vector3Values<double> v(size, 3);
  for (Eigen::Index i = 0; i < size; ++i)
    for (int l = 0; l < 3; ++l) v(i, l) = get<double>(in, pos);
  try {
    return SphereFieldd::verbatim(g, std::move(v), time);
  } catch (const DegenerateInput&) {
    throw FormatError("sphere snapshot rows are not unit vectors");
  }
}

}  // namespace smap::harness
