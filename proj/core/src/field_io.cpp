#include "aet/field_io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace aet {
namespace {

constexpr char kMagic[4] = {'A', 'E', 'T', 'F'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& is, const std::filesystem::path& path) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw FormatError(path.string() + ": truncated AETF file");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T v;
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

std::uint64_t fnv1a(const unsigned char* p, std::size_t n, std::uint64_t h = 1469598103934665603ULL) {
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace

void write_array(const std::filesystem::path& path, const RawArray& array) {
  std::size_t count = 1;
  for (auto d : array.dims) count *= d;
  if (count != array.values.size()) throw std::invalid_argument("AETF extents do not match value count");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os.write(kMagic, 4);
  put_le<std::uint32_t>(os, kVersion);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(array.dims.size()));
  for (auto d : array.dims) put_le<std::uint32_t>(os, d);
  if constexpr (std::endian::native == std::endian::little) {
    os.write(reinterpret_cast<const char*>(array.values.data()),
             static_cast<std::streamsize>(array.values.size() * sizeof(double)));
  } else {
    for (double v : array.values) put_le<double>(os, v);
  }
  if (!os) throw Error("write failed: " + path.string());
}

RawArray read_array(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw FormatError(path.string() + ": bad magic, not an AETF file");
  }
  const auto version = get_le<std::uint32_t>(is, path);
  if (version != kVersion) {
    throw FormatError(path.string() + ": unsupported AETF version " + std::to_string(version));
  }
  const auto rank = get_le<std::uint32_t>(is, path);
  if (rank == 0 || rank > 8) throw FormatError(path.string() + ": bad rank " + std::to_string(rank));
  RawArray out;
  std::size_t count = 1;
  for (std::uint32_t a = 0; a < rank; ++a) {
    out.dims.push_back(get_le<std::uint32_t>(is, path));
    count *= out.dims.back();
  }
  const auto header = is.tellg();
  is.seekg(0, std::ios::end);
  const auto payload = static_cast<std::size_t>(is.tellg() - header);
  if (payload != count * sizeof(double)) {
    throw FormatError(path.string() + ": payload holds " + std::to_string(payload) + " bytes, expected " +
                      std::to_string(count * sizeof(double)));
  }
  is.seekg(header);
  out.values.resize(count);
  for (auto& v : out.values) v = get_le<double>(is, path);
  return out;
}

void write_field(const std::filesystem::path& path, const ScalarField& f) {
  RawArray a;
  a.dims.assign(f.grid().dim(), static_cast<std::uint32_t>(f.grid().n()));
  a.values.assign(f.values().begin(), f.values().end());
  write_array(path, a);
}

ScalarField read_field(const std::filesystem::path& path) {
  RawArray a = read_array(path);
  const int dim = static_cast<int>(a.dims.size());
  if (dim != 2 && dim != 3) throw FormatError(path.string() + ": field must be 2D or 3D");
  for (auto d : a.dims) {
    if (d != a.dims.front()) throw FormatError(path.string() + ": field extents must be equal");
  }
  try {
    return ScalarField(Grid(dim, static_cast<int>(a.dims.front())), std::move(a.values));
  } catch (const std::invalid_argument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& data_path) {
  return std::filesystem::path(data_path.string() + ".meta");
}

void write_metadata(const std::filesystem::path& path, const Metadata& meta) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  for (const auto& [k, v] : meta) os << k << '=' << v << '\n';
}

Metadata read_metadata(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path.string());
  Metadata meta;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError(path.string() + ": metadata line without '=': " + line);
    meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return meta;
}

std::string content_hash(std::span<const double> values) {
  return hex64(fnv1a(reinterpret_cast<const unsigned char*>(values.data()), values.size_bytes()));
}

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  std::uint64_t h = 1469598103934665603ULL;
  char buf[1 << 16];
  while (is.read(buf, sizeof buf) || is.gcount() > 0) {
    h = fnv1a(reinterpret_cast<const unsigned char*>(buf), static_cast<std::size_t>(is.gcount()), h);
    if (!is) break;
  }
  return hex64(h);
}

}  // namespace aet
