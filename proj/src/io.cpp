#include "wickflow/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>

#include "wickflow/errors.hpp"
#include "wickflow/spectral.hpp"

namespace wickflow::io {

namespace {

template <class T>
void put_le(std::ostream& os, T v)
{
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get_le(std::istream& is)
{
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw ConfigurationError("WCK1: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

void ensure_parent(const std::filesystem::path& path)
{
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
}

}  // namespace

void write_snapshots(const std::filesystem::path& path, const std::vector<RealField>& fields)
{
  if (fields.empty()) throw ConfigurationError("WCK1: nothing to write");
  const TorusGrid& g = fields.front().grid();
  ensure_parent(path);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigurationError("WCK1: cannot open " + path.string());
  os.write("WCK1", 4);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.K()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(g.M()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(fields.size()));
  for (const auto& f : fields) {
    if (!(f.grid() == g)) throw ConfigurationError("WCK1: snapshots on different grids");
    for (double v : f.values()) put_le<double>(os, v);
  }
}

void write_snapshots(const std::filesystem::path& path, const std::vector<SpectralField>& fields)
{
  std::vector<RealField> real;
  real.reserve(fields.size());
  for (const auto& u : fields) real.push_back(to_real(u));
  write_snapshots(path, real);
}

std::vector<RealField> read_snapshots(const std::filesystem::path& path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigurationError("WCK1: cannot open " + path.string());
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "WCK1", 4) != 0) throw ConfigurationError("WCK1: bad magic");
  const auto K = get_le<std::uint32_t>(is);
  const auto M = get_le<std::uint32_t>(is);
  const auto count = get_le<std::uint32_t>(is);
  const TorusGrid g = TorusGrid::with_points(static_cast<int>(K), static_cast<int>(M));
  std::vector<RealField> out;
  for (std::uint32_t c = 0; c < count; ++c) {
    std::vector<double> v(g.point_count());
    for (double& x : v) x = get_le<double>(is);
    out.emplace_back(g, std::move(v));
  }
  return out;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows)
{
  ensure_parent(path);
  std::ofstream os(path);
  if (!os) throw ConfigurationError("CSV: cannot open " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n' << std::setprecision(17);
  for (const auto& r : rows) {
    if (r.size() != header.size()) throw ConfigurationError("CSV: row width does not match header");
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
}

}  // namespace wickflow::io
