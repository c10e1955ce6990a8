#include "qvort/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace qvort {

static_assert(std::endian::native == std::endian::little,
              "snapshot I/O assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'Q', 'T', 'R', 'B'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void get(std::ifstream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in)
    throw SnapshotError(SnapshotError::Kind::Truncated,
                        "snapshot: truncated file");
}

}  // namespace

void save_snapshot(const WaveField& field, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw SnapshotError(SnapshotError::Kind::Io,
                        "snapshot: cannot open for writing: " + path);
  out.write(kMagic, 4);
  put(out, kVersion);
  put(out, static_cast<std::uint32_t>(field.grid.dims));
  put(out, static_cast<std::uint32_t>(field.grid.n));
  put(out, field.grid.length);
  put(out, field.time);
  put(out, field.meta.seed);
  put(out, static_cast<std::uint32_t>(field.meta.params.size()));
  out.write(field.meta.params.data(),
            static_cast<std::streamsize>(field.meta.params.size()));
  out.write(reinterpret_cast<const char*>(field.values.data()),
            static_cast<std::streamsize>(field.values.size() * sizeof(cplx)));
  if (!out)
    throw SnapshotError(SnapshotError::Kind::Io,
                        "snapshot: write failed: " + path);
}

WaveField load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw SnapshotError(SnapshotError::Kind::Io,
                        "snapshot: cannot open for reading: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw SnapshotError(SnapshotError::Kind::BadMagic,
                        "snapshot: bad magic bytes");
  std::uint32_t version = 0, dims = 0, n = 0;
  get(in, version);
  if (version != kVersion)
    throw SnapshotError(SnapshotError::Kind::BadVersion,
                        "snapshot: unsupported version " + std::to_string(version));
  get(in, dims);
  get(in, n);

  WaveField f;
  f.grid.dims = static_cast<int>(dims);
  f.grid.n = static_cast<int>(n);
  get(in, f.grid.length);
  get(in, f.time);
  get(in, f.meta.seed);
  try {
    f.grid.validate();
  } catch (const std::invalid_argument& e) {
    throw SnapshotError(SnapshotError::Kind::DimensionMismatch, e.what());
  }

  std::uint32_t params_len = 0;
  get(in, params_len);
  f.meta.params.resize(params_len);
  if (params_len > 0) {
    in.read(f.meta.params.data(), params_len);
    if (!in)
      throw SnapshotError(SnapshotError::Kind::Truncated,
                          "snapshot: truncated params block");
  }

  f.values.resize(f.grid.size());
  in.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
  if (!in || in.gcount() !=
                 static_cast<std::streamsize>(f.values.size() * sizeof(cplx)))
    throw SnapshotError(SnapshotError::Kind::Truncated,
                        "snapshot: truncated payload");
  return f;
}

}  // namespace qvort
