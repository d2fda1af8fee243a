#include "mvface/tensor_io.hpp"

#include <cstdio>
#include <cstring>
#include <memory>

#include "mvface/error.hpp"

namespace mvf {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.string().c_str(), mode));
  if (!f) throw IoError("cannot open " + path.string());
  return f;
}

void write_raw(std::FILE* f, const void* p, size_t n) {
  if (std::fwrite(p, 1, n, f) != n) throw IoError("short write");
}
void read_raw(std::FILE* f, void* p, size_t n) {
  if (std::fread(p, 1, n, f) != n) throw IoError("short read");
}
template <class T>
void write_pod(std::FILE* f, T v) { write_raw(f, &v, sizeof v); }
template <class T>
T read_pod(std::FILE* f) { T v; read_raw(f, &v, sizeof v); return v; }

void write_shaped(std::FILE* f, const std::vector<int>& shape,
                  const std::vector<double>& data) {
  write_pod<uint32_t>(f, static_cast<uint32_t>(shape.size()));
  size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw ValidationError("negative dimension");
    write_pod<uint32_t>(f, static_cast<uint32_t>(d));
    n *= size_t(d);
  }
  if (n != data.size()) throw ShapeError("data length does not match shape");
  write_raw(f, data.data(), n * sizeof(double));
}

void read_shaped(std::FILE* f, std::vector<int>& shape, std::vector<double>& data) {
  uint32_t ndim = read_pod<uint32_t>(f);
  if (ndim > 8) throw IoError("implausible rank");
  shape.resize(ndim);
  size_t n = 1;
  for (uint32_t i = 0; i < ndim; ++i) {
    shape[i] = static_cast<int>(read_pod<uint32_t>(f));
    n *= size_t(shape[i]);
  }
  data.resize(n);
  read_raw(f, data.data(), n * sizeof(double));
}

void check_magic(std::FILE* f, const char* magic) {
  char got[4];
  read_raw(f, got, 4);
  if (std::memcmp(got, magic, 4) != 0) throw IoError("bad magic");
}

constexpr uint32_t kVersion = 1;

}  // namespace

void save_array(const std::filesystem::path& path, const std::vector<int>& shape,
                const std::vector<double>& data) {
  auto f = open_file(path, "wb");
  write_raw(f.get(), "MVFT", 4);
  write_pod<uint32_t>(f.get(), kVersion);
  write_shaped(f.get(), shape, data);
}

NamedArray load_array(const std::filesystem::path& path) {
  auto f = open_file(path, "rb");
  check_magic(f.get(), "MVFT");
  if (read_pod<uint32_t>(f.get()) != kVersion) throw IoError("unsupported version");
  NamedArray a;
  a.name = path.filename().string();
  read_shaped(f.get(), a.shape, a.data);
  return a;
}

void save_checkpoint(const std::filesystem::path& path, const std::string& meta_json,
                     const std::vector<NamedArray>& arrays) {
  auto f = open_file(path, "wb");
  write_raw(f.get(), "MVFC", 4);
  write_pod<uint32_t>(f.get(), kVersion);
  write_pod<uint64_t>(f.get(), meta_json.size());
  write_raw(f.get(), meta_json.data(), meta_json.size());
  write_pod<uint64_t>(f.get(), arrays.size());
  for (const auto& a : arrays) {
    write_pod<uint32_t>(f.get(), static_cast<uint32_t>(a.name.size()));
    write_raw(f.get(), a.name.data(), a.name.size());
    write_shaped(f.get(), a.shape, a.data);
  }
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  auto f = open_file(path, "rb");
  check_magic(f.get(), "MVFC");
  if (read_pod<uint32_t>(f.get()) != kVersion) throw IoError("unsupported version");
  Checkpoint ck;
  uint64_t meta_len = read_pod<uint64_t>(f.get());
  ck.meta_json.resize(meta_len);
  read_raw(f.get(), ck.meta_json.data(), meta_len);
  uint64_t count = read_pod<uint64_t>(f.get());
  ck.arrays.resize(count);
  for (auto& a : ck.arrays) {
    uint32_t name_len = read_pod<uint32_t>(f.get());
    a.name.resize(name_len);
    read_raw(f.get(), a.name.data(), name_len);
    read_shaped(f.get(), a.shape, a.data);
  }
  return ck;
}

}  // namespace mvf
