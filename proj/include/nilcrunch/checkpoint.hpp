#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nilcrunch/field.hpp"

namespace nilcrunch {

namespace bin {

inline void put_u8(std::ostream& os, std::uint8_t v) {
  os.put(static_cast<char>(v));
}
inline void put_u32(std::ostream& os, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_u64(std::ostream& os, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
inline void put_string(std::ostream& os, const std::string& s) {
  put_u32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::uint8_t get_u8(std::istream& is) {
  const int c = is.get();
  if (c < 0) throw std::runtime_error("truncated checkpoint");
  return static_cast<std::uint8_t>(c);
}
inline std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(get_u8(is)) << (8 * i);
  return v;
}
inline std::uint64_t get_u64(std::istream& is) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(get_u8(is)) << (8 * i);
  return v;
}
inline std::string get_string(std::istream& is) {
  const std::uint32_t m = get_u32(is);
  if (m > (1u << 24)) throw std::runtime_error("corrupt checkpoint string");
  std::string s(m, '\0');
  is.read(s.data(), static_cast<std::streamsize>(m));
  if (static_cast<std::uint32_t>(is.gcount()) != m)
    throw std::runtime_error("truncated checkpoint");
  return s;
}

}  // namespace bin

inline constexpr std::uint32_t checkpoint_version = 1;

/* What was being computed when the state was written: enough to rebuild the
 * engine with identical parameters and to pick the enclosing command back up.
 * observations records (degree, all-words-contained) probe results already
 * established by a nilpotency scan. */
struct CheckpointHeader {
  std::string command;
  std::uint32_t n = 0, d = 0;
  FieldSpec field;
  std::uint32_t trunc_degree = 0;
  std::uint32_t dmax = 0;
  std::uint8_t scheme = 0;
  std::uint8_t seed_mode = 0;
  std::uint32_t max_arg_degree = 0;
  std::uint32_t query_degree = 0;
  std::vector<std::pair<std::uint32_t, std::uint8_t>> observations;
};

inline void write_header(std::ostream& os, const CheckpointHeader& h) {
  os.write("NCKP", 4);
  bin::put_u32(os, checkpoint_version);
  bin::put_string(os, h.command);
  bin::put_u32(os, h.n);
  bin::put_u32(os, h.d);
  bin::put_u8(os, h.field.kind == FieldSpec::Kind::finite ? 0 : 1);
  bin::put_u32(os, h.field.q);
  bin::put_u32(os, h.field.p);
  bin::put_u32(os, h.trunc_degree);
  bin::put_u32(os, h.dmax);
  bin::put_u8(os, h.scheme);
  bin::put_u8(os, h.seed_mode);
  bin::put_u32(os, h.max_arg_degree);
  bin::put_u32(os, h.query_degree);
  bin::put_u32(os, static_cast<std::uint32_t>(h.observations.size()));
  for (const auto& [deg, ok] : h.observations) {
    bin::put_u32(os, deg);
    bin::put_u8(os, ok);
  }
}

inline CheckpointHeader read_header(std::istream& is) {
  char magic[4] = {};
  is.read(magic, 4);
  if (is.gcount() != 4 || std::string(magic, 4) != "NCKP")
    throw std::runtime_error("not a checkpoint file");
  if (bin::get_u32(is) != checkpoint_version)
    throw std::runtime_error("unsupported checkpoint version");
  CheckpointHeader h;
  h.command = bin::get_string(is);
  h.n = bin::get_u32(is);
  h.d = bin::get_u32(is);
  const std::uint8_t kind = bin::get_u8(is);
  const std::uint32_t q = bin::get_u32(is);
  const std::uint32_t p = bin::get_u32(is);
  h.field = kind == 0 ? FieldSpec::finite(q) : FieldSpec::infinite_char(p);
  h.trunc_degree = bin::get_u32(is);
  h.dmax = bin::get_u32(is);
  h.scheme = bin::get_u8(is);
  h.seed_mode = bin::get_u8(is);
  h.max_arg_degree = bin::get_u32(is);
  h.query_degree = bin::get_u32(is);
  const std::uint32_t m = bin::get_u32(is);
  for (std::uint32_t i = 0; i < m; ++i) {
    const std::uint32_t deg = bin::get_u32(is);
    const std::uint8_t ok = bin::get_u8(is);
    h.observations.emplace_back(deg, ok);
  }
  return h;
}

inline CheckpointHeader peek_header(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
  return read_header(is);
}

// write via a sibling temp file and rename, so a crash never leaves a torn file
template <class F>
void atomic_write(const std::string& path, F fill) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write checkpoint: " + tmp);
    fill(os);
    os.flush();
    if (!os) throw std::runtime_error("short write on checkpoint: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace nilcrunch
