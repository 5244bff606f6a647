#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "nlos/errors.hpp"

// Little-endian binary file helpers. All on-disk formats in this project are
// little-endian; the implementation assumes a little-endian host.

namespace nlos {

class BinWriter {
 public:
  explicit BinWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw ContractError("cannot open for writing: " + path);
  }

  void magic(const char m[9]) { out_.write(m, 8); }
  void u32(std::uint32_t v) { out_.write(reinterpret_cast<const char*>(&v), 4); }
  void f32(float v) { out_.write(reinterpret_cast<const char*>(&v), 4); }

  void f32_array(const std::vector<double>& v) {
    std::vector<float> tmp(v.begin(), v.end());
    out_.write(reinterpret_cast<const char*>(tmp.data()),
               static_cast<std::streamsize>(tmp.size() * 4));
  }

  void u8_array(const std::vector<std::uint8_t>& v) {
    out_.write(reinterpret_cast<const char*>(v.data()),
               static_cast<std::streamsize>(v.size()));
  }

  void bytes(const std::string& s) { out_.write(s.data(), static_cast<std::streamsize>(s.size())); }

  void close() {
    out_.close();
    if (!out_) throw ContractError("write failed: " + path_);
  }

 private:
  std::string path_;
  std::ofstream out_;
};

class BinReader {
 public:
  explicit BinReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw ContractError("cannot open: " + path);
  }

  void expect_magic(const char m[9]) {
    char buf[8];
    in_.read(buf, 8);
    check("magic");
    if (std::memcmp(buf, m, 8) != 0) {
      throw ContractError(path_ + ": bad magic, expected " + std::string(m, 8));
    }
  }

  std::uint32_t u32() {
    std::uint32_t v = 0;
    in_.read(reinterpret_cast<char*>(&v), 4);
    check("u32");
    return v;
  }

  float f32() {
    float v = 0;
    in_.read(reinterpret_cast<char*>(&v), 4);
    check("f32");
    return v;
  }

  std::vector<double> f32_array(std::size_t n) {
    std::vector<float> tmp(n);
    in_.read(reinterpret_cast<char*>(tmp.data()), static_cast<std::streamsize>(n * 4));
    check("f32 array");
    return {tmp.begin(), tmp.end()};
  }

  std::vector<std::uint8_t> u8_array(std::size_t n) {
    std::vector<std::uint8_t> v(n);
    in_.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n));
    check("u8 array");
    return v;
  }

  std::string bytes(std::size_t n) {
    std::string s(n, '\0');
    in_.read(s.data(), static_cast<std::streamsize>(n));
    check("bytes");
    return s;
  }

  bool at_eof() {
    in_.peek();
    return in_.eof();
  }

 private:
  void check(const char* what) {
    if (!in_) throw ContractError(path_ + ": truncated file (reading " + what + ")");
  }

  std::string path_;
  std::ifstream in_;
};

}  // namespace nlos
