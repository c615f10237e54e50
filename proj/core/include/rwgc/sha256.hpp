#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace rwgc {

struct ReturnMatrix;

// Plain FIPS 180-4 SHA-256, enough for content addressing of artifacts.
class Sha256 {
 public:
  Sha256() { reset(); }
  void reset();
  void update(const void* data, std::size_t len);
  void update(std::string_view s) { update(s.data(), s.size()); }
  std::string hex_digest();  // finalises; call once

 private:
  void process_block(const std::uint8_t* block);
  std::array<std::uint32_t, 8> state_{};
  std::array<std::uint8_t, 64> buffer_{};
  std::uint64_t total_ = 0;
  std::size_t buffered_ = 0;
};

std::string sha256_hex(std::string_view data);

// Content hash of a return matrix: shape header plus the raw little-endian
// value bytes, independent of any file formatting.
std::string return_matrix_sha256(const ReturnMatrix& matrix);

}  // namespace rwgc
