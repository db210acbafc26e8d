#pragma once

// Shuffle-size lists for the command line: "1024", "16,32,64", "1..8" or
// "2^4..2^10". A range whose ends are written as powers steps geometrically
// (2^4, 2^5, ...), so each step is one more riffle shuffle.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace riffle {

namespace detail {

struct RangeEnd {
  std::uint64_t value = 0;
  std::uint64_t base = 0;  // 0 when written as a plain integer
};

inline std::uint64_t parse_uint(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("expected a number");
  std::uint64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw std::invalid_argument("invalid number '" + std::string(s) + "'");
    if (v > (UINT64_MAX - 9) / 10) throw std::invalid_argument("number too large");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

inline RangeEnd parse_range_end(std::string_view s) {
  auto caret = s.find('^');
  if (caret == std::string_view::npos) return {parse_uint(s), 0};
  const auto base = parse_uint(s.substr(0, caret));
  const auto exp = parse_uint(s.substr(caret + 1));
  if (base < 2) throw std::invalid_argument("power base must be at least 2");
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (v > UINT64_MAX / base) throw std::invalid_argument("power too large");
    v *= base;
  }
  return {v, base};
}

}  // namespace detail

inline std::vector<std::uint64_t> parse_shuffle_range(std::string_view text) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(detail::parse_range_end(item).value);
    } else {
      const auto lo = detail::parse_range_end(item.substr(0, dots));
      const auto hi = detail::parse_range_end(item.substr(dots + 2));
      if (lo.value > hi.value) throw std::invalid_argument("empty range '" + std::string(item) + "'");
      const std::uint64_t base = lo.base ? lo.base : hi.base;
      if (base) {
        if (lo.base && hi.base && lo.base != hi.base) throw std::invalid_argument("mixed power bases in range");
        for (std::uint64_t v = lo.value; v <= hi.value; v *= base) {
          out.push_back(v);
          if (v > hi.value / base) break;
        }
      } else {
        if (hi.value - lo.value > 1'000'000) throw std::invalid_argument("range too long");
        for (std::uint64_t v = lo.value; v <= hi.value; ++v) out.push_back(v);
      }
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  for (auto a : out)
    if (a == 0) throw std::invalid_argument("shuffle size a must be at least 1");
  if (out.empty()) throw std::invalid_argument("no shuffle sizes given");
  return out;
}

}  // namespace riffle
