#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace gutscat {

/// A permutation of the vertex labels {0,1,2,3} of a tetrahedron.
class Perm4 {
 public:
  constexpr Perm4() : img_{0, 1, 2, 3} {}
  constexpr Perm4(int a, int b, int c, int d)
      : img_{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(c),
             static_cast<std::uint8_t>(d)} {}

  constexpr int operator[](int v) const { return img_[static_cast<std::size_t>(v)]; }

  constexpr Perm4 inverse() const {
    Perm4 out;
    for (int i = 0; i < 4; ++i) out.img_[img_[static_cast<std::size_t>(i)]] = static_cast<std::uint8_t>(i);
    return out;
  }

  /// (*this * other)[v] == (*this)[other[v]].
  constexpr Perm4 operator*(const Perm4& other) const {
    Perm4 out;
    for (int i = 0; i < 4; ++i) out.img_[static_cast<std::size_t>(i)] = img_[other.img_[static_cast<std::size_t>(i)]];
    return out;
  }

  constexpr int sign() const {
    int s = 1;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (img_[static_cast<std::size_t>(i)] > img_[static_cast<std::size_t>(j)]) s = -s;
    return s;
  }

  constexpr bool is_valid() const {
    int seen = 0;
    for (auto v : img_) {
      if (v > 3) return false;
      seen |= 1 << v;
    }
    return seen == 0xF;
  }

  constexpr bool operator==(const Perm4&) const = default;
  constexpr auto operator<=>(const Perm4&) const = default;

  std::string str() const {
    std::string s(4, '0');
    for (std::size_t i = 0; i < 4; ++i) s[i] = static_cast<char>('0' + img_[i]);
    return s;
  }

  /// Parses four digits "p0p1p2p3". Returns false on malformed input.
  static bool parse(std::string_view text, Perm4& out) {
    if (text.size() != 4) return false;
    for (std::size_t i = 0; i < 4; ++i) {
      if (text[i] < '0' || text[i] > '3') return false;
      out.img_[i] = static_cast<std::uint8_t>(text[i] - '0');
    }
    return out.is_valid();
  }

 private:
  std::array<std::uint8_t, 4> img_;
};

}  // namespace gutscat
