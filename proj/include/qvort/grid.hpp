#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>

namespace qvort {

inline constexpr double kPi = 3.14159265358979323846;

// Periodic uniform grid, cubic box, equal samples per axis.
// Mode convention: index p in [0,n) maps to integer mode m = p (p < n/2)
// or p - n (p >= n/2), so m in [-n/2, n/2). k_i = 2*pi*m_i / L.
struct GridSpec {
  int dims = 2;       // 2 or 3
  int n = 0;          // samples per axis, power of two, >= 8
  double length = 1.0;

  std::size_t size() const {
    std::size_t s = 1;
    for (int d = 0; d < dims; ++d) s *= static_cast<std::size_t>(n);
    return s;
  }
  double dx() const { return length / n; }
  double k_unit() const { return 2.0 * kPi / length; }
  double k_nyquist() const { return kPi * n / length; }

  int mode(int index) const { return index < n / 2 ? index : index - n; }
  double k(int index) const { return mode(index) * k_unit(); }

  int wrap(int i) const {
    i %= n;
    return i < 0 ? i + n : i;
  }
  // Flatten with x fastest.
  std::size_t flatten(int i, int j, int k = 0) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(n) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(n) * k);
  }
  std::size_t flatten_wrapped(int i, int j, int k = 0) const {
    return flatten(wrap(i), wrap(j), dims == 3 ? wrap(k) : 0);
  }

  // Minimum-image displacement component.
  double min_image(double d) const {
    while (d > 0.5 * length) d -= length;
    while (d < -0.5 * length) d += length;
    return d;
  }

  void validate() const {
    if (dims != 2 && dims != 3)
      throw std::invalid_argument("GridSpec: dims must be 2 or 3");
    if (n < 8 || (n & (n - 1)) != 0)
      throw std::invalid_argument("GridSpec: n must be a power of two >= 8");
    if (!(length > 0.0))
      throw std::invalid_argument("GridSpec: length must be positive");
  }

  bool operator==(const GridSpec&) const = default;
};

}  // namespace qvort
