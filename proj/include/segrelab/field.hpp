#pragma once

#include <cstdint>
#include <string>

#include "segrelab/error.hpp"

namespace segrelab {

/// Field element of GF(p), always kept in [0, p).
using Elem = int;

inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// Multiplicative inverse mod p via the extended Euclidean algorithm.
inline Elem fp_inv(Elem a, int p) {
  if (a % p == 0) fail(ErrorKind::DivisionByZero, "0 has no inverse mod " + std::to_string(p));
  std::int64_t r0 = p, r1 = ((a % p) + p) % p;
  std::int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::int64_t tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  return static_cast<Elem>(((t0 % p) + p) % p);
}

/// Arithmetic in the prime field GF(p). Moduli are limited to p < 2^15 so that
/// products of two elements fit comfortably in an int.
class PrimeField {
 public:
  explicit PrimeField(int p) : p_(p) {
    if (!is_prime(p)) fail(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
    if (p >= (1 << 15)) fail(ErrorKind::CapExceeded, "modulus too large");
  }

  int p() const noexcept { return p_; }

  Elem norm(std::int64_t a) const noexcept {
    const std::int64_t r = a % p_;
    return static_cast<Elem>(r < 0 ? r + p_ : r);
  }
  Elem add(Elem a, Elem b) const noexcept { return static_cast<Elem>((a + b) % p_); }
  Elem sub(Elem a, Elem b) const noexcept { return static_cast<Elem>((a - b + p_) % p_); }
  Elem neg(Elem a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Elem mul(Elem a, Elem b) const noexcept { return static_cast<Elem>((a * b) % p_); }
  Elem inv(Elem a) const { return fp_inv(a, p_); }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  int p_;
};

}  // namespace segrelab
