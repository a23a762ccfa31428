#include "contactline/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace contactline {

std::array<double, 8> to_reals(const UnitaryU2& u) {
  std::array<double, 8> out{};
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const cplx z = u(r, c);
      out[static_cast<std::size_t>(4 * r + 2 * c)] = z.real();
      out[static_cast<std::size_t>(4 * r + 2 * c + 1)] = z.imag();
    }
  }
  return out;
}

UnitaryU2 unitary_from_reals(std::span<const double, 8> reals) {
  Mat2 m;
  m << cplx(reals[0], reals[1]), cplx(reals[2], reals[3]),
       cplx(reals[4], reals[5]), cplx(reals[6], reals[7]);
  return UnitaryU2(m);
}

std::array<double, 5> to_reals(const TransferMatrix& lam) {
  return {lam.lambda, lam.s, lam.t, lam.u, lam.v};
}

TransferMatrix transfer_from_reals(std::span<const double, 5> reals) {
  TransferMatrix lam{reals[0], reals[1], reals[2], reals[3], reals[4]};
  lam.validate();
  return lam;
}

std::string format_number(double x) {
  if (x == 0.0) return "0";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace contactline
