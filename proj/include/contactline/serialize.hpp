#pragma once

#include <array>
#include <span>
#include <string>

#include "contactline/u2_algebra.hpp"

namespace contactline {

/// Row-major, real/imaginary interleaved: re00 im00 re01 im01 re10 im10 re11 im11.
std::array<double, 8> to_reals(const UnitaryU2& u);
UnitaryU2 unitary_from_reals(std::span<const double, 8> reals);

/// (lambda, s, t, u, v).
std::array<double, 5> to_reals(const TransferMatrix& lam);
TransferMatrix transfer_from_reals(std::span<const double, 5> reals);

/// 12 significant digits, shortest form ("%.12g"); negative zero prints as 0.
std::string format_number(double x);

}  // namespace contactline
