#pragma once

#include <complex>
#include <span>
#include <vector>

namespace commsense {

using cplx = std::complex<double>;

// Unitary discrete Fourier transforms (scale 1/sqrt(N) both ways), so
// forward and inverse preserve energy and undo each other exactly up to
// rounding. Backed by FFTW; plans are cached per size and safe to use from
// multiple threads.
std::vector<cplx> dft_forward(std::span<const cplx> input);
std::vector<cplx> dft_inverse(std::span<const cplx> input);

}  // namespace commsense
