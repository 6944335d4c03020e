#pragma once

#include <complex>
#include <vector>

namespace dcma::fft {

// Unnormalized DFT: X_j = sum_n x_n e^{-2 pi i jn/N}.
void forward(std::vector<std::complex<double>>& data);

// Normalized inverse: x_n = (1/N) sum_j X_j e^{+2 pi i jn/N}.
void inverse(std::vector<std::complex<double>>& data);

} // namespace dcma::fft
