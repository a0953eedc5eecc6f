// Laplacian spectrum of the 5-vertex example graph, the GFT of two vertex
// signals, and a low-pass filter applied both in the spectrum and as a
// Chebyshev polynomial.
#include <cmath>
#include <iomanip>
#include <iostream>

#include "gnnkit/gnnkit.hpp"

using namespace gnnkit;

int main() {
  const Graph g = build_graph(5, {{0, 1}, {0, 2}, {0, 3}, {2, 3}, {3, 4}});
  const DenseMatrix l = laplacian(g);
  const Eigensystem es = eigensystem(l);

  const std::vector<double> f1{0.2, 0.4, 0.3, 0.3, 0.1}, f2{8, 6, 7, 12, 4};
  const auto h1 = gft(es, f1), h2 = gft(es, f2);
  std::cout << std::fixed << std::setprecision(4) << " k  lambda     f1_hat     f2_hat\n";
  for (std::size_t k = 0; k < es.size(); ++k)
    std::cout << ' ' << k << std::setw(8) << (std::abs(es.eigenvalues[k]) < 1e-12 ? 0.0 : es.eigenvalues[k]) << std::setw(11) << h1[k] << std::setw(11) << h2[k]
              << '\n';

  // g(lambda) = 1 - lambda / lambda_max is T_0/2 - T_1/2 on the scaled spectrum
  const double lmax = es.eigenvalues.back();
  std::vector<double> response(es.size());
  for (std::size_t k = 0; k < es.size(); ++k) response[k] = 1.0 - es.eigenvalues[k] / lmax;
  const auto spectral = spectral_convolve(es, f2, response);
  const std::vector<double> coeffs{0.5, -0.5};
  const auto poly = cheb_filter(l, coeffs, f2, lmax);
  std::cout << "\nlow-pass f2   spectral   chebyshev\n";
  for (std::size_t i = 0; i < 5; ++i)
    std::cout << "  v" << i << std::setw(16) << spectral[i] << std::setw(12) << poly[i] << '\n';
}
