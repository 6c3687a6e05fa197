#pragma once

#include <complex>
#include <vector>

namespace qtm {

using Complex = std::complex<double>;

/// Dense Hermitian matrix, column-major (order irrelevant for Hermitian data).
struct HermitianMatrix {
  int n = 0;
  std::vector<Complex> a;  // n*n entries

  explicit HermitianMatrix(int dim = 0) : n(dim), a(static_cast<std::size_t>(dim) * dim) {}
  Complex& at(int i, int j) { return a[static_cast<std::size_t>(j) * n + i]; }
  const Complex& at(int i, int j) const { return a[static_cast<std::size_t>(j) * n + i]; }
};

/// Eigenvalues in ascending order (LAPACK zheevd, values only). The input is
/// copied; dimension up to a few thousand is fine.
std::vector<double> eigenvalues(const HermitianMatrix& h);

/// In-place variant reusing `work` as the destroyed matrix copy buffer.
void eigenvalues_into(const HermitianMatrix& h, std::vector<Complex>& work,
                      std::vector<double>& evals);

}  // namespace qtm
