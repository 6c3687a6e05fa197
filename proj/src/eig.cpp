#include "qtm/eig.hpp"

#include <lapacke.h>

#include <stdexcept>
#include <string>

namespace qtm {

void eigenvalues_into(const HermitianMatrix& h, std::vector<Complex>& work,
                      std::vector<double>& evals) {
  work = h.a;
  evals.resize(h.n);
  if (h.n == 0) return;
  const lapack_int info = LAPACKE_zheevd(
      LAPACK_COL_MAJOR, 'N', 'U', h.n,
      reinterpret_cast<lapack_complex_double*>(work.data()), h.n, evals.data());
  if (info != 0) {
    throw std::runtime_error("zheevd failed with info = " + std::to_string(info));
  }
}

std::vector<double> eigenvalues(const HermitianMatrix& h) {
  std::vector<Complex> work;
  std::vector<double> evals;
  eigenvalues_into(h, work, evals);
  return evals;
}

}  // namespace qtm
