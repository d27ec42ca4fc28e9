#include "spin_atlas/spin_operators.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "spin_atlas/errors.hpp"

namespace spin_atlas {

const ComplexMatrix& SpinOperators::operator[](int component) const {
  switch (component) {
    case 0: return x;
    case 1: return y;
    case 2: return z;
    default: throw InvalidInput("spin component index must be 0, 1 or 2");
  }
}

SpinOperators spin_operators(int multiplicity) {
  if (multiplicity != 2 && multiplicity != 3) {
    throw InvalidInput("unsupported spin multiplicity " + std::to_string(multiplicity) +
                       " (expected 2 or 3)");
  }
  const int n = multiplicity;
  const double s = 0.5 * (n - 1);
  ComplexMatrix raise = ComplexMatrix::Zero(n, n);
  ComplexMatrix sz = ComplexMatrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double m = s - k;
    sz(k, k) = m;
    if (k > 0) raise(k - 1, k) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
  }
  const ComplexMatrix lower = raise.adjoint();
  SpinOperators ops;
  ops.x = 0.5 * (raise + lower);
  ops.y = Complex(0.0, -0.5) * (raise - lower);
  ops.z = sz;
  return ops;
}

HermitianMatrix embed(const ComplexMatrix& op, std::size_t slot, std::span<const int> dims) {
  if (slot >= dims.size()) {
    throw InvalidInput("embed: slot " + std::to_string(slot) + " out of range for " +
                       std::to_string(dims.size()) + " sites");
  }
  if (op.rows() != dims[slot] || op.cols() != dims[slot]) {
    throw InvalidInput("embed: operator dimension does not match dims[slot]");
  }
  Eigen::Index left = 1;
  for (std::size_t k = 0; k < slot; ++k) left *= dims[k];
  Eigen::Index right = 1;
  for (std::size_t k = slot + 1; k < dims.size(); ++k) right *= dims[k];
  const Eigen::Index d = op.rows();
  const Eigen::Index total = left * d * right;

  HermitianMatrix out = HermitianMatrix::Zero(total, total);
  for (Eigen::Index l = 0; l < left; ++l) {
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) {
        const Complex v = op(a, b);
        if (v == Complex(0.0)) continue;
        const Eigen::Index row = (l * d + a) * right;
        const Eigen::Index col = (l * d + b) * right;
        for (Eigen::Index r = 0; r < right; ++r) out(row + r, col + r) = v;
      }
    }
  }
  return out;
}

double hermiticity_error(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace spin_atlas
