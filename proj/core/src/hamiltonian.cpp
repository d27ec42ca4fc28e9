#include "spin_atlas/hamiltonian.hpp"

#include <cmath>

#include "spin_atlas/errors.hpp"

namespace spin_atlas {

namespace {

/// Operator in the axis frame: S'_k = sum_j R_jk S_j.
ComplexMatrix frame_component(const SpinOperators& ops, const Mat3& r, int k) {
  return r(0, k) * ops.x + r(1, k) * ops.y + r(2, k) * ops.z;
}

class OperatorSpace {
 public:
  explicit OperatorSpace(std::vector<int> dims) : dims_(std::move(dims)) {
    for (int d : dims_) identities_.push_back(ComplexMatrix::Identity(d, d));
  }

  ComplexMatrix single(const ComplexMatrix& op, std::size_t slot) const {
    return embed(op, slot, dims_);
  }

  ComplexMatrix pair(const ComplexMatrix& a, std::size_t slot_a, const ComplexMatrix& b,
                     std::size_t slot_b) const {
    std::vector<const ComplexMatrix*> factors;
    factors.reserve(dims_.size());
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      factors.push_back(k == slot_a ? &a : (k == slot_b ? &b : &identities_[k]));
    }
    return kron_chain(factors);
  }

 private:
  std::vector<int> dims_;
  std::vector<ComplexMatrix> identities_;
};

}  // namespace

ComplexMatrix kron_chain(const std::vector<const ComplexMatrix*>& factors) {
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (const ComplexMatrix* f : factors) {
    ComplexMatrix next = ComplexMatrix::Zero(out.rows() * f->rows(), out.cols() * f->cols());
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      for (Eigen::Index j = 0; j < out.cols(); ++j) {
        const Complex v = out(i, j);
        if (v == Complex(0.0)) continue;
        next.block(i * f->rows(), j * f->cols(), f->rows(), f->cols()) = v * (*f);
      }
    }
    out = std::move(next);
  }
  return out;
}

ComplexMatrix quadratic_form(const SpinOperators& ops, const Mat3& t) {
  ComplexMatrix out = ComplexMatrix::Zero(ops.multiplicity(), ops.multiplicity());
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (t(a, b) != 0.0) out += t(a, b) * ops[a] * ops[b];
    }
  }
  return out;
}

ComplexMatrix nv_zero_field_operator(const Axis& axis, double zfs, const ZfsParams& strain) {
  const SpinOperators ops = spin_operators(3);
  const Mat3 r = rotation_to(axis);
  const ComplexMatrix sx = frame_component(ops, r, 0);
  const ComplexMatrix sy = frame_component(ops, r, 1);
  const ComplexMatrix sz = frame_component(ops, r, 2);
  ComplexMatrix out = (zfs + strain.d_parallel) * sz * sz;
  if (strain.d_x != 0.0) out += strain.d_x * (sx * sx - sy * sy);
  if (strain.d_y != 0.0) out += strain.d_y * (sx * sy + sy * sx);
  return out;
}

HamiltonianModel::HamiltonianModel(const SpinSystemSpec& spec) {
  spec.validate();
  const std::vector<int> dims = spec.dims();
  dimension_ = spec.dimension();
  const auto n = static_cast<Eigen::Index>(dimension_);
  fixed_ = HermitianMatrix::Zero(n, n);
  zfs_ = HermitianMatrix::Zero(n, n);
  zeeman_ = HermitianMatrix::Zero(n, n);

  OperatorSpace space(dims);
  std::vector<SpinOperators> ops;
  ops.reserve(spec.sites.size());
  for (int d : dims) ops.push_back(spin_operators(d));

  for (std::size_t i = 0; i < spec.sites.size(); ++i) {
    const SpinSiteSpec& site = spec.sites[i];
    // Field along lab z.
    zeeman_ += site.species.gyromagnetic * space.single(ops[i].z, i);
    if (site.zfs) {
      if (site.zfs->zfs_override) {
        fixed_ += space.single(nv_zero_field_operator(site.axis, *site.zfs->zfs_override, *site.zfs), i);
      } else {
        const ComplexMatrix unit_zfs = nv_zero_field_operator(site.axis, 1.0, ZfsParams{});
        zfs_ += space.single(unit_zfs, i);
        ZfsParams strain_only = *site.zfs;
        fixed_ += space.single(nv_zero_field_operator(site.axis, 0.0, strain_only), i);
      }
    }
    if (site.quadrupole) {
      fixed_ += space.single(quadratic_form(ops[i], rotate_tensor(*site.quadrupole)), i);
    }
  }

  for (const CouplingSpec& c : spec.couplings) {
    const Mat3 t = rotate_tensor(c.tensor);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        if (t(a, b) == 0.0) continue;
        fixed_ += t(a, b) * space.pair(ops[c.site_a][a], c.site_a, ops[c.site_b][b], c.site_b);
      }
    }
  }

  // Symmetrize away rounding so downstream Hermiticity checks see exact symmetry.
  fixed_ = (0.5 * (fixed_ + fixed_.adjoint())).eval();
  zfs_ = (0.5 * (zfs_ + zfs_.adjoint())).eval();
  zeeman_ = (0.5 * (zeeman_ + zeeman_.adjoint())).eval();

  real_ = fixed_.imag().cwiseAbs().maxCoeff() == 0.0 && zfs_.imag().cwiseAbs().maxCoeff() == 0.0 &&
          zeeman_.imag().cwiseAbs().maxCoeff() == 0.0;
  if (real_) {
    fixed_real_ = fixed_.real();
    zfs_real_ = zfs_.real();
    zeeman_real_ = zeeman_.real();
  }
}

namespace {
void check_point(double field, double zfs) {
  if (!std::isfinite(field) || field < 0.0) throw InvalidInput("field must be finite and >= 0 G");
  if (!std::isfinite(zfs) || zfs <= 0.0) throw InvalidInput("zero-field splitting D must be > 0 MHz");
}
}  // namespace

HermitianMatrix HamiltonianModel::at(double field_gauss, double zfs_mhz) const {
  check_point(field_gauss, zfs_mhz);
  return fixed_ + zfs_mhz * zfs_ + field_gauss * zeeman_;
}

RealMatrix HamiltonianModel::real_at(double field_gauss, double zfs_mhz) const {
  check_point(field_gauss, zfs_mhz);
  if (!real_) return at(field_gauss, zfs_mhz).real();
  return fixed_real_ + zfs_mhz * zfs_real_ + field_gauss * zeeman_real_;
}

HermitianMatrix build_hamiltonian(const SpinSystemSpec& spec, double field_gauss, double zfs_mhz) {
  return HamiltonianModel(spec).at(field_gauss, zfs_mhz);
}

}  // namespace spin_atlas
