#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "semiq/errors.hpp"

namespace semiq {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Dense complex operator on a small Hilbert space. Square operators on
// composite spaces may carry the ordered factor dimensions; their product
// must equal the matrix dimension. Kronecker ordering is row-major with the
// leftmost factor most significant.
class ComplexOperator {
 public:
  explicit ComplexOperator(Matrix m);
  ComplexOperator(Matrix m, std::vector<int> subsystem_dims);

  const Matrix& matrix() const { return m_; }
  Eigen::Index rows() const { return m_.rows(); }
  Eigen::Index cols() const { return m_.cols(); }
  bool is_square() const { return m_.rows() == m_.cols(); }

  bool has_subsystem_dims() const { return !dims_.empty(); }
  const std::vector<int>& subsystem_dims() const { return dims_; }
  // Same matrix, re-tagged with a new factor decomposition.
  ComplexOperator with_subsystem_dims(std::vector<int> dims) const;

  Complex trace() const { return m_.trace(); }
  bool is_hermitian(double tol = 1e-10) const;
  // Eigenvalue range; requires a Hermitian matrix.
  double min_eigenvalue() const;
  double max_eigenvalue() const;

  static ComplexOperator identity(int dim);
  // Pauli matrices sigma_1, sigma_2, sigma_3 (x, y, z).
  static ComplexOperator pauli(int k);

 private:
  Matrix m_;
  std::vector<int> dims_;
};

// Unit-norm state vector (norm checked to 1e-12 at construction).
class Ket {
 public:
  explicit Ket(CVector amplitudes);

  Eigen::Index dim() const { return amps_.size(); }
  const CVector& amplitudes() const { return amps_; }
  Complex amplitude(Eigen::Index i) const { return amps_(i); }

  static Ket basis(int dim, int k);

 private:
  CVector amps_;
};

// |<a|b>|^2 — the phase-insensitive way to compare kets.
double overlap(const Ket& a, const Ket& b);

// Density operator: Hermitian (1e-12), unit trace (1e-12), eigenvalues
// >= -1e-10.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexOperator op);

  const ComplexOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  Eigen::Index dim() const { return op_.rows(); }
  const std::vector<int>& subsystem_dims() const { return op_.subsystem_dims(); }
  DensityOperator with_subsystem_dims(std::vector<int> dims) const;

 private:
  ComplexOperator op_;
};

// POVM: effects are Hermitian with eigenvalues in [-1e-10, 1+1e-10] and sum
// to the identity within 1e-10 entrywise. Effects are stored in the order of
// outcome_labels.
class Povm {
 public:
  Povm(std::vector<ComplexOperator> effects, std::vector<int> outcome_labels);

  std::size_t size() const { return effects_.size(); }
  Eigen::Index dim() const { return effects_.front().rows(); }
  const std::vector<ComplexOperator>& effects() const { return effects_; }
  const std::vector<int>& outcome_labels() const { return labels_; }
  const ComplexOperator& effect(std::size_t i) const { return effects_[i]; }
  const ComplexOperator& effect_for_label(int label) const;

  Povm with_subsystem_dims(std::vector<int> dims) const;

 private:
  std::vector<ComplexOperator> effects_;
  std::vector<int> labels_;
};

// Real 3-vector on or inside the Bloch ball (|v| <= 1 + 1e-12).
struct BlochVector {
  std::array<double, 3> v;

  double norm() const;
};

// ---- Operations ------------------------------------------------------------

// Kronecker product; subsystem dims concatenate (a square operand without
// explicit dims counts as a single factor of its full dimension).
ComplexOperator tensor(const ComplexOperator& a, const ComplexOperator& b);
Ket tensor(const Ket& a, const Ket& b);

// |phi+_d> = sum_k |kk>/sqrt(d) on C^d ⊗ C^d.
Ket max_entangled(int d);

// (|01> - |10>)/sqrt(2).
Ket singlet();

// (I + v.sigma)/2; pure iff |v| = 1.
DensityOperator bloch_to_density(const BlochVector& v);

// Rank-1 projector |k><k|.
ComplexOperator projector(const Ket& k);

// Two-outcome Bell-state measurement on C^d ⊗ C^d: label 1 projects onto
// |phi+_d>, label 0 is the complement.
Povm bell_projection_povm(int d);

// Re Tr[effect * state]. Throws NumericError if the trace has imaginary part
// above 1e-8; clamps to [0, 1] only when within 1e-10 of a boundary.
double born(const DensityOperator& state, const ComplexOperator& effect);

// Re Tr[op * state] with the same imaginary-part check but no range handling;
// for expectation values of observables that are not effects.
double expectation(const DensityOperator& state, const ComplexOperator& op);

// Reduced operator on the kept factors (ascending index order); requires
// subsystem dims. Trace is preserved.
ComplexOperator partial_trace(const ComplexOperator& op, const std::vector<int>& keep);
DensityOperator partial_trace(const DensityOperator& state, const std::vector<int>& keep);

// Conjugates by the factor permutation: slot j of the result carries factor
// perm[j] of the input.
ComplexOperator permute_subsystems(const ComplexOperator& op, const std::vector<int>& perm);

}  // namespace semiq
