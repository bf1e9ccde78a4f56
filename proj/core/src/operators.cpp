#include "semiq/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace semiq {

namespace {

void check_finite(const Matrix& m) {
  if (!m.allFinite()) {
    throw ValidationError("operator entries must be finite (no NaN/Inf)");
  }
}

long dims_product(const std::vector<int>& dims) {
  long p = 1;
  for (int d : dims) {
    if (d <= 0) throw ValidationError("subsystem dimensions must be positive");
    p *= d;
  }
  return p;
}

// Multi-index digits of idx under the given factor dims, most significant
// factor first.
std::vector<int> to_digits(long idx, const std::vector<int>& dims) {
  std::vector<int> digits(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    digits[k] = static_cast<int>(idx % dims[k]);
    idx /= dims[k];
  }
  return digits;
}

long from_digits(const std::vector<int>& digits, const std::vector<int>& dims) {
  long idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    idx = idx * dims[k] + digits[k];
  }
  return idx;
}

}  // namespace

ComplexOperator::ComplexOperator(Matrix m) : m_(std::move(m)) {
  check_finite(m_);
}

ComplexOperator::ComplexOperator(Matrix m, std::vector<int> subsystem_dims)
    : m_(std::move(m)), dims_(std::move(subsystem_dims)) {
  check_finite(m_);
  if (!dims_.empty()) {
    if (m_.rows() != m_.cols()) {
      throw ValidationError("subsystem dims only apply to square operators");
    }
    if (dims_product(dims_) != m_.rows()) {
      throw ValidationError("product of subsystem dims must equal the operator dimension");
    }
  }
}

ComplexOperator ComplexOperator::with_subsystem_dims(std::vector<int> dims) const {
  return ComplexOperator(m_, std::move(dims));
}

bool ComplexOperator::is_hermitian(double tol) const {
  if (!is_square()) return false;
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double ComplexOperator::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double ComplexOperator::max_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

ComplexOperator ComplexOperator::identity(int dim) {
  if (dim <= 0) throw ValidationError("identity dimension must be positive");
  return ComplexOperator(Matrix::Identity(dim, dim));
}

ComplexOperator ComplexOperator::pauli(int k) {
  Matrix m(2, 2);
  switch (k) {
    case 1:
      m << 0, 1, 1, 0;
      break;
    case 2:
      m << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    case 3:
      m << 1, 0, 0, -1;
      break;
    default:
      throw ValidationError("pauli index must be 1, 2 or 3");
  }
  return ComplexOperator(std::move(m));
}

Ket::Ket(CVector amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.size() == 0) throw ValidationError("ket must have positive dimension");
  if (!amps_.allFinite()) throw ValidationError("ket amplitudes must be finite");
  if (std::abs(amps_.norm() - 1.0) > 1e-12) {
    throw ValidationError("ket must have unit norm (within 1e-12)");
  }
}

Ket Ket::basis(int dim, int k) {
  if (dim <= 0 || k < 0 || k >= dim) throw ValidationError("basis index out of range");
  CVector v = CVector::Zero(dim);
  v(k) = 1.0;
  return Ket(std::move(v));
}

double overlap(const Ket& a, const Ket& b) {
  if (a.dim() != b.dim()) throw ValidationError("overlap requires equal dimensions");
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

DensityOperator::DensityOperator(ComplexOperator op) : op_(std::move(op)) {
  if (!op_.is_square()) throw ValidationError("density operator must be square");
  if (!op_.is_hermitian(1e-12)) {
    throw ValidationError("density operator must be Hermitian (within 1e-12)");
  }
  if (std::abs(op_.trace() - Complex(1.0, 0.0)) > 1e-12) {
    throw ValidationError("density operator must have unit trace (within 1e-12)");
  }
  if (op_.min_eigenvalue() < -1e-10) {
    throw ValidationError("density operator must be positive semidefinite (eigenvalues >= -1e-10)");
  }
}

DensityOperator DensityOperator::with_subsystem_dims(std::vector<int> dims) const {
  return DensityOperator(op_.with_subsystem_dims(std::move(dims)));
}

Povm::Povm(std::vector<ComplexOperator> effects, std::vector<int> outcome_labels)
    : effects_(std::move(effects)), labels_(std::move(outcome_labels)) {
  if (effects_.empty()) throw ValidationError("POVM needs at least one effect");
  if (effects_.size() != labels_.size()) {
    throw ValidationError("POVM needs one outcome label per effect");
  }
  const Eigen::Index d = effects_.front().rows();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& e : effects_) {
    if (!e.is_square() || e.rows() != d) {
      throw ValidationError("POVM effects must be square and share one dimension");
    }
    if (!e.is_hermitian(1e-10)) throw ValidationError("POVM effect must be Hermitian");
    if (e.min_eigenvalue() < -1e-10 || e.max_eigenvalue() > 1.0 + 1e-10) {
      throw ValidationError("POVM effect eigenvalues must lie in [0, 1] (within 1e-10)");
    }
    sum += e.matrix();
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) {
    throw ValidationError("POVM effects must sum to the identity (within 1e-10)");
  }
  std::vector<int> sorted = labels_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("POVM outcome labels must be distinct");
  }
}

const ComplexOperator& Povm::effect_for_label(int label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return effects_[i];
  }
  throw ValidationError("unknown POVM outcome label");
}

Povm Povm::with_subsystem_dims(std::vector<int> dims) const {
  std::vector<ComplexOperator> tagged;
  tagged.reserve(effects_.size());
  for (const auto& e : effects_) tagged.push_back(e.with_subsystem_dims(dims));
  return Povm(std::move(tagged), labels_);
}

double BlochVector::norm() const {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

ComplexOperator tensor(const ComplexOperator& a, const ComplexOperator& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a.matrix()(i, j) * b.matrix();
    }
  }
  if (a.is_square() && b.is_square()) {
    std::vector<int> dims;
    if (a.has_subsystem_dims()) {
      dims = a.subsystem_dims();
    } else {
      dims.push_back(static_cast<int>(a.rows()));
    }
    if (b.has_subsystem_dims()) {
      dims.insert(dims.end(), b.subsystem_dims().begin(), b.subsystem_dims().end());
    } else {
      dims.push_back(static_cast<int>(b.rows()));
    }
    return ComplexOperator(std::move(out), std::move(dims));
  }
  return ComplexOperator(std::move(out));
}

Ket tensor(const Ket& a, const Ket& b) {
  CVector out(a.dim() * b.dim());
  for (Eigen::Index i = 0; i < a.dim(); ++i) {
    out.segment(i * b.dim(), b.dim()) = a.amplitude(i) * b.amplitudes();
  }
  return Ket(std::move(out));
}

Ket max_entangled(int d) {
  if (d < 1) throw ValidationError("max_entangled requires dimension >= 1");
  CVector v = CVector::Zero(static_cast<Eigen::Index>(d) * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k) v(static_cast<Eigen::Index>(k) * d + k) = amp;
  return Ket(std::move(v));
}

Ket singlet() {
  CVector v = CVector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return Ket(std::move(v));
}

DensityOperator bloch_to_density(const BlochVector& v) {
  if (v.norm() > 1.0 + 1e-12) {
    throw ValidationError("Bloch vector must have norm <= 1");
  }
  Matrix m(2, 2);
  m << Complex(1.0 + v.v[2], 0.0), Complex(v.v[0], -v.v[1]),
      Complex(v.v[0], v.v[1]), Complex(1.0 - v.v[2], 0.0);
  m *= 0.5;
  return DensityOperator(ComplexOperator(std::move(m)));
}

ComplexOperator projector(const Ket& k) {
  Matrix m = k.amplitudes() * k.amplitudes().adjoint();
  return ComplexOperator(std::move(m));
}

Povm bell_projection_povm(int d) {
  if (d < 1) throw ValidationError("bell_projection_povm requires dimension >= 1");
  ComplexOperator phi = projector(max_entangled(d));
  Matrix complement = Matrix::Identity(phi.rows(), phi.rows()) - phi.matrix();
  std::vector<int> dims{d, d};
  std::vector<ComplexOperator> effects;
  effects.emplace_back(std::move(complement), dims);
  effects.push_back(phi.with_subsystem_dims(dims));
  return Povm(std::move(effects), {0, 1});
}

namespace {

double real_trace_product(const Matrix& a, const Matrix& b, const char* what) {
  // Tr[a b] without forming the full product.
  Complex t = a.cwiseProduct(b.transpose()).sum();
  if (std::abs(t.imag()) > 1e-8) {
    throw NumericError(std::string(what) + ": trace has imaginary part " +
                       std::to_string(t.imag()));
  }
  return t.real();
}

}  // namespace

double born(const DensityOperator& state, const ComplexOperator& effect) {
  if (effect.rows() != state.dim() || effect.cols() != state.dim()) {
    throw ValidationError("born: effect and state dimensions differ");
  }
  double p = real_trace_product(effect.matrix(), state.matrix(), "born");
  if (p < 0.0 && p >= -1e-10) p = 0.0;
  if (p > 1.0 && p <= 1.0 + 1e-10) p = 1.0;
  return p;
}

double expectation(const DensityOperator& state, const ComplexOperator& op) {
  if (op.rows() != state.dim() || op.cols() != state.dim()) {
    throw ValidationError("expectation: operator and state dimensions differ");
  }
  return real_trace_product(op.matrix(), state.matrix(), "expectation");
}

ComplexOperator partial_trace(const ComplexOperator& op, const std::vector<int>& keep) {
  if (!op.has_subsystem_dims()) {
    throw ValidationError("partial_trace requires subsystem dims");
  }
  const auto& dims = op.subsystem_dims();
  const std::size_t n = dims.size();
  std::vector<int> sorted = keep;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ValidationError("partial_trace: duplicate subsystem index");
  }
  for (int k : sorted) {
    if (k < 0 || static_cast<std::size_t>(k) >= n) {
      throw ValidationError("partial_trace: subsystem index out of range");
    }
  }

  std::vector<int> traced;
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::binary_search(sorted.begin(), sorted.end(), static_cast<int>(k))) {
      traced.push_back(static_cast<int>(k));
    }
  }

  std::vector<int> keep_dims, traced_dims;
  for (int k : sorted) keep_dims.push_back(dims[k]);
  for (int k : traced) traced_dims.push_back(dims[k]);
  const long keep_total = dims_product(keep_dims.empty() ? std::vector<int>{1} : keep_dims);
  const long traced_total = dims_product(traced_dims.empty() ? std::vector<int>{1} : traced_dims);

  Matrix out = Matrix::Zero(keep_total, keep_total);
  std::vector<int> full_row(n), full_col(n);
  for (long r = 0; r < keep_total; ++r) {
    const auto rk = keep_dims.empty() ? std::vector<int>{} : to_digits(r, keep_dims);
    for (long c = 0; c < keep_total; ++c) {
      const auto ck = keep_dims.empty() ? std::vector<int>{} : to_digits(c, keep_dims);
      Complex acc = 0.0;
      for (long t = 0; t < traced_total; ++t) {
        const auto td = traced_dims.empty() ? std::vector<int>{} : to_digits(t, traced_dims);
        for (std::size_t k = 0; k < sorted.size(); ++k) {
          full_row[sorted[k]] = rk[k];
          full_col[sorted[k]] = ck[k];
        }
        for (std::size_t k = 0; k < traced.size(); ++k) {
          full_row[traced[k]] = td[k];
          full_col[traced[k]] = td[k];
        }
        acc += op.matrix()(from_digits(full_row, dims), from_digits(full_col, dims));
      }
      out(r, c) = acc;
    }
  }
  if (keep_dims.empty()) keep_dims.push_back(1);
  return ComplexOperator(std::move(out), std::move(keep_dims));
}

DensityOperator partial_trace(const DensityOperator& state, const std::vector<int>& keep) {
  return DensityOperator(partial_trace(state.op(), keep));
}

ComplexOperator permute_subsystems(const ComplexOperator& op, const std::vector<int>& perm) {
  if (!op.has_subsystem_dims()) {
    throw ValidationError("permute_subsystems requires subsystem dims");
  }
  const auto& dims = op.subsystem_dims();
  const std::size_t n = dims.size();
  if (perm.size() != n) throw ValidationError("permutation length must match factor count");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 0 || static_cast<std::size_t>(p) >= n || seen[p]) {
      throw ValidationError("invalid permutation");
    }
    seen[p] = true;
  }

  std::vector<int> new_dims(n);
  for (std::size_t j = 0; j < n; ++j) new_dims[j] = dims[perm[j]];
  const long total = dims_product(dims);

  Matrix out(total, total);
  std::vector<int> new_row(n), new_col(n);
  for (long r = 0; r < total; ++r) {
    const auto rd = to_digits(r, dims);
    for (std::size_t j = 0; j < n; ++j) new_row[j] = rd[perm[j]];
    const long nr = from_digits(new_row, new_dims);
    for (long c = 0; c < total; ++c) {
      const auto cd = to_digits(c, dims);
      for (std::size_t j = 0; j < n; ++j) new_col[j] = cd[perm[j]];
      out(nr, from_digits(new_col, new_dims)) = op.matrix()(r, c);
    }
  }
  return ComplexOperator(std::move(out), std::move(new_dims));
}

}  // namespace semiq
