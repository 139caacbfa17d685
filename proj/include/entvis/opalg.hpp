#pragma once

#include <complex>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "entvis/errors.hpp"

namespace entvis::opalg {

enum class Particle : std::uint8_t { alpha, beta, loss };
enum class Pol : std::uint8_t { H, V };

/// One field mode: owning particle, propagation path (sources are paths 1
/// and 2; path 0 is reserved for the loss channel) and polarization.
struct ModeLabel {
  Particle particle = Particle::alpha;
  int path = 1;
  Pol pol = Pol::H;

  void validate() const;
  friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
};

std::string to_string(const ModeLabel& l);

/// A basis state is a tuple of mode labels, one per occupied mode.
using LabelTuple = std::vector<ModeLabel>;

std::string to_string(const LabelTuple& t);

/// Ordered list of label tuples spanning the state space. The list order is
/// the matrix index order used by every operator and ket built on it.
class Basis {
 public:
  explicit Basis(std::vector<LabelTuple> labels);

  std::size_t dim() const { return labels_.size(); }
  const LabelTuple& label(std::size_t i) const { return labels_.at(i); }
  const std::vector<LabelTuple>& labels() const { return labels_; }

  /// Index of a tuple; throws StructuralError if absent.
  std::size_t index_of(const LabelTuple& t) const;
  bool contains(const LabelTuple& t) const;

  friend bool operator==(const Basis&, const Basis&) = default;

  /// Concatenates label tuples pairwise, (a, b) order.
  static Basis tensor(const Basis& a, const Basis& b);

 private:
  std::vector<LabelTuple> labels_;
};

/// Dense operator over a labeled basis.
struct Operator {
  Basis basis;
  Eigen::MatrixXcd mat;

  Operator(Basis b, Eigen::MatrixXcd m);
  std::size_t dim() const { return basis.dim(); }
};

/// Dense ket over a labeled basis. Sub-normalized kets are allowed (loss
/// branches); norms above 1 are rejected.
struct Ket {
  Basis basis;
  Eigen::VectorXcd amp;

  Ket(Basis b, Eigen::VectorXcd a);
  double norm() const { return amp.norm(); }
};

Operator tensor(const Operator& a, const Operator& b);
Ket tensor(const Ket& a, const Ket& b);

/// Traces out every particle not in `keep`. The basis must factor into a
/// kept x discarded product, otherwise a StructuralError is thrown.
Operator partial_trace(const Operator& rho, const std::set<Particle>& keep);

/// Transposes the indices belonging to one particle tag.
Operator partial_transpose(const Operator& rho, Particle subsystem);

/// Eigenvalues of a Hermitian operator, descending. Rejects inputs whose
/// anti-Hermitian part exceeds `herm_tol`.
std::vector<double> hermitian_eigenvalues(const Operator& m, double herm_tol = 1e-10);

bool is_psd(const Operator& m, double tol = 1e-10);
bool is_hermitian(const Operator& m, double tol = 1e-10);
std::complex<double> trace(const Operator& m);
double purity(const Operator& m);

/// Density-operator gate: Hermitian and unit trace within `eq_tol`,
/// eigenvalues above -psd_tol.
void validate_density(const Operator& rho, double eq_tol = 1e-12, double psd_tol = 1e-10);

}  // namespace entvis::opalg
