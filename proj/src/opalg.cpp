#include "entvis/opalg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <utility>

namespace entvis::opalg {

void ModeLabel::validate() const {
  const bool lossy = particle == Particle::loss;
  if (lossy != (path == 0)) {
    throw ValidationError("mode label " + to_string(*this) +
                          ": loss modes use path 0 and only loss modes may");
  }
  if (path < 0 || path > 2) {
    throw ValidationError("mode label " + to_string(*this) + ": path out of range");
  }
}

std::string to_string(const ModeLabel& l) {
  std::string s;
  switch (l.particle) {
    case Particle::alpha: s = "alpha"; break;
    case Particle::beta: s = "beta"; break;
    case Particle::loss: s = "loss"; break;
  }
  s += std::to_string(l.path);
  s += (l.pol == Pol::H) ? ":H" : ":V";
  return s;
}

std::string to_string(const LabelTuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ", ";
    s += to_string(t[i]);
  }
  return s + ")";
}

Basis::Basis(std::vector<LabelTuple> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) throw ValidationError("basis must not be empty");
  const std::size_t arity = labels_.front().size();
  if (arity == 0) throw ValidationError("basis tuples must carry at least one mode label");
  for (const auto& t : labels_) {
    if (t.size() != arity) throw ValidationError("basis tuples must have uniform arity");
    for (const auto& l : t) l.validate();
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = i + 1; j < t.size(); ++j)
        if (t[i] == t[j])
          throw ValidationError("duplicate mode label within tuple " + to_string(t));
  }
  for (std::size_t i = 0; i < labels_.size(); ++i)
    for (std::size_t j = i + 1; j < labels_.size(); ++j)
      if (labels_[i] == labels_[j])
        throw ValidationError("duplicate basis tuple " + to_string(labels_[i]));
}

std::size_t Basis::index_of(const LabelTuple& t) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == t) return i;
  throw StructuralError("tuple " + to_string(t) + " not in basis");
}

bool Basis::contains(const LabelTuple& t) const {
  return std::find(labels_.begin(), labels_.end(), t) != labels_.end();
}

Basis Basis::tensor(const Basis& a, const Basis& b) {
  std::vector<LabelTuple> out;
  out.reserve(a.dim() * b.dim());
  for (const auto& ta : a.labels_) {
    for (const auto& tb : b.labels_) {
      LabelTuple t = ta;
      t.insert(t.end(), tb.begin(), tb.end());
      out.push_back(std::move(t));
    }
  }
  return Basis(std::move(out));
}

Operator::Operator(Basis b, Eigen::MatrixXcd m) : basis(std::move(b)), mat(std::move(m)) {
  if (mat.rows() != mat.cols() || static_cast<std::size_t>(mat.rows()) != basis.dim())
    throw ValidationError("operator matrix must be square with basis dimension");
  if (!mat.allFinite()) throw ValidationError("operator entries must be finite");
}

Ket::Ket(Basis b, Eigen::VectorXcd a) : basis(std::move(b)), amp(std::move(a)) {
  if (static_cast<std::size_t>(amp.size()) != basis.dim())
    throw ValidationError("ket length must match basis dimension");
  if (!amp.allFinite()) throw ValidationError("ket amplitudes must be finite");
  if (amp.norm() > 1.0 + 1e-9)
    throw ValidationError("ket norm exceeds 1; only sub-normalized kets are allowed");
}

Operator tensor(const Operator& a, const Operator& b) {
  const auto na = a.dim(), nb = b.dim();
  Eigen::MatrixXcd m(na * nb, na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j)
      m.block(i * nb, j * nb, nb, nb) = a.mat(i, j) * b.mat;
  return Operator(Basis::tensor(a.basis, b.basis), std::move(m));
}

Ket tensor(const Ket& a, const Ket& b) {
  const auto na = a.basis.dim(), nb = b.basis.dim();
  Eigen::VectorXcd v(na * nb);
  for (std::size_t i = 0; i < na; ++i) v.segment(i * nb, nb) = a.amp(i) * b.amp;
  return Ket(Basis::tensor(a.basis, b.basis), std::move(v));
}

namespace {

// Decomposition of a basis into kept x discarded sublabel groups. Each full
// index maps to a (kept, discarded) coordinate; factorizability means the
// cell table is a complete bijection.
struct Split {
  std::vector<LabelTuple> kept;
  std::vector<LabelTuple> disc;
  std::vector<std::pair<std::size_t, std::size_t>> coord;
  Eigen::MatrixXi cell;  // kept x disc -> full index
};

std::size_t find_or_add(std::vector<LabelTuple>& pool, const LabelTuple& t) {
  for (std::size_t i = 0; i < pool.size(); ++i)
    if (pool[i] == t) return i;
  pool.push_back(t);
  return pool.size() - 1;
}

Split split_basis(const Basis& b, const std::function<bool(const ModeLabel&)>& keep_label,
                  const char* op_name) {
  Split sp;
  sp.coord.resize(b.dim());
  for (std::size_t i = 0; i < b.dim(); ++i) {
    LabelTuple kt, dt;
    for (const auto& l : b.label(i)) (keep_label(l) ? kt : dt).push_back(l);
    if (kt.empty() || dt.empty())
      throw StructuralError(std::string(op_name) +
                            ": kept particle set must split every basis tuple; tuple " +
                            to_string(b.label(i)) + " is not split");
    sp.coord[i] = {find_or_add(sp.kept, kt), find_or_add(sp.disc, dt)};
  }
  sp.cell = Eigen::MatrixXi::Constant(static_cast<int>(sp.kept.size()),
                                      static_cast<int>(sp.disc.size()), -1);
  for (std::size_t i = 0; i < b.dim(); ++i) {
    auto [k, d] = sp.coord[i];
    if (sp.cell(static_cast<int>(k), static_cast<int>(d)) != -1)
      throw StructuralError(std::string(op_name) + ": basis is not factorizable (duplicate cell)");
    sp.cell(static_cast<int>(k), static_cast<int>(d)) = static_cast<int>(i);
  }
  if (sp.kept.size() * sp.disc.size() != b.dim() || (sp.cell.array() < 0).any())
    throw StructuralError(std::string(op_name) + ": basis is not factorizable into kept x discarded groups");
  return sp;
}

}  // namespace

Operator partial_trace(const Operator& rho, const std::set<Particle>& keep) {
  if (keep.empty()) throw ValidationError("partial_trace: keep set must be nonempty");
  if (!is_hermitian(rho, 1e-8) || std::abs(trace(rho) - 1.0) > 1e-8)
    throw ValidationError("partial_trace expects a unit-trace Hermitian operator");
  auto sp = split_basis(
      rho.basis, [&](const ModeLabel& l) { return keep.count(l.particle) > 0; }, "partial_trace");
  const auto nk = sp.kept.size(), nd = sp.disc.size();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(nk, nk);
  for (std::size_t i = 0; i < nk; ++i)
    for (std::size_t j = 0; j < nk; ++j)
      for (std::size_t d = 0; d < nd; ++d)
        out(i, j) += rho.mat(sp.cell(static_cast<int>(i), static_cast<int>(d)),
                             sp.cell(static_cast<int>(j), static_cast<int>(d)));
  return Operator(Basis(sp.kept), std::move(out));
}

Operator partial_transpose(const Operator& rho, Particle subsystem) {
  auto sp = split_basis(
      rho.basis, [&](const ModeLabel& l) { return l.particle == subsystem; }, "partial_transpose");
  const auto n = rho.dim();
  Eigen::MatrixXcd out(n, n);
  for (std::size_t x = 0; x < n; ++x) {
    auto [sx, rx] = sp.coord[x];
    for (std::size_t y = 0; y < n; ++y) {
      auto [sy, ry] = sp.coord[y];
      out(x, y) = rho.mat(sp.cell(static_cast<int>(sy), static_cast<int>(rx)),
                          sp.cell(static_cast<int>(sx), static_cast<int>(ry)));
    }
  }
  return Operator(rho.basis, std::move(out));
}

std::vector<double> hermitian_eigenvalues(const Operator& m, double herm_tol) {
  if (!is_hermitian(m, herm_tol))
    throw ValidationError("hermitian_eigenvalues: operator is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.mat, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("hermitian_eigenvalues: eigensolver failed to converge");
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + m.dim());
  std::reverse(ev.begin(), ev.end());
  return ev;
}

bool is_psd(const Operator& m, double tol) {
  auto ev = hermitian_eigenvalues(m, std::max(tol, 1e-10));
  return ev.back() >= -tol;
}

bool is_hermitian(const Operator& m, double tol) {
  return (m.mat - m.mat.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

std::complex<double> trace(const Operator& m) { return m.mat.trace(); }

double purity(const Operator& m) { return (m.mat * m.mat).trace().real(); }

void validate_density(const Operator& rho, double eq_tol, double psd_tol) {
  if (!is_hermitian(rho, eq_tol))
    throw ValidationError("density operator is not Hermitian within " + std::to_string(eq_tol));
  if (std::abs(trace(rho) - 1.0) > eq_tol)
    throw ValidationError("density operator trace deviates from 1");
  auto ev = hermitian_eigenvalues(rho, std::max(eq_tol, 1e-10));
  if (ev.back() < -psd_tol)
    throw ValidationError("density operator has eigenvalue " + std::to_string(ev.back()) +
                          " below -" + std::to_string(psd_tol));
}

}  // namespace entvis::opalg
