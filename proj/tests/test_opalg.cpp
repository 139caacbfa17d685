#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "entvis/entmeas.hpp"
#include "entvis/interf.hpp"
#include "entvis/opalg.hpp"
#include "oracles.hpp"

using namespace entvis;
using opalg::Basis;
using opalg::Ket;
using opalg::ModeLabel;
using opalg::Operator;
using opalg::Particle;
using opalg::Pol;

namespace {

Basis qubit_basis(Particle part, int path) {
  return Basis({{ModeLabel{part, path, Pol::H}}, {ModeLabel{part, path, Pol::V}}});
}

Operator identity_op(const Basis& b) {
  return Operator(b, Eigen::MatrixXcd::Identity(b.dim(), b.dim()));
}

Operator pauli_y(const Basis& b) {
  Eigen::Matrix2cd m;
  m << 0.0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0.0;
  return Operator(b, m);
}

Operator random_density_op(std::mt19937_64& rng, const Basis& b) {
  return Operator(b, oracle::random_density(rng, static_cast<int>(b.dim())));
}

}  // namespace

TEST_CASE("mode labels reject loss/path mismatches") {
  CHECK_THROWS_AS((ModeLabel{Particle::loss, 1, Pol::H}.validate()), ValidationError);
  CHECK_THROWS_AS((ModeLabel{Particle::alpha, 0, Pol::H}.validate()), ValidationError);
  CHECK_NOTHROW((ModeLabel{Particle::loss, 0, Pol::V}.validate()));
}

TEST_CASE("basis construction enforces uniqueness") {
  const ModeLabel a{Particle::alpha, 1, Pol::H};
  CHECK_THROWS_AS(Basis({{a}, {a}}), ValidationError);
  CHECK_THROWS_AS(Basis({{a, a}}), ValidationError);
  CHECK_THROWS_AS(Basis({{a}, {a, ModeLabel{Particle::beta, 1, Pol::H}}}), ValidationError);
}

TEST_CASE("tensor of identities and projectors") {
  auto ba = qubit_basis(Particle::alpha, 1);
  auto bb = qubit_basis(Particle::beta, 1);
  auto i4 = opalg::tensor(identity_op(ba), identity_op(bb));
  CHECK(i4.dim() == 4);
  CHECK((i4.mat - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() == 0.0);

  // sigma_y (x) sigma_y applied twice is the identity
  auto yy = opalg::tensor(pauli_y(ba), pauli_y(bb));
  CHECK(((yy.mat * yy.mat) - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  // |H><H| (x) |V><V| is the rank-1 projector onto HV
  Eigen::Matrix2cd ph = Eigen::Matrix2cd::Zero(), pv = Eigen::Matrix2cd::Zero();
  ph(0, 0) = 1.0;
  pv(1, 1) = 1.0;
  auto proj = opalg::tensor(Operator(ba, ph), Operator(bb, pv));
  Eigen::Matrix4cd expect = Eigen::Matrix4cd::Zero();
  expect(1, 1) = 1.0;  // index 1 is (H, V)
  CHECK((proj.mat - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("tensor of kets concatenates labels in order") {
  auto ba = qubit_basis(Particle::alpha, 1);
  auto bb = qubit_basis(Particle::beta, 1);
  Eigen::Vector2cd h(1.0, 0.0), v(0.0, 1.0);
  auto hv = opalg::tensor(Ket(ba, h), Ket(bb, v));
  CHECK(hv.amp(1) == std::complex<double>(1.0, 0.0));
  CHECK(hv.basis.label(0).size() == 2);
  CHECK(hv.basis.label(0)[0].particle == Particle::alpha);
}

TEST_CASE("partial trace of a product state returns the kept factor") {
  std::mt19937_64 rng(7);
  auto ba = qubit_basis(Particle::alpha, 1);
  auto bb = qubit_basis(Particle::beta, 1);
  for (int trial = 0; trial < 20; ++trial) {
    auto rho_a = random_density_op(rng, ba);
    auto rho_b = random_density_op(rng, bb);
    auto joint = opalg::tensor(rho_a, rho_b);
    auto back_b = opalg::partial_trace(joint, {Particle::beta});
    CHECK((back_b.mat - rho_b.mat).cwiseAbs().maxCoeff() < 1e-12);
    auto back_a = opalg::partial_trace(joint, {Particle::alpha});
    CHECK((back_a.mat - rho_a.mat).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(opalg::trace(back_a) - 1.0) < 1e-12);
  }
}

TEST_CASE("partial trace of a Bell state is maximally mixed") {
  auto rho = entmeas::build_rho({0.5, 1.0, 0.0});
  auto red = opalg::partial_trace(rho, {Particle::beta});
  CHECK((red.mat - 0.5 * Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("partial trace rejects non-factorizable bases") {
  // The two-source biphoton basis is a direct sum of same-source sectors, not
  // a product; tracing it must be refused.
  auto rho = interf::coherent_two_source_rho({0.5, 0.5, 0.0}, interf::SetupParams::ideal());
  CHECK_THROWS_AS(opalg::partial_trace(rho, {Particle::beta}), StructuralError);
}

TEST_CASE("partial trace requires a density-like input and nonempty keep set") {
  auto rho = entmeas::build_rho({0.5, 1.0, 0.0});
  CHECK_THROWS_AS(opalg::partial_trace(rho, {}), ValidationError);
  Operator scaled(rho.basis, 2.0 * rho.mat);
  CHECK_THROWS_AS(opalg::partial_trace(scaled, {Particle::beta}), ValidationError);
}

TEST_CASE("partial transpose eigenvalues of the mixed-state family") {
  auto check = [](double ih, double coh, double phi, double expected_min) {
    auto pt = opalg::partial_transpose(entmeas::build_rho({ih, coh, phi}), Particle::alpha);
    auto ev = opalg::hermitian_eigenvalues(pt);
    CHECK(ev.back() == doctest::Approx(expected_min).epsilon(1e-12));
  };
  check(0.5, 1.0, 0.0, -0.5);
  check(0.5, 0.32, 0.4, -0.16);
}

TEST_CASE("partial transpose is an involution and preserves the spectrum sum") {
  std::mt19937_64 rng(11);
  auto basis = entmeas::two_qubit_basis();
  for (int trial = 0; trial < 20; ++trial) {
    auto rho = random_density_op(rng, basis);
    auto pt = opalg::partial_transpose(rho, Particle::alpha);
    auto ptpt = opalg::partial_transpose(pt, Particle::alpha);
    CHECK((ptpt.mat - rho.mat).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(opalg::trace(pt) - opalg::trace(rho)) < 1e-14);
  }
}

TEST_CASE("partial transpose of a separable product state stays positive") {
  std::mt19937_64 rng(13);
  auto joint = opalg::tensor(random_density_op(rng, qubit_basis(Particle::alpha, 1)),
                             random_density_op(rng, qubit_basis(Particle::beta, 1)));
  auto pt = opalg::partial_transpose(joint, Particle::alpha);
  CHECK(opalg::is_psd(pt, 1e-10));
}

TEST_CASE("hermitian_eigenvalues basics") {
  auto basis = entmeas::two_qubit_basis();
  Operator quarter(basis, 0.25 * Eigen::Matrix4cd::Identity());
  auto ev = opalg::hermitian_eigenvalues(quarter);
  for (double e : ev) CHECK(e == doctest::Approx(0.25).epsilon(1e-14));

  Eigen::Matrix4cd bad = Eigen::Matrix4cd::Zero();
  bad(0, 1) = 1.0;  // not Hermitian
  CHECK_THROWS_AS(opalg::hermitian_eigenvalues(Operator(basis, bad)), ValidationError);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    Operator rho(basis, oracle::random_density(rng, 4));
    auto evs = opalg::hermitian_eigenvalues(rho);
    double sum = 0.0;
    bool sorted = true;
    for (std::size_t i = 0; i < evs.size(); ++i) {
      sum += evs[i];
      if (i && evs[i] > evs[i - 1] + 1e-14) sorted = false;
    }
    CHECK(sorted);
    CHECK(sum == doctest::Approx(opalg::trace(rho).real()).epsilon(1e-10));
  }
}

TEST_CASE("eigenvalues of the canonical two-source matrix") {
  // Fully coherent candidates keep the operator positive...
  auto m1 = oracle::symmetric_two_source_matrix(1.0, 1.0, 1.0);
  auto ev1 = opalg::hermitian_eigenvalues(Operator(interf::two_source_basis(), m1));
  CHECK(ev1.back() >= -1e-12);
  // ...but cross coherences exceeding the state coherence do not.
  auto m2 = oracle::symmetric_two_source_matrix(0.5, 1.0, 1.0);
  auto ev2 = opalg::hermitian_eigenvalues(Operator(interf::two_source_basis(), m2));
  CHECK(ev2.back() < -1e-3);
}

TEST_CASE("is_psd") {
  auto basis = entmeas::two_qubit_basis();
  CHECK(opalg::is_psd(identity_op(basis)));
  auto bell_pt = opalg::partial_transpose(entmeas::build_rho({0.5, 1.0, 0.0}), Particle::alpha);
  CHECK_FALSE(opalg::is_psd(bell_pt, 1e-10));
  auto probe = oracle::symmetric_two_source_matrix(0.5, 0.6, 0.5);
  CHECK_FALSE(opalg::is_psd(Operator(interf::two_source_basis(), probe), 1e-10));
}

TEST_CASE("kets reject norms above one") {
  auto ba = qubit_basis(Particle::alpha, 1);
  CHECK_THROWS_AS(Ket(ba, Eigen::Vector2cd(2.0, 0.0)), ValidationError);
  CHECK_NOTHROW(Ket(ba, Eigen::Vector2cd(0.3, 0.0)));  // sub-normalized is fine
}

TEST_CASE("validate_density accepts pipeline states and rejects garbage") {
  CHECK_NOTHROW(opalg::validate_density(entmeas::build_rho({0.3, 0.7, 1.0})));
  auto basis = entmeas::two_qubit_basis();
  // unit trace and Hermitian, but with a negative eigenvalue
  Eigen::Vector4cd d(-0.25, 0.5, 0.375, 0.375);
  CHECK_THROWS_AS(opalg::validate_density(Operator(basis, d.asDiagonal()), 1e-12, 1e-10),
                  ValidationError);
  // trace off by more than the tolerance
  CHECK_THROWS_AS(
      opalg::validate_density(Operator(basis, 1.01 * Eigen::Matrix4cd::Identity() / 4.0)),
      ValidationError);
}
