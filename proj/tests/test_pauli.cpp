#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "bosonq/matrix.hpp"
#include "bosonq/pauli.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace bosonq;
using bosonq::testing::basis_vector;
using bosonq::testing::random_string;

namespace {

Matrix dense_commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

}  // namespace

TEST_CASE("single-qubit operator matrices have the frozen entries") {
  PauliString x = PauliString::parse("X");
  PauliString y = PauliString::parse("Y");
  PauliString z = PauliString::parse("Z");
  PauliString id = PauliString::parse("I");

  Matrix mx(2, 2), my(2, 2), mz(2, 2), mi(2, 2);
  mx << 0, 1, 1, 0;
  my << 0, complexd(0, -1), complexd(0, 1), 0;
  mz << 1, 0, 0, -1;
  mi << 1, 0, 0, 1;

  CHECK(max_abs_diff(x.to_matrix(), mx) == doctest::Approx(0.0));
  CHECK(max_abs_diff(y.to_matrix(), my) == doctest::Approx(0.0));
  CHECK(max_abs_diff(z.to_matrix(), mz) == doctest::Approx(0.0));
  CHECK(max_abs_diff(id.to_matrix(), mi) == doctest::Approx(0.0));
}

TEST_CASE("qubit 0 is the leftmost tensor factor") {
  PauliString zi = PauliString::parse("ZI");
  Matrix expected = kron(PauliString::parse("Z").to_matrix(), PauliString::parse("I").to_matrix());
  CHECK(max_abs_diff(zi.to_matrix(), expected) < 1e-15);
  // ZI acts as Z on the high-order bit of the index.
  Vector v = basis_vector("10");
  Vector w = zi.to_matrix() * v;
  CHECK(std::abs(w(2) - complexd(-1.0, 0.0)) < 1e-15);
}

TEST_CASE("single-qubit products carry the frozen phases") {
  auto X = PauliString::parse("X");
  auto Y = PauliString::parse("Y");
  auto Z = PauliString::parse("Z");

  auto xy = mul(X, Y);
  CHECK(xy.axes[0] == Axis::Z);
  CHECK(xy.coeff == complexd(0.0, 1.0));  // XY = iZ

  auto yx = mul(Y, X);
  CHECK(yx.coeff == complexd(0.0, -1.0));  // YX = -iZ

  auto yz = mul(Y, Z);
  CHECK(yz.axes[0] == Axis::X);
  CHECK(yz.coeff == complexd(0.0, 1.0));  // YZ = iX

  auto zx = mul(Z, X);
  CHECK(zx.axes[0] == Axis::Y);
  CHECK(zx.coeff == complexd(0.0, 1.0));  // ZX = iY

  auto xx = mul(X, X);
  CHECK(xx.axes[0] == Axis::I);
  CHECK(xx.coeff == complexd(1.0, 0.0));
}

TEST_CASE("string products agree with dense matrix products") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + std::size_t(trial % 5);
    auto a = random_string(rng, n);
    auto b = random_string(rng, n);
    auto c = mul(a, b);
    CHECK(max_abs_diff(c.to_matrix(), Matrix(a.to_matrix() * b.to_matrix())) < 1e-12);
  }
}

TEST_CASE("commutes matches the dense commutator") {
  std::mt19937_64 rng(777);
  int commuting = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + std::size_t(trial % 4);
    auto a = random_string(rng, n, true);
    auto b = random_string(rng, n, true);
    Matrix comm = dense_commutator(a.to_matrix(), b.to_matrix());
    bool dense_commutes = comm.cwiseAbs().maxCoeff() < 1e-12;
    CHECK(commutes(a, b) == dense_commutes);
    if (dense_commutes) ++commuting;
  }
  CHECK(commuting > 10);  // sanity: both branches exercised
  CHECK(200 - commuting > 10);
}

TEST_CASE("parse round-trips through text") {
  auto p = PauliString::parse("XIZY", complexd(0.5, -0.25));
  CHECK(p.axes_text() == "XIZY");
  CHECK(p.weight() == 3);
  CHECK(p.support() == std::vector<std::size_t>{0, 2, 3});
  CHECK_THROWS(PauliString::parse("XQ"));
}

TEST_CASE("sum arithmetic matches dense algebra") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 2 + std::size_t(trial % 3);
    PauliSum a(n), b(n);
    for (int t = 0; t < 4; ++t) {
      a.add(random_string(rng, n));
      b.add(random_string(rng, n));
    }
    Matrix da = a.to_matrix(), db = b.to_matrix();
    CHECK(max_abs_diff(add(a, b).to_matrix(), Matrix(da + db)) < 1e-12);
    CHECK(max_abs_diff(sub(a, b).to_matrix(), Matrix(da - db)) < 1e-12);
    CHECK(max_abs_diff(mul(a, b).to_matrix(), Matrix(da * db)) < 1e-11);
    CHECK(max_abs_diff(commutator(a, b).to_matrix(), dense_commutator(da, db)) < 1e-11);
    CHECK(max_abs_diff(scale(a, complexd(0.0, 2.0)).to_matrix(), Matrix(complexd(0.0, 2.0) * da)) <
          1e-12);
    CHECK(max_abs_diff(adjoint(a).to_matrix(), Matrix(da.adjoint())) < 1e-12);
  }
}

TEST_CASE("simplify merges duplicates and prunes zeros") {
  PauliSum s(2);
  s.add(PauliString::parse("XY", {1.0, 0.0}));
  s.add(PauliString::parse("XY", {2.0, 0.0}));
  s.add(PauliString::parse("ZZ", {1.0, 0.0}));
  s.add(PauliString::parse("ZZ", {-1.0, 0.0}));
  auto t = simplify(s);
  REQUIRE(t.terms.size() == 1);
  CHECK(t.terms[0].axes_text() == "XY");
  CHECK(t.terms[0].coeff == complexd(3.0, 0.0));
}

TEST_CASE("hermiticity detection") {
  PauliSum h(2);
  h.add(PauliString::parse("XX", {0.5, 0.0}));
  h.add(PauliString::parse("YY", {0.5, 0.0}));
  CHECK(is_hermitian(h));

  PauliSum g(2);
  g.add(PauliString::parse("XX", {0.0, 0.5}));
  CHECK_FALSE(is_hermitian(g));

  // i(A - A†)-style combinations simplify to hermitian form.
  PauliSum k(1);
  k.add(PauliString::parse("X", {0.0, 0.5}));
  k.add(PauliString::parse("X", {1.0, -0.5}));
  CHECK(is_hermitian(k));
}

TEST_CASE("ladder operators have the frozen matrices") {
  // sigma_minus maps |0> to |1>: lower-triangular entry.
  Matrix sm = sigma_minus(1, 0).to_matrix();
  Matrix sp = sigma_plus(1, 0).to_matrix();
  Matrix esm(2, 2), esp(2, 2);
  esm << 0, 0, 1, 0;
  esp << 0, 1, 0, 0;
  CHECK(max_abs_diff(sm, esm) < 1e-15);
  CHECK(max_abs_diff(sp, esp) < 1e-15);

  // Embedded on qubit 1 of 3, identity elsewhere.
  Matrix id2 = Matrix::Identity(2, 2);
  Matrix expected = kron(kron(id2, esm), id2);
  CHECK(max_abs_diff(sigma_minus(3, 1).to_matrix(), expected) < 1e-15);
}

TEST_CASE("pairwise commutation over whole sums") {
  PauliSum ok(3);
  ok.add(PauliString::parse("XIX", {0.5, 0.0}));
  ok.add(PauliString::parse("YIY", {0.5, 0.0}));
  CHECK(commutes_pairwise(ok));

  PauliSum bad(2);
  bad.add(PauliString::parse("XI", {1.0, 0.0}));
  bad.add(PauliString::parse("YI", {1.0, 0.0}));
  CHECK_FALSE(commutes_pairwise(bad));
}
