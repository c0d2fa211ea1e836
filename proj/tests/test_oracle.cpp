#include <doctest.h>

#include <cmath>

#include "umap/oracle.hpp"

using namespace umap;

namespace {

using cd = std::complex<double>;

Tuple T(std::initializer_list<const char*> words) {
  Tuple out;
  for (const char* w : words) out.push_back(parse_word(w));
  return out;
}

}  // namespace

TEST_CASE("Philox4x32-10 known answers") {
  using B = Philox4x32::Block;
  CHECK(Philox4x32::bijection({0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::bijection({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::bijection({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("uniforms and Gaussians") {
  Philox4x32 rng(17);
  double mean = 0, lo = 1, hi = 0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    double u = rng.uniform();
    mean += u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo > 0);
  CHECK(hi < 1);
  CHECK(std::abs(mean / n - 0.5) < 4 * std::sqrt(1.0 / 12 / n));

  Philox4x32 g(18);
  double m2 = 0;
  cd m1 = 0;
  for (int k = 0; k < n; ++k) {
    cd z = g.complex_gaussian();
    m1 += z;
    m2 += std::norm(z);
  }
  CHECK(std::abs(m1 / double(n)) < 4 / std::sqrt(double(n)));
  CHECK(std::abs(m2 / n - 1) < 0.02);

  Philox4x32 a(5, 2, 1), b(5, 2, 1), c(5, 3, 1);
  double x = a.uniform();
  CHECK(x == b.uniform());
  CHECK(x != c.uniform());
}

TEST_CASE("Haar samples are unitary") {
  for (int N : {1, 2, 5, 9})
    for (std::uint64_t s = 0; s < 5; ++s) {
      auto U = sample_haar(N, 7, s);
      double err = (U * U.adjoint() - Eigen::MatrixXcd::Identity(N, N)).cwiseAbs().maxCoeff();
      CHECK(err < 1e-12);
    }
  auto U1 = sample_haar(1, 3);
  CHECK(std::abs(std::abs(U1(0, 0)) - 1) < 1e-14);
  CHECK(sample_haar(4, 11, 2, 1) == sample_haar(4, 11, 2, 1));
  CHECK_THROWS(sample_haar(0, 1));
}

TEST_CASE("first and second moments of an entry") {
  const int N = 4, n = 20000;
  cd m1 = 0;
  double m2 = 0, m4 = 0;
  for (int s = 0; s < n; ++s) {
    cd z = sample_haar(N, 31, s)(0, 0);
    m1 += z;
    m2 += std::norm(z);
    m4 += std::norm(z) * std::norm(z);
  }
  m1 /= double(n);
  m2 /= n;
  m4 /= n;
  // Var |U₁₁|² = E|U₁₁|⁴ − (E|U₁₁|²)²
  double se2 = std::sqrt((m4 - m2 * m2) / n);
  CHECK(std::abs(m1) < 4 * std::sqrt(1.0 / N / n));
  CHECK(std::abs(m2 - 1.0 / N) < 4 * se2);
}

TEST_CASE("evaluating words") {
  const int N = 3;
  MatrixMap U{{1, Eigen::MatrixXcd::Identity(N, N)}};
  MatrixTuple A;
  A.N = N;
  A.A[1] = Eigen::MatrixXcd::Identity(N, N);
  A.A[2] = Eigen::MatrixXcd::Random(N, N);
  CHECK(evaluate_word(parse_word("u1"), U, A).isApprox(Eigen::MatrixXcd::Identity(N, N)));
  CHECK(evaluate_word(parse_word("a2"), U, A) == A.A[2]);
  U[1] = sample_haar(N, 1);
  CHECK(evaluate_word(parse_word("a1 u1 a1 u1^-1"), U, A).isApprox(Eigen::MatrixXcd::Identity(N, N)));
  CHECK(evaluate_word(parse_word("a2*"), U, A) == A.A[2].adjoint());
  CHECK_THROWS(evaluate_word(parse_word("a3"), U, A));
  CHECK_THROWS(evaluate_word(parse_word("u2"), U, A));
}

TEST_CASE("matrix tuples are validated") {
  MatrixTuple A;
  A.N = 2;
  A.bounded = true;
  A.A[1] = 2 * Eigen::MatrixXcd::Identity(2, 2);
  CHECK_THROWS(A.validate());
  A.bounded = false;
  CHECK_NOTHROW(A.validate());
  A.A[1] = Eigen::MatrixXcd::Identity(3, 3);
  CHECK_THROWS(A.validate());
  auto C = seeded_contractions(4, {1, 2}, 8);
  CHECK_NOTHROW(C.validate());
  CHECK(Eigen::JacobiSVD<Eigen::MatrixXcd>(C.A[2]).singularValues()(0) == doctest::Approx(1));
}

TEST_CASE("empirical moments and cumulants") {
  SamplingOptions opt;
  opt.samples = 10000;
  opt.seed = 2024;

  MatrixTuple I;
  I.N = 3;
  I.A[1] = Eigen::MatrixXcd::Identity(3, 3);
  auto c1 = empirical_joint_cumulant(T({"a1"}), I, opt);
  CHECK(c1.estimate == cd(3));
  CHECK(c1.std_error == 0);
  CHECK(c1.within(1e-9));

  MatrixTuple none;
  none.N = 5;
  auto tr2 = empirical_joint_moment(T({"u1", "u1^-1"}), none, opt);
  CHECK(std::abs(tr2.target - 1.0) < 1e-12);
  CHECK(tr2.within(4));
  auto c2 = empirical_joint_cumulant(T({"u1", "u1^-1"}), none, opt);
  CHECK(std::abs(c2.target - 1.0) < 1e-12);
  CHECK(c2.within(4));

  MatrixTuple AB = seeded_contractions(4, {1, 2}, 3);
  auto hciz = empirical_joint_cumulant(T({"a1 u1 a2 u1^-1"}), AB, opt);
  cd expected = AB.A[1].trace() * AB.A[2].trace() / 4.0;
  CHECK(std::abs(hciz.target - expected) < 1e-12);
  CHECK(hciz.within(4));
}

TEST_CASE("reports do not depend on the thread count") {
  MatrixTuple A = seeded_contractions(3, {1, 2}, 4);
  SamplingOptions one;
  one.samples = 500;
  one.seed = 9;
  SamplingOptions four = one;
  four.threads = 4;
  auto P = T({"a1 u1 a2 u1^-1", "u1 u2 u1^-1 u2^-1"});
  auto x = empirical_joint_cumulant(P, A, one), y = empirical_joint_cumulant(P, A, four);
  CHECK(x.estimate == y.estimate);
  CHECK(x.std_error == y.std_error);
  auto z = empirical_joint_cumulant(P, A, one);
  CHECK(z.estimate == x.estimate);
}
