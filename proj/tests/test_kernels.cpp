#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "confstl/kernels.hpp"

using namespace confstl::kernels;

namespace {

std::vector<double> randoms(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 3.0);
  std::vector<double> v(n);
  for (double& x : v) x = g(rng);
  return v;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

void check_equivalent(const KernelTable& ref, const KernelTable& alt) {
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 61u, 64u, 100u, 1001u}) {
    const auto x = randoms(rng, n);
    const auto y = randoms(rng, n);
    CHECK(same_bits(ref.sum(x.data(), n), alt.sum(x.data(), n)));
    CHECK(same_bits(ref.reduce_min(x.data(), n), alt.reduce_min(x.data(), n)));
    CHECK(same_bits(ref.reduce_max(x.data(), n), alt.reduce_max(x.data(), n)));
    CHECK(same_bits(ref.abs_gap_sum(x.data(), y.data(), n), alt.abs_gap_sum(x.data(), y.data(), n)));

    auto a1 = x;
    auto a2 = x;
    ref.accumulate_min(a1.data(), y.data(), n);
    alt.accumulate_min(a2.data(), y.data(), n);
    CHECK(a1 == a2);
    a1 = x;
    a2 = x;
    ref.accumulate_max(a1.data(), y.data(), n);
    alt.accumulate_max(a2.data(), y.data(), n);
    CHECK(a1 == a2);

    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = (rng() & 1) ? 1 : -1;
    CHECK(ref.sign_agreement(x.data(), labels.data(), n) == alt.sign_agreement(x.data(), labels.data(), n));

    for (std::size_t d : {1u, 2u, 3u}) {
      const auto m = randoms(rng, d * n);
      const auto coeffs = randoms(rng, d);
      std::vector<double> o1(n), o2(n);
      ref.affine(m.data(), n, d, coeffs.data(), 0.25, o1.data(), n);
      alt.affine(m.data(), n, d, coeffs.data(), 0.25, o2.data(), n);
      CHECK(o1 == o2);
    }
  }
}

}  // namespace

TEST_CASE("scalar kernels against direct loops") {
  const auto& k = scalar_table();
  const std::vector<double> v{3.0, -1.0, 4.0, -1.5, 5.0};
  CHECK(k.sum(v.data(), v.size()) == doctest::Approx(9.5));
  CHECK(k.reduce_min(v.data(), v.size()) == -1.5);
  CHECK(k.reduce_max(v.data(), v.size()) == 5.0);
  const std::vector<double> w{-3.0, 2.0, 1.0, 1.5, 0.0};
  CHECK(k.abs_gap_sum(v.data(), w.data(), v.size()) == doctest::Approx(0 + 1 + 3 + 0 + 5));
  const std::vector<int> labels{1, 1, 1, -1, -1};
  CHECK(k.sign_agreement(v.data(), labels.data(), v.size()) == 3);

  // two channels, three steps, channel-major
  const std::vector<double> x{1, 2, 3, 10, 20, 30};
  const double coeffs[] = {2.0, -0.5};
  double out[3];
  k.affine(x.data(), 3, 2, coeffs, 1.0, out, 3);
  CHECK(out[0] == doctest::Approx(2 - 5 - 1));
  CHECK(out[1] == doctest::Approx(4 - 10 - 1));
  CHECK(out[2] == doctest::Approx(6 - 15 - 1));
}

TEST_CASE("zero robustness counts as a negative classification") {
  const double v[] = {0.0, 0.0};
  const int labels[] = {1, -1};
  CHECK(scalar_table().sign_agreement(v, labels, 2) == 1);
}

TEST_CASE("vector kernels are bit-identical to scalar") {
  if (const auto* t = avx2_table()) {
    check_equivalent(scalar_table(), *t);
  }
  if (const auto* t = neon_table()) {
    check_equivalent(scalar_table(), *t);
  }
  check_equivalent(scalar_table(), active());
}

TEST_CASE("backend selection") {
  const Backend before = active().backend;
  CHECK(select(Backend::Scalar));
  CHECK(active().backend == Backend::Scalar);
  if (avx2_table() == nullptr) CHECK_FALSE(select(Backend::Avx2));
  if (neon_table() == nullptr) CHECK_FALSE(select(Backend::Neon));
  CHECK(select(before));
  CHECK(backend_name(Backend::Scalar) == "scalar");
}
