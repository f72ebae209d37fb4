#include "doctest.h"

#include "hardysob/polynomial.hpp"
#include "hardysob/domain.hpp"

#include <cmath>

using namespace hs;

TEST_CASE("index layout is a bijection") {
  for (int n = 1; n <= 3; ++n) {
    const PolynomialCn p(n, 7);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p.index(p.monomials()[i]) == i);
  }
}

TEST_CASE("nested evaluation matches the naive sum") {
  Rng rng(4);
  std::normal_distribution<double> N;
  for (int n = 1; n <= 3; ++n) {
    PolynomialCn p(n, 9);
    for (cd& c : p.coefficients()) c = cd(N(rng), N(rng));
    for (int s = 0; s < 10; ++s) {
      CVec z = random_direction(n, rng) * 0.9;
      CHECK(std::abs(p(z) - p.eval_naive(z)) < 1e-12 * (1.0 + std::abs(p(z))));
    }
  }
}

TEST_CASE("degree and derivatives") {
  PolynomialCn p(2, 6);
  CHECK(p.degree() == -1);
  p.set({2, 1, 0}, 3.0);
  p.set({0, 1, 0}, 1.0);
  CHECK(p.degree() == 3);
  const PolynomialCn d = p.derivative({1, 1, 0});
  CVec z(2);
  z << cd(0.3, 0.1), cd(-0.2, 0.5);
  CHECK(std::abs(d(z) - 6.0 * z(0)) < 1e-14);
  CHECK(factorial({3, 2, 0}) == 12.0);
  CHECK(multi_indices(2, 3).size() == 4);
}
