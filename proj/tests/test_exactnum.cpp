#include <doctest.h>

#include <random>

#include "qinv/exactnum.hpp"
#include "qinv/linalg.hpp"

using namespace qinv;

namespace {

int mobius(int n) {
  int r = 1;
  for (int p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    r = -r;
  }
  return n > 1 ? -r : r;
}

std::vector<long> poly_mul(const std::vector<long>& a, const std::vector<long>& b) {
  std::vector<long> c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

std::vector<long> poly_div(std::vector<long> a, const std::vector<long>& b) {
  size_t dn = b.size() - 1;
  std::vector<long> q(a.size() - dn, 0);
  for (size_t i = q.size(); i-- > 0;) {
    q[i] = a[i + dn] / b[dn];
    for (size_t j = 0; j <= dn; ++j) a[i + j] -= q[i] * b[j];
  }
  return q;
}

// Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}
std::vector<long> mobius_cyclotomic(int n) {
  std::vector<long> num{1}, den{1};
  for (int d = 1; d <= n; ++d) {
    if (n % d) continue;
    std::vector<long> f(d + 1, 0);
    f[0] = -1;
    f[d] = 1;
    int mu = mobius(n / d);
    if (mu == 1) num = poly_mul(num, f);
    if (mu == -1) den = poly_mul(den, f);
  }
  return poly_div(num, den);
}

CycNumber random_cyc(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
  std::vector<Rational> c;
  for (int i = 0; i < euler_phi(n); ++i) c.push_back(Rational(num(rng), den(rng)));
  for (auto& q : c) q.canonicalize();
  return CycNumber::from_coeffs(n, c);
}

}  // namespace

TEST_CASE("rational parsing is canonical") {
  CHECK(parse_rational("2/4") == Rational(1, 2));
  CHECK(to_string(parse_rational("-6/3")) == "-2");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
  CHECK(rational_from_json(rational_to_json(Rational(-7, 3))) == Rational(-7, 3));
}

TEST_CASE("cyclotomic polynomials agree with the Mobius product") {
  for (int n = 1; n <= 40; ++n) {
    CHECK(cyclotomic_polynomial(n) == mobius_cyclotomic(n));
    CHECK(static_cast<int>(cyclotomic_polynomial(n).size()) - 1 == euler_phi(n));
  }
  CHECK(cyclotomic_polynomial(12) == std::vector<long>{1, 0, -1, 0, 1});
}

TEST_CASE("roots of unity") {
  for (int n : {1, 2, 3, 4, 5, 6, 8, 12}) {
    CycNumber z = CycNumber::zeta(n, 1);
    CycNumber p(1);
    for (int k = 0; k < n; ++k) {
      if (k > 0 && n > 1) CHECK(!p.is_one());
      p *= z;
    }
    CHECK(p.is_one());
    CycNumber sum(0);
    for (int k = 0; k < n; ++k) sum += CycNumber::zeta(n, k);
    CHECK(sum == CycNumber(n == 1 ? 1 : 0));
    CHECK(z.conj() == CycNumber::zeta(n, -1));
    CHECK(root_of_unity_exponent(CycNumber::zeta(n, 3), n) == 3 % n);
  }
  CycNumber i = CycNumber::zeta(4, 1);
  CHECK(i * i == CycNumber(-1));
}

TEST_CASE("field axioms on random elements") {
  std::mt19937 rng(7);
  for (int n : {3, 4, 5, 8, 12}) {
    for (int trial = 0; trial < 20; ++trial) {
      CycNumber a = random_cyc(rng, n), b = random_cyc(rng, n), c = random_cyc(rng, n);
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a * b == b * a);
      CHECK((a * b).conj() == a.conj() * b.conj());
      CHECK(a.conj().conj() == a);
      CHECK((a * a.conj()).conj() == a * a.conj());
      if (!a.is_zero()) {
        CHECK(a * a.inverse() == CycNumber(1));
        CHECK((b / a) * a == b);
      }
    }
  }
}

TEST_CASE("promotion preserves values") {
  CycNumber w = CycNumber::zeta(3, 1);
  CycNumber w6 = w.promote(6);
  CHECK(w6 == CycNumber::zeta(6, 2));
  CHECK(w + CycNumber::zeta(4, 1) == CycNumber::zeta(12, 4) + CycNumber::zeta(12, 3));
  CHECK(CycNumber(Rational(1, 2)) == CycNumber::rational(Rational(1, 2), 5));
  CHECK_THROWS(CycNumber(0).inverse());
}

TEST_CASE("json round trip") {
  std::mt19937 rng(3);
  CycNumber a = random_cyc(rng, 5);
  CHECK(CycNumber::from_json(a.to_json()) == a);
  auto j = nlohmann::json::parse(R"({"conductor":3,"coeffs":[[1,2],[0,1]]})");
  CHECK(CycNumber::from_json(j) == CycNumber(Rational(1, 2)));
}

TEST_CASE("exact linear algebra") {
  std::mt19937 rng(11);
  Matrix m(3, std::vector<CycNumber>(3));
  for (auto& row : m)
    for (auto& x : row) x = random_cyc(rng, 3);
  Matrix inv = inverse(m);
  CHECK(matmul(m, inv) == identity_matrix<CycNumber>(3));
  Matrix sing = {{CycNumber(1), CycNumber(2)}, {CycNumber(2), CycNumber(4)}};
  CHECK(rank(sing, 2) == 1);
  Matrix k = kernel(sing, 2);
  REQUIRE(k.size() == 1);
  CHECK(matvec(sing, k[0]) == std::vector<CycNumber>{CycNumber(0), CycNumber(0)});
}
