#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/model_params.hpp"

using namespace lvbif;

TEST_SUITE("model_params") {
  TEST_CASE("worked case constant state") {
    const Params p = validate_params(1, 1, 2, 1, 2);
    const ConstantState c = constant_state(p, 2.0);
    CHECK(std::abs(c.a - 3.0 / 7.0) < 1e-14);
    CHECK(std::abs(c.b - 1.0 / 7.0) < 1e-14);
    const auto [r1, r2] = reaction(p, 2.0, c.a, c.b);
    CHECK(std::abs(r1) < 1e-15);
    CHECK(std::abs(r2) < 1e-15);
  }

  TEST_CASE("validation names the violated inequality") {
    auto message = [](double mu, double sigma, double alpha, double gamma, int dim) {
      try {
        validate_params(mu, sigma, alpha, gamma, dim);
      } catch (const ValidationError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(message(0, 1, 2, 1, 2).find("mu > 0") != std::string::npos);
    CHECK(message(2, 1, 2, 1, 2).find("sigma >= mu") != std::string::npos);
    CHECK(message(1, 1, 2, -1, 2).find("gamma > 0") != std::string::npos);
    CHECK(message(1, 1, 1, 1, 2).find("alpha > gamma") != std::string::npos);
    CHECK(message(1, 1, 2, 1, 1).find("dim >= 2") != std::string::npos);
    CHECK(message(NAN, 1, 2, 1, 2).find("finite") != std::string::npos);
    CHECK(message(1, 1, 2, 1, 2).empty());
  }

  TEST_CASE("constant state requires beta above sigma/gamma") {
    const Params p = validate_params(16, 16, 2, 1, 2);
    CHECK_THROWS_AS(constant_state(p, 16.0), DomainError);
    CHECK_THROWS_AS(constant_state(p, 3.0), DomainError);
    CHECK_NOTHROW(constant_state(p, 16.001));
  }

  TEST_CASE("constant state solves the reaction system on random draws") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
      const double mu = std::exp(4 * u(rng) - 2), sigma = mu * (1 + 3 * u(rng));
      const double gamma = std::exp(2 * u(rng) - 1), alpha = gamma * (1 + 3 * u(rng));
      const Params p = validate_params(mu, sigma, alpha, gamma, 2);
      const double beta = p.beta_min() * std::exp(8 * u(rng) + 1e-3);
      const ConstantState c = constant_state(p, beta);
      CHECK(c.a > 0);
      CHECK(c.b > 0);
      CHECK(c.a < 1);
      CHECK(c.b < 1);
      const auto [r1, r2] = reaction(p, beta, c.a, c.b);
      const double s1 = mu * c.a + mu * c.a * c.a + beta * alpha * c.a * c.b;
      const double s2 = sigma * c.b + sigma * c.b * c.b + beta * gamma * c.a * c.b;
      CHECK(std::abs(r1) <= 8e-16 * s1);
      CHECK(std::abs(r2) <= 8e-16 * s2);
    }
  }

  TEST_CASE("trivial states are equilibria for every beta") {
    const Params p = validate_params(3, 5, 2, 1, 3);
    for (const auto& [u1, u2] : trivial_states(p)) {
      const auto [r1, r2] = reaction(p, 17.0, u1, u2);
      CHECK(r1 == 0.0);
      CHECK(r2 == 0.0);
    }
  }

  TEST_CASE("locked pair solves both equations when sigma equals mu") {
    const Params p = validate_params(4, 4, 3, 1, 2);
    const double beta = 9.0;
    for (double w : {-0.7, -0.1, 0.0, 0.2, 0.9}) {
      const auto [u1, u2] = locked_pair(p, beta, w);
      // Proportional components make v vanish, and both reactions reduce to u_i (μ - w).
      CHECK(std::abs((beta * p.gamma - p.mu) * u1 - (beta * p.alpha - p.mu) * u2) < 1e-15);
      const auto [r1, r2] = reaction(p, beta, u1, u2);
      CHECK(r1 == doctest::Approx(u1 * (p.mu - w)).epsilon(1e-13));
      CHECK(r2 == doctest::Approx(u2 * (p.mu - w)).epsilon(1e-13));
    }
  }

  TEST_CASE("locked pair endpoints") {
    const Params p = validate_params(4, 4, 3, 1, 2);
    const double beta = 9.0;
    const auto [z1, z2] = locked_pair(p, beta, 0.0);
    CHECK(z1 == 0.0);
    CHECK(z2 == 0.0);
    const ConstantState c = constant_state(p, beta);
    const auto [m1, m2] = locked_pair(p, beta, -p.mu);
    CHECK(m1 == doctest::Approx(-c.a).epsilon(1e-14));
    CHECK(m2 == doctest::Approx(-c.b).epsilon(1e-14));
    const std::vector<double> w{0.1, -0.2, 0.3};
    const FieldPair f = locked_pair(p, beta, w);
    for (std::size_t i = 0; i < w.size(); ++i) CHECK(f.u1[i] == locked_pair(p, beta, w[i]).first);
    CHECK_THROWS_AS(locked_pair(validate_params(4, 5, 3, 1, 2), beta, 0.1), DomainError);
  }

  TEST_CASE("limit reaction branches agree at zero and match the alternative coding") {
    const LimitReaction f(16, 1, 2);
    CHECK(f(0.0) == 0.0);
    CHECK(f.derivative(0.0) == doctest::Approx(16.0));
    CHECK(f(1.0) == doctest::Approx(0.0));
    CHECK(f(-2.0) == doctest::Approx(0.0));
    CHECK(limit_reaction_eval(f, 0.5) == doctest::Approx(4.0));
    CHECK(limit_reaction_eval(LimitReaction(1, 1, 2), 0.5) == doctest::Approx(0.25));
    const double h = 1e-8;
    CHECK((f(h) - f(0)) / h == doctest::Approx(16.0).epsilon(1e-6));
    CHECK((f(0) - f(-h)) / h == doctest::Approx(16.0).epsilon(1e-6));
  }
}
