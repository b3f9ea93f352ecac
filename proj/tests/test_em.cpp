#include <doctest.h>

#include <limits>
#include <random>

#include "dereg/em.hpp"
#include "dereg/error.hpp"
#include "dereg/oracle.hpp"
#include "dereg/simulator.hpp"
#include "support.hpp"

using namespace dereg;

namespace {

ExpressionMatrix matrix_for(const RegulatoryNetwork& net, const Eigen::MatrixXd& values) {
  ExpressionMatrix data;
  data.gene_ids = net.gene_ids();
  data.values = values;
  for (Eigen::Index i = 0; i < values.rows(); ++i) data.sample_ids.push_back("s" + std::to_string(i + 1));
  return data;
}

ExpressionMatrix sample_data(std::mt19937_64& rng, const RegulatoryNetwork& net, int n) {
  Eigen::MatrixXd v(n, static_cast<Eigen::Index>(net.gene_count()));
  for (int i = 0; i < n; ++i) v.row(i) = test::random_row(rng, net).transpose();
  return matrix_for(net, v);
}

}  // namespace

TEST_CASE("epsilon 0 gives zero deregulation posteriors") {
  std::mt19937_64 rng(1);
  const auto net = random_network(6, 8, 3, 2);
  ModelParams p;
  p.epsilon = 0.0;
  const auto data = sample_data(rng, net, 5);
  const auto q = e_step(net, p, data);
  CHECK(q.deregulated.maxCoeff() == 0.0);
  const auto s = score(net, p, data);
  CHECK(s.scores.maxCoeff() == 0.0);
}

TEST_CASE("a target contradicting pinned regulators is called deregulated") {
  // activator over-expressed, inhibitor normal: the table predicts +1
  RegulatoryNetwork net({"a", "i"}, {"g"}, {{"a"}}, {{"i"}});
  ModelParams p;
  p.mu = {-1, 0, 1};
  p.sigma = {0.1, 0.1, 0.1};
  p.epsilon = 0.1;
  Eigen::MatrixXd v(1, 3);
  v << 1.0, 0.0, -1.0;
  const auto data = matrix_for(net, v);
  const auto q = e_step(net, p, data);
  const auto exact = oracle::exact_marginals(net, p, v.row(0).transpose());
  CHECK(exact.deregulated(0) > 0.99);
  CHECK(q.deregulated(0, 0) > 0.99);
  CHECK(std::abs(q.deregulated(0, 0) - exact.deregulated(0)) < 1e-8);
}

TEST_CASE("e_step matches the oracle on tree networks, for any thread count") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto net = test::random_tree_network(rng, 4, 3);
    const auto p = test::random_params(rng);
    const auto data = sample_data(rng, net, 4);
    EStepSettings one{{12, 0.0}, 1}, many{{12, 0.0}, 3};
    const auto q = e_step(net, p, data, one);
    const auto q2 = e_step(net, p, data, many);
    for (int s = 0; s < 3; ++s) CHECK(q.state[static_cast<std::size_t>(s)] == q2.state[static_cast<std::size_t>(s)]);
    CHECK(q.deregulated == q2.deregulated);
    for (Eigen::Index i = 0; i < 4; ++i) {
      const auto exact = oracle::exact_marginals(net, p, data.values.row(i).transpose());
      for (int s = 0; s < 3; ++s) {
        CHECK(test::max_abs_diff(q.state[static_cast<std::size_t>(s)].row(i).transpose(), exact.state.col(s)) < 1e-8);
      }
      CHECK(test::max_abs_diff(q.deregulated.row(i).transpose(), exact.deregulated) < 1e-8);
    }
  }
}

TEST_CASE("zero evidence is reported with the sample id") {
  RegulatoryNetwork net({"a"}, {"g"}, {{"a"}}, {{}});
  ModelParams p;
  p.alpha = {1.0, 0.0, 0.0};
  p.sigma = {1e-3, 1e-3, 1e-3};
  Eigen::MatrixXd v(2, 2);
  v << -1.0, -1.0, 1.0, 1.0;
  const auto data = matrix_for(net, v);
  try {
    e_step(net, p, data);
    FAIL("expected ZeroEvidenceError");
  } catch (const ZeroEvidenceError& e) {
    CHECK(std::string(e.what()).rfind("sample s2:", 0) == 0);
  }
}

TEST_CASE("m_step closed forms on hard marginals") {
  RegulatoryNetwork net({"a"}, {"g"}, {{"a"}}, {{}});
  SUBCASE("weighted mean and variance") {
    Eigen::MatrixXd v(1, 2);
    v << 2.0, 4.0;
    const auto data = matrix_for(net, v);
    SampleMarginals q;
    for (auto& m : q.state) m = Eigen::MatrixXd::Zero(1, 2);
    q.state[2].setOnes();
    q.deregulated = Eigen::MatrixXd::Zero(1, 1);
    ModelParams prev;
    const auto next = m_step(q, data, net, prev);
    CHECK(next.mu(2) == doctest::Approx(3.0));
    CHECK(next.sigma(2) * next.sigma(2) == doctest::Approx(1.0));
    CHECK(next.alpha == Eigen::Vector3d(0, 0, 1));
    // empty states keep their previous mean and deviation
    CHECK(next.mu(0) == prev.mu(0));
    CHECK(next.sigma(1) == prev.sigma(1));
  }
  SUBCASE("epsilon is the mean deregulation posterior") {
    RegulatoryNetwork net2({"a"}, {"g", "h"}, {{"a"}, {"a"}}, {{}, {}});
    const auto data = matrix_for(net2, Eigen::MatrixXd::Zero(2, 3));
    SampleMarginals q;
    for (auto& m : q.state) m = Eigen::MatrixXd::Constant(2, 3, 1.0 / 3.0);
    q.deregulated.resize(2, 2);
    q.deregulated << 1, 0, 0, 1;
    CHECK(m_step(q, data, net2, ModelParams{}).epsilon == 0.5);
  }
}

TEST_CASE("m_step reorders states by mean and floors sigma") {
  RegulatoryNetwork net({"a"}, {"g"}, {{"a"}}, {{}});
  Eigen::MatrixXd v(2, 2);
  v << 5.0, 5.0, -3.0, 1.0;
  const auto data = matrix_for(net, v);
  SampleMarginals q;
  for (auto& m : q.state) m = Eigen::MatrixXd::Zero(2, 2);
  q.state[0](0, 0) = q.state[0](0, 1) = 1.0;  // "under" gets the high values
  q.state[2](1, 0) = q.state[2](1, 1) = 1.0;
  q.deregulated = Eigen::MatrixXd::Zero(2, 1);
  const auto next = m_step(q, data, net, ModelParams{});
  CHECK(check_params(next).empty());
  CHECK(next.mu(2) == 5.0);
  CHECK(next.mu(0) == -1.0);
  CHECK(next.sigma(2) == doctest::Approx(kSigmaFloorRatio * overall_sd(data)));
  CHECK(next.alpha(2) == 0.5);
}

TEST_CASE("m_step equals an independent numerical maximizer") {
  std::mt19937_64 rng(31);
  RegulatoryNetwork net({"a"}, {"g"}, {{"a"}}, {{}});
  int checked = 0;
  while (checked < 8) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd v(3, 2);
    SampleMarginals q;
    for (auto& m : q.state) m.resize(3, 2);
    q.deregulated.resize(3, 1);
    for (Eigen::Index i = 0; i < 3; ++i) {
      for (Eigen::Index g = 0; g < 2; ++g) {
        v(i, g) = -2.0 + 4.0 * u(rng);
        Eigen::Vector3d w(u(rng), u(rng), u(rng));
        w /= w.sum();
        for (int s = 0; s < 3; ++s) q.state[static_cast<std::size_t>(s)](i, g) = w(s);
      }
      q.deregulated(i, 0) = u(rng);
    }
    const auto data = matrix_for(net, v);
    const auto closed = m_step(q, data, net, ModelParams{});
    // skip draws where the canonical reordering kicks in
    bool ordered = true;
    for (int s = 0; s + 1 < 3; ++s) {
      auto mean = [&](int k) {
        const auto& w = q.state[static_cast<std::size_t>(k)];
        return w.cwiseProduct(v).sum() / w.sum();
      };
      ordered = ordered && mean(s) < mean(s + 1);
    }
    if (!ordered) continue;
    ++checked;
    const auto numeric = test::numerical_maximizer(net, data, q, ModelParams{});
    CHECK(closed.max_abs_change(numeric) < 1e-6);
    const double best = oracle::expected_complete_loglik(net, closed, data, q);
    CHECK(best >= oracle::expected_complete_loglik(net, numeric, data, q) - 1e-12);
  }
}

TEST_CASE("fit iteration control") {
  const auto net = random_network(8, 12, 3, 5);
  ModelParams truth;
  truth.sigma = {0.2, 0.2, 0.2};
  truth.epsilon = 0.1;
  const auto sim = simulate(net, truth, 60, 9);

  SUBCASE("infinite tolerance runs exactly one iteration") {
    FitSettings s;
    s.tol = std::numeric_limits<double>::infinity();
    const auto r = fit(net, sim.data, s);
    CHECK(r.iterations == 1);
    CHECK(r.trajectory.size() == 1);
    CHECK(r.converged);
  }
  SUBCASE("restarting from converged parameters stops almost immediately") {
    const auto first = fit(net, sim.data);
    REQUIRE(first.converged);
    CHECK(first.trajectory.size() == static_cast<std::size_t>(first.iterations));
    for (const auto& rec : first.trajectory) CHECK(check_params(rec.params).empty());
    FitSettings s;
    s.initial = first.params;
    const auto again = fit(net, sim.data, s);
    CHECK(again.iterations <= 2);
  }
  SUBCASE("iteration cap reports non-convergence") {
    FitSettings s;
    s.tol = 1e-300;
    s.max_iterations = 3;
    const auto r = fit(net, sim.data, s);
    CHECK(r.iterations == 3);
    CHECK_FALSE(r.converged);
  }
}

TEST_CASE("fit recovers simulation parameters") {
  const auto net = random_network(20, 50, 3, 11);
  ModelParams truth;
  truth.sigma = {0.2, 0.2, 0.2};
  truth.epsilon = 0.1;
  const auto sim = simulate(net, truth, 100, 11);
  const auto r = fit(net, sim.data);
  CHECK(r.converged);
  CHECK((r.params.mu - truth.mu).cwiseAbs().maxCoeff() < 0.1);
  CHECK(std::abs(r.params.epsilon - truth.epsilon) < 0.05);
}

TEST_CASE("EM ascent on tree networks") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 4; ++trial) {
    const auto net = test::random_tree_network(rng, 4, 2);
    ModelParams truth = test::random_params(rng);
    const auto sim = simulate(net, truth, 40, static_cast<std::uint64_t>(trial + 100));
    FitSettings s;
    s.max_iterations = 15;
    s.tol = 1e-10;
    s.estep.bp.passes = 16;
    const auto r = fit(net, sim.data, s);

    ModelParams current = initial_params(sim.data);
    double previous_ll = oracle::log_likelihood(net, current, sim.data);
    for (const auto& rec : r.trajectory) {
      const auto q = e_step(net, current, sim.data, s.estep);
      const double before = oracle::expected_complete_loglik(net, current, sim.data, q);
      const double after = oracle::expected_complete_loglik(net, rec.params, sim.data, q);
      CHECK(after >= before - 1e-9);
      const double ll = oracle::log_likelihood(net, rec.params, sim.data);
      CHECK(ll >= previous_ll - 1e-9);
      previous_ll = ll;
      current = rec.params;
    }
  }
}

TEST_CASE("score is the deregulation marginal of e_step and row-equivariant") {
  std::mt19937_64 rng(8);
  const auto net = random_network(10, 15, 4, 3);
  const auto p = test::random_params(rng);
  const auto data = sample_data(rng, net, 7);
  const auto q = e_step(net, p, data);
  const auto s = score(net, p, data);
  CHECK(s.scores == q.deregulated);
  CHECK(s.target_ids == net.targets());
  CHECK(s.sample_ids == data.sample_ids);

  ExpressionMatrix reversed = data;
  reversed.values = data.values.colwise().reverse();
  std::reverse(reversed.sample_ids.begin(), reversed.sample_ids.end());
  const auto s2 = score(net, p, reversed);
  CHECK(s2.scores == Eigen::MatrixXd(s.scores.colwise().reverse()));
}

TEST_CASE("initial parameters follow the data quantiles") {
  RegulatoryNetwork net({"a"}, {"g"}, {{"a"}}, {{}});
  Eigen::MatrixXd v(5, 2);
  v << 0, 1, 2, 3, 4, 5, 6, 7, 8, 9;
  const auto p = initial_params(matrix_for(net, v));
  CHECK(p.mu(0) == doctest::Approx(1.8));
  CHECK(p.mu(1) == doctest::Approx(4.5));
  CHECK(p.mu(2) == doctest::Approx(7.2));
  CHECK(p.sigma(0) == doctest::Approx((7.2 - 1.8) / 4.0));
  CHECK(p.epsilon == 0.05);
  CHECK(check_params(p).empty());
}
