#include "dereg/simulator.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "dereg/error.hpp"
#include "dereg/ternary.hpp"

namespace dereg {
namespace {

enum class Stream : std::uint64_t { Network = 1, Sample = 2 };

std::mt19937_64 substream(std::uint64_t seed, Stream stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Ternary collective_of(const std::vector<std::size_t>& members, const std::vector<Ternary>& states) {
  std::vector<Ternary> picked;
  picked.reserve(members.size());
  for (auto m : members) picked.push_back(states[m]);
  return collective_state(picked);
}

}  // namespace

Simulation simulate(const RegulatoryNetwork& net, const ModelParams& params, int n,
                    std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("sample count must be >= 1");
  require_valid(params);
  const std::size_t r = net.regulator_count();
  const std::size_t t = net.target_count();
  const std::size_t genes = r + t;

  Simulation sim;
  auto& data = sim.data;
  auto& truth = sim.truth;
  for (int i = 0; i < n; ++i) data.sample_ids.push_back("s" + std::to_string(i + 1));
  data.gene_ids = net.gene_ids();
  data.values.resize(n, static_cast<Eigen::Index>(genes));
  truth.sample_ids = data.sample_ids;
  truth.gene_ids = data.gene_ids;
  truth.target_ids = net.targets();
  truth.states.resize(n, static_cast<Eigen::Index>(genes));
  truth.deregulated.resize(n, static_cast<Eigen::Index>(t));

  std::vector<Ternary> states(genes);
  for (int i = 0; i < n; ++i) {
    auto rng = substream(seed, Stream::Sample, static_cast<std::uint64_t>(i));
    std::discrete_distribution<int> regulator_state{params.alpha(0), params.alpha(1), params.alpha(2)};
    std::bernoulli_distribution deregulate(params.epsilon);
    std::bernoulli_distribution coin(0.5);
    std::normal_distribution<double> noise(0.0, 1.0);

    for (std::size_t g = 0; g < r; ++g) states[g] = ternary_from_index(regulator_state(rng));
    for (std::size_t g = 0; g < t; ++g) {
      const auto& reg = net.regulation(g);
      const Ternary expected =
          truth_table(collective_of(reg.activators, states), collective_of(reg.inhibitors, states));
      const bool d = deregulate(rng);
      Ternary s = expected;
      if (d) {
        // one of the two other states, uniformly
        const int first = (index_of(expected) + 1) % 3;
        const int second = (index_of(expected) + 2) % 3;
        const int lo = std::min(first, second), hi = std::max(first, second);
        s = ternary_from_index(coin(rng) ? hi : lo);
      }
      states[r + g] = s;
      truth.deregulated(i, static_cast<Eigen::Index>(g)) = d;
    }
    for (std::size_t g = 0; g < genes; ++g) {
      const int s = index_of(states[g]);
      truth.states(i, static_cast<Eigen::Index>(g)) = static_cast<std::int8_t>(value_of(states[g]));
      data.values(i, static_cast<Eigen::Index>(g)) = params.mu(s) + params.sigma(s) * noise(rng);
    }
  }
  return sim;
}

RegulatoryNetwork random_network(int regulators, int targets, int max_regulators,
                                 std::uint64_t seed) {
  if (regulators < 1 || targets < 1 || max_regulators < 1) {
    throw InvalidArgument("random_network needs r, t and max_regulators >= 1");
  }
  auto rng = substream(seed, Stream::Network, 0);
  std::vector<std::string> reg_ids, target_ids;
  for (int i = 0; i < regulators; ++i) reg_ids.push_back("tf" + std::to_string(i + 1));
  for (int i = 0; i < targets; ++i) target_ids.push_back("g" + std::to_string(i + 1));

  const int cap = std::min(max_regulators, regulators);
  std::uniform_int_distribution<int> count(1, cap);
  std::bernoulli_distribution activator(0.5);
  std::vector<std::vector<std::string>> act(static_cast<std::size_t>(targets)),
      inh(static_cast<std::size_t>(targets));
  std::vector<int> pool(static_cast<std::size_t>(regulators));
  for (int g = 0; g < targets; ++g) {
    std::iota(pool.begin(), pool.end(), 0);
    const int k = count(rng);
    // partial Fisher-Yates
    for (int j = 0; j < k; ++j) {
      std::uniform_int_distribution<int> pick(j, regulators - 1);
      std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(pick(rng))]);
      const auto& id = reg_ids[static_cast<std::size_t>(pool[static_cast<std::size_t>(j)])];
      (activator(rng) ? act : inh)[static_cast<std::size_t>(g)].push_back(id);
    }
  }
  return RegulatoryNetwork(std::move(reg_ids), std::move(target_ids), std::move(act), std::move(inh));
}

bool is_consistent(const RegulatoryNetwork& net, const GroundTruth& truth) {
  const std::size_t r = net.regulator_count();
  std::vector<Ternary> states(net.gene_count());
  for (Eigen::Index i = 0; i < truth.states.rows(); ++i) {
    for (std::size_t g = 0; g < states.size(); ++g) {
      states[g] = static_cast<Ternary>(truth.states(i, static_cast<Eigen::Index>(g)));
    }
    for (std::size_t g = 0; g < net.target_count(); ++g) {
      if (truth.deregulated(i, static_cast<Eigen::Index>(g))) continue;
      const auto& reg = net.regulation(g);
      if (states[r + g] != truth_table(collective_of(reg.activators, states),
                                       collective_of(reg.inhibitors, states))) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace dereg
