#pragma once

// Event-driven exact simulation of the immigration branching chain.
// From state k the total jump rate is k*(-a_1) + (-b_0); a transformation
// replaces one individual by j (j != 1) with probability a_j/(-a_1), an
// immigration batch adds j >= 1 with probability b_j/(-b_0). Sampling
// tables renormalize away the truncated tail mass, which is carried as an
// explicit bias bound on every estimate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "mbpi/intensities.hpp"

namespace mbpi {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace detail

// Inverse-CDF sampler over a fixed table; binary search keeps the draw
// deterministic across platforms.
struct DiscreteSampler {
  std::vector<double> cdf;
  std::vector<std::uint32_t> values;
  double dropped_mass = 0.0;  // truncated tail, pre-renormalization

  static DiscreteSampler from_weights(const std::vector<double>& w,
                                      const std::vector<std::uint32_t>& vals,
                                      double tail_mass) {
    DiscreteSampler s;
    double total = 0.0;
    for (double x : w) total += x;
    if (!(total > 0.0))
      throw std::invalid_argument("DiscreteSampler: zero total mass");
    s.cdf.reserve(w.size());
    s.values = vals;
    double acc = 0.0;
    for (double x : w) {
      acc += x / total;
      s.cdf.push_back(acc);
    }
    s.cdf.back() = 1.0;
    s.dropped_mass = tail_mass / (total + tail_mass);
    return s;
  }

  std::uint32_t sample(double u) const {
    const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
    return values[static_cast<std::size_t>(it - cdf.begin())];
  }
};

struct SimConfig {
  IntensityTable table;
  std::uint32_t initial_state = 0;
  double horizon = 1.0;
  std::uint64_t replications = 1000;
  std::uint64_t seed = 0;
  std::uint64_t population_cap = 10'000'000;
  unsigned jobs = 1;

  void validate() const {
    if (replications < 1)
      throw std::invalid_argument("SimConfig: replications must be >= 1");
    if (!(horizon >= 0.0))
      throw std::invalid_argument("SimConfig: horizon must be nonnegative");
  }
};

struct PathResult {
  std::uint64_t state = 0;
  bool censored = false;  // population cap reached before the horizon
  std::uint64_t events = 0;
};

struct SamplerPair {
  DiscreteSampler offspring;    // j != 1, weights a_j / (-a_1)
  DiscreteSampler immigration;  // j >= 1, weights b_j / (-b_0)
  double transform_rate;        // -a_1
  double immigration_rate;      // -b_0

  static SamplerPair from_table(const IntensityTable& t) {
    std::vector<double> wa, wb;
    std::vector<std::uint32_t> va, vb;
    for (std::size_t j = 0; j <= t.J; ++j) {
      if (j != 1 && t.a[j] > 0.0) {
        wa.push_back(t.a[j]);
        va.push_back(static_cast<std::uint32_t>(j));
      }
      if (j >= 1 && t.b[j] > 0.0) {
        wb.push_back(t.b[j]);
        vb.push_back(static_cast<std::uint32_t>(j));
      }
    }
    return {DiscreteSampler::from_weights(wa, va, t.tail_mass_a),
            DiscreteSampler::from_weights(wb, vb, t.tail_mass_b),
            t.total_transform_rate(), t.total_immigration_rate()};
  }
};

// One replication; the stream is derived from (seed, replication index) so
// paths are reproducible regardless of scheduling.
inline PathResult simulate_path(const SimConfig& cfg, const SamplerPair& sp,
                                std::uint64_t replication) {
  std::mt19937_64 rng(detail::splitmix64(cfg.seed ^
                                         detail::splitmix64(replication + 1)));
  auto unit = [&] { return detail::to_unit(rng()); };

  double t = 0.0;
  std::uint64_t k = cfg.initial_state;
  std::uint64_t events = 0;
  while (true) {
    const double rate =
        static_cast<double>(k) * sp.transform_rate + sp.immigration_rate;
    const double wait = -std::log1p(-unit()) / rate;
    t += wait;
    if (t > cfg.horizon) return {k, false, events};
    ++events;
    const double p_transform =
        static_cast<double>(k) * sp.transform_rate / rate;
    if (unit() < p_transform) {
      const std::uint32_t j = sp.offspring.sample(unit());
      k = k - 1 + j;
    } else {
      k += sp.immigration.sample(unit());
    }
    if (k > cfg.population_cap) return {k, true, events};
  }
}

inline PathResult simulate_path(const SimConfig& cfg,
                                std::uint64_t replication = 0) {
  cfg.validate();
  return simulate_path(cfg, SamplerPair::from_table(cfg.table), replication);
}

struct McEstimate {
  std::uint32_t initial_state = 0;
  std::uint64_t target = 0;
  double horizon = 0.0;
  double estimate = 0.0;
  double stderr_ = 0.0;
  double bias_bound = 0.0;
  double censored_fraction = 0.0;
  std::uint64_t replications = 0;
};

inline McEstimate estimate_pij(const SimConfig& cfg, std::uint64_t j) {
  cfg.validate();
  if (cfg.replications < 1000)
    throw std::invalid_argument("estimate_pij: needs >= 1000 replications");
  const SamplerPair sp = SamplerPair::from_table(cfg.table);

  const unsigned jobs = std::max(1u, cfg.jobs);
  std::vector<std::uint64_t> hits(jobs, 0), censored(jobs, 0), events(jobs, 0);
  auto worker = [&](unsigned w) {
    std::uint64_t h = 0, c = 0, ev = 0;
    for (std::uint64_t r = w; r < cfg.replications; r += jobs) {
      const PathResult pr = simulate_path(cfg, sp, r);
      ev += pr.events;
      if (pr.censored)
        ++c;
      else if (pr.state == j)
        ++h;
    }
    hits[w] = h;
    censored[w] = c;
    events[w] = ev;
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }

  std::uint64_t h = 0, c = 0, ev = 0;
  for (unsigned w = 0; w < jobs; ++w) {
    h += hits[w];
    c += censored[w];
    ev += events[w];
  }
  const double n = static_cast<double>(cfg.replications);
  const double p = static_cast<double>(h) / n;

  McEstimate e;
  e.initial_state = cfg.initial_state;
  e.target = j;
  e.horizon = cfg.horizon;
  e.estimate = p;
  e.stderr_ = std::sqrt(p * (1.0 - p) / n);
  e.censored_fraction = static_cast<double>(c) / n;
  // one dropped-tail draw anywhere on a path can move it across
  // {X(t) = j}, so the bias scales with the mean event count
  const double per_event_drop =
      std::max(sp.offspring.dropped_mass, sp.immigration.dropped_mass);
  const double mean_events = static_cast<double>(ev) / n;
  e.bias_bound = e.censored_fraction + mean_events * per_event_drop;
  e.replications = cfg.replications;
  return e;
}

}  // namespace mbpi
