#include "shred/excursion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "shred/errors.hpp"

namespace shred {

DiscreteExcursion::DiscreteExcursion(std::vector<std::int64_t> steps)
    : steps_(std::move(steps)) {
  if (steps_.size() < 2) {
    throw std::invalid_argument("excursion needs at least 2 steps");
  }
  heights_.resize(steps_.size() + 1);
  heights_[0] = 0;
  for (std::size_t k = 0; k < steps_.size(); ++k) {
    if (steps_[k] < -1) {
      throw std::invalid_argument("step below -1 at index " + std::to_string(k));
    }
    heights_[k + 1] = heights_[k] + steps_[k];
    if (k + 1 < steps_.size() && heights_[k + 1] < 0) {
      throw std::invalid_argument("walk hits -1 before the last step");
    }
  }
  if (heights_.back() != -1) {
    throw std::invalid_argument("walk does not end at -1");
  }
  max_height_ = *std::max_element(heights_.begin(), heights_.end());
}

std::int64_t CodedTimes::position_of(std::int64_t k) const {
  const auto it = std::lower_bound(down_index.begin(), down_index.end(), k);
  if (it == down_index.end() || *it != k) return -1;
  return it - down_index.begin();
}

namespace {

std::int64_t draw_binomial(std::int64_t trials, double p, Rng& rng) {
  if (trials <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  std::binomial_distribution<std::int64_t> d(trials, p);
  return d(rng.engine());
}

double log_binomial_pmf(std::int64_t k, std::int64_t m, double p) {
  if (k < 0 || k > m) return -std::numeric_limits<double>::infinity();
  return std::lgamma(static_cast<double>(m) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(m - k) + 1.0) +
         static_cast<double>(k) * std::log(p) +
         static_cast<double>(m - k) * std::log1p(-p);
}

// Bridge sampler for laws whose head is {-1, 0}: draw the tail count and tail
// values, then the number of -1 steps is forced to 1 + (tail sum); accept with
// probability Bin(m, p)(forced) / B, where B bounds the binomial mode over every
// trial count m that can ever be accepted.
std::vector<std::int64_t> sample_bridge_two_atom(const StepLaw& law, std::int64_t n,
                                                 Rng& rng, std::int64_t max_rounds) {
  const std::int64_t total = n + 1;
  const std::int64_t k0 = law.cutoff();
  const double tail_mass = law.tail_mass();
  const double p_down = law.probs_head()[0] / (1.0 - tail_mass);
  // Acceptance needs 1 + k0 N_T <= total - N_T.
  const std::int64_t max_tail = (total - 1) / (k0 + 1);
  const std::int64_t min_trials = total - max_tail;
  const auto mode_of = [&](std::int64_t m) {
    return static_cast<std::int64_t>(std::floor(static_cast<double>(m + 1) * p_down));
  };
  // The maximal binomial probability is non-increasing in m.
  const auto mode_pmf = [&](std::int64_t m) {
    const std::int64_t k = std::min(mode_of(m), m);
    return log_binomial_pmf(k, m, p_down);
  };
  const double log_bound = mode_pmf(min_trials);
  std::vector<std::int64_t> tail_values;
  for (std::int64_t round = 0; round < max_rounds; ++round) {
    const std::int64_t n_tail = draw_binomial(total, tail_mass, rng);
    if (n_tail > max_tail) continue;
    const std::int64_t trials = total - n_tail;
    tail_values.clear();
    std::int64_t acc = 0;
    bool ok = true;
    for (std::int64_t j = 0; j < n_tail; ++j) {
      const std::int64_t v = law.tail_value(rng.uniform_open());
      acc += v;
      if (1 + acc + (n_tail - 1 - j) * k0 > trials) {
        ok = false;
        break;
      }
      tail_values.push_back(v);
    }
    if (!ok) continue;
    const std::int64_t downs = 1 + acc;
    const double log_ratio = log_binomial_pmf(downs, trials, p_down) - log_bound;
    if (log_ratio > 1e-9) {
      throw InternalInconsistency("binomial mode bound violated at m=" +
                                  std::to_string(trials));
    }
    if (std::log(rng.uniform_open()) >= log_ratio) continue;
    std::vector<std::int64_t> steps;
    steps.reserve(static_cast<std::size_t>(total));
    steps.insert(steps.end(), static_cast<std::size_t>(downs), -1);
    steps.insert(steps.end(), static_cast<std::size_t>(trials - downs), 0);
    steps.insert(steps.end(), tail_values.begin(), tail_values.end());
    for (std::size_t i = steps.size() - 1; i > 0; --i) {
      std::swap(steps[i], steps[rng.below(i + 1)]);
    }
    return steps;
  }
  throw RetryBudgetExceeded("sample_bridge: no bridge of length " +
                            std::to_string(total) + " after " +
                            std::to_string(max_rounds) + " rounds");
}

}  // namespace

std::vector<std::int64_t> sample_bridge(const StepLaw& law, std::int64_t n,
                                        Rng& rng, std::int64_t max_rounds) {
  if (n < 1) throw std::invalid_argument("sample_bridge: n must be >= 1");
  {
    const auto& h = law.probs_head();
    bool two_atom = law.has_tail() && h.size() >= 2 && h[0] > 0.0 && h[1] > 0.0;
    for (std::size_t i = 2; i < h.size(); ++i) two_atom = two_atom && h[i] == 0.0;
    if (two_atom) return sample_bridge_two_atom(law, n, rng, max_rounds);
  }
  const std::int64_t total = n + 1;
  const auto& head = law.probs_head();
  const std::int64_t k0 = law.cutoff();
  const double tail_mass = law.tail_mass();
  std::vector<std::int64_t> counts(head.size());
  std::vector<std::int64_t> tail_values;
  // The last head atom with mass absorbs the remainder, so rounding in the
  // conditional probabilities never produces a null atom.
  std::size_t last_atom = 0;
  for (std::size_t i = 0; i < head.size(); ++i) {
    if (head[i] > 0.0) last_atom = i;
  }

  for (std::int64_t round = 0; round < max_rounds; ++round) {
    // Category counts of the n+1 i.i.d. steps, by sequential binomials.
    const std::int64_t n_tail = draw_binomial(total, tail_mass, rng);
    std::int64_t left = total - n_tail;
    double mass_left = 1.0 - tail_mass;
    std::int64_t head_sum = 0;
    for (std::size_t i = 0; i < head.size(); ++i) {
      std::int64_t c = 0;
      if (i == last_atom) {
        c = left;
      } else if (i < last_atom && left > 0 && mass_left > 0.0) {
        c = draw_binomial(left, std::min(1.0, head[i] / mass_left), rng);
      }
      counts[i] = c;
      left -= c;
      mass_left -= head[i];
      head_sum += c * (static_cast<std::int64_t>(i) - 1);
    }
    const std::int64_t target = -1 - head_sum;
    tail_values.clear();
    if (n_tail == 0) {
      if (target != 0) continue;
    } else {
      // All but the last tail value drawn freely; the last is forced to hit the
      // target and accepted with its own conditional probability, so every
      // proposal carries the same constant factor as the tail-free ones.
      if (target < n_tail * k0) continue;
      std::int64_t acc = 0;
      bool ok = true;
      for (std::int64_t j = 0; j + 1 < n_tail; ++j) {
        const std::int64_t v = law.tail_value(rng.uniform_open());
        acc += v;
        if (target - acc < (n_tail - 1 - j) * k0) {
          ok = false;
          break;
        }
        tail_values.push_back(v);
      }
      if (!ok) continue;
      const std::int64_t forced = target - acc;
      if (rng.uniform() >= law.tail_conditional_pmf(forced)) continue;
      tail_values.push_back(forced);
    }
    std::vector<std::int64_t> steps;
    steps.reserve(static_cast<std::size_t>(total));
    for (std::size_t i = 0; i < head.size(); ++i) {
      steps.insert(steps.end(), static_cast<std::size_t>(counts[i]),
                   static_cast<std::int64_t>(i) - 1);
    }
    steps.insert(steps.end(), tail_values.begin(), tail_values.end());
    for (std::size_t i = steps.size() - 1; i > 0; --i) {
      std::swap(steps[i], steps[rng.below(i + 1)]);
    }
    return steps;
  }
  throw RetryBudgetExceeded("sample_bridge: no bridge of length " +
                            std::to_string(total) + " after " +
                            std::to_string(max_rounds) + " rounds");
}

DiscreteExcursion cycle_shift_to_excursion(const std::vector<std::int64_t>& bridge) {
  const std::size_t len = bridge.size();
  std::int64_t sum = 0;
  std::int64_t best = 0;
  std::size_t at = 0;
  for (std::size_t j = 0; j < len; ++j) {
    sum += bridge[j];
    if (j == 0 || sum < best) {
      best = sum;
      at = j + 1;
    }
  }
  if (sum != -1) throw std::invalid_argument("bridge does not sum to -1");
  std::vector<std::int64_t> steps(len);
  for (std::size_t j = 0; j < len; ++j) steps[j] = bridge[(at + j) % len];
  return DiscreteExcursion(std::move(steps));
}

DiscreteExcursion sample_excursion(const StepLaw& law, std::int64_t n, Rng& rng,
                                   std::int64_t max_rounds) {
  return cycle_shift_to_excursion(sample_bridge(law, n, rng, max_rounds));
}

CodedTimes coded_times(const DiscreteExcursion& e) {
  CodedTimes ct;
  const auto& s = e.steps();
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (s[k] == -1) ct.down_index.push_back(static_cast<std::int64_t>(k));
  }
  return ct;
}

double t_circ(const CodedTimes& ct, double t) {
  const auto& d = ct.down_index;
  // Largest k with k + 1/2 <= t.
  const auto it = std::upper_bound(d.begin(), d.end(), t - 0.5,
                                   [](double v, std::int64_t k) {
                                     return v < static_cast<double>(k);
                                   });
  if (it == d.begin()) return static_cast<double>(d.back()) + 0.5;
  return static_cast<double>(*(it - 1)) + 0.5;
}

double e_bar(const DiscreteExcursion& e, const CodedTimes& ct, double t) {
  const double r = t_circ(ct, t);
  return e.coded_height(static_cast<std::int64_t>(r - 0.5));
}

double RescaledExcursion::peak() const {
  return scale * static_cast<double>(*std::max_element(raw.begin(), raw.end()));
}

double RescaledExcursion::value_at(double t) const {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return values.back();
  return values[static_cast<std::size_t>(it - times.begin()) - 1];
}

double RescaledExcursion::jump_mass_above(double threshold) const {
  double m = 0.0;
  for (const auto& j : jumps) {
    if (j.top - j.bottom > threshold) m += j.top - j.bottom;
  }
  return m;
}

RescaledExcursion rescale(const DiscreteExcursion& e, double alpha) {
  RescaledExcursion r;
  r.alpha = alpha;
  r.n = e.n();
  r.scale = std::pow(static_cast<double>(e.n()), -1.0 / alpha);
  const double nn = static_cast<double>(e.n());
  const auto& s = e.steps();
  for (std::size_t k = 0; k < s.size(); ++k) {
    const auto ki = static_cast<std::int64_t>(k);
    if (s[k] == -1) {
      r.times.push_back((static_cast<double>(k) + 0.5) / nn);
      r.values.push_back(r.scale * e.coded_height(ki));
    } else if (s[k] > 0) {
      r.jumps.push_back({(static_cast<double>(k) + 1.0) / nn,
                         r.scale * static_cast<double>(e.height(ki)),
                         r.scale * static_cast<double>(e.height(ki + 1))});
    }
  }
  r.raw = e.heights();
  return r;
}

}  // namespace shred
