#include "evotransit/onemax.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "evotransit/error.hpp"
#include "evotransit/parallel.hpp"

namespace evotransit::onemax {

namespace {

double class_probability(std::size_t count, double c) {
  return count == 0 ? 0.0 : std::min(1.0, c / (2.0 * static_cast<double>(count)));
}

// Selects among `count` candidates with probability p each; `at(k)` maps
// the k-th candidate to a bit position.
template <typename At>
void skip_select(std::size_t count, double p, Rng& rng, std::vector<std::size_t>& out, At at) {
  if (count == 0 || p <= 0.0) return;
  if (p >= 1.0) {
    for (std::size_t k = 0; k < count; ++k) out.push_back(at(k));
    return;
  }
  std::uint64_t k = rng.geometric_gap(p);
  while (k < count) {
    out.push_back(at(k));
    const std::uint64_t gap = rng.geometric_gap(p);
    if (gap >= count) break;
    k += gap + 1;
  }
}

std::size_t select_in_word(std::uint64_t word, std::size_t k) {
  for (std::size_t i = 0; i < k; ++i) word &= word - 1;
  return static_cast<std::size_t>(std::countr_zero(word));
}

}  // namespace

std::string to_string(const LabOperatorSpec& spec) {
  if (spec.kind == LabOperator::Standard) return "standard";
  std::ostringstream os;
  os << "asymmetric(c_s=" << spec.c_s << ",c_t=" << spec.c_t << ")";
  return os.str();
}

BitInstance::BitInstance(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "bitstring length must be >= 1");
}

void BitInstance::flip(std::size_t i) noexcept {
  const std::uint64_t mask = std::uint64_t{1} << (i % 64);
  words_[i / 64] ^= mask;
  if (words_[i / 64] & mask) {
    ++ones_;
  } else {
    --ones_;
  }
}

std::size_t BitInstance::nth_one(std::size_t k) const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    const auto c = static_cast<std::size_t>(std::popcount(words_[w]));
    if (k < c) return w * 64 + select_in_word(words_[w], k);
    k -= c;
  }
  throw Error(ErrorKind::InvalidArgument, "nth_one out of range");
}

std::size_t BitInstance::nth_zero(std::size_t k) const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t inverted = ~words_[w];
    if (w + 1 == words_.size() && n_ % 64 != 0) inverted &= (std::uint64_t{1} << (n_ % 64)) - 1;
    const auto c = static_cast<std::size_t>(std::popcount(inverted));
    if (k < c) return w * 64 + select_in_word(inverted, k);
    k -= c;
  }
  throw Error(ErrorKind::InvalidArgument, "nth_zero out of range");
}

std::size_t BitInstance::popcount() const noexcept {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::vector<std::size_t> propose_flips(const BitInstance& x, const LabOperatorSpec& spec, Rng& rng) {
  std::vector<std::size_t> flips;
  const std::size_t n = x.n();
  if (spec.kind == LabOperator::Standard) {
    const double p = 1.0 / static_cast<double>(n);
    if (spec.sampling == Sampling::PerCell) {
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.uniform01() < p) flips.push_back(i);
      }
    } else {
      skip_select(n, p, rng, flips, [](std::size_t k) { return k; });
    }
    return flips;
  }
  const double p0 = class_probability(x.zeros(), spec.c_s);
  const double p1 = class_probability(x.ones(), spec.c_t);
  if (spec.sampling == Sampling::PerCell) {
    for (std::size_t i = 0; i < n; ++i) {
      if (rng.uniform01() < (x.bit(i) ? p1 : p0)) flips.push_back(i);
    }
  } else {
    skip_select(x.zeros(), p0, rng, flips, [&](std::size_t k) { return x.nth_zero(k); });
    skip_select(x.ones(), p1, rng, flips, [&](std::size_t k) { return x.nth_one(k); });
  }
  return flips;
}

std::int64_t gain_of(const BitInstance& x, std::span<const std::size_t> flips) noexcept {
  std::int64_t gain = 0;
  for (std::size_t i : flips) gain += x.bit(i) ? -1 : 1;
  return gain;
}

namespace {

template <typename OnStep>
std::uint64_t evolve(std::size_t n, const LabOperatorSpec& spec, std::uint64_t seed, std::uint64_t cap,
                     OnStep on_step) {
  BitInstance x(n);
  Rng rng(seed);
  std::uint64_t generations = 0;
  while (x.ones() < n) {
    if (generations >= cap) {
      throw Error(ErrorKind::SafetyCapExceeded, "no optimum after " + std::to_string(cap) + " generations (n=" +
                                                    std::to_string(n) + ", " + to_string(spec) + ", seed " +
                                                    std::to_string(seed) + ", ones=" + std::to_string(x.ones()) + ")");
    }
    const std::vector<std::size_t> flips = propose_flips(x, spec, rng);
    const bool accept = gain_of(x, flips) >= 0;
    if (accept) {
      for (std::size_t i : flips) x.flip(i);
    }
    ++generations;
    on_step(accept);
  }
  return generations;
}

double trimmed_mean(std::vector<std::uint64_t> values) {
  std::sort(values.begin(), values.end());
  const std::size_t drop = values.size() / 10;
  double sum = 0.0;
  for (std::size_t i = drop; i < values.size() - drop; ++i) sum += static_cast<double>(values[i]);
  return sum / static_cast<double>(values.size() - 2 * drop);
}

// Least squares for y ~ c*x on relative errors.
ModelFit fit_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = x[i] / y[i];
    num += r;
    den += r * r;
  }
  ModelFit fit;
  fit.coefficient = num / den;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double rel = (y[i] - fit.coefficient * x[i]) / y[i];
    fit.residual += rel * rel;
  }
  return fit;
}

}  // namespace

std::uint64_t run_to_optimum(std::size_t n, const LabOperatorSpec& spec, std::uint64_t seed, std::uint64_t cap) {
  return evolve(n, spec, seed, cap, [](bool) {});
}

Trace run_to_optimum_traced(std::size_t n, const LabOperatorSpec& spec, std::uint64_t seed, std::uint64_t cap) {
  Trace trace;
  trace.generations = evolve(n, spec, seed, cap, [&](bool accepted) { trace.accepted.push_back(accepted); });
  return trace;
}

std::string_view to_string(Model model) { return model == Model::Linear ? "linear" : "n_log_n"; }

ScalingResult scaling_experiment(const LabOperatorSpec& spec, std::span<const std::size_t> n_list, std::size_t repeats,
                                 std::uint64_t seed, std::size_t threads) {
  if (repeats < kMinRepeats) {
    throw Error(ErrorKind::InvalidArgument, "scaling experiments need at least " + std::to_string(kMinRepeats) + " repeats");
  }
  if (n_list.empty() || n_list.front() == 0 || !std::is_sorted(n_list.begin(), n_list.end(), std::less_equal<>())) {
    throw Error(ErrorKind::InvalidArgument, "n values must be positive and strictly increasing");
  }
  ScalingResult result;
  result.op = spec;
  result.rows.resize(n_list.size());
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    ScalingRow& row = result.rows[i];
    row.n = n_list[i];
    row.generations.assign(repeats, 0);
    row.seeds.resize(repeats);
    for (std::size_t r = 0; r < repeats; ++r) row.seeds[r] = derive_seed(seed, row.n, r);
  }
  // Largest n first so long trials start early.
  const std::size_t jobs = n_list.size() * repeats;
  parallel_for(jobs, threads == 0 ? thread_budget() : threads, [&](std::size_t job) {
    ScalingRow& row = result.rows[n_list.size() - 1 - job / repeats];
    const std::size_t r = job % repeats;
    row.generations[r] = run_to_optimum(row.n, spec, row.seeds[r]);
  });

  for (ScalingRow& row : result.rows) {
    const double count = static_cast<double>(row.generations.size());
    double sum = 0.0;
    for (std::uint64_t g : row.generations) sum += static_cast<double>(g);
    row.mean = sum / count;
    double ss = 0.0;
    for (std::uint64_t g : row.generations) ss += (static_cast<double>(g) - row.mean) * (static_cast<double>(g) - row.mean);
    row.stddev = std::sqrt(ss / (count - 1.0));
    row.trimmed_mean = trimmed_mean(row.generations);
  }

  // n = 1 gives n*ln(n) = 0 and carries no scaling information.
  std::vector<double> xs_lin;
  std::vector<double> xs_log;
  std::vector<double> ys;
  for (const ScalingRow& row : result.rows) {
    if (row.n < 2) continue;
    const double n = static_cast<double>(row.n);
    xs_lin.push_back(n);
    xs_log.push_back(n * std::log(n));
    ys.push_back(row.trimmed_mean);
  }
  if (ys.size() < 2) return result;
  result.sufficient_points = true;
  for (std::size_t i = 0; i + 1 < result.rows.size(); ++i) {
    result.doubling_ratios.push_back(result.rows[i + 1].trimmed_mean / result.rows[i].trimmed_mean);
  }
  result.linear = fit_through_origin(xs_lin, ys);
  result.nlogn = fit_through_origin(xs_log, ys);
  result.better = result.nlogn.residual < result.linear.residual ? Model::NLogN : Model::Linear;
  return result;
}

void write_scaling_csv(const ScalingResult& result, std::ostream& out) {
  const std::string op = to_string(result.op);
  out << "operator,n,repeat,seed,generations\n";
  for (const ScalingRow& row : result.rows) {
    for (std::size_t r = 0; r < row.generations.size(); ++r) {
      out << '"' << op << "\"," << row.n << ',' << r << ',' << row.seeds[r] << ',' << row.generations[r] << '\n';
    }
  }
}

std::vector<DriftPoint> drift_experiment(std::size_t n, std::span<const std::size_t> k_list,
                                         const LabOperatorSpec& spec, std::size_t samples, std::uint64_t seed,
                                         std::size_t threads) {
  for (std::size_t k : k_list) {
    if (k < 1 || k > n) throw Error(ErrorKind::InvalidArgument, "k must lie in [1, n]");
  }
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "drift needs at least two samples");
  std::vector<DriftPoint> points(k_list.size());
  parallel_for(k_list.size(), threads == 0 ? thread_budget() : threads, [&](std::size_t i) {
    const std::size_t k = k_list[i];
    Rng rng(derive_seed(seed, n, k));
    // Choose which n-k positions hold ones by a partial Fisher-Yates shuffle.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    BitInstance x(n);
    for (std::size_t j = 0; j < n - k; ++j) {
      const std::size_t pick = j + rng.uniform_below(n - j);
      std::swap(order[j], order[pick]);
      x.flip(order[j]);
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t improved = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      const std::int64_t gain = gain_of(x, propose_flips(x, spec, rng));
      const double kept = gain >= 0 ? static_cast<double>(gain) : 0.0;
      sum += kept;
      sum_sq += kept * kept;
      if (gain > 0) ++improved;
    }
    const double m = sum / static_cast<double>(samples);
    const double var = (sum_sq - static_cast<double>(samples) * m * m) / static_cast<double>(samples - 1);
    points[i] = {k, samples, m, std::sqrt(std::max(0.0, var) / static_cast<double>(samples)),
                 static_cast<double>(improved) / static_cast<double>(samples)};
  });
  return points;
}

}  // namespace evotransit::onemax
