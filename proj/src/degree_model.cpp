#include "graphweave/degree_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "graphweave/error.hpp"

namespace graphweave {

std::string to_string(DegreeFamily family) {
  switch (family) {
    case DegreeFamily::EmpiricalPerturbed:
      return "perturb";
    case DegreeFamily::PowerLaw:
      return "powerlaw";
    case DegreeFamily::Lognormal:
      return "lognormal";
  }
  return "?";
}

DegreeFamily parse_degree_family(const std::string& name) {
  if (name == "perturb" || name == "empirical") return DegreeFamily::EmpiricalPerturbed;
  if (name == "powerlaw") return DegreeFamily::PowerLaw;
  if (name == "lognormal") return DegreeFamily::Lognormal;
  throw PreconditionError("unknown degree family '" + name + "' (expected perturb, powerlaw or lognormal)");
}

bool is_graphical(const DegreeSequence& d) {
  const auto n = static_cast<long long>(d.size());
  std::vector<long long> s(d.begin(), d.end());
  std::sort(s.begin(), s.end(), std::greater<>());
  long long total = 0;
  for (auto x : s) {
    if (x < 0 || x > n - 1) return false;
    total += x;
  }
  if (total % 2 != 0) return false;
  // suffix[k] = sum_{i >= k} s_i ; s is non-increasing so min(s_i, k) splits at one index.
  std::vector<long long> suffix(static_cast<std::size_t>(n) + 1, 0);
  for (long long i = n - 1; i >= 0; --i) suffix[static_cast<std::size_t>(i)] = suffix[static_cast<std::size_t>(i) + 1] + s[static_cast<std::size_t>(i)];
  long long prefix = 0;
  long long split = n;  // first index with s_i <= k
  for (long long k = 1; k <= n; ++k) {
    prefix += s[static_cast<std::size_t>(k) - 1];
    while (split > k && s[static_cast<std::size_t>(split) - 1] <= k) --split;
    const long long lo = std::max(split, k);
    const long long rhs = k * (k - 1) + k * (lo - k) + suffix[static_cast<std::size_t>(lo)];
    if (prefix > rhs) return false;
  }
  return true;
}

DegreeSequence make_graphical(DegreeSequence d, const std::vector<int>& touched, std::mt19937_64& rng) {
  const int n = static_cast<int>(d.size());
  if (n < 2) throw GenerationError("a degree sequence needs at least two nodes");
  for (int& x : d) x = std::clamp(x, 1, n - 1);
  if (std::accumulate(d.begin(), d.end(), 0LL) % 2 != 0) {
    int node;
    if (touched.empty()) {
      node = std::uniform_int_distribution<int>(0, n - 1)(rng);
    } else {
      node = touched[std::uniform_int_distribution<std::size_t>(0, touched.size() - 1)(rng)];
    }
    const bool up = d[static_cast<std::size_t>(node)] == 1 ||
                    (d[static_cast<std::size_t>(node)] < n - 1 && std::bernoulli_distribution(0.5)(rng));
    d[static_cast<std::size_t>(node)] += up ? 1 : -1;
  }
  for (int round = 0; round <= n; ++round) {
    if (is_graphical(d)) return d;
    // Two units off the largest entries keeps the sum even.
    for (int rep = 0; rep < 2; ++rep) {
      auto it = std::max_element(d.begin(), d.end());
      if (*it <= 1) break;
      --*it;
    }
    if (std::accumulate(d.begin(), d.end(), 0LL) % 2 != 0) ++*std::min_element(d.begin(), d.end());
  }
  throw GenerationError("could not repair degree sequence into a graphical one");
}

DegreeSequence perturb_degrees(const DegreeSequence& d, double flip_fraction, std::uint64_t seed) {
  if (!(flip_fraction >= 0.0 && flip_fraction <= 1.0)) throw PreconditionError("flip_fraction must lie in [0, 1]");
  const int n = static_cast<int>(d.size());
  std::mt19937_64 rng(seed);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  const auto flips = static_cast<std::size_t>(std::ceil(flip_fraction * n - 1e-12));
  order.resize(std::min(order.size(), flips));
  std::sort(order.begin(), order.end());

  DegreeSequence out = d;
  if (!order.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, d.size() - 1);
    for (int v : order) out[static_cast<std::size_t>(v)] = d[pick(rng)];
  }
  return make_graphical(std::move(out), order, rng);
}

DegreeSequence perturb_degrees(const Graph& g, double flip_fraction, std::uint64_t seed) {
  return perturb_degrees(g.degrees(), flip_fraction, seed);
}

DegreeModel fit_degree_model(const std::vector<Graph>& graphs, DegreeFamily family, double flip_fraction) {
  std::vector<DegreeSequence> sequences;
  for (const auto& g : graphs) sequences.push_back(g.degrees());
  return fit_degree_model(sequences, family, flip_fraction);
}

namespace {

// zeta(s, q) = sum_{k >= q} k^-s for integer q >= 1.
double hurwitz_zeta(double s, int q) {
  double head = 0.0;
  for (int k = 1; k < q; ++k) head += std::pow(static_cast<double>(k), -s);
  return std::riemann_zeta(s) - head;
}

// Maximiser of -a * mean_log - log zeta(a, x_min); the log-likelihood is concave in a.
double discrete_power_law_mle(double mean_log, int x_min) {
  auto nll = [&](double a) { return a * mean_log + std::log(hurwitz_zeta(a, x_min)); };
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 1.0 + 1e-6, hi = 20.0;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = nll(x1), f2 = nll(x2);
  while (hi - lo > 1e-10) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = nll(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = nll(x2);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DegreeModel fit_degree_model(const std::vector<DegreeSequence>& sequences, DegreeFamily family, double flip_fraction) {
  DegreeModel model;
  model.family = family;
  model.flip_fraction = flip_fraction;
  model.sources = sequences;
  std::vector<int> pooled;
  for (const auto& s : sequences) pooled.insert(pooled.end(), s.begin(), s.end());
  if (pooled.empty()) throw PreconditionError("degree model needs a nonempty corpus");
  if (*std::min_element(pooled.begin(), pooled.end()) < 1) throw PreconditionError("corpus contains isolated nodes");

  if (family == DegreeFamily::PowerLaw) {
    const int x_min = *std::min_element(pooled.begin(), pooled.end());
    if (*std::max_element(pooled.begin(), pooled.end()) == x_min) {
      throw GenerationError("power-law fit is degenerate: every degree equals " + std::to_string(x_min) +
                            "; use the perturb degree source instead");
    }
    double log_sum = 0.0;
    for (int x : pooled) log_sum += std::log(static_cast<double>(x));
    model.x_min = x_min;
    model.exponent = discrete_power_law_mle(log_sum / static_cast<double>(pooled.size()), x_min);
  } else if (family == DegreeFamily::Lognormal) {
    double s = 0.0, s2 = 0.0;
    for (int x : pooled) s += std::log(static_cast<double>(x));
    model.log_mean = s / static_cast<double>(pooled.size());
    for (int x : pooled) s2 += std::pow(std::log(static_cast<double>(x)) - model.log_mean, 2);
    model.log_sd = std::sqrt(s2 / static_cast<double>(pooled.size()));
  }
  return model;
}

DegreeSequence sample_degrees(const DegreeModel& model, int n, std::uint64_t seed) {
  if (n < 2) throw PreconditionError("sample_degrees needs n >= 2");
  std::mt19937_64 rng(seed);
  DegreeSequence d(static_cast<std::size_t>(n));
  switch (model.family) {
    case DegreeFamily::EmpiricalPerturbed: {
      std::vector<const DegreeSequence*> same;
      for (const auto& s : model.sources)
        if (static_cast<int>(s.size()) == n) same.push_back(&s);
      if (!same.empty()) {
        const auto* src = same[std::uniform_int_distribution<std::size_t>(0, same.size() - 1)(rng)];
        return perturb_degrees(*src, model.flip_fraction, rng());
      }
      std::vector<int> pooled;
      for (const auto& s : model.sources) pooled.insert(pooled.end(), s.begin(), s.end());
      if (pooled.empty()) throw PreconditionError("empirical degree model has no source sequences");
      std::uniform_int_distribution<std::size_t> pick(0, pooled.size() - 1);
      for (int& x : d) x = pooled[pick(rng)];
      break;
    }
    case DegreeFamily::PowerLaw: {
      // Continuous approximation to the discrete power law, rounded.
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (int& x : d) {
        const double r = (model.x_min - 0.5) * std::pow(1.0 - u(rng), -1.0 / (model.exponent - 1.0)) + 0.5;
        x = static_cast<int>(std::min<double>(std::floor(r), n - 1));
      }
      break;
    }
    case DegreeFamily::Lognormal: {
      std::normal_distribution<double> z(model.log_mean, model.log_sd);
      for (int& x : d) {
        const double r = model.log_sd > 0.0 ? std::exp(z(rng)) : std::exp(model.log_mean);
        x = static_cast<int>(std::min<double>(std::llround(r), n - 1));
      }
      break;
    }
  }
  return make_graphical(std::move(d), {}, rng);
}

}  // namespace graphweave
