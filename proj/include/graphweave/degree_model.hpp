#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "graphweave/graph.hpp"

namespace graphweave {

enum class DegreeFamily { EmpiricalPerturbed, PowerLaw, Lognormal };

std::string to_string(DegreeFamily family);
/// "perturb", "powerlaw" or "lognormal". Throws PreconditionError.
DegreeFamily parse_degree_family(const std::string& name);

struct DegreeModel {
  DegreeFamily family = DegreeFamily::EmpiricalPerturbed;
  double exponent = 0.0;  ///< power law
  int x_min = 1;          ///< power law
  double log_mean = 0.0;  ///< lognormal
  double log_sd = 0.0;    ///< lognormal
  double flip_fraction = 0.1;
  std::vector<DegreeSequence> sources;  ///< corpus degree sequences
};

/// Erdős–Gallai test. Entries must be non-negative.
bool is_graphical(const DegreeSequence& d);

/// Clamps into [1, n-1], fixes odd parity by +-1 on one of `touched`
/// (any node when empty), then lowers the largest entry by two until the
/// sequence is graphical. Throws GenerationError after n rounds.
DegreeSequence make_graphical(DegreeSequence d, const std::vector<int>& touched, std::mt19937_64& rng);

/// Resamples ceil(flip_fraction * n) random nodes from the degree multiset
/// of `d`, then repairs with make_graphical.
DegreeSequence perturb_degrees(const DegreeSequence& d, double flip_fraction, std::uint64_t seed);
DegreeSequence perturb_degrees(const Graph& g, double flip_fraction, std::uint64_t seed);

/// Power law: discrete MLE of the exponent with x_min the smallest degree.
/// Lognormal: mean and standard deviation of log-degrees.
/// Throws GenerationError for a power-law fit on a corpus of equal degrees.
DegreeModel fit_degree_model(const std::vector<DegreeSequence>& sequences, DegreeFamily family,
                             double flip_fraction = 0.1);
DegreeModel fit_degree_model(const std::vector<Graph>& graphs, DegreeFamily family, double flip_fraction = 0.1);

/// A graphical sequence of length n drawn from the model. The empirical
/// family perturbs a corpus sequence of length n when one exists and
/// otherwise resamples the pooled degree multiset.
DegreeSequence sample_degrees(const DegreeModel& model, int n, std::uint64_t seed);

}  // namespace graphweave
