#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcover/covering_simulator.hpp"
#include "rcover/length_sequences.hpp"
#include "rcover/report.hpp"
#include "rcover/target_sets.hpp"

namespace rcover {

// Trial t of every experiment uses seed + t.

// Q is the level-n0 cube at the origin; n is the least level with
// 2^-n sqrt(d) <= min l_j over the window. Checks: mean and second moment of
// N(Q,n) within 3 standard errors of the closed forms, and the frequency of
// |N - EN| >= EN/2 against 2^(n0 d + 2) / L_n.
ExperimentReport verify_moment_lemma(int n0, int d, const LengthSequenceSpec& spec, StageWindow window, int trials,
                                     std::uint64_t seed, int threads = 0);

// K = ceil(2^(ns)) leftmost level-n cubes of Q against L = ceil(2^(nt))
// uniform ones. The bound trend uses the given n when there are at least
// three, otherwise n, n+2, n+4 from the last one.
ExperimentReport verify_coincidence_lemma(int n0, const std::vector<int>& ns, double s, double t, int d, int trials,
                                          std::uint64_t seed, int threads = 0);

// Closed arcs of length eta^beta around xi_n, C < n <= c eta^-alpha.
ExperimentReport verify_covering_lemma(const std::vector<double>& etas, double beta, double alpha, double c, double C,
                                       int trials, std::uint64_t seed, int threads = 0);

// d = 1. Hit tests are exact against the target, not against a grid.
ExperimentReport dichotomy_experiment(const LengthSequenceSpec& spec, const TargetSetSpec& target,
                                      const std::vector<StageWindow>& windows, int trials, std::uint64_t seed,
                                      int threads = 0);

ExperimentReport prop13_experiment(const std::vector<double>& s, const std::vector<double>& eps, int depth, int trials,
                                   std::uint64_t seed, int threads = 0);

// `points` mu-random points of G are profiled.
ExperimentReport prop14_experiment(double t, double alpha, int depth, int points, std::uint64_t seed);

inline constexpr double kProp14Tolerance = 0.1;

nlohmann::json to_json(const LengthSequenceSpec& spec);

}  // namespace rcover
