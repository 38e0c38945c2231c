#pragma once

#include <span>
#include <vector>

#include "pcrl/rng.hpp"

namespace pcrl {

enum class Direction { Ascend, Descend };

Direction direction_from_string(std::string_view s);
std::string_view to_string(Direction d);

// p independent standard normal coordinates.
void draw_perturbation(int p, Rng& rng, std::vector<double>& u);
std::vector<double> draw_perturbation(int p, Rng& rng);

// A Gaussian direction together with the two probe points theta +- mu*u.
struct PerturbationPair {
  std::vector<double> u;
  std::vector<double> theta_plus;
  std::vector<double> theta_minus;
  double mu = 0.0;
};

PerturbationPair make_perturbation(std::span<const double> theta, double mu, Rng& rng);

// Symmetric two-point gradient estimate: (j_plus - j_minus) / (2 mu) * u.
// Unbiased for the gradient of the mu-smoothed objective.
void two_point_estimate(double j_plus, double j_minus, double mu, std::span<const double> u,
                        std::vector<double>& out);
std::vector<double> two_point_estimate(double j_plus, double j_minus, double mu,
                                       std::span<const double> u);

// One-sided variant (j_plus - j_center) / mu * u. Kept for cross-checking the
// symmetric form; the optimizer itself always uses the symmetric one.
std::vector<double> asymmetric_estimate(double j_plus, double j_center, double mu,
                                        std::span<const double> u);

// theta +- eta * estimate, sign by direction.
void actor_update(std::vector<double>& theta, std::span<const double> estimate, double eta,
                  Direction direction);

}  // namespace pcrl
