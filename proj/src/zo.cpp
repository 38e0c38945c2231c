#include "pcrl/zo.hpp"

#include <stdexcept>
#include <string>

namespace pcrl {

Direction direction_from_string(std::string_view s) {
  if (s == "ascend") return Direction::Ascend;
  if (s == "descend") return Direction::Descend;
  throw std::invalid_argument("unknown direction: " + std::string(s));
}

std::string_view to_string(Direction d) {
  return d == Direction::Ascend ? "ascend" : "descend";
}

void draw_perturbation(int p, Rng& rng, std::vector<double>& u) {
  if (p < 1) throw std::invalid_argument("draw_perturbation: p must be >= 1");
  u.resize(static_cast<std::size_t>(p));
  for (double& v : u) v = rng.normal();
}

std::vector<double> draw_perturbation(int p, Rng& rng) {
  std::vector<double> u;
  draw_perturbation(p, rng, u);
  return u;
}

PerturbationPair make_perturbation(std::span<const double> theta, double mu, Rng& rng) {
  if (!(mu > 0.0)) throw std::invalid_argument("make_perturbation: mu must be > 0");
  PerturbationPair pp;
  pp.mu = mu;
  draw_perturbation(static_cast<int>(theta.size()), rng, pp.u);
  pp.theta_plus.resize(theta.size());
  pp.theta_minus.resize(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    pp.theta_plus[i] = theta[i] + mu * pp.u[i];
    pp.theta_minus[i] = theta[i] - mu * pp.u[i];
  }
  return pp;
}

void two_point_estimate(double j_plus, double j_minus, double mu, std::span<const double> u,
                        std::vector<double>& out) {
  if (!(mu > 0.0)) throw std::invalid_argument("two_point_estimate: mu must be > 0");
  const double coef = (j_plus - j_minus) / (2.0 * mu);
  out.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = coef * u[i];
}

std::vector<double> two_point_estimate(double j_plus, double j_minus, double mu,
                                       std::span<const double> u) {
  std::vector<double> out;
  two_point_estimate(j_plus, j_minus, mu, u, out);
  return out;
}

std::vector<double> asymmetric_estimate(double j_plus, double j_center, double mu,
                                        std::span<const double> u) {
  if (!(mu > 0.0)) throw std::invalid_argument("asymmetric_estimate: mu must be > 0");
  const double coef = (j_plus - j_center) / mu;
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = coef * u[i];
  return out;
}

void actor_update(std::vector<double>& theta, std::span<const double> estimate, double eta,
                  Direction direction) {
  if (!(eta > 0.0)) throw std::invalid_argument("actor_update: eta must be > 0");
  if (theta.size() != estimate.size())
    throw std::invalid_argument("actor_update: dimension mismatch");
  const double s = direction == Direction::Ascend ? eta : -eta;
  for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += s * estimate[i];
}

}  // namespace pcrl
