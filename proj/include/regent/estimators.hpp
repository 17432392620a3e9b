#pragma once

#include "regent/conic.hpp"
#include "regent/sets.hpp"

#include <functional>

namespace regent {

/// Level-m bounds D_M(A_m||B_m)/m <= D^inf(A||B) <= D(A_m||B_m)/m, in bits.
struct SandwichReport {
  int m = 1;
  double lower = 0.0;
  double upper = 0.0;
  double gap_bound = 0.0;  ///< 2 (d^2 + d) log(m + d) / m
  int d = 1;               ///< single-copy ambient dimension
  double lower_accuracy = 0.0;
  double upper_accuracy = 0.0;
  double order_change = 0.0;  ///< largest objective change at the final approximation order
  bool use_symmetry = false;
  bool assumptions_certified = false;
  bool infinite = false;  ///< the D_max precheck failed
  double dmax = 0.0;      ///< precheck value at level m (bits)
};

using SetFactory = std::function<SetRepresentation(int)>;

struct SandwichOptions {
  double tol = 1e-7;
  bool use_symmetry = false;
  std::uint64_t seed = 0;
};

SandwichReport sandwich(const SetFactory& a, const SetFactory& b, int m, const SandwichOptions& opt = {});

/// Gap certificate 2 (d^2 + d) log(m + d) / m.
double gap_bound(int d, int m);

/// ceil((8 d^2 / delta) log(d^2 / delta)).
long long required_level(double delta, int d);

/// min log t over rho in A, sigma in B with rho <= t sigma (bits); +infinity if no t exists.
double dmax_precheck(const SetRepresentation& a, const SetRepresentation& b, double tol = 1e-8);

/// D(A||B) in bits from the relative entropy program.
double umegaki_between(const SetRepresentation& a, const SetRepresentation& b, double tol = 1e-7,
                       double* accuracy = nullptr, double* order_change = nullptr);
/// D_M(A||B) in bits from the measured program.
double measured_between(const SetRepresentation& a, const SetRepresentation& b, double tol = 1e-7,
                        double* accuracy = nullptr, double* order_change = nullptr);

}  // namespace regent
