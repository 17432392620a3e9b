#pragma once

#include "regent/estimators.hpp"
#include "regent/linalg.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace regent::apps {

// Channels.

/// X -> tr(X) |psi><psi| on inputs of dimension dim_in.
QuantumChannel replacer_channel(const CVector& psi, int dim_in);
/// (2|0> + |1> + 2|2>)/3.
CVector replacer_vector();
/// Qutrit channel with Kraus operators M0, M1 parameterized by p in [0, 1].
QuantumChannel platypus_channel(double p);
/// Qubit amplitude damping with decay probability gamma in [0, 1].
QuantumChannel ad_channel(double gamma);
/// (id (x) N)(Phi) for the normalized maximally entangled input, subsystems {d_in, d_out}.
DensityOperator choi_state(const QuantumChannel& n);

// States.

DensityOperator isotropic(int d, double p);
/// (1 - p) rho_s + p rho_a with the normalized symmetric and antisymmetric projectors.
DensityOperator werner(int d, double p);
/// Projector onto the antisymmetric subspace of C^d (x) C^d (unnormalized).
HermitianOperator antisymmetric_projector(int d);

/// D^inf(rho_iso || PPT) in bits.
double analytic_iso(int d, double p);
/// D^inf(rho_werner || PPT) in bits.
double analytic_werner(int d, double p);

// Entanglement quantities (bits). States must declare two subsystems.

/// D_min(rho || Rains).
double e_wd1(const DensityOperator& rho, double tol = 1e-9);
/// D_min(rho || PPT_2).
double e_wd2(const DensityOperator& rho, double tol = 1e-9);
/// -log min ||Y^{T_B}||_inf subject to -Y <= P_rho^{T_B} <= Y, solved directly.
double e_wd2_direct(const DensityOperator& rho, double tol = 1e-9);
/// -log of the largest squared fidelity between rho and PPT_k.
double e_wjz(const DensityOperator& rho, int k, double tol = 1e-9);
/// D_M(rho || PPT_k).
double d_m_pptk(const DensityOperator& rho, int k, double tol = 1e-7);
SandwichReport pptk_sandwich(const DensityOperator& rho, int k, int m, const SandwichOptions& opt = {});
/// D(rho || Rains).
double rains_bound(const DensityOperator& rho, double tol = 1e-7);
SandwichReport rains_sandwich(const DensityOperator& rho, int m, const SandwichOptions& opt = {});
/// Constant-zero value of E_LR on full-rank states; nullopt otherwise.
std::optional<double> e_lr(const DensityOperator& rho);

// Magic.

/// D(rho || W) on (C^d)^{(x) n} with odd prime d; d = 0 picks the smallest odd
/// prime whose power equals the dimension.
double thauma(const DensityOperator& rho, int d = 0, double tol = 1e-7);
SandwichReport thauma_sandwich(const DensityOperator& rho, int d, int m, const SandwichOptions& opt = {});
/// Qutrit Strange state (|1> - |2>)/sqrt2.
DensityOperator strange_state();
/// The d(d+1) pure stabilizer states of a single qudit of odd prime dimension.
std::vector<DensityOperator> stabilizer_states(int d);

// Channel applications.

SandwichReport adc_bounds(const QuantumChannel& n, const QuantumChannel& m, int level,
                          const SandwichOptions& opt = {});
/// max_p h2((1 - gamma) p) - h2(gamma p).
double q_ad(double gamma);
/// D_M((id (x) N_ad)(Phi) || PPT_2).
double ec_ad_bound(double gamma, double tol = 1e-7);

/// Named values for one state or channel.
struct BoundReport {
  std::string descriptor;
  std::optional<double> e_wd1, e_wd2, e_wjz, d_m_pptk, thauma, rains_upper, rains_lower, analytic_reference;
  std::optional<double> p, gamma;
  int k = 2;
  int m = 1;
};

BoundReport entanglement_report(const DensityOperator& rho, int k, double tol = 1e-7);

// Figure tables.

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;  ///< NaN marks an undefined entry
};

struct FigureOptions {
  int samples = 0;  ///< grid points or samples per rank; 0 selects the default
  std::uint64_t seed = 0;
  double tol = 1e-7;
  bool use_symmetry = true;
  int max_level = 3;  ///< largest level for the channel figure
};

/// Replacer vs platypus bounds over p.
Table figure1(const FigureOptions& opt);
/// Isotropic qutrit states over p.
Table figure2a(const FigureOptions& opt);
/// Werner qutrit states over p.
Table figure2b(const FigureOptions& opt);
/// Random two-qutrit states per rank.
Table figure3(const FigureOptions& opt);
/// Amplitude damping over gamma.
Table figure4(const FigureOptions& opt);
Table figure(const std::string& name, const FigureOptions& opt);

}  // namespace regent::apps
