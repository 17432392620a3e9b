#include "regent/apps.hpp"
#include "regent/divergences.hpp"
#include "regent/io.hpp"
#include "regent/sets.hpp"
#include "regent/symmetry.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#ifndef REGENT_VERSION
#define REGENT_VERSION "unknown"
#endif

namespace {

using regent::io::Json;
using regent::io::number;

constexpr int kExitDomain = 1;
constexpr int kExitSolver = 2;
constexpr int kExitUsage = 64;

struct Config {
  std::string subcommand;
  double tol = 1e-7;
  std::uint64_t seed = 0;
  std::string symmetry = "on";
  int samples = 0;

  // div
  std::string kind;
  std::string rho_path, sigma_path;
  // set probe
  std::string set_name;
  int k = 2, dA = 2, dB = 2;
  std::string witness_path;
  // solve
  std::string program_path;
  // sym blocks
  int d = 2, m = 2;
  // sandwich
  std::string application;
  double p = 0.05;
  std::string state_path;
  // fig
  std::string figure;
  std::string out_dir;
  // bound
  std::optional<double> c_t;
  int qudit = 0;
};

Json config_json(const Config& c) {
  Json j = {{"version", REGENT_VERSION},
            {"subcommand", c.subcommand},
            {"tol", c.tol},
            {"seed", c.seed},
            {"symmetry", c.symmetry}};
  if (c.samples > 0) j["samples"] = c.samples;
  return j;
}

void emit(const Json& body, const Config& c) {
  Json out = body;
  out["config"] = config_json(c);
  std::cout << out.dump(2) << "\n";
}

regent::DensityOperator load_state(const std::string& path) {
  return regent::DensityOperator(regent::io::load_matrix(path));
}

regent::SetRepresentation named_set(const Config& c, int witness_dim) {
  if (c.set_name == "rains") return regent::build_rains(c.dA, c.dB);
  if (c.set_name == "pptk") return regent::build_pptk(c.dA, c.dB, c.k);
  if (c.set_name == "ppt") return regent::build_ppt(c.dA, c.dB);
  if (c.set_name == "wd") return regent::build_wd(c.dA, c.dB);
  if (c.set_name == "wigner") {
    int copies = 0;
    for (long long n = 1; n < witness_dim; n *= c.dA) ++copies;
    return regent::build_wigner_set(c.dA, std::max(copies, 1));
  }
  throw regent::DomainError("unknown set: " + c.set_name);
}

int run_div(const Config& c) {
  const regent::DensityOperator rho = load_state(c.rho_path);
  const regent::HermitianOperator sigma = regent::io::load_matrix(c.sigma_path);
  const regent::DivergenceKind kind = regent::divergence_kind_from_string(c.kind);
  const regent::DivergenceValue v = kind == regent::DivergenceKind::Measured
                                        ? regent::measured(rho, sigma, std::min(c.tol, 1e-8))
                                        : regent::divergence(kind, rho, sigma);
  emit({{"kind", regent::to_string(kind)}, {"value", number(v.value)}}, c);
  return 0;
}

int run_set_probe(const Config& c) {
  const regent::HermitianOperator w = regent::io::load_matrix(c.witness_path);
  const regent::SetRepresentation s = named_set(c, w.dim());
  if (s.ambient_dim() != w.dim()) throw regent::DomainError("witness dimension does not match the set");
  const double h = regent::support_function(s, w, std::min(c.tol, 1e-9));
  emit({{"set", c.set_name}, {"h", number(h)}, {"polar_member", h <= 1.0 + 1e-8}}, c);
  return 0;
}

int run_solve(const Config& c) {
  const regent::conic::Solution s = regent::conic::solve(regent::io::load_program(c.program_path), c.tol);
  emit({{"status", regent::conic::to_string(s.status)},
        {"objective", number(s.objective)},
        {"dual_objective", number(s.dual_objective)},
        {"accuracy", number(s.accuracy)},
        {"order_change", number(s.order_change)},
        {"x", std::vector<double>(s.x.data(), s.x.data() + s.x.size())}},
       c);
  return s.status == regent::conic::SolutionStatus::MaxIterations ? kExitSolver : 0;
}

int run_sym_blocks(const Config& c) {
  const regent::symmetry::BlockDecomposition bd = regent::symmetry::block_decompose(c.d, c.m, c.seed);
  Json blocks = Json::array();
  for (const auto& b : bd.blocks())
    blocks.push_back({{"lambda", b.lambda}, {"size", b.size}, {"multiplicity", b.multiplicity}});
  Json out = {{"d", c.d}, {"m", c.m}, {"blocks", blocks}, {"certificate", bd.certificate()}};
  if (std::pow(c.d, c.m) <= 2000) out["orbit_count"] = regent::symmetry::orbit_count(c.d, c.m);
  emit(out, c);
  return 0;
}

int run_sandwich(const Config& c) {
  regent::SandwichOptions opt{c.tol, c.symmetry == "on", c.seed};
  regent::SandwichReport r;
  if (c.application == "adc") {
    r = regent::apps::adc_bounds(regent::apps::replacer_channel(regent::apps::replacer_vector(), 3),
                                 regent::apps::platypus_channel(c.p), c.m, opt);
  } else {
    std::optional<regent::DensityOperator> rho;
    if (!c.state_path.empty()) rho = load_state(c.state_path);
    if (c.application == "rains") {
      r = regent::apps::rains_sandwich(rho ? *rho : regent::max_entangled_state(2), c.m, opt);
    } else if (c.application == "pptk") {
      r = regent::apps::pptk_sandwich(rho ? *rho : regent::max_entangled_state(2), c.k, c.m, opt);
    } else if (c.application == "wigner") {
      r = regent::apps::thauma_sandwich(rho ? *rho : regent::apps::strange_state(), c.qudit, c.m, opt);
    } else {
      throw regent::DomainError("unknown application: " + c.application);
    }
  }
  Json out = regent::io::to_json(r);
  out["application"] = c.application;
  emit(out, c);
  return 0;
}

int run_fig(const Config& c) {
  regent::apps::FigureOptions fo;
  fo.samples = c.samples;
  fo.seed = c.seed;
  fo.tol = c.tol;
  fo.use_symmetry = c.symmetry == "on";
  if (!fo.use_symmetry) fo.max_level = 2;
  const regent::apps::Table t = regent::apps::figure(c.figure, fo);
  std::vector<std::string> header = {std::string("regent ") + REGENT_VERSION,
                                     "figure=" + c.figure + " samples=" + std::to_string(c.samples) +
                                         " seed=" + std::to_string(c.seed) + " tol=" + regent::io::format_double(c.tol) +
                                         " symmetry=" + c.symmetry};
  if (c.out_dir.empty()) {
    regent::io::write_csv(std::cout, t, header);
    return 0;
  }
  std::filesystem::create_directories(c.out_dir);
  const std::string path = (std::filesystem::path(c.out_dir) / ("fig" + c.figure + ".csv")).string();
  std::ofstream out(path);
  if (!out) throw regent::DomainError("cannot write " + path);
  regent::io::write_csv(out, t, header);
  std::cout << path << "\n";
  return 0;
}

int run_bound_ec(const Config& c) {
  regent::apps::BoundReport r = regent::apps::entanglement_report(load_state(c.state_path), c.k, c.tol);
  r.descriptor = c.state_path;
  emit(regent::io::to_json(r), c);
  return 0;
}

int run_bound_magic(const Config& c) {
  const regent::DensityOperator rho = load_state(c.state_path);
  const double t = regent::apps::thauma(rho, c.qudit, c.tol);
  Json out = {{"thauma", number(t)}};
  if (c.c_t) out["scaled_bound"] = number(*c.c_t * t);
  emit(out, c);
  return 0;
}

void add_common(CLI::App* sub, Config& c) {
  sub->add_option("--tol", c.tol, "Solver tolerance")->check(CLI::Range(1e-9, 1e-3));
  sub->add_option("--seed", c.seed, "Random seed");
}

}  // namespace

int main(int argc, char** argv) {
  Config c;
  CLI::App app{"Regularized relative entropy bounds"};
  app.require_subcommand(1);
  app.set_version_flag("--version", REGENT_VERSION);

  CLI::App* div = app.add_subcommand("div", "Divergence between two states");
  div->add_option("--kind", c.kind, "umegaki|min|max|measured|measured-half")
      ->required()
      ->check(CLI::IsMember({"umegaki", "min", "max", "measured", "measured-half"}));
  div->add_option("--rho", c.rho_path, "First state (matrix JSON)")->required()->check(CLI::ExistingFile);
  div->add_option("--sigma", c.sigma_path, "Second operator (matrix JSON)")->required()->check(CLI::ExistingFile);
  add_common(div, c);

  CLI::App* set = app.add_subcommand("set", "Set representations");
  set->require_subcommand(1);
  CLI::App* probe = set->add_subcommand("probe", "Support function and polar membership");
  probe->add_option("--name", c.set_name, "rains|pptk|ppt|wd|wigner")
      ->required()
      ->check(CLI::IsMember({"rains", "pptk", "ppt", "wd", "wigner"}));
  probe->add_option("--k", c.k, "Level of PPT_k");
  probe->add_option("--dA", c.dA, "First local dimension (qudit dimension for wigner)");
  probe->add_option("--dB", c.dB, "Second local dimension");
  probe->add_option("--witness", c.witness_path, "Witness operator (matrix JSON)")->required()->check(CLI::ExistingFile);
  add_common(probe, c);

  CLI::App* solve = app.add_subcommand("solve", "Solve a conic program from JSON");
  solve->add_option("--program", c.program_path, "Program JSON")->required()->check(CLI::ExistingFile);
  add_common(solve, c);

  CLI::App* sym = app.add_subcommand("sym", "Symmetry reduction");
  sym->require_subcommand(1);
  CLI::App* blocks = sym->add_subcommand("blocks", "Block decomposition of the permutation commutant");
  blocks->add_option("--d", c.d, "Site dimension")->check(CLI::PositiveNumber);
  blocks->add_option("--m", c.m, "Number of copies")->check(CLI::PositiveNumber);
  blocks->add_option("--seed", c.seed, "Random seed");

  CLI::App* sw = app.add_subcommand("sandwich", "Level-m sandwich bounds");
  sw->add_option("--application", c.application, "adc|rains|pptk|wigner")
      ->required()
      ->check(CLI::IsMember({"adc", "rains", "pptk", "wigner"}));
  sw->add_option("--m", c.m, "Level")->check(CLI::PositiveNumber);
  sw->add_option("--sym", c.symmetry, "on|off")->check(CLI::IsMember({"on", "off"}));
  sw->add_option("--p", c.p, "Platypus parameter (adc)")->check(CLI::Range(0.0, 1.0));
  sw->add_option("--k", c.k, "Level of PPT_k (pptk)");
  sw->add_option("--d", c.qudit, "Qudit dimension (wigner)");
  sw->add_option("--state", c.state_path, "State (matrix JSON)")->check(CLI::ExistingFile);
  add_common(sw, c);

  CLI::App* fig = app.add_subcommand("fig", "Figure data as CSV");
  fig->add_option("figure", c.figure, "1|2a|2b|3|4")->required()->check(CLI::IsMember({"1", "2a", "2b", "3", "4"}));
  fig->add_option("--out", c.out_dir, "Output directory (stdout when omitted)");
  fig->add_option("--samples", c.samples, "Grid points, or samples per rank for figure 3")->check(CLI::PositiveNumber);
  fig->add_option("--sym", c.symmetry, "on|off")->check(CLI::IsMember({"on", "off"}));
  add_common(fig, c);

  CLI::App* bound = app.add_subcommand("bound", "Bounds for a given state");
  bound->require_subcommand(1);
  CLI::App* ec = bound->add_subcommand("ec", "Entanglement bounds");
  ec->add_option("--state", c.state_path, "Bipartite state (matrix JSON)")->required()->check(CLI::ExistingFile);
  ec->add_option("--k", c.k, "Level of PPT_k")->check(CLI::Range(2, 64));
  add_common(ec, c);
  CLI::App* magic = bound->add_subcommand("magic", "Thauma");
  magic->add_option("--state", c.state_path, "State (matrix JSON)")->required()->check(CLI::ExistingFile);
  magic->add_option("--d", c.qudit, "Qudit dimension (inferred when omitted)");
  magic->add_option("--c", c.c_t, "Multiplier applied to the thauma value");
  add_common(magic, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << std::flush;
    return kExitUsage;
  }

  try {
    if (*div) {
      c.subcommand = "div";
      return run_div(c);
    }
    if (*probe) {
      c.subcommand = "set probe";
      return run_set_probe(c);
    }
    if (*solve) {
      c.subcommand = "solve";
      return run_solve(c);
    }
    if (*blocks) {
      c.subcommand = "sym blocks";
      return run_sym_blocks(c);
    }
    if (*sw) {
      c.subcommand = "sandwich";
      return run_sandwich(c);
    }
    if (*fig) {
      c.subcommand = "fig";
      return run_fig(c);
    }
    if (*ec) {
      c.subcommand = "bound ec";
      return run_bound_ec(c);
    }
    if (*magic) {
      c.subcommand = "bound magic";
      return run_bound_magic(c);
    }
  } catch (const regent::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const regent::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitUsage;
}
