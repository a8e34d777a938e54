#include "commands.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "qpersist/complex.hpp"
#include "qpersist/errors.hpp"
#include "qpersist/geometry.hpp"
#include "qpersist/serialize.hpp"
#include "qpersist/spectral.hpp"

namespace qpersist::cli {

namespace {

void validate(const RunConfig& cfg) {
  if (cfg.two_squares == cfg.input.has_value()) {
    throw InputError("exactly one of --input or --two-squares is required");
  }
  if (cfg.eps && cfg.eps2 && *cfg.eps2 < *cfg.eps) {
    throw ScaleOrder("--eps2 must be >= --eps");
  }
  if (cfg.xi == 0.0) throw ZeroXi("--xi must be nonzero");
  if (cfg.M < 2 || (cfg.M & (cfg.M - 1)) != 0) throw BadM("--M must be a power of two >= 2");
  if (cfg.l < 1) throw InputError("--l must be >= 1");
  if (cfg.k < 0) throw InputError("--k must be >= 0");
}

FiltrationContext load(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.two_squares) return FiltrationContext(two_squares());
  try {
    return FiltrationContext(load_point_cloud(*cfg.input, format_from_extension(*cfg.input)));
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    // Anything wrong with the file itself is the caller's problem.
    throw InputError(e.what());
  }
}

std::pair<double, double> scale_pair(const RunConfig& cfg) {
  if (!cfg.eps) throw InputError("--eps is required");
  return {*cfg.eps, cfg.eps2.value_or(*cfg.eps)};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("failed writing " + path.string());
}

Evolution parse_evolution(const std::string& s) {
  if (s == "exact") return ExactEvolution{};
  constexpr std::string_view prefix = "trotter=";
  if (s.starts_with(prefix)) {
    int steps = 0;
    const char* first = s.data() + prefix.size();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, steps);
    if (ec == std::errc() && ptr == last && steps >= 1) return TrotterEvolution{steps};
  }
  throw InputError("--evolution must be 'exact' or 'trotter=N' with N >= 1, got '" + s + "'");
}

std::size_t max_dim_from_env() {
  const char* v = std::getenv("QPERSIST_MAX_DIM");
  if (v == nullptr || *v == '\0') return kDefaultSimulationCap;
  std::size_t n = 0;
  const std::string_view s(v);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || ptr != s.data() + s.size() || n == 0) {
    throw InputError("QPERSIST_MAX_DIM must be a positive integer");
  }
  return n;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12f", x);
  return buf;
}

}  // namespace

int cmd_betti(const RunConfig& cfg, std::ostream& out) {
  const auto ctx = load(cfg);
  const auto variant = cfg.variant.value_or(RestrictionVariant::ChainRestricted);
  if (!cfg.scales.empty()) {
    for (std::size_t i = 1; i < cfg.scales.size(); ++i) {
      if (cfg.scales[i] < cfg.scales[i - 1]) throw ScaleOrder("--scales must be non-decreasing");
    }
    const auto table = betti_table(ctx, cfg.k, cfg.scales, variant);
    const auto json = betti_table_json(table, cfg.k);
    out << json << '\n';
    if (cfg.out != ".") {
      std::filesystem::create_directories(cfg.out);
      write_file(cfg.out / "betti.json", json + "\n");
    }
    return kExitOk;
  }
  const auto [eps, eps2] = scale_pair(cfg);
  const auto lap = persistent_laplacian(cfg.k, eps, eps2, ctx, variant);
  out << kernel_dimension(lap, KernelMode::ExactRational) << '\n';
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  const auto ctx = load(cfg);
  const auto [eps, eps2] = scale_pair(cfg);
  const auto variant = cfg.variant.value_or(RestrictionVariant::Projected);
  const auto b = persistent_dirac(cfg.k, eps, eps2, cfg.xi, ctx, variant, cfg.drop_isolated);
  const auto dist = phase_estimation(b, cfg.l, cfg.M, {cfg.evolution, cfg.max_dim});

  std::filesystem::create_directories(cfg.out);
  if (cfg.write_json) write_file(cfg.out / "distribution.json", distribution_json(dist) + "\n");
  if (cfg.write_csv) write_file(cfg.out / "distribution.csv", distribution_csv(dist));
  if (cfg.shots) write_file(cfg.out / "counts.csv", counts_csv(sample_counts(dist, *cfg.shots, cfg.seed)));
  if (cfg.svg) write_file(cfg.out / "distribution.svg", distribution_svg(dist));

  out << "N " << dist.hilbert_dim << '\n';
  const auto est = betti_from_distribution(dist);
  out << "P(" << cfg.l << ") " << fmt(est.unrounded / double(dist.hilbert_dim)) << '\n';
  out << "beta " << est.betti << '\n';
  return kExitOk;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const auto ctx = load(cfg);
  const auto [eps, eps2] = scale_pair(cfg);
  if (cfg.op == "laplacian") {
    const auto variant = cfg.variant.value_or(RestrictionVariant::ChainRestricted);
    out << spectrum_text(spectrum(persistent_laplacian(cfg.k, eps, eps2, ctx, variant)));
  } else {
    const auto variant = cfg.variant.value_or(RestrictionVariant::Projected);
    const auto b = persistent_dirac(cfg.k, eps, eps2, cfg.xi, ctx, variant, cfg.drop_isolated);
    out << spectrum_text(spectrum(b));
  }
  return kExitOk;
}

int cmd_dump(const RunConfig& cfg, std::ostream& out) {
  const auto ctx = load(cfg);
  const auto [eps, eps2] = scale_pair(cfg);
  if (cfg.op == "basis") {
    out << enumerate_basis(cfg.k, eps, ctx).dump();
  } else if (cfg.op == "boundary") {
    out << restricted_boundary_projected(cfg.k, eps, eps2, ctx).dump();
  } else if (cfg.op == "laplacian") {
    const auto variant = cfg.variant.value_or(RestrictionVariant::ChainRestricted);
    out << persistent_laplacian(cfg.k, eps, eps2, ctx, variant).dump();
  } else {
    const auto variant = cfg.variant.value_or(RestrictionVariant::Projected);
    const auto b = persistent_dirac(cfg.k, eps, eps2, cfg.xi, ctx, variant, cfg.drop_isolated);
    for (std::size_t i = 0; i < b.dimension(); ++i) out << "# " << i << ' ' << b.label(i) << '\n';
    const Eigen::MatrixXd d = b.dense();
    for (Eigen::Index r = 0; r < d.rows(); ++r) {
      for (Eigen::Index c = 0; c < d.cols(); ++c) {
        if (d(r, c) != 0.0) out << r << ' ' << c << ' ' << d(r, c) << '\n';
      }
    }
  }
  return kExitOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Persistent Betti numbers of point clouds, classical and simulated quantum."};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string input, variant, evolution = "exact", format = "both";

  auto common = [&](CLI::App* sub, bool quantum) {
    sub->add_option("--input", input, "point cloud file (.csv or .json)");
    sub->add_flag("--two-squares", cfg.two_squares, "use the built-in two-squares cloud");
    sub->add_option("--k", cfg.k, "homology degree")->capture_default_str();
    sub->add_option("--eps", cfg.eps, "scale eps");
    sub->add_option("--eps2", cfg.eps2, "scale eps' (defaults to eps)");
    sub->add_option("--variant", variant, "projected|chain")
        ->check(CLI::IsMember({"projected", "chain"}));
    if (quantum) {
      sub->add_option("--xi", cfg.xi, "Dirac diagonal weight")->capture_default_str();
      sub->add_flag("--drop-isolated", cfg.drop_isolated, "drop uncoupled side-block elements");
    }
  };

  auto* betti = app.add_subcommand("betti", "persistent Betti numbers from the Laplacian kernel");
  common(betti, false);
  betti->add_option("--scales", cfg.scales, "scale grid; prints the full table as JSON");
  betti->add_option("--out", cfg.out, "also write betti.json here");

  auto* simulate = app.add_subcommand("simulate", "phase-estimation simulation on the Dirac operator");
  common(simulate, true);
  simulate->add_option("--l", cfg.l, "phase scale l")->capture_default_str();
  simulate->add_option("--M", cfg.M, "phase register size (power of two)")->capture_default_str();
  simulate->add_option("--evolution", evolution, "exact|trotter=N")->capture_default_str();
  simulate->add_option("--shots", cfg.shots, "sample this many outcomes into counts.csv");
  simulate->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
  simulate->add_option("--out", cfg.out, "output directory")->capture_default_str();
  simulate->add_option("--format", format, "json|csv|both")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();
  simulate->add_flag("--svg", cfg.svg, "also write distribution.svg");

  auto* spectrum_cmd = app.add_subcommand("spectrum", "clustered spectrum of B or L");
  common(spectrum_cmd, true);
  spectrum_cmd->add_option("--operator", cfg.op, "dirac|laplacian")
      ->check(CLI::IsMember({"dirac", "laplacian"}))
      ->capture_default_str();

  auto* dump = app.add_subcommand("dump", "print a basis or operator");
  common(dump, true);
  dump->add_option("--what", cfg.op, "basis|boundary|laplacian|dirac")
      ->check(CLI::IsMember({"basis", "boundary", "laplacian", "dirac"}))
      ->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (!input.empty()) cfg.input = input;
    if (!variant.empty()) {
      cfg.variant = variant == "chain" ? RestrictionVariant::ChainRestricted : RestrictionVariant::Projected;
    }
    cfg.evolution = parse_evolution(evolution);
    cfg.write_json = format != "csv";
    cfg.write_csv = format != "json";
    cfg.max_dim = max_dim_from_env();

    if (betti->parsed()) return cmd_betti(cfg, out);
    if (simulate->parsed()) return cmd_simulate(cfg, out);
    if (spectrum_cmd->parsed()) return cmd_spectrum(cfg, out);
    return cmd_dump(cfg, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitCompute;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitCompute;
  }
}

}  // namespace qpersist::cli
