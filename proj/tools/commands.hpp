#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qpersist/operators.hpp"
#include "qpersist/qsim.hpp"

namespace qpersist::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCompute = 3;

struct RunConfig {
  std::optional<std::filesystem::path> input;
  bool two_squares = false;
  int k = 1;
  std::optional<double> eps;
  std::optional<double> eps2;
  std::vector<double> scales;
  double xi = 1.0;
  int l = 3;
  int M = 16;
  std::optional<RestrictionVariant> variant;
  bool drop_isolated = false;
  Evolution evolution = ExactEvolution{};
  std::optional<std::uint64_t> shots;
  std::uint64_t seed = 0;
  std::filesystem::path out = ".";
  bool write_json = true;
  bool write_csv = true;
  bool svg = false;
  // spectrum / dump only
  std::string op = "dirac";
  std::size_t max_dim = kDefaultSimulationCap;
};

int cmd_betti(const RunConfig& cfg, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, std::ostream& out);
int cmd_spectrum(const RunConfig& cfg, std::ostream& out);
int cmd_dump(const RunConfig& cfg, std::ostream& out);

/// Parses argv, runs the chosen subcommand and maps errors to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qpersist::cli
