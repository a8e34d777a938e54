#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpersist/qsim.hpp"
#include "qpersist/spectral.hpp"

namespace qpersist {

/// {"k":1,"scales":[...],"betti":{"i,j":value}} with 1-based scale indices.
std::string betti_table_json(const BettiTable& table, int k);

/// {"l":3,"M":16,"xi":1.0,"N":12,"P":[...]}
std::string distribution_json(const PhaseDistribution& dist);

/// Header `p,probability` then one row per p.
std::string distribution_csv(const PhaseDistribution& dist);

/// Header `p,count` then one row per p.
std::string counts_csv(const std::vector<std::uint64_t>& counts);

/// One line per cluster: `eigenvalue multiplicity`.
std::string spectrum_text(const Spectrum& s);

/// Minimal SVG bar chart of P(p).
std::string distribution_svg(const PhaseDistribution& dist);

}  // namespace qpersist
