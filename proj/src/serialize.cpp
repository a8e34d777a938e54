#include "qpersist/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace qpersist {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::string betti_table_json(const BettiTable& table, int k) {
  nlohmann::ordered_json doc;
  doc["k"] = k;
  doc["scales"] = table.scales;
  auto betti = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.entries()) {
    const auto& [kk, i, j] = key;
    if (kk == k) betti[std::to_string(i) + "," + std::to_string(j)] = value;
  }
  doc["betti"] = std::move(betti);
  return doc.dump();
}

std::string distribution_json(const PhaseDistribution& dist) {
  nlohmann::ordered_json doc;
  doc["l"] = dist.l;
  doc["M"] = dist.M;
  doc["xi"] = dist.xi;
  doc["N"] = dist.hilbert_dim;
  doc["P"] = dist.probs;
  return doc.dump();
}

std::string distribution_csv(const PhaseDistribution& dist) {
  std::ostringstream out;
  out << "p,probability\n";
  for (std::size_t p = 0; p < dist.probs.size(); ++p) out << p << ',' << num(dist.probs[p]) << '\n';
  return out.str();
}

std::string counts_csv(const std::vector<std::uint64_t>& counts) {
  std::ostringstream out;
  out << "p,count\n";
  for (std::size_t p = 0; p < counts.size(); ++p) out << p << ',' << counts[p] << '\n';
  return out.str();
}

std::string spectrum_text(const Spectrum& s) {
  std::ostringstream out;
  char buf[64];
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    // Round-off around zero would otherwise print as -0.000000000000.
    const double v = std::abs(s.eigenvalues[i]) < 5e-13 ? 0.0 : s.eigenvalues[i];
    std::snprintf(buf, sizeof buf, "%.12f %d\n", v, s.multiplicities[i]);
    out << buf;
  }
  return out.str();
}

std::string distribution_svg(const PhaseDistribution& dist) {
  const double width = 40.0 * static_cast<double>(dist.probs.size()) + 60.0;
  const double height = 240.0;
  const double plot_h = 180.0;
  const double top = std::max(1e-12, *std::max_element(dist.probs.begin(), dist.probs.end()));
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n";
  out << "<text x=\"10\" y=\"16\" font-size=\"12\">P(p), l=" << dist.l << ", M=" << dist.M
      << ", N=" << dist.hilbert_dim << "</text>\n";
  for (std::size_t p = 0; p < dist.probs.size(); ++p) {
    const double h = plot_h * dist.probs[p] / top;
    const double x = 40.0 + 40.0 * static_cast<double>(p);
    out << "<rect x=\"" << x << "\" y=\"" << 200.0 - h << "\" width=\"30\" height=\"" << h
        << "\" fill=\"steelblue\"/>\n";
    out << "<text x=\"" << x + 10 << "\" y=\"216\" font-size=\"10\">" << p << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace qpersist
