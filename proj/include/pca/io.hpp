#pragma once

#include <iosfwd>
#include <string>

#include "pca/diagnostics.hpp"

namespace pca {

// Flat text format: header "d L1 .. Ld |S|", then whitespace-separated
// symbol indices in row-major order.
void write_configuration_text(std::ostream& os, const Configuration& x);
Configuration read_configuration_text(std::istream& is);

// Rule text format: alphabet size, dim, offset count, offsets, output table.
void write_rule_text(std::ostream& os, const LocalRule& f);
LocalRule read_rule_text(std::istream& is);

// Binary PGM (P5), one gray level per symbol.
void write_pgm(const std::string& path, const Configuration& x);

// Space-time PGM for a 1D run: row t is the configuration at time t.
void write_space_time_pgm(const std::string& path,
                          const std::vector<Configuration>& frames);

// CSV: t,value,stderr[,envelope]
void write_curve_csv(const std::string& path, const DecayCurve& c);

}  // namespace pca
