#ifndef SURVIMP_IO_HPP
#define SURVIMP_IO_HPP

#include <string>

#include "survimp/repvar.hpp"

namespace survimp {

/// Shortest decimal form that round-trips the exact double.
std::string format_double(double v);

/// CSV with header x1,...,x6,y,delta.
std::string population_to_csv(const FinitePopulation& pop);
FinitePopulation population_from_csv(const std::string& text);

/// CSV with header x1,...,xp,y,delta,pi; empty y cell marks a missing value.
/// popsize travels out of band (the --pop-size flag).
std::string sample_to_csv(const SurveySample& sample);
SurveySample sample_from_csv(const std::string& text, std::int64_t popsize);

std::string report_to_json(const EstimateReport& report,
                           bool include_replicates = false);

/// CSV `k,mu_rep` audit dump of a replicate vector.
std::string replicates_to_csv(std::span<const double> replicates);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace survimp

#endif
