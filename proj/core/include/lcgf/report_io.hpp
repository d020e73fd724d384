#pragma once

#include <map>
#include <string>
#include <vector>

#include "lcgf/partition.hpp"
#include "lcgf/variational.hpp"

namespace lcgf {

/// Shortest round-trippable decimal form of a double (%.17g).
std::string format_double(double v);

/// Write content to path atomically: temp file in the same directory, then
/// rename over the target.
void atomic_write_file(const std::string& path, const std::string& content);

/// Scan CSV: '#'-prefixed config echo lines, then the fixed header
/// M,N,K,L,samples,mean,stderr,ci_low,ci_high,quantity_tag.
std::string render_csv(const std::vector<ScanRow>& rows,
                       const std::map<std::string, std::string>& config_echo);

/// JSON report array with the resolved config embedded.
std::string render_json(const std::vector<EstimateReport>& reports,
                        const std::map<std::string, std::string>& config_echo);
std::string render_json(const std::vector<ScanRow>& rows,
                        const std::map<std::string, std::string>& config_echo);

/// Parse the config echo back out of either format.
std::map<std::string, std::string> parse_config_echo(const std::string& content);

}  // namespace lcgf
