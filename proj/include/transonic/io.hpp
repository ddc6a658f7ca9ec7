// CSV / JSON serialization of solver outputs.  Column orders and schemas are
// fixed; floating point goes out at 12 significant digits in CSV and with
// shortest-round-trip formatting in JSON so reruns are byte-identical.
#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "transonic/fbp2d.hpp"
#include "transonic/radial.hpp"

namespace transonic {

inline constexpr const char* kVersion = "0.1.0";

std::string format_csv(double x);  // %.12g

void write_profile_csv(std::ostream& os, const RadialProfile& profile);

nlohmann::ordered_json solution_to_json(const TransonicShockSolution& solution);
nlohmann::ordered_json interval_to_json(const AdmissibleInterval& interval,
                                        const RadialProblem& problem);
nlohmann::ordered_json report_to_json(const ConvergenceReport& report);

void write_map_csv(std::ostream& os, const std::vector<double>& r_s,
                   const std::vector<double>& v1);
void write_front_history_csv(std::ostream& os,
                             const std::vector<ShockFront>& history);
void write_field_csv(std::ostream& os, const Field2D& field);

// Writes text atomically enough for tests: truncate + write + newline policy
// is the caller's; this helper just opens in binary mode for stable bytes.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace transonic
