#pragma once

#include <string>

#include "copower/model/types.hpp"

namespace copower {

// Reads and validates a scenario file (JSON; schema documented in README).
Scenario load_scenario(const std::string& path);

Scenario parse_scenario(const std::string& json_text);
std::string serialize_scenario(const Scenario& s);

bool scenarios_equal(const Scenario& a, const Scenario& b);

}  // namespace copower
