#pragma once

// Built-in coefficient families.

#include <string>
#include <vector>

#include "bjm/config.hpp"

namespace bjm {

struct FixtureInfo {
    std::string name;
    std::string description;
};

std::vector<FixtureInfo> fixture_list();

/// The family spec of a named fixture; throws ParseError for unknown names.
FamilySpec fixture_family(const std::string& name);

/// The JSON document the fixture is defined by.
Json fixture_json(const std::string& name);

}  // namespace bjm
