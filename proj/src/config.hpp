#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "distribution.hpp"

namespace doors {

enum class DependencyKind { independent, cascading, dag };

// d doors plus the dependency structure gating their knocks. Door indices are
// 1-based everywhere user-visible; predecessor sets are stored 1-based too.
struct DoorConfiguration {
    std::vector<Distribution> doors;
    DependencyKind dependency = DependencyKind::independent;
    std::vector<std::vector<std::uint32_t>> dag_predecessors;  // used when dependency == dag

    std::uint32_t door_count() const { return static_cast<std::uint32_t>(doors.size()); }

    // predecessor sets normalized across all dependency kinds
    std::vector<std::vector<std::uint32_t>> effective_predecessors() const;
};

// Collects every invariant violation instead of stopping at the first.
std::vector<std::string> validate(const DoorConfiguration& config);

// Parses the configuration file schema; throws Error(validation_failed) with all
// violations joined, or Error(parse_error) on malformed JSON.
DoorConfiguration parse_config(const std::string& json_text);
DoorConfiguration load_config(const std::string& path);

std::string dependency_name(DependencyKind kind);

}  // namespace doors
