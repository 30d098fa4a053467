#include "config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "error.hpp"

namespace doors {

using nlohmann::json;

std::vector<std::vector<std::uint32_t>> DoorConfiguration::effective_predecessors() const {
    const std::uint32_t d = door_count();
    std::vector<std::vector<std::uint32_t>> preds(d);
    switch (dependency) {
    case DependencyKind::independent:
        break;
    case DependencyKind::cascading:
        for (std::uint32_t i = 1; i < d; ++i) preds[i] = {i};  // door i+1 depends on door i
        break;
    case DependencyKind::dag:
        preds = dag_predecessors;
        preds.resize(d);
        break;
    }
    return preds;
}

std::vector<std::string> validate(const DoorConfiguration& config) {
    std::vector<std::string> violations;
    if (config.doors.empty()) violations.push_back("d >= 1 required: door list is empty");
    if (config.dependency == DependencyKind::dag) {
        if (config.dag_predecessors.size() != config.doors.size())
            violations.push_back("dag: predecessor list must have one entry per door");
        for (std::size_t i = 0; i < config.dag_predecessors.size(); ++i) {
            for (std::uint32_t p : config.dag_predecessors[i]) {
                if (p == 0 || p > config.doors.size())
                    violations.push_back("dag: door " + std::to_string(i + 1) +
                                         " references unknown door " + std::to_string(p));
                else if (p >= i + 1)
                    violations.push_back("dag: door " + std::to_string(i + 1) +
                                         " has self/forward reference to door " +
                                         std::to_string(p));
            }
        }
    }
    return violations;
}

namespace {

Distribution parse_distribution(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        fail(errc::validation_failed, "distribution must be an object with a \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "geometric") return Distribution::geometric(j.at("p").get<double>());
    if (kind == "deterministic")
        return Distribution::deterministic(j.at("k").get<std::uint64_t>());
    if (kind == "polynomial")
        return Distribution::polynomial(j.at("c").get<double>(), j.at("a").get<double>());
    if (kind == "table")
        return Distribution::table(j.at("values").get<std::vector<double>>(),
                                   j.at("tail_q").get<double>());
    fail(errc::validation_failed, "unknown distribution kind \"" + kind + "\"");
}

}  // namespace

DoorConfiguration parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(errc::parse_error, std::string("config: ") + e.what());
    }

    DoorConfiguration config;
    std::vector<std::string> violations;
    try {
        if (!j.is_object() || !j.contains("doors") || !j.at("doors").is_array())
            fail(errc::validation_failed, "config must contain a \"doors\" array");
        std::size_t idx = 0;
        for (const auto& dj : j.at("doors")) {
            ++idx;
            try {
                config.doors.push_back(parse_distribution(dj));
            } catch (const Error& e) {
                violations.push_back("doors[" + std::to_string(idx) + "]: " + e.what());
            } catch (const json::exception& e) {
                violations.push_back("doors[" + std::to_string(idx) + "]: " + e.what());
            }
        }
        const auto& dep = j.at("dependency");
        if (dep.is_string()) {
            const std::string s = dep.get<std::string>();
            if (s == "independent")
                config.dependency = DependencyKind::independent;
            else if (s == "cascading")
                config.dependency = DependencyKind::cascading;
            else
                violations.push_back("unknown dependency \"" + s + "\"");
        } else if (dep.is_object() && dep.contains("dag")) {
            config.dependency = DependencyKind::dag;
            config.dag_predecessors =
                dep.at("dag").get<std::vector<std::vector<std::uint32_t>>>();
        } else {
            violations.push_back("dependency must be \"independent\", \"cascading\" or {\"dag\": ...}");
        }
    } catch (const json::exception& e) {
        fail(errc::validation_failed, std::string("config: ") + e.what());
    }

    if (violations.empty()) {
        auto more = validate(config);
        violations.insert(violations.end(), more.begin(), more.end());
    }
    if (!violations.empty()) {
        std::ostringstream os;
        for (std::size_t i = 0; i < violations.size(); ++i)
            os << (i ? "\n" : "") << violations[i];
        fail(errc::validation_failed, os.str());
    }
    return config;
}

DoorConfiguration load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::io_error, "cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string dependency_name(DependencyKind kind) {
    switch (kind) {
    case DependencyKind::independent: return "independent";
    case DependencyKind::cascading: return "cascading";
    case DependencyKind::dag: return "dag";
    }
    return "?";
}

}  // namespace doors
