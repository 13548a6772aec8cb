#include "crowdctl/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_set>

#include <openssl/evp.h>

#include "crowdctl/json_format.hpp"

namespace crowdctl {

namespace {

using json = nlohmann::ordered_json;

// Field path helpers: "target" + index(2) -> "target[2]".
std::string index(const std::string& field, std::size_t i) { return field + "[" + std::to_string(i) + "]"; }

const json& require(const json& obj, const char* key, const std::string& parent) {
    const std::string field = parent.empty() ? key : parent + "." + key;
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError("missing required field", field);
    return *it;
}

std::size_t positive_integer(const json& v, const std::string& field) {
    if (!v.is_number_integer() || v.get<long long>() < 1) throw ParseError("expected a positive integer", field);
    return v.get<std::size_t>();
}

double real(const json& v, const std::string& field) {
    if (!v.is_number()) throw ParseError("expected a number", field);
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ParseError("expected a finite number", field);
    return d;
}

void read_vector(const json& v, std::size_t n, const std::string& field, std::span<double> out) {
    if (!v.is_array()) throw ParseError("expected an array", field);
    if (v.size() != n) {
        throw ParseError("expected " + std::to_string(n) + " entries, found " + std::to_string(v.size()), field);
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = real(v[i], index(field, i));
}

void check_pmf(std::span<const double> p, const std::string& what, const std::string& field) {
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0.0) throw ParseError(what + ": negative mass at entry " + std::to_string(i), field);
        sum += p[i];
    }
    if (std::abs(sum - 1.0) > kNormTolerance) {
        std::ostringstream msg;
        msg << std::setprecision(17) << what << " sums to " << sum;
        throw ParseError(msg.str(), field);
    }
}

TransitionKernel read_kernel(const json& v, std::size_t n, std::size_t stage, const std::string& field) {
    if (!v.is_array()) throw ParseError("expected a matrix", field);
    if (v.size() != n) throw ParseError("expected " + std::to_string(n) + " rows, found " + std::to_string(v.size()), field);
    TransitionKernel kernel(n, n);
    for (std::size_t x = 0; x < n; ++x) {
        const std::string row_field = index(field, x);
        read_vector(v[x], n, row_field, kernel.row(x));
        check_pmf(kernel.row(x), "stage " + std::to_string(stage) + " row " + std::to_string(x), row_field);
    }
    return kernel;
}

BehaviorSequence read_behavior(const json& v, std::size_t n, std::size_t horizon, bool stationary,
                               const std::string& field) {
    if (stationary) return BehaviorSequence(horizon, read_kernel(v, n, 1, field));
    if (!v.is_array()) throw ParseError("expected an array of per-stage matrices", field);
    if (v.size() != horizon) {
        throw ParseError("expected " + std::to_string(horizon) + " stages, found " + std::to_string(v.size()), field);
    }
    BehaviorSequence seq;
    seq.reserve(horizon);
    for (std::size_t k = 0; k < horizon; ++k) seq.push_back(read_kernel(v[k], n, k + 1, index(field, k)));
    return seq;
}

RewardSchedule read_reward(const json& v, std::size_t n, std::size_t horizon, bool stationary,
                           const std::string& field) {
    RewardSchedule reward(horizon, n);
    if (stationary) {
        read_vector(v, n, field, reward.row(0));
        for (std::size_t k = 1; k < horizon; ++k) std::copy(reward.row(0).begin(), reward.row(0).end(), reward.row(k).begin());
        return reward;
    }
    if (!v.is_array()) throw ParseError("expected an array of per-stage vectors", field);
    if (v.size() != horizon) {
        throw ParseError("expected " + std::to_string(horizon) + " stages, found " + std::to_string(v.size()), field);
    }
    for (std::size_t k = 0; k < horizon; ++k) read_vector(v[k], n, index(field, k), reward.row(k));
    return reward;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

json kernel_json(const TransitionKernel& kernel) {
    json rows = json::array();
    for (std::size_t x = 0; x < kernel.rows(); ++x) rows.push_back(json(std::vector<double>(kernel.row(x).begin(), kernel.row(x).end())));
    return rows;
}

json behavior_json(const BehaviorSequence& seq) {
    json stages = json::array();
    for (const auto& kernel : seq) stages.push_back(kernel_json(kernel));
    return stages;
}

json reward_json(const RewardSchedule& reward) {
    json stages = json::array();
    for (std::size_t k = 0; k < reward.rows(); ++k)
        stages.push_back(json(std::vector<double>(reward.row(k).begin(), reward.row(k).end())));
    return stages;
}

} // namespace

Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError(e.what(), "", line, column);
    }
    if (!doc.is_object()) throw ParseError("document must be a JSON object", "");

    auto version = doc.find("version");
    if (version == doc.end()) throw SchemaVersionError("scenario has no 'version' field");
    if (!version->is_number_integer() || version->get<long long>() != kScenarioVersion)
        throw SchemaVersionError("unsupported scenario version " + version->dump() + " (expected 1)");

    Scenario s;
    const auto& space = require(doc, "space", "");
    if (!space.is_object()) throw ParseError("expected an object", "space");
    s.space.size = positive_integer(require(space, "size", "space"), "space.size");
    const std::size_t n = s.space.size;
    if (auto labels = space.find("labels"); labels != space.end()) {
        if (!labels->is_array() || labels->size() != n)
            throw ParseError("expected an array of " + std::to_string(n) + " strings", "space.labels");
        std::unordered_set<std::string> seen;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(*labels)[i].is_string()) throw ParseError("expected a string", index("space.labels", i));
            auto label = (*labels)[i].get<std::string>();
            if (!seen.insert(label).second) throw ParseError("duplicate label '" + label + "'", index("space.labels", i));
            s.space.labels.push_back(std::move(label));
        }
    }

    s.horizon = positive_integer(require(doc, "horizon", ""), "horizon");
    bool stationary = false;
    if (auto it = doc.find("stationary"); it != doc.end()) {
        if (!it->is_boolean()) throw ParseError("expected a boolean", "stationary");
        stationary = it->get<bool>();
    }

    s.initial.resize(n);
    read_vector(require(doc, "initial", ""), n, "initial", s.initial);
    check_pmf(s.initial, "initial pmf", "initial");

    s.target = read_behavior(require(doc, "target", ""), n, s.horizon, stationary, "target");
    s.reward = read_reward(require(doc, "reward", ""), n, s.horizon, stationary, "reward");

    const auto& sources = require(doc, "sources", "");
    if (!sources.is_array() || sources.empty()) throw ParseError("expected a non-empty array of sources", "sources");
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const std::string field = index("sources", i);
        const auto& src = sources[i];
        if (!src.is_object()) throw ParseError("expected an object", field);
        SourceSpec spec;
        spec.kernels = read_behavior(require(src, "kernels", field), n, s.horizon, stationary, field + ".kernels");
        const auto own_target = src.find("own_target");
        const auto own_reward = src.find("own_reward");
        if ((own_target == src.end()) != (own_reward == src.end()))
            throw ParseError("own_target and own_reward must be given together", field);
        if (own_target != src.end()) {
            spec.own_target = read_behavior(*own_target, n, s.horizon, stationary, field + ".own_target");
            spec.own_reward = read_reward(*own_reward, n, s.horizon, stationary, field + ".own_reward");
        }
        s.sources.push_back(std::move(spec));
    }
    return s;
}

std::string serialize_scenario(const Scenario& s) {
    json doc;
    doc["version"] = kScenarioVersion;
    json space;
    space["size"] = s.space.size;
    if (!s.space.labels.empty()) space["labels"] = s.space.labels;
    doc["space"] = std::move(space);
    doc["horizon"] = s.horizon;
    doc["initial"] = s.initial;
    doc["target"] = behavior_json(s.target);
    doc["reward"] = reward_json(s.reward);
    json sources = json::array();
    for (const auto& src : s.sources) {
        json entry;
        entry["kernels"] = behavior_json(src.kernels);
        if (src.own_target) entry["own_target"] = behavior_json(*src.own_target);
        if (src.own_reward) entry["own_reward"] = reward_json(*src.own_reward);
        sources.push_back(std::move(entry));
    }
    doc["sources"] = std::move(sources);
    return format_json(doc);
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write scenario file '" + path.string() + "'");
    out << serialize_scenario(s);
    if (!out) throw IoError("failed writing scenario file '" + path.string() + "'");
}

std::string scenario_digest(const Scenario& s) {
    const std::string text = serialize_scenario(s);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("scenario_digest: SHA-256 failed");
    std::ostringstream hex;
    hex << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << static_cast<int>(md[i]);
    return hex.str();
}

} // namespace crowdctl
