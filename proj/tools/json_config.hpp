#pragma once

// CLI11 config formatter for JSON files of the form
//   { "<subcommand>": { "<long flag name>": value, ... }, ... }
// Scalars become single inputs, arrays become repeated inputs.

#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace ivtm::tools {

class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        return to_json(app, default_also).dump(2) + "\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        try {
            input >> j;
        } catch (const nlohmann::json::exception& e) {
            throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
        }
        std::vector<CLI::ConfigItem> items;
        collect(j, {}, items);
        return items;
    }

    /// Long option name -> value string for every option of `app` that was
    /// given (or, with default_also, has a default).
    static nlohmann::json to_json(const CLI::App* app, bool default_also) {
        nlohmann::json out = nlohmann::json::object();
        for (const CLI::Option* opt : app->get_options()) {
            if (opt->get_lnames().empty()) continue;
            const std::string& name = opt->get_lnames().front();
            if (name == "help" || name == "config") continue;
            if (opt->count() > 0) {
                const auto& results = opt->results();
                if (opt->get_expected_min() == 0) out[name] = opt->as<bool>();
                else if (results.size() == 1) out[name] = results.front();
                else out[name] = results;
            } else if (default_also && !opt->get_default_str().empty()) {
                out[name] = opt->get_default_str();
            }
        }
        return out;
    }

private:
    static void collect(const nlohmann::json& node, std::vector<std::string> parents, std::vector<CLI::ConfigItem>& items) {
        if (!node.is_object()) throw CLI::ConversionError("config root must be a JSON object");
        for (const auto& [key, value] : node.items()) {
            if (value.is_object()) {
                auto nested = parents;
                nested.push_back(key);
                collect(value, nested, items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array()) {
                for (const auto& v : value) item.inputs.push_back(scalar(v));
            } else {
                item.inputs.push_back(scalar(value));
            }
            items.push_back(std::move(item));
        }
    }

    static std::string scalar(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }
};

}  // namespace ivtm::tools
