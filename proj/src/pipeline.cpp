// Copyright 2026 the varscope authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#include "varscope/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "varscope/error.hpp"

namespace varscope {

const char* data_kind_name(DataKind kind) {
    switch (kind) {
        case DataKind::CodeStream: return "code model stream";
        case DataKind::BuildModel: return "build model";
        case DataKind::VarModel: return "variability model";
        case DataKind::PcIndex: return "presence-condition index";
        case DataKind::Table: return "result table";
    }
    return "?";
}

bool PipelineGraph::uses(DataKind kind) const {
    for (const auto& node : nodes)
        if (node.terminal && node.output == kind) return true;
    return false;
}

const PipelineNode* PipelineGraph::find_instance(const std::string& instance) const {
    for (const auto& node : nodes)
        if (node.instance == instance) return &node;
    return nullptr;
}

const std::vector<ComponentSpec>& component_registry() {
    static const std::vector<ComponentSpec> registry = {
        {"cmComponent", 0, 0, {}, DataKind::CodeStream},
        {"bmComponent", 0, 0, {}, DataKind::BuildModel},
        {"vmComponent", 0, 0, {}, DataKind::VarModel},
        {"PcFinder",
         1,
         2,
         {{DataKind::CodeStream, true}, {DataKind::BuildModel, false}},
         DataKind::PcIndex},
        {"FeatureEffects", 1, 1, {{DataKind::PcIndex, true}}, DataKind::Table},
        {"DeadBlocks",
         1,
         3,
         {{DataKind::CodeStream, true}, {DataKind::BuildModel, true}, {DataKind::VarModel, true}},
         DataKind::Table},
        {"BlockMetrics", 1, 1, {{DataKind::CodeStream, true}}, DataKind::Table},
    };
    return registry;
}

const ComponentSpec* find_component(const std::string& name) {
    for (const auto& spec : component_registry())
        if (spec.name == name) return &spec;
    return nullptr;
}

namespace {

[[noreturn]] void dsl_error(const std::string& code, size_t position, const std::string& message) {
    throw Error(ErrorCategory::Config, code,
                message + " (at offset " + std::to_string(position) + ")");
}

class DslParser {
public:
    explicit DslParser(const std::string& text) : text_(text) {}

    PipelineGraph parse() {
        skip_ws();
        if (pos_ >= text_.size()) dsl_error("ParseError", pos_, "empty pipeline expression");
        size_t sink = parse_call();
        skip_ws();
        if (pos_ < text_.size())
            dsl_error("ParseError", pos_, "trailing input after the sink call");
        graph_.sink = sink;
        assign_instance_names();
        return std::move(graph_);
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string parse_ident() {
        skip_ws();
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        if (pos_ == start) dsl_error("ParseError", pos_, "expected a component name");
        return text_.substr(start, pos_ - start);
    }

    void expect(char c) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != c)
            dsl_error("ParseError", pos_, std::string("expected '") + c + "'");
        ++pos_;
    }

    size_t parse_call() {
        size_t name_pos = pos_;
        std::string name = parse_ident();
        const ComponentSpec* spec = find_component(name);
        if (!spec)
            dsl_error("UnknownComponent", name_pos,
                      "no component named '" + name + "' in the registry");
        expect('(');
        std::vector<size_t> args;
        std::vector<size_t> arg_positions;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] != ')') {
            while (true) {
                arg_positions.push_back(pos_);
                args.push_back(parse_call());
                skip_ws();
                if (pos_ < text_.size() && text_[pos_] == ',') {
                    ++pos_;
                    continue;
                }
                break;
            }
        }
        expect(')');

        if (args.size() < spec->min_args || args.size() > spec->max_args)
            dsl_error("ArityMismatch", name_pos,
                      "'" + name + "' takes " + std::to_string(spec->min_args) +
                          (spec->min_args == spec->max_args
                               ? ""
                               : ".." + std::to_string(spec->max_args)) +
                          " inputs, got " + std::to_string(args.size()));

        // Each argument fills the matching slot kind; a kind fits only once.
        std::vector<bool> filled(spec->slots.size(), false);
        for (size_t i = 0; i < args.size(); ++i) {
            DataKind produced = graph_.nodes[args[i]].output;
            bool matched = false;
            for (size_t s = 0; s < spec->slots.size(); ++s) {
                if (!filled[s] && spec->slots[s].first == produced) {
                    filled[s] = true;
                    matched = true;
                    break;
                }
            }
            if (!matched)
                dsl_error("KindMismatch", arg_positions[i],
                          "'" + name + "' cannot take a " + data_kind_name(produced) +
                              " as input " + std::to_string(i + 1));
        }

        if (spec->slots.empty()) {
            // Terminal: all calls share one node.
            for (size_t i = 0; i < graph_.nodes.size(); ++i)
                if (graph_.nodes[i].component == name) return i;
            graph_.nodes.push_back({name, name, {}, spec->output, true});
            return graph_.nodes.size() - 1;
        }
        graph_.nodes.push_back({name, name, std::move(args), spec->output, false});
        return graph_.nodes.size() - 1;
    }

    void assign_instance_names() {
        std::map<std::string, int> counts;
        for (auto& node : graph_.nodes) {
            if (node.terminal) continue;
            int n = ++counts[node.component];
            node.instance = n == 1 ? node.component : node.component + "_" + std::to_string(n);
        }
    }

    const std::string& text_;
    size_t pos_ = 0;
    PipelineGraph graph_;
};

}  // namespace

PipelineGraph parse_pipeline_dsl(const std::string& text) {
    PipelineGraph graph = DslParser(text).parse();
    if (graph.nodes[graph.sink].terminal)
        throw Error(ErrorCategory::Config, "KindMismatch",
                    "the pipeline sink must be an analysis component, not an extractor terminal");
    return graph;
}

PipelineGraph preset_graph(const std::string& preset) {
    if (preset == "feature_effects")
        return parse_pipeline_dsl("FeatureEffects(PcFinder(cmComponent(), bmComponent()))");
    if (preset == "dead_blocks")
        return parse_pipeline_dsl("DeadBlocks(cmComponent(), bmComponent(), vmComponent())");
    if (preset == "metrics")
        return parse_pipeline_dsl("BlockMetrics(cmComponent())");
    throw Error(ErrorCategory::Config, "InvalidValue",
                "unknown analysis.preset '" + preset + "'");
}

PipelineGraph build_pipeline(const Config& config) {
    check_required(config);
    PipelineGraph graph = config.has("analysis.pipeline")
                              ? parse_pipeline_dsl(config.get("analysis.pipeline"))
                              : preset_graph(config.get("analysis.preset"));

    // A wired terminal needs its extractor configured. The code and build
    // extractors have registered defaults; the variability-model pipeline
    // exists only when vm.extractor is set, per the Fig.-2-style instances.
    if (graph.uses(DataKind::VarModel) && !config.has("vm.extractor"))
        throw Error(ErrorCategory::Config, "MissingInput",
                    "the pipeline requires the variability-model pipeline (vmComponent), but "
                    "vm.extractor is not configured");

    // Analyses with required inputs must have them wired.
    for (const auto& node : graph.nodes) {
        if (node.terminal) continue;
        const ComponentSpec* spec = find_component(node.component);
        for (const auto& [kind, required] : spec->slots) {
            if (!required) continue;
            bool present = false;
            for (size_t input : node.inputs)
                if (graph.nodes[input].output == kind) present = true;
            if (!present)
                throw Error(ErrorCategory::Config, "MissingInput",
                            "'" + node.instance + "' is missing its " +
                                std::string(data_kind_name(kind)) + " input" +
                                (kind == DataKind::VarModel
                                     ? " (the variability-model pipeline)"
                                     : ""));
        }
    }

    // Intermediate-result names must refer to wired analysis instances.
    std::string intermediates = config.get("analysis.output.intermediate_results");
    if (!intermediates.empty()) {
        size_t start = 0;
        while (start <= intermediates.size()) {
            auto comma = intermediates.find(',', start);
            std::string name = intermediates.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start);
            while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front())))
                name.erase(name.begin());
            while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back())))
                name.pop_back();
            if (!name.empty()) {
                const PipelineNode* node = graph.find_instance(name);
                if (!node || node->terminal)
                    throw Error(ErrorCategory::Config, "InvalidValue",
                                "analysis.output.intermediate_results names '" + name +
                                    "', which is not an analysis instance of this pipeline");
            }
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }
    return graph;
}

std::string describe_graph(const PipelineGraph& graph) {
    std::string out;
    for (size_t i = 0; i < graph.nodes.size(); ++i) {
        const PipelineNode& node = graph.nodes[i];
        out += node.instance;
        if (!node.terminal) {
            out += "(";
            for (size_t j = 0; j < node.inputs.size(); ++j) {
                if (j) out += ", ";
                out += graph.nodes[node.inputs[j]].instance;
            }
            out += ")";
        }
        out += " -> ";
        out += data_kind_name(node.output);
        if (i == graph.sink) out += "  [sink]";
        out += "\n";
    }
    return out;
}

std::string instance_file_stem(const std::string& instance) {
    std::string out;
    for (size_t i = 0; i < instance.size(); ++i) {
        char c = instance[i];
        if (std::isupper(static_cast<unsigned char>(c))) {
            if (i > 0 && instance[i - 1] != '_') out += '_';
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else {
            out += c;
        }
    }
    return out;
}

}  // namespace varscope
