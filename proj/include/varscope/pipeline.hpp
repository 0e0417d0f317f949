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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "varscope/config.hpp"

namespace varscope {

/// What flows along a pipeline edge.
enum class DataKind { CodeStream, BuildModel, VarModel, PcIndex, Table };

const char* data_kind_name(DataKind kind);

struct PipelineNode {
    std::string component;      // registry name; terminals are cmComponent etc.
    std::string instance;       // unique per graph, used for output file names
    std::vector<size_t> inputs; // ids of producer nodes, in argument order
    DataKind output = DataKind::Table;
    bool terminal = false;
};

/// Acyclic by construction: nodes are stored children-first, the sink last.
/// Terminals are shared, so `cmComponent()` appearing twice is one node.
struct PipelineGraph {
    std::vector<PipelineNode> nodes;
    size_t sink = 0;

    bool uses(DataKind kind) const;
    const PipelineNode* find_instance(const std::string& instance) const;
};

/// Component registry entry: the compile-time replacement for the paper's
/// plug-in jars. Extending the tool means adding a row here.
struct ComponentSpec {
    std::string name;
    size_t min_args = 0;
    size_t max_args = 0;
    /// Kinds accepted as inputs, each fillable once, plus whether the kind
    /// must be present for the component to run.
    std::vector<std::pair<DataKind, bool>> slots;
    DataKind output = DataKind::Table;
};

const std::vector<ComponentSpec>& component_registry();
const ComponentSpec* find_component(const std::string& name);

/// Parses the pipeline DSL: `expr := IDENT '(' [expr (',' expr)*] ')'` with
/// terminals cmComponent(), bmComponent(), vmComponent(); the outermost call
/// is the sink. Arity and input kinds are checked against the registry.
PipelineGraph parse_pipeline_dsl(const std::string& text);

/// The programmed alternatives: feature_effects, dead_blocks, metrics.
PipelineGraph preset_graph(const std::string& preset);

/// Builds the graph from `analysis.pipeline` or `analysis.preset` and checks
/// it against the configured extractors: a wired terminal without its
/// extractor parameter, or an analysis missing a required input, raises
/// MissingInput naming the pipeline.
PipelineGraph build_pipeline(const Config& config);

/// One line per node, sink marked; what `varscope validate` prints.
std::string describe_graph(const PipelineGraph& graph);

/// PcFinder -> pc_finder, FeatureEffects -> feature_effects, ...
std::string instance_file_stem(const std::string& instance);

}  // namespace varscope
