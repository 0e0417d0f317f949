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

#include "varscope/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <optional>
#include <thread>

#include <nlohmann/json.hpp>

#include "varscope/analysis.hpp"
#include "varscope/archive.hpp"
#include "varscope/cache.hpp"
#include "varscope/channel.hpp"
#include "varscope/code_extractor.hpp"
#include "varscope/error.hpp"
#include "varscope/hashing.hpp"
#include "varscope/pipeline.hpp"
#include "varscope/version.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

namespace varscope {

namespace {

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        std::string item = text.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front())))
            item.erase(item.begin());
        while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back())))
            item.pop_back();
        if (!item.empty()) items.push_back(item);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

// Glob match with * (within a segment), ? and ** (across segments).
bool glob_match(std::string_view pattern, std::string_view path) {
    if (pattern.rfind("**/", 0) == 0) {
        // Zero or more leading directories.
        if (glob_match(pattern.substr(3), path)) return true;
        auto slash = path.find('/');
        return slash != std::string_view::npos && glob_match(pattern, path.substr(slash + 1));
    }
    size_t pi = 0, si = 0;
    size_t star = std::string_view::npos, star_si = 0;
    while (si < path.size()) {
        if (pi < pattern.size() &&
            (pattern[pi] == path[si] || (pattern[pi] == '?' && path[si] != '/'))) {
            ++pi;
            ++si;
        } else if (pi + 1 < pattern.size() && pattern[pi] == '*' && pattern[pi + 1] == '*') {
            star = pi;
            pi += 2;
            star_si = si;
        } else if (pi < pattern.size() && pattern[pi] == '*') {
            star = pi;
            ++pi;
            star_si = si;
        } else if (star != std::string_view::npos) {
            bool crosses = star + 1 < pattern.size() && pattern[star + 1] == '*';
            if (!crosses && path[star_si] == '/') return false;
            ++star_si;
            pi = star + (crosses ? 2 : 1);
            si = star_si;
        } else {
            return false;
        }
    }
    while (pi < pattern.size() && pattern[pi] == '*') ++pi;
    return pi == pattern.size();
}

void walk_tree(const fs::path& dir, std::string& rel_prefix,
               const std::vector<std::string>& patterns, std::vector<std::string>& out) {
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_directory()) {
            size_t len = rel_prefix.size();
            rel_prefix += entry.path().filename().generic_string();
            rel_prefix += '/';
            walk_tree(entry.path(), rel_prefix, patterns, out);
            rel_prefix.resize(len);
        } else if (entry.is_regular_file()) {
            std::string rel = rel_prefix + entry.path().filename().generic_string();
            for (const auto& pattern : patterns) {
                if (glob_match(pattern, rel)) {
                    out.push_back(std::move(rel));
                    break;
                }
            }
        }
    }
}

std::vector<std::string> discover_files(const fs::path& tree,
                                        const std::vector<std::string>& patterns) {
    std::vector<std::string> files;
    std::string prefix;
    walk_tree(tree, prefix, patterns, files);
    std::sort(files.begin(), files.end());
    return files;
}

std::string read_file(const fs::path& path) {
    std::FILE* file = std::fopen(path.c_str(), "rb");
    if (!file) throw Error(ErrorCategory::Io, "FileRead", "cannot read " + path.string());
    std::string data;
    char buffer[1 << 16];
    size_t got;
    while ((got = std::fread(buffer, 1, sizeof buffer, file)) > 0) data.append(buffer, got);
    bool failed = std::ferror(file) != 0;
    std::fclose(file);
    if (failed) throw Error(ErrorCategory::Io, "FileRead", "read failed for " + path.string());
    return data;
}

struct NodeResult {
    ResultTable table;
    PcIndex index;
    std::vector<std::string> diagnostics;
    double wall_ms = 0;
};

// First failure wins the report; cascaded secondary failures are dropped.
struct ErrorSink {
    std::mutex mutex;
    std::string component;
    std::exception_ptr error;
    std::atomic<bool> abort{false};

    void record(const std::string& name, std::exception_ptr e) {
        if (abort.exchange(true)) return;
        std::lock_guard<std::mutex> guard(mutex);
        component = name;
        error = e;
    }
    void rethrow_if_failed() {
        if (abort.load() && error) std::rethrow_exception(error);
    }
};

struct RunContext {
    RunContext(const Config& c, Logger& l) : config(c), logger(l) {}

    const Config& config;
    Logger& logger;
    PipelineGraph graph;
    fs::path source_tree;
    fs::path output_dir;
    fs::path cache_dir;
    ExtractOptions code_opts;
    BuildOptions build_opts;
    VarModelOptions vm_opts;
    int jobs = 1;
    bool sequential = false;
    size_t buffer_capacity = 64;
    bool ignore_fingerprint = false;

    std::optional<BuildModel> build_model;
    std::optional<VariabilityModel> vm_model;
    std::vector<NodeResult> results;
    RunReport report;
    std::mutex report_mutex;  // components are appended from extraction tasks
};

// ---- extraction tasks -------------------------------------------------------

BuildModel produce_build_model(RunContext& ctx) {
    auto start = Clock::now();
    BuildModel model;
    if (ctx.config.get_bool("build.cache.read", false)) {
        std::string stored_fingerprint;
        model = read_build_cache(ctx.cache_dir, &stored_fingerprint);
        if (!ctx.ignore_fingerprint) {
            std::vector<FileHash> hashes;
            for (const auto& file : model.source_files) {
                try {
                    hashes.emplace_back(file, sha256_file_hex(ctx.source_tree / file));
                } catch (const Error&) {
                    throw Error(ErrorCategory::Extraction, "FingerprintMismatch",
                                "cached build input '" + file + "' is gone from the tree");
                }
            }
            if (stored_fingerprint != fingerprint_files(hashes))
                throw Error(ErrorCategory::Extraction, "FingerprintMismatch",
                            "build cache does not match the current makefiles");
        }
        ctx.logger.info("build model loaded from cache (" +
                        std::to_string(model.entries.size()) + " entries)");
    } else {
        model = extract_build(ctx.source_tree, ctx.build_opts);
        ++ctx.report.build_extractions;
        if (ctx.config.get_bool("build.cache.write", false)) {
            std::vector<FileHash> hashes;
            for (const auto& file : model.source_files)
                hashes.emplace_back(file, sha256_file_hex(ctx.source_tree / file));
            write_build_cache(model, ctx.cache_dir, fingerprint_files(hashes));
        }
        for (const auto& line : model.unresolved)
            ctx.logger.warn("build: skipped unsupported line " + line.file + ":" +
                            std::to_string(line.line) + ": " + line.text);
    }
    std::lock_guard<std::mutex> guard(ctx.report_mutex);
    ctx.report.components.push_back({"build-extractor", ms_since(start),
                                     static_cast<int64_t>(model.entries.size())});
    return model;
}

VariabilityModel produce_vm_model(RunContext& ctx) {
    auto start = Clock::now();
    VariabilityModel model;
    if (ctx.config.get_bool("vm.cache.read", false)) {
        std::string stored_fingerprint;
        model = read_vm_cache(ctx.cache_dir, &stored_fingerprint);
        if (!ctx.ignore_fingerprint) {
            std::vector<FileHash> hashes;
            for (const auto& file : model.source_files) {
                try {
                    hashes.emplace_back(file, sha256_file_hex(file));
                } catch (const Error&) {
                    throw Error(ErrorCategory::Extraction, "FingerprintMismatch",
                                "cached variability-model input '" + file + "' is gone");
                }
            }
            if (stored_fingerprint != fingerprint_files(hashes))
                throw Error(ErrorCategory::Extraction, "FingerprintMismatch",
                            "variability-model cache does not match the current files");
        }
        ctx.logger.info("variability model loaded from cache (" +
                        std::to_string(model.features.size()) + " features)");
    } else {
        std::vector<fs::path> files;
        for (const auto& entry : split_list(ctx.config.get("vm.files", "Kconfig"))) {
            fs::path p = entry;
            files.push_back(p.is_absolute() ? p : ctx.source_tree / p);
        }
        std::vector<std::string> warnings;
        model = extract_varmodel(files, ctx.vm_opts, &warnings);
        ++ctx.report.vm_extractions;
        for (const auto& warning : warnings) ctx.logger.warn("vm: " + warning);
        if (ctx.config.get_bool("vm.cache.write", false)) {
            std::vector<FileHash> hashes;
            for (const auto& file : model.source_files)
                hashes.emplace_back(file, sha256_file_hex(file));
            write_vm_cache(model, ctx.cache_dir, fingerprint_files(hashes));
        }
    }
    std::lock_guard<std::mutex> guard(ctx.report_mutex);
    ctx.report.components.push_back({"vm-extractor", ms_since(start),
                                     static_cast<int64_t>(model.features.size())});
    return model;
}

// Streams code models to `emit` in deterministic order when sequential; the
// parallel driver re-sorts inside the consumers instead.
void produce_code_models(RunContext& ctx, std::atomic<int64_t>& extraction_count,
                         const std::function<void(CodeModel)>& emit) {
    const bool cache_read = ctx.config.get_bool("code.cache.read", false);
    const bool cache_write = ctx.config.get_bool("code.cache.write", false) && !cache_read;

    if (cache_read) {
        std::optional<std::vector<FileHash>> expected;
        if (!ctx.ignore_fingerprint) {
            auto files = discover_files(
                ctx.source_tree,
                split_list(ctx.config.get("code.file_patterns", "**/*.c,**/*.h")));
            expected.emplace();
            for (const auto& file : files)
                expected->emplace_back(file, sha256_file_hex(ctx.source_tree / file));
        }
        for (auto& model : read_code_cache(ctx.cache_dir, expected ? &*expected : nullptr))
            emit(std::move(model));
        return;
    }

    auto files = discover_files(
        ctx.source_tree, split_list(ctx.config.get("code.file_patterns", "**/*.c,**/*.h")));
    ctx.logger.info("extracting " + std::to_string(files.size()) + " code file(s)");

    auto extract_one = [&](const std::string& rel) {
        std::string text = read_file(ctx.source_tree / rel);
        CodeModel model = extract_file(text, rel, ctx.code_opts);
        extraction_count.fetch_add(1, std::memory_order_relaxed);
        if (cache_write)
            write_code_cache(model, ctx.cache_dir,
                             fingerprint_files({{rel, sha256_hex(text)}}));
        return model;
    };

    if (ctx.sequential || ctx.jobs == 1) {
        for (const auto& rel : files) emit(extract_one(rel));
        return;
    }

    std::atomic<size_t> next{0};
    std::mutex emit_mutex;
    ErrorSink sink;
    std::vector<std::thread> workers;
    for (int w = 0; w < ctx.jobs; ++w) {
        workers.emplace_back([&] {
            try {
                while (!sink.abort.load()) {
                    size_t i = next.fetch_add(1);
                    if (i >= files.size()) break;
                    CodeModel model = extract_one(files[i]);
                    std::lock_guard<std::mutex> guard(emit_mutex);
                    emit(std::move(model));
                }
            } catch (...) {
                sink.record("code-extractor", std::current_exception());
            }
        });
    }
    for (auto& worker : workers) worker.join();
    sink.rethrow_if_failed();
}

// ---- graph execution --------------------------------------------------------

struct AnalysisExec {
    size_t node_id = 0;
    std::string component;
    std::string instance;
    std::optional<PcFinder> pc_finder;
    std::optional<DeadBlocks> dead_blocks;
    std::optional<BlockMetrics> metrics;
    bool wants_stream = false;
};

// Instantiates the per-node analysis objects; PcFinder needs the build model
// reference, so models must be produced first.
std::vector<AnalysisExec> make_executors(RunContext& ctx) {
    std::vector<AnalysisExec> execs;
    for (size_t i = 0; i < ctx.graph.nodes.size(); ++i) {
        const PipelineNode& node = ctx.graph.nodes[i];
        if (node.terminal) continue;
        AnalysisExec exec;
        exec.node_id = i;
        exec.component = node.component;
        exec.instance = node.instance;
        if (node.component == "PcFinder") {
            const BuildModel* build = nullptr;
            for (size_t input : node.inputs)
                if (ctx.graph.nodes[input].output == DataKind::BuildModel)
                    build = &*ctx.build_model;
            exec.pc_finder.emplace(build, ctx.build_opts);
            exec.wants_stream = true;
        } else if (node.component == "DeadBlocks") {
            exec.dead_blocks.emplace();
            exec.wants_stream = true;
        } else if (node.component == "BlockMetrics") {
            exec.metrics.emplace();
            exec.wants_stream = true;
        } else if (node.component == "FeatureEffects") {
            exec.wants_stream = false;
        } else {
            throw Error(ErrorCategory::Config, "UnknownComponent",
                        "no executor for component '" + node.component + "'");
        }
        execs.push_back(std::move(exec));
    }
    return execs;
}

void consume_model(AnalysisExec& exec, const CodeModel& model) {
    if (exec.pc_finder) exec.pc_finder->consume(model);
    if (exec.dead_blocks) exec.dead_blocks->consume(model);
    if (exec.metrics) exec.metrics->consume(model);
}

void finish_exec(RunContext& ctx, AnalysisExec& exec) {
    NodeResult& result = ctx.results[exec.node_id];
    if (exec.pc_finder) {
        result.index = exec.pc_finder->index();
        result.table = exec.pc_finder->finish();
        result.diagnostics = exec.pc_finder->diagnostics();
    } else if (exec.dead_blocks) {
        result.table = exec.dead_blocks->finish(*ctx.vm_model, *ctx.build_model, ctx.build_opts);
        result.diagnostics = exec.dead_blocks->diagnostics();
    } else if (exec.metrics) {
        result.table = exec.metrics->finish();
    } else {  // FeatureEffects
        const PipelineNode& node = ctx.graph.nodes[exec.node_id];
        result.table = feature_effects(ctx.results[node.inputs[0]].index);
    }
    result.table.name = exec.instance;
}

void execute_sequential(RunContext& ctx) {
    auto attribute = [&](const char* component, auto&& fn) {
        try {
            fn();
        } catch (...) {
            if (ctx.report.failed_component.empty()) ctx.report.failed_component = component;
            throw;
        }
    };
    attribute("build-extractor", [&] {
        if (ctx.graph.uses(DataKind::BuildModel)) ctx.build_model = produce_build_model(ctx);
    });
    attribute("vm-extractor", [&] {
        if (ctx.graph.uses(DataKind::VarModel)) ctx.vm_model = produce_vm_model(ctx);
    });

    std::vector<AnalysisExec> execs = make_executors(ctx);
    if (ctx.graph.uses(DataKind::CodeStream)) {
        auto start = Clock::now();
        std::atomic<int64_t> count{0};
        attribute("code-extractor", [&] {
            produce_code_models(ctx, count, [&](CodeModel model) {
                for (auto& exec : execs)
                    if (exec.wants_stream) consume_model(exec, model);
            });
        });
        ctx.report.code_extractions += count.load();
        ctx.report.components.push_back({"code-extractor", ms_since(start), count.load()});
    }
    for (auto& exec : execs) {
        auto start = Clock::now();
        attribute(exec.instance.c_str(), [&] { finish_exec(ctx, exec); });
        ctx.results[exec.node_id].wall_ms = ms_since(start);
    }
}

void execute_parallel(RunContext& ctx) {
    ErrorSink sink;
    const size_t node_count = ctx.graph.nodes.size();
    std::vector<std::promise<void>> ready(node_count);
    std::vector<std::shared_future<void>> ready_futures;
    ready_futures.reserve(node_count);
    for (auto& promise : ready) ready_futures.push_back(promise.get_future().share());

    // Each extraction pipeline runs as its own task; analyses run
    // concurrently and consume incrementally through bounded channels.
    std::promise<void> build_ready_promise, vm_ready_promise;
    std::shared_future<void> build_ready = build_ready_promise.get_future().share();
    std::shared_future<void> vm_ready = vm_ready_promise.get_future().share();

    std::vector<std::thread> threads;

    if (ctx.graph.uses(DataKind::BuildModel)) {
        threads.emplace_back([&] {
            try {
                ctx.build_model = produce_build_model(ctx);
                build_ready_promise.set_value();
            } catch (...) {
                sink.record("build-extractor", std::current_exception());
                build_ready_promise.set_exception(std::current_exception());
            }
        });
    }
    if (ctx.graph.uses(DataKind::VarModel)) {
        threads.emplace_back([&] {
            try {
                ctx.vm_model = produce_vm_model(ctx);
                vm_ready_promise.set_value();
            } catch (...) {
                sink.record("vm-extractor", std::current_exception());
                vm_ready_promise.set_exception(std::current_exception());
            }
        });
    }

    // One channel per stream-consuming analysis; the producer broadcasts.
    std::map<size_t, std::unique_ptr<Channel<CodeModel>>> channels;
    for (size_t i = 0; i < node_count; ++i) {
        const PipelineNode& node = ctx.graph.nodes[i];
        if (node.terminal) continue;
        const ComponentSpec* spec = find_component(node.component);
        bool wants_stream = false;
        for (const auto& [kind, required] : spec->slots)
            if (kind == DataKind::CodeStream) wants_stream = true;
        if (wants_stream)
            channels.emplace(i, std::make_unique<Channel<CodeModel>>(ctx.buffer_capacity));
    }

    auto close_channels = [&] {
        for (auto& [id, channel] : channels) channel->close();
    };

    if (ctx.graph.uses(DataKind::CodeStream)) {
        threads.emplace_back([&] {
            auto start = Clock::now();
            std::atomic<int64_t> count{0};
            try {
                produce_code_models(ctx, count, [&](CodeModel model) {
                    if (channels.size() == 1) {
                        channels.begin()->second->push(std::move(model));
                        return;
                    }
                    for (auto& [id, channel] : channels) channel->push(model);
                });
            } catch (...) {
                sink.record("code-extractor", std::current_exception());
            }
            close_channels();
            ctx.report.code_extractions += count.load();
            std::lock_guard<std::mutex> guard(ctx.report_mutex);
            ctx.report.components.push_back({"code-extractor", ms_since(start), count.load()});
        });
    } else {
        close_channels();
    }

    // Analysis threads.
    for (size_t i = 0; i < node_count; ++i) {
        const PipelineNode& node = ctx.graph.nodes[i];
        if (node.terminal) continue;
        threads.emplace_back([&, i] {
            const PipelineNode& self = ctx.graph.nodes[i];
            auto start = Clock::now();
            try {
                // Wait for the models this node consumes.
                const BuildModel* build = nullptr;
                for (size_t input : self.inputs) {
                    const PipelineNode& producer = ctx.graph.nodes[input];
                    if (producer.output == DataKind::BuildModel) {
                        build_ready.get();
                        build = &*ctx.build_model;
                    } else if (producer.output == DataKind::VarModel) {
                        vm_ready.get();
                    } else if (!producer.terminal) {
                        ready_futures[input].get();
                    }
                }

                AnalysisExec exec;
                exec.node_id = i;
                exec.component = self.component;
                exec.instance = self.instance;
                if (self.component == "PcFinder") {
                    exec.pc_finder.emplace(build, ctx.build_opts);
                    exec.wants_stream = true;
                } else if (self.component == "DeadBlocks") {
                    exec.dead_blocks.emplace();
                    exec.wants_stream = true;
                } else if (self.component == "BlockMetrics") {
                    exec.metrics.emplace();
                    exec.wants_stream = true;
                }

                if (exec.wants_stream) {
                    Channel<CodeModel>& channel = *channels.at(i);
                    while (auto model = channel.pop()) {
                        if (sink.abort.load()) continue;  // drain without work
                        consume_model(exec, *model);
                    }
                }
                if (sink.abort.load())
                    throw Error(ErrorCategory::Analysis, "Aborted",
                                "run aborted before '" + self.instance + "' finished");
                finish_exec(ctx, exec);
                ctx.results[i].wall_ms = ms_since(start);
                ready[i].set_value();
            } catch (...) {
                sink.record(self.instance, std::current_exception());
                auto channel = channels.find(i);
                if (channel != channels.end()) channel->second->close();  // unblock the producer
                try {
                    ready[i].set_exception(std::current_exception());
                } catch (const std::future_error&) {
                }
            }
        });
    }

    for (auto& thread : threads) thread.join();
    if (sink.abort.load()) {
        ctx.report.failed_component = sink.component;
        sink.rethrow_if_failed();
    }
}

// ---- output writing ---------------------------------------------------------

std::vector<std::string> instances_to_write(const RunContext& ctx) {
    std::vector<std::string> instances{ctx.graph.nodes[ctx.graph.sink].instance};
    for (const auto& name :
         split_list(ctx.config.get("analysis.output.intermediate_results")))
        if (std::find(instances.begin(), instances.end(), name) == instances.end())
            instances.push_back(name);
    return instances;
}

}  // namespace

void write_table(const ResultTable& table, const std::string& format, const fs::path& path) {
    std::string content = format == "json" ? to_json(table) : to_csv(table);
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCategory::Io, "FileWrite", "cannot write " + path.string());
    out << content;
    if (!out) throw Error(ErrorCategory::Io, "FileWrite", "write failed for " + path.string());
}

std::string RunReport::to_json() const {
    ordered_json doc;
    doc["tool"] = kToolName;
    doc["tool_version"] = tool_version;
    doc["config_fingerprint"] = config_fingerprint;
    doc["status"] = status;
    if (!failed_component.empty()) doc["failed_component"] = failed_component;
    if (!error.empty()) doc["error"] = error;
    doc["jobs"] = jobs;
    doc["sequential"] = sequential;
    doc["extractor_invocations"] = {{"code", code_extractions},
                                    {"build", build_extractions},
                                    {"vm", vm_extractions}};
    doc["total_ms"] = total_ms;
    doc["components"] = ordered_json::array();
    for (const auto& component : components)
        doc["components"].push_back({{"name", component.name},
                                     {"wall_ms", component.wall_ms},
                                     {"items", component.items}});
    doc["diagnostics"] = ordered_json::object();
    for (const auto& [name, messages] : diagnostics) doc["diagnostics"][name] = messages;
    doc["output_files"] = output_files;
    return doc.dump(2) + "\n";
}

RunReport parse_run_report(const std::string& json_text) {
    ordered_json doc = ordered_json::parse(json_text);
    RunReport report;
    report.tool_version = doc.value("tool_version", "");
    report.config_fingerprint = doc.value("config_fingerprint", "");
    report.status = doc.value("status", "");
    report.failed_component = doc.value("failed_component", "");
    report.error = doc.value("error", "");
    report.jobs = doc.value("jobs", 1);
    report.sequential = doc.value("sequential", false);
    if (doc.contains("extractor_invocations")) {
        report.code_extractions = doc["extractor_invocations"].value("code", 0);
        report.build_extractions = doc["extractor_invocations"].value("build", 0);
        report.vm_extractions = doc["extractor_invocations"].value("vm", 0);
    }
    report.total_ms = doc.value("total_ms", 0.0);
    if (doc.contains("output_files"))
        for (const auto& file : doc["output_files"])
            report.output_files.push_back(file.get<std::string>());
    return report;
}

RunReport run(const Config& config, Logger& logger) {
    auto run_start = Clock::now();
    check_required(config);
    PipelineGraph graph = build_pipeline(config);

    fs::path source_tree = fs::weakly_canonical(config.get_path("source_tree"));
    if (!fs::is_directory(source_tree))
        throw Error(ErrorCategory::Io, "SourceTree",
                    "source_tree is not a directory: " + source_tree.string());
    fs::path output_dir = config.get_path("output_dir");
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (!fs::is_directory(output_dir))
        throw Error(ErrorCategory::Io, "OutputDir",
                    "cannot create output_dir: " + output_dir.string());

    logger.set_level(parse_log_level(config.get("log.level", "info")));
    logger.open_file(output_dir / "run.log");
    for (const auto& warning : config.warnings) logger.warn("config: " + warning);

    RunContext ctx(config, logger);
    ctx.graph = std::move(graph);
    ctx.source_tree = source_tree;
    ctx.output_dir = output_dir;
    ctx.cache_dir = config.get_path("cache.dir", output_dir / "cache");
    ctx.code_opts.variability_prefix = config.get("variability.prefix", "CONFIG_");
    ctx.build_opts.tristate = config.get_bool("build.tristate", true);
    ctx.build_opts.missing_file_pc = config.get_bool("build.missing_file_pc", true);
    ctx.build_opts.variability_prefix = ctx.code_opts.variability_prefix;
    ctx.vm_opts.allow_undeclared = config.get_bool("vm.allow_undeclared", false);
    ctx.jobs = config.get_int("jobs", 4);
    ctx.sequential = config.get_bool("pipeline.sequential", false) && ctx.jobs == 1;
    ctx.buffer_capacity = static_cast<size_t>(config.get_int("pipeline.buffer", 64));
    ctx.ignore_fingerprint = config.get_bool("cache.ignore_fingerprint", false);
    ctx.results.resize(ctx.graph.nodes.size());

    ctx.report.tool_version = kToolVersion;
    ctx.report.config_fingerprint = config.fingerprint();
    ctx.report.jobs = ctx.jobs;
    ctx.report.sequential = ctx.sequential;

    logger.info("run starts: fingerprint " + ctx.report.config_fingerprint + ", jobs " +
                std::to_string(ctx.jobs) + (ctx.sequential ? " (sequential)" : ""));

    std::vector<fs::path> written;
    auto cleanup_partial = [&] {
        if (config.get_bool("output.keep_partial", false)) return;
        for (const auto& path : written) fs::remove(path, ec);
    };

    try {
        if (ctx.sequential)
            execute_sequential(ctx);
        else
            execute_parallel(ctx);

        const std::string format = config.get("output.format", "csv");
        for (const auto& instance : instances_to_write(ctx)) {
            size_t node_id = 0;
            for (size_t i = 0; i < ctx.graph.nodes.size(); ++i)
                if (ctx.graph.nodes[i].instance == instance) node_id = i;
            fs::path path = output_dir / (instance_file_stem(instance) + "." + format);
            write_table(ctx.results[node_id].table, format, path);
            written.push_back(path);
            ctx.report.output_files.push_back(path.filename().string());
            logger.info("wrote " + path.string());
        }
    } catch (const Error& e) {
        cleanup_partial();
        ctx.report.status = "error";
        ctx.report.error = e.what();
        ctx.report.failed_component = ctx.report.failed_component.empty()
                                          ? std::string(e.code())
                                          : ctx.report.failed_component;
        ctx.report.total_ms = ms_since(run_start);
        std::ofstream report_out(output_dir / "run_report.json", std::ios::binary);
        report_out << ctx.report.to_json();
        logger.error(std::string("run failed: ") + e.what());
        throw;
    } catch (const std::exception& e) {
        cleanup_partial();
        ctx.report.status = "error";
        ctx.report.error = e.what();
        ctx.report.total_ms = ms_since(run_start);
        std::ofstream report_out(output_dir / "run_report.json", std::ios::binary);
        report_out << ctx.report.to_json();
        logger.error(std::string("run failed: ") + e.what());
        throw;
    }

    for (size_t i = 0; i < ctx.graph.nodes.size(); ++i) {
        const PipelineNode& node = ctx.graph.nodes[i];
        if (node.terminal) continue;
        ctx.report.components.push_back({node.instance, ctx.results[i].wall_ms,
                                         static_cast<int64_t>(ctx.results[i].table.rows.size())});
        if (!ctx.results[i].diagnostics.empty())
            ctx.report.diagnostics[node.instance] = ctx.results[i].diagnostics;
    }
    std::sort(ctx.report.components.begin(), ctx.report.components.end(),
              [](const ComponentTiming& a, const ComponentTiming& b) { return a.name < b.name; });
    if (!config.warnings.empty()) ctx.report.diagnostics["config"] = config.warnings;

    ctx.report.total_ms = ms_since(run_start);
    {
        std::ofstream report_out(output_dir / "run_report.json", std::ios::binary);
        report_out << ctx.report.to_json();
    }

    if (config.get_bool("archive", false)) {
        ArchiveInputs inputs;
        inputs.output_dir = output_dir;
        inputs.cache_dir = ctx.cache_dir;
        inputs.source_tree = source_tree;
        inputs.result_files = ctx.report.output_files;
        inputs.include_sources = config.get_bool("archive.include_sources", true);
        inputs.overwrite = config.get_bool("archive.overwrite", false);
        archive_run(config.get_path("archive.path", output_dir / "archive.zip"), config, inputs,
                    logger);
    }

    logger.info("run finished in " + std::to_string(ctx.report.total_ms) + " ms");
    return ctx.report;
}

}  // namespace varscope
