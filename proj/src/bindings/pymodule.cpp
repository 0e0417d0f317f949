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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "varscope/analysis.hpp"
#include "varscope/archive.hpp"
#include "varscope/build_extractor.hpp"
#include "varscope/cnf.hpp"
#include "varscope/code_extractor.hpp"
#include "varscope/config.hpp"
#include "varscope/error.hpp"
#include "varscope/log.hpp"
#include "varscope/pipeline.hpp"
#include "varscope/runner.hpp"
#include "varscope/solver.hpp"
#include "varscope/varmodel.hpp"
#include "varscope/version.hpp"

namespace py = pybind11;
using namespace varscope;

namespace {

py::object table_to_py(const ResultTable& table) {
    py::dict out;
    out["name"] = table.name;
    py::list columns;
    for (const auto& [name, kind] : table.columns) columns.append(name);
    out["columns"] = columns;
    py::list rows;
    for (const auto& row : table.rows) {
        py::list cells;
        for (size_t i = 0; i < row.size(); ++i) {
            if (table.columns[i].second == ColumnKind::Int)
                cells.append(std::get<int64_t>(row[i]));
            else if (table.columns[i].second == ColumnKind::Formula)
                cells.append(std::get<Formula>(row[i]));
            else
                cells.append(std::get<std::string>(row[i]));
        }
        rows.append(cells);
    }
    out["rows"] = rows;
    return out;
}

py::dict report_to_py(const RunReport& report) {
    py::dict out;
    out["tool_version"] = report.tool_version;
    out["config_fingerprint"] = report.config_fingerprint;
    out["status"] = report.status;
    out["jobs"] = report.jobs;
    py::dict extractions;
    extractions["code"] = report.code_extractions;
    extractions["build"] = report.build_extractions;
    extractions["vm"] = report.vm_extractions;
    out["extractor_invocations"] = extractions;
    out["output_files"] = report.output_files;
    out["total_ms"] = report.total_ms;
    return out;
}

Config config_from(const std::string& path, const std::vector<std::string>& overrides) {
    Config config = load_config_file(path);
    apply_overrides(config, overrides);
    return config;
}

}  // namespace

PYBIND11_MODULE(_varscope, m) {
    m.doc() = "Variability analysis workbench for C-preprocessor product lines";
    m.attr("__version__") = kToolVersion;

    py::register_exception<Error>(m, "VarscopeError");

    py::enum_<FormulaKind>(m, "FormulaKind")
        .value("TRUE", FormulaKind::True)
        .value("FALSE", FormulaKind::False)
        .value("VAR", FormulaKind::Var)
        .value("NOT", FormulaKind::Not)
        .value("AND", FormulaKind::And)
        .value("OR", FormulaKind::Or);

    py::class_<Formula>(m, "Formula")
        .def_static("constant", &Formula::constant, py::arg("value"))
        .def_static("var", &Formula::var, py::arg("name"))
        .def_property_readonly("kind", &Formula::kind)
        .def_property_readonly("operands",
                               [](const Formula& f) {
                                   return std::vector<Formula>(f.operands().begin(),
                                                               f.operands().end());
                               })
        .def_property_readonly("name",
                               [](const Formula& f) {
                                   return f.kind() == FormulaKind::Var ? f.var_name()
                                                                       : std::string();
                               })
        .def("__eq__", [](const Formula& a, const Formula& b) { return a == b; })
        .def("__str__", [](const Formula& f) { return render(f); })
        .def("__repr__", [](const Formula& f) { return "Formula(" + render(f) + ")"; })
        .def("__and__", [](const Formula& a, const Formula& b) { return conj(a, b); })
        .def("__or__", [](const Formula& a, const Formula& b) { return disj(a, b); })
        .def("__invert__", [](const Formula& f) { return neg(f); });

    m.def("neg", &neg, py::arg("f"));
    m.def("conj", py::overload_cast<std::vector<Formula>>(&conj), py::arg("operands"));
    m.def("disj", py::overload_cast<std::vector<Formula>>(&disj), py::arg("operands"));
    m.def("evaluate", &eval, py::arg("f"), py::arg("assignment"),
          "Evaluate a formula under a total assignment (dict of name -> bool).");
    m.def("simplify", &simplify, py::arg("f"));
    m.def("substitute", &substitute, py::arg("f"), py::arg("var"), py::arg("value"));
    m.def("render", &render, py::arg("f"));
    m.def("parse_formula", [](const std::string& text) { return parse_formula(text); },
          py::arg("text"));
    m.def("is_satisfiable", &is_satisfiable, py::arg("f"));
    m.def("is_tautology", &is_tautology, py::arg("f"));
    m.def("equivalent", &equivalent, py::arg("lhs"), py::arg("rhs"));

    py::class_<CnfProblem>(m, "CnfProblem")
        .def_property_readonly("clauses",
                               [](const CnfProblem& p) {
                                   std::vector<std::vector<std::pair<std::string, bool>>> out;
                                   for (const auto& clause : p.clauses) {
                                       std::vector<std::pair<std::string, bool>> c;
                                       for (const auto& lit : clause)
                                           c.emplace_back(lit.var, lit.positive);
                                       out.push_back(std::move(c));
                                   }
                                   return out;
                               })
        .def_property_readonly("var_map", [](const CnfProblem& p) {
            py::dict out;
            for (const auto& [name, info] : p.var_map)
                out[py::str(name)] = py::make_tuple(info.index, info.internal);
            return out;
        });

    m.def("to_cnf", &to_cnf, py::arg("f"));
    m.def("to_dimacs", &to_dimacs, py::arg("problem"));
    m.def("solve", [](const CnfProblem& p) -> py::object {
        SolveResult result = solve(p);
        if (!result.sat) return py::none();
        return py::cast(result.model);
    });

    py::enum_<BranchKind>(m, "BranchKind")
        .value("IF", BranchKind::If)
        .value("ELIF", BranchKind::Elif)
        .value("ELSE", BranchKind::Else)
        .value("IFDEF", BranchKind::Ifdef)
        .value("IFNDEF", BranchKind::Ifndef);

    py::class_<CodeBlock>(m, "CodeBlock")
        .def_readonly("file", &CodeBlock::file)
        .def_readonly("line_start", &CodeBlock::line_start)
        .def_readonly("line_end", &CodeBlock::line_end)
        .def_readonly("condition", &CodeBlock::condition)
        .def_readonly("presence_condition", &CodeBlock::presence_condition)
        .def_readonly("children", &CodeBlock::children)
        .def_readonly("branch_kind", &CodeBlock::branch_kind);

    py::class_<CodeModel>(m, "CodeModel")
        .def_readonly("file", &CodeModel::file)
        .def_readonly("unknown_atoms", &CodeModel::unknown_atoms)
        .def_property_readonly("blocks",
                               [](const CodeModel& m) { return m.root.children; })
        .def("presence_conditions", [](const CodeModel& m) {
            std::vector<std::tuple<std::string, int, Formula>> out;
            for (const auto& entry : presence_conditions(m))
                out.emplace_back(entry.file, entry.line, entry.pc);
            return out;
        });

    m.def(
        "extract_file",
        [](const std::string& source, const std::string& file, const std::string& prefix) {
            ExtractOptions opts;
            opts.variability_prefix = prefix;
            return extract_file(source, file, opts);
        },
        py::arg("source"), py::arg("file") = "input.c", py::arg("prefix") = "CONFIG_");

    py::class_<BuildModel>(m, "BuildModel")
        .def_readonly("entries", &BuildModel::entries)
        .def_property_readonly("unresolved", [](const BuildModel& m) {
            std::vector<std::tuple<std::string, int, std::string>> out;
            for (const auto& line : m.unresolved)
                out.emplace_back(line.file, line.line, line.text);
            return out;
        });

    m.def(
        "extract_build",
        [](const std::filesystem::path& root, bool tristate, const std::string& prefix) {
            BuildOptions opts;
            opts.tristate = tristate;
            opts.variability_prefix = prefix;
            return extract_build(root, opts);
        },
        py::arg("root"), py::arg("tristate") = true, py::arg("prefix") = "CONFIG_");

    py::enum_<FeatureKind>(m, "FeatureKind")
        .value("BOOL", FeatureKind::Bool)
        .value("TRISTATE", FeatureKind::Tristate);

    py::class_<VariabilityModel>(m, "VariabilityModel")
        .def_readonly("features", &VariabilityModel::features)
        .def_readonly("constraint", &VariabilityModel::constraint)
        .def_readonly("constraints", &VariabilityModel::constraints)
        .def("variables", &VariabilityModel::variables)
        .def("valid_configurations",
             [](const VariabilityModel& vm, int bound) { return valid_configurations(vm, bound); },
             py::arg("bound") = 16);

    m.def(
        "extract_varmodel",
        [](const std::vector<std::filesystem::path>& files, bool allow_undeclared) {
            VarModelOptions opts;
            opts.allow_undeclared = allow_undeclared;
            return extract_varmodel(files, opts);
        },
        py::arg("files"), py::arg("allow_undeclared") = false);

    // Analyses over already extracted models.
    m.def(
        "feature_effects",
        [](const std::vector<CodeModel>& models, const BuildModel* build) {
            PcFinder finder(build, BuildOptions{});
            for (const auto& model : models) finder.consume(model);
            ResultTable table = feature_effects(finder.index());
            return table_to_py(table);
        },
        py::arg("models"), py::arg("build") = nullptr);
    m.def(
        "presence_condition_table",
        [](const std::vector<CodeModel>& models, const BuildModel* build) {
            PcFinder finder(build, BuildOptions{});
            for (const auto& model : models) finder.consume(model);
            return table_to_py(finder.finish());
        },
        py::arg("models"), py::arg("build") = nullptr);
    m.def(
        "dead_blocks",
        [](const std::vector<CodeModel>& models, const BuildModel& build,
           const VariabilityModel& vm) {
            DeadBlocks analysis;
            for (const auto& model : models) analysis.consume(model);
            return table_to_py(analysis.finish(vm, build, BuildOptions{}));
        },
        py::arg("models"), py::arg("build"), py::arg("vm"));
    m.def(
        "block_metrics",
        [](const std::vector<CodeModel>& models) {
            BlockMetrics metrics;
            for (const auto& model : models) metrics.consume(model);
            return table_to_py(metrics.finish());
        },
        py::arg("models"));

    // Whole experiments driven by a configuration file.
    m.def(
        "run_config",
        [](const std::string& path, const std::vector<std::string>& overrides, bool quiet) {
            Config config = config_from(path, overrides);
            Logger logger;
            logger.set_quiet(quiet);
            return report_to_py(run(config, logger));
        },
        py::arg("path"), py::arg("overrides") = std::vector<std::string>{},
        py::arg("quiet") = true);
    m.def(
        "validate_config",
        [](const std::string& path, const std::vector<std::string>& overrides) {
            Config config = config_from(path, overrides);
            check_required(config);
            return describe_graph(build_pipeline(config));
        },
        py::arg("path"), py::arg("overrides") = std::vector<std::string>{});
    m.def("unpack_archive", &unpack_archive, py::arg("archive"), py::arg("dest"));
}
