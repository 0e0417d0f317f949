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

#include "varscope/log.hpp"

#include <iostream>

#include "varscope/error.hpp"

namespace varscope {

LogLevel parse_log_level(const std::string& name) {
    if (name == "error") return LogLevel::Error;
    if (name == "warn") return LogLevel::Warn;
    if (name == "info") return LogLevel::Info;
    if (name == "debug") return LogLevel::Debug;
    throw Error(ErrorCategory::Config, "InvalidValue",
                "log level must be error, warn, info or debug, got '" + name + "'");
}

namespace {

const char* level_tag(LogLevel level) {
    switch (level) {
        case LogLevel::Error: return "error";
        case LogLevel::Warn: return "warn";
        case LogLevel::Info: return "info";
        case LogLevel::Debug: return "debug";
    }
    return "info";
}

}  // namespace

void Logger::open_file(const std::filesystem::path& path) {
    std::lock_guard<std::mutex> guard(mutex_);
    if (file_.is_open()) file_.close();
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_)
        throw Error(ErrorCategory::Io, "FileWrite", "cannot open log file " + path.string());
}

void Logger::log(LogLevel level, const std::string& message) {
    if (level > level_) return;
    std::lock_guard<std::mutex> guard(mutex_);
    std::string line = std::string("[") + level_tag(level) + "] " + message + "\n";
    if (!quiet_) std::cerr << line;
    if (file_.is_open()) file_ << line << std::flush;
}

}  // namespace varscope
