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

#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>

namespace varscope {

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

LogLevel parse_log_level(const std::string& name);

/// Writes "[level] message" lines to stderr and, when opened, to the run log
/// file. Log content is diagnostic only and exempt from the determinism
/// guarantees of result files.
class Logger {
public:
    Logger() = default;

    void set_level(LogLevel level) { level_ = level; }
    void set_quiet(bool quiet) { quiet_ = quiet; }
    void open_file(const std::filesystem::path& path);

    void log(LogLevel level, const std::string& message);
    void error(const std::string& m) { log(LogLevel::Error, m); }
    void warn(const std::string& m) { log(LogLevel::Warn, m); }
    void info(const std::string& m) { log(LogLevel::Info, m); }
    void debug(const std::string& m) { log(LogLevel::Debug, m); }

private:
    std::mutex mutex_;
    std::ofstream file_;
    LogLevel level_ = LogLevel::Info;
    bool quiet_ = false;
};

}  // namespace varscope
