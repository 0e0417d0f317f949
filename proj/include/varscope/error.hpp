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

#include <stdexcept>
#include <string>
#include <utility>

namespace varscope {

/// Failure categories; they map 1:1 onto the CLI exit codes.
enum class ErrorCategory {
    Config = 1,
    Extraction = 2,
    Analysis = 3,
    Io = 4,
};

/// All recoverable failures carry a stable code string (e.g.
/// "MalformedExpression") plus an optional file/line position.
class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, std::string code, const std::string& message,
          std::string file = {}, int line = 0)
        : std::runtime_error(format(code, message, file, line)),
          category_(category),
          code_(std::move(code)),
          file_(std::move(file)),
          line_(line) {}

    ErrorCategory category() const { return category_; }
    const std::string& code() const { return code_; }
    const std::string& file() const { return file_; }
    int line() const { return line_; }

private:
    static std::string format(const std::string& code, const std::string& message,
                              const std::string& file, int line) {
        std::string out = code;
        if (!file.empty()) {
            out += " at " + file;
            if (line > 0) out += ":" + std::to_string(line);
        } else if (line > 0) {
            out += " at line " + std::to_string(line);
        }
        out += ": " + message;
        return out;
    }

    ErrorCategory category_;
    std::string code_;
    std::string file_;
    int line_;
};

}  // namespace varscope
