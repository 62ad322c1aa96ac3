#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace flatbound {

struct Request {
    std::string command;  // analyze | bound | elicitable | flat | indirect | render
    std::optional<std::string> target, cells, surrogate, link, flat, out;
    std::optional<std::string> p, r;
    std::size_t probe_budget = 200;
    std::vector<std::string> marks;  // "label=a/b,c/d,e/f" annotations for render
};

struct RunResult {
    int exit_code = 0;
    std::string output;  // the JSON report, newline terminated
    std::string error;
};

/// Executes one request. Exit codes: 0 ok, 2 parse or usage error,
/// 3 precondition failure, 4 internal invariant failure.
RunResult run(const Request& request);

}  // namespace flatbound
