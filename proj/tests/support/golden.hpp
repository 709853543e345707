#pragma once

// In-process CLI runs and golden-file bookkeeping shared by the CLI tests and
// the acceptance binary.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"

namespace exform::testing {

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

inline CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliResult r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

/// Report text with the timing field removed: json reports are re-serialized
/// without "timing_ms", text reports lose their "timing_ms" line.
inline std::string strip_timing(const std::string& report) {
    if (!report.empty() && report.front() == '{') {
        auto j = nlohmann::ordered_json::parse(report);
        j.erase("timing_ms");
        return j.dump(2) + "\n";
    }
    std::istringstream in(report);
    std::string line, out;
    while (std::getline(in, line))
        if (line.rfind("timing_ms", 0) != 0) out += line + "\n";
    return out;
}

struct GoldenCase {
    std::string name;
    std::vector<std::string> args;
};

inline std::vector<GoldenCase> load_cases(const std::filesystem::path& file) {
    std::ifstream in(file);
    std::vector<GoldenCase> cases;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') continue;
        std::istringstream words(line);
        GoldenCase c;
        words >> c.name;
        for (std::string w; words >> w;) c.args.push_back(w);
        cases.push_back(std::move(c));
    }
    return cases;
}

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::filesystem::path golden_path(const std::filesystem::path& tests_dir, const std::string& name) {
    return tests_dir / "golden" / (name + ".out");
}

}  // namespace exform::testing
