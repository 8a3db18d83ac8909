#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "posdist/corpus.hpp"

namespace acceptance {

/// Collects one PASS/FAIL line per criterion.
class Report {
public:
    void record(int criterion, const std::string& title, bool ok, const std::string& detail);
    int failures() const noexcept { return failures_; }
    int exit_code() const noexcept { return failures_ == 0 ? 0 : 1; }

private:
    int failures_ = 0;
};

std::string fmt(double x, int precision = 4);

/// Writes a corpus as a minimal CoNLL-U file (FORM "w", UPOS from the tag names).
void write_conllu(const std::filesystem::path& path, const posdist::Corpus& corpus);

/// Byte contents of every regular file under root, keyed by relative path.
std::map<std::string, std::string> snapshot(const std::filesystem::path& root);

/// Runs a shell command and returns its exit status (-1 if it did not exit normally).
int run_command(const std::string& command);

}  // namespace acceptance
