#include "common.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "posdist/io.hpp"

namespace fs = std::filesystem;

namespace acceptance {

void Report::record(int criterion, const std::string& title, bool ok, const std::string& detail) {
    if (!ok) ++failures_;
    std::cout << "criterion " << criterion << ": " << (ok ? "PASS" : "FAIL") << "  " << title;
    if (!detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << std::endl;
}

std::string fmt(double x, int precision) {
    std::ostringstream os;
    os.precision(precision);
    os << x;
    return os.str();
}

void write_conllu(const fs::path& path, const posdist::Corpus& corpus) {
    fs::create_directories(path.parent_path());
    std::ostringstream out;
    std::size_t sent = 0;
    for (const auto& s : corpus.sentences) {
        out << "# sent_id = " << ++sent << "\n";
        for (std::size_t i = 0; i < s.size(); ++i) {
            out << i + 1 << "\tw\tw\t" << posdist::kTagNames[s[i]] << "\t_\t_\t" << (i == 0 ? 0 : i) << "\t"
                << (i == 0 ? "root" : "dep") << "\t_\t_\n";
        }
        out << "\n";
    }
    posdist::io::write_file(path, out.str());
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        files[fs::relative(entry.path(), root).generic_string()] = posdist::io::read_file(entry.path());
    }
    return files;
}

int run_command(const std::string& command) {
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace acceptance
