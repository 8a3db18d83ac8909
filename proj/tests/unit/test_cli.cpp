#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include "json.hpp"

#include "posdist/io.hpp"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("posdist_cli_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(const std::string& args) {
    const std::string cmd = std::string(POSDIST_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, HelpAndVersion) {
    EXPECT_EQ(run("--help"), 0);
    EXPECT_EQ(run("--version"), 0);
}

TEST(Cli, ConfigErrorsExitTwo) {
    const fs::path dir = scratch("config");
    EXPECT_EQ(run("--no-such-flag ingest"), 2);
    EXPECT_EQ(run("-c " + (dir / "missing.json").string() + " ingest"), 2);
    posdist::io::write_file(dir / "bad.json", "{\"unknown\": 1}\n");
    EXPECT_EQ(run("-c " + (dir / "bad.json").string() + " ingest"), 2);
    EXPECT_EQ(run("--metric kl -o " + dir.string() + " distances"), 2);
    EXPECT_EQ(run("-o " + dir.string() + " ingest"), 2);
    fs::remove_all(dir);
}

TEST(Cli, EmptyDataDirExitsOne) {
    const fs::path dir = scratch("empty");
    fs::create_directories(dir / "data");
    EXPECT_EQ(run("--data-dir " + (dir / "data").string() + " -o " + (dir / "out").string() + " ingest"), 1);
    EXPECT_EQ(run("-o " + (dir / "out").string() + " gain"), 1);
    fs::remove_all(dir);
}

TEST(Cli, IngestFixtureManifestAndIdempotence) {
    const fs::path dir = scratch("ingest");
    const std::string base = "--data-dir " + std::string(POSDIST_FIXTURES) + "/treebank -o " + dir.string();
    ASSERT_EQ(run(base + " ingest"), 0);
    const auto manifest = nlohmann::json::parse(posdist::io::read_file(dir / "cache" / "manifest.json"));
    ASSERT_EQ(manifest.at("languages").size(), 2u);
    const auto& de = manifest["languages"][0];
    const auto& en = manifest["languages"][1];
    EXPECT_EQ(de.at("language_id"), "de");
    EXPECT_EQ(de.at("sentences"), 2);
    EXPECT_EQ(de.at("tokens"), 8);
    EXPECT_EQ(en.at("language_id"), "en");
    EXPECT_EQ(en.at("sentences"), 4);
    EXPECT_EQ(en.at("tokens"), 31);
    EXPECT_EQ(en.at("dropped_untagged"), 1);
    EXPECT_EQ(en.at("files").size(), 2u);
    EXPECT_TRUE(fs::exists(dir / "ingest" / "run.json"));

    const std::string cache = posdist::io::read_file(dir / "cache" / "en.tags");
    const std::string run_json = posdist::io::read_file(dir / "ingest" / "run.json");
    ASSERT_EQ(run(base + " ingest"), 0);
    EXPECT_EQ(posdist::io::read_file(dir / "cache" / "en.tags"), cache);
    EXPECT_EQ(posdist::io::read_file(dir / "ingest" / "run.json"), run_json);

    ASSERT_EQ(run(base + " ingest --strip-final-punct"), 0);
    const auto stripped = nlohmann::json::parse(posdist::io::read_file(dir / "cache" / "manifest.json"));
    EXPECT_EQ(stripped["languages"][1].at("tokens"), 29);
    fs::remove_all(dir);
}

TEST(Cli, MalformedTreebankExitsOne) {
    const fs::path dir = scratch("malformed");
    fs::create_directories(dir / "data" / "UD_Bad");
    posdist::io::write_file(dir / "data" / "UD_Bad" / "xx_bad-ud-train.conllu", "1\tword\tlemma\n\n");
    EXPECT_EQ(run("--data-dir " + (dir / "data").string() + " -o " + (dir / "out").string() + " ingest"), 1);
    fs::remove_all(dir);
}
