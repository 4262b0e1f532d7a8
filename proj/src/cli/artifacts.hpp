#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "forge/cli.hpp"
#include "forge/hash.hpp"

namespace forge::cli {

/**
 * Output directory of one command.
 *
 * The stage key hashes the tool version, the effective configuration, the
 * seed and the bytes of every input the stage reads. It is recorded in
 * `<dir>/.stage` together with the files written, so a rerun with an
 * unchanged key can skip the work.
 */
class Stage {
public:
    Stage(const PipelineConfig& config, std::string name, std::uint64_t seed);

    Stage& input_text(std::string_view label, std::string_view text);
    Stage& input_file(const std::filesystem::path& path);

    const std::filesystem::path& dir() const noexcept { return dir_; }
    std::string key() const { return hash_.hex(); }
    // "# forge-version: ...", "# inputs-hash: ...", "# seed: ..." lines.
    std::string header() const;
    std::string header_plain() const;  // same without the "# " prefix

    bool cached() const;
    void write(const std::string& relative, const std::string& body);
    void write_json(const std::string& relative, const std::string& json_body);
    void record(const std::string& relative);  // file produced by other means
    void commit() const;
    std::size_t written() const noexcept { return files_.size(); }

private:
    std::string name_;
    std::filesystem::path dir_;
    std::uint64_t seed_;
    ContentHash hash_;
    std::vector<std::string> files_;
};

// Path of an upstream artifact; throws MissingArtifact naming the command
// that produces it.
std::filesystem::path require_artifact(const PipelineConfig& config, const std::filesystem::path& relative,
                                       const std::string& command);

// "# key: value" comment lines at the top of a file.
std::map<std::string, std::string> read_metadata(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

} // namespace forge::cli
