#include "artifacts.hpp"

#include <fstream>
#include <sstream>

#include "forge/csv.hpp"
#include "json.hpp"

namespace forge::cli {

Stage::Stage(const PipelineConfig& config, std::string name, std::uint64_t seed)
    : name_(std::move(name)), dir_(config.out / name_), seed_(seed) {
    hash_.update("forge ").update(kVersion).update("\nstage ").update(name_).update("\n");
    hash_.update(config.canonical()).update("seed=").update(std::to_string(seed)).update("\n");
}

Stage& Stage::input_text(std::string_view label, std::string_view text) {
    hash_.update(label).update("=").update(std::to_string(text.size())).update(":").update(text);
    return *this;
}

Stage& Stage::input_file(const std::filesystem::path& path) {
    // Bytes only: the key must not depend on where the tree lives.
    hash_.update("file:").update(path.filename().string()).update(":");
    hash_.update_file(path);
    return *this;
}

std::string Stage::header_plain() const {
    return std::string("forge-version: ") + kVersion + "\ninputs-hash: " + key() + "\nseed: " + std::to_string(seed_) +
           "\n";
}

std::string Stage::header() const {
    std::string out;
    std::istringstream lines(header_plain());
    for (std::string line; std::getline(lines, line);) out += "# " + line + "\n";
    return out;
}

bool Stage::cached() const {
    std::ifstream in(dir_ / ".stage");
    if (!in) return false;
    std::string line;
    if (!std::getline(in, line) || line != "key " + key()) return false;
    while (std::getline(in, line))
        if (!line.empty() && !std::filesystem::exists(dir_ / line)) return false;
    return true;
}

void Stage::write(const std::string& relative, const std::string& body) {
    const auto path = dir_ / relative;
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ForgeError(ErrorKind::Io, "cannot write " + path.string());
    out << header() << body;
    if (!out) throw ForgeError(ErrorKind::Io, "failed writing " + path.string());
    files_.push_back(relative);
}

void Stage::write_json(const std::string& relative, const std::string& json_body) {
    auto doc = nlohmann::ordered_json::parse(json_body);
    nlohmann::ordered_json wrapped;
    wrapped["metadata"] = {{"forge-version", kVersion}, {"inputs-hash", key()}, {"seed", seed_}};
    for (auto it = doc.begin(); it != doc.end(); ++it) wrapped[it.key()] = it.value();
    const auto path = dir_ / relative;
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ForgeError(ErrorKind::Io, "cannot write " + path.string());
    out << wrapped.dump(2) << '\n';
    files_.push_back(relative);
}

void Stage::record(const std::string& relative) { files_.push_back(relative); }

void Stage::commit() const {
    std::filesystem::create_directories(dir_);
    std::ofstream out(dir_ / ".stage", std::ios::binary);
    out << "key " << key() << '\n';
    for (const auto& f : files_) out << f << '\n';
    if (!out) throw ForgeError(ErrorKind::Io, "cannot write stage record in " + dir_.string());
}

std::filesystem::path require_artifact(const PipelineConfig& config, const std::filesystem::path& relative,
                                       const std::string& command) {
    auto path = config.out / relative;
    if (!std::filesystem::exists(path))
        throw ForgeError(ErrorKind::MissingArtifact,
                         "missing " + path.string() + "; run `forge " + command + "` first");
    return path;
}

std::map<std::string, std::string> read_metadata(const std::filesystem::path& path) {
    std::ifstream in(path);
    std::map<std::string, std::string> meta;
    std::string line;
    while (std::getline(in, line) && !line.empty() && line[0] == '#') {
        auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        meta[std::string(csv::trim(std::string_view(line).substr(1, colon - 1)))] =
            std::string(csv::trim(std::string_view(line).substr(colon + 1)));
    }
    return meta;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ForgeError(ErrorKind::Io, "cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace forge::cli
