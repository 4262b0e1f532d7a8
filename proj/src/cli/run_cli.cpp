#include <iostream>

#include "CLI11.hpp"
#include "forge/cli.hpp"

namespace forge::cli {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"forge: economic complexity and supply-chain analytics", "forge"};
    app.set_version_flag("--version", kVersion);
    std::string command;
    std::string config_path;
    std::optional<int> year;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    app.add_option("command", command, "Pipeline stage")
        ->required()
        ->check(CLI::IsMember(command_names()));
    app.add_option("--config", config_path, "Pipeline config file")->required();
    app.add_option("--year", year, "Restrict or override the stage's year");
    app.add_option("--seed", seed, "Override the config seed");
    app.add_option("--out", out_dir, "Override the output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "forge: " << e.what() << '\n' << "run `forge --help` for usage\n";
        return 1;
    }

    try {
        auto config = load_config(config_path);
        if (seed) config.seed = *seed;
        if (out_dir) config.out = *out_dir;
        std::string summary;
        if (command == "ingest") summary = cmd_ingest(config);
        else if (command == "rca") summary = cmd_rca(config, year);
        else if (command == "fitness") summary = cmd_fitness(config, year);
        else if (command == "progression") summary = cmd_progression(config, year);
        else if (command == "io-shares") summary = cmd_io_shares(config, year);
        else if (command == "trends") summary = cmd_trends(config, year);
        else summary = cmd_vulnerability(config, year);
        out << summary << '\n';
        return 0;
    } catch (const ForgeError& e) {
        err << "forge " << command << ": " << to_string(e.kind()) << ": " << e.what() << '\n';
        return is_validation_error(e.kind()) ? 1 : 2;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "forge " << command << ": " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "forge " << command << ": " << e.what() << '\n';
        return 2;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, std::cout, std::cerr);
}

} // namespace forge::cli
