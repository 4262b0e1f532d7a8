#include <fstream>
#include <sstream>

#include "forge/csv.hpp"
#include "forge/progression.hpp"

namespace forge {

namespace {

constexpr const char* kManifestMagic = "forge-progression-models";
constexpr int kFormatVersion = 1;

const char* status_name(ModelStatus s) {
    return s == ModelStatus::Fitted ? "fitted" : "fallback";
}

void write_header(std::ostream& out, std::string_view header) {
    std::istringstream lines{std::string(header)};
    for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
}

void skip_comments(std::istream& in) {
    while (in >> std::ws && in.peek() == '#') {
        std::string ignored;
        std::getline(in, ignored);
    }
}

} // namespace

// manifest.txt:
//   # <optional metadata lines>
//   forge-progression-models 1
//   train_year <y>
//   horizon_years <h>
//   seed <s>
//   n_trees <n> / max_depth <d> / min_samples_leaf <l> / max_features <f> / bootstrap <0|1>
//   max_negative_ratio <r>
//   products <P>
//   <code> <fitted|fallback> <prior> <positives> <negatives>     (P lines, feature order)
void save_models(const ProgressionModelSet& set, const std::filesystem::path& dir, std::string_view header) {
    std::filesystem::create_directories(dir / "trees");
    std::ofstream manifest(dir / "manifest.txt");
    if (!manifest) throw ForgeError(ErrorKind::Io, "cannot write " + (dir / "manifest.txt").string());
    const auto& p = set.params;
    write_header(manifest, header);
    manifest << kManifestMagic << ' ' << kFormatVersion << '\n'
             << "train_year " << set.train_year << '\n'
             << "horizon_years " << p.horizon_years << '\n'
             << "seed " << p.seed << '\n'
             << "n_trees " << p.trees.n_trees << '\n'
             << "max_depth " << p.trees.max_depth << '\n'
             << "min_samples_leaf " << p.trees.min_samples_leaf << '\n'
             << "max_features " << p.trees.max_features << '\n'
             << "bootstrap " << (p.trees.bootstrap ? 1 : 0) << '\n'
             << "max_negative_ratio " << csv::format_double(p.max_negative_ratio) << '\n'
             << "products " << set.models.size() << '\n';
    for (const auto& m : set.models) {
        manifest << m.product << ' ' << status_name(m.status) << ' ' << csv::format_double(m.prior) << ' '
                 << m.positives << ' ' << m.negatives << '\n';
        if (m.status != ModelStatus::Fitted) continue;
        std::ofstream tree(dir / "trees" / (m.product + ".txt"));
        if (!tree) throw ForgeError(ErrorKind::Io, "cannot write tree file for " + m.product);
        write_header(tree, header);
        tree << "product " << m.product << '\n';
        m.ensemble.write(tree);
    }
}

ProgressionModelSet load_models(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.txt");
    if (!in) throw ForgeError(ErrorKind::MissingArtifact, "no model manifest in " + dir.string());
    auto bad = [&](const std::string& what) {
        return ForgeError(ErrorKind::Parse, (dir / "manifest.txt").string() + ": " + what);
    };

    std::string magic;
    int version = 0;
    skip_comments(in);
    if (!(in >> magic >> version) || magic != kManifestMagic) throw bad("not a model manifest");
    if (version != kFormatVersion) throw bad("unsupported format version " + std::to_string(version));

    ProgressionModelSet set;
    auto& p = set.params;
    auto expect = [&](const char* key, auto& value) {
        std::string k;
        if (!(in >> k >> value) || k != key) throw bad(std::string("expected '") + key + "'");
    };
    std::string ratio;
    int bootstrap = 1;
    std::size_t n_products = 0;
    expect("train_year", set.train_year);
    expect("horizon_years", p.horizon_years);
    expect("seed", p.seed);
    expect("n_trees", p.trees.n_trees);
    expect("max_depth", p.trees.max_depth);
    expect("min_samples_leaf", p.trees.min_samples_leaf);
    expect("max_features", p.trees.max_features);
    expect("bootstrap", bootstrap);
    expect("max_negative_ratio", ratio);
    expect("products", n_products);
    p.trees.bootstrap = bootstrap != 0;
    auto r = csv::parse_double(ratio);
    if (!r) throw bad("bad max_negative_ratio");
    p.max_negative_ratio = *r;

    for (std::size_t i = 0; i < n_products; ++i) {
        ProductModel m;
        std::string status, prior;
        if (!(in >> m.product >> status >> prior >> m.positives >> m.negatives)) throw bad("truncated product list");
        auto pr = csv::parse_double(prior);
        if (!pr) throw bad("bad prior for " + m.product);
        m.prior = *pr;
        if (status == "fitted") {
            m.status = ModelStatus::Fitted;
            std::ifstream tree(dir / "trees" / (m.product + ".txt"));
            if (!tree) throw ForgeError(ErrorKind::MissingArtifact, "missing tree file for " + m.product);
            std::string tag, code;
            skip_comments(tree);
            if (!(tree >> tag >> code) || tag != "product" || code != m.product)
                throw ForgeError(ErrorKind::Parse, "tree file for " + m.product + " has wrong header");
            m.ensemble = TreeEnsemble::read(tree);
        } else if (status == "fallback") {
            m.status = ModelStatus::DensityFallback;
        } else {
            throw bad("unknown status '" + status + "'");
        }
        set.feature_products.push_back(m.product);
        set.models.push_back(std::move(m));
    }
    return set;
}

} // namespace forge
