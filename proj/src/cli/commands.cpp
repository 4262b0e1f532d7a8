#include <algorithm>
#include <fstream>
#include <sstream>

#include "artifacts.hpp"
#include "forge/catalog.hpp"
#include "forge/csv.hpp"
#include "forge/progression.hpp"
#include "forge/ranking.hpp"
#include "forge/region.hpp"
#include "forge/vulnerability.hpp"

namespace forge::cli {

namespace {

const char* kTensorFile = "ingest/tensor.csv";
const char* kForecastFile = "progression/forecast.csv";

std::string rca_file(int year) { return "rca/rca_" + std::to_string(year) + ".csv"; }

std::vector<int> selected_years(const PipelineConfig& c, std::optional<int> year) {
    if (year) {
        if (!c.years.contains(*year))
            throw ForgeError(ErrorKind::Validation, "year " + std::to_string(*year) + " lies outside 'years'");
        return {*year};
    }
    std::vector<int> out;
    for (int y = c.years.first; y <= c.years.last; ++y) out.push_back(y);
    return out;
}

std::string selection_text(const std::vector<int>& years) {
    std::string s;
    for (int y : years) s += std::to_string(y) + " ";
    return s;
}

SupplyChainCatalog load_catalog(const PipelineConfig& c) { return SupplyChainCatalog::load(c.catalog, c.concordance); }

int tensor_vintage(const std::filesystem::path& path) {
    const auto meta = read_metadata(path);
    auto it = meta.find("vintage");
    auto vintage = it == meta.end() ? std::nullopt : csv::parse_int(it->second);
    if (!vintage) throw ForgeError(ErrorKind::Parse, path.string() + ": no HS vintage in the metadata header");
    return static_cast<int>(*vintage);
}

TradeTensor load_tensor(const std::filesystem::path& path) {
    const int vintage = tensor_vintage(path);
    std::ifstream in(path);
    return read_tensor(in, vintage);
}

SpecializationMatrix load_specialization(const PipelineConfig& c, const std::filesystem::path& path, int year) {
    return binarize({csv::read_matrix(path), year}, c.rca_threshold);
}

// Catalogue intermediates present in the product universe of `m`.
std::set<std::string> automotive_subset(const SupplyChainCatalog& catalog, int vintage,
                                        const std::vector<std::string>& universe) {
    std::set<std::string> present(universe.begin(), universe.end()), out;
    for (const auto& code : catalog.input_codes(vintage))
        if (present.count(code)) out.insert(code);
    return out;
}

std::string matrix_text(const Matrix& m) {
    std::ostringstream s;
    csv::write_matrix(s, m);
    return s.str();
}

Matrix as_double(const BinaryMatrix& m) {
    Matrix out(m.row_labels(), m.col_labels(), 0.0);
    for (std::size_t i = 0; i < m.data().size(); ++i) out.data()[i] = m.data()[i];
    return out;
}

std::string cached_note(const std::string& name) { return name + ": up to date (cached)"; }

} // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"ingest", "rca", "fitness", "progression", "io-shares", "trends",
                                                "vulnerability"};
    return names;
}

std::string cmd_ingest(const PipelineConfig& c) {
    Stage stage(c, "ingest", c.seed);
    stage.input_file(c.trade).input_file(c.catalog).input_file(c.concordance);
    if (stage.cached()) return cached_note("ingest");

    ParseOptions options;
    options.extra_country_codes = c.extra_country_codes;
    const auto records = parse_flows(c.trade, options);
    if (records.empty()) throw ForgeError(ErrorKind::EmptyTrade, "trade file " + c.trade.string() + " has no rows");
    auto tensor = reconcile_mirror_flows(records, ReconciliationStrategy::parse(c.reconciliation), c.trade_vintage);
    if (c.target_vintage != c.trade_vintage) tensor = convert_vintage(tensor, load_catalog(c), c.target_vintage);

    std::ostringstream body;
    body << "# vintage: " << tensor.vintage() << "\n# reconciliation: " << c.reconciliation << '\n';
    write_tensor(body, tensor);
    stage.write("tensor.csv", body.str());
    stage.commit();
    return "ingest: " + std::to_string(records.size()) + " declarations -> " + std::to_string(tensor.size()) +
           " reconciled flows (HS" + std::to_string(tensor.vintage()) + ")";
}

std::string cmd_rca(const PipelineConfig& c, std::optional<int> year) {
    const auto tensor_path = require_artifact(c, kTensorFile, "ingest");
    const auto years = selected_years(c, year);
    Stage stage(c, "rca", c.seed);
    stage.input_file(tensor_path).input_text("years", selection_text(years));
    if (stage.cached()) return cached_note("rca");

    const auto tensor = load_tensor(tensor_path);
    for (int y : years) {
        const auto rca = compute_rca(aggregate_exports(tensor, y), y);
        const auto m = binarize(rca, c.rca_threshold);
        stage.write("rca_" + std::to_string(y) + ".csv", matrix_text(rca.values));
        stage.write("m_" + std::to_string(y) + ".csv", matrix_text(as_double(m.m)));
    }
    stage.commit();
    return "rca: wrote " + std::to_string(years.size()) + " year(s)";
}

std::string cmd_fitness(const PipelineConfig& c, std::optional<int> year) {
    const auto years = selected_years(c, year);
    std::vector<std::filesystem::path> inputs;
    for (int y : years) inputs.push_back(require_artifact(c, rca_file(y), "rca"));
    const auto tensor_path = require_artifact(c, kTensorFile, "ingest");
    Stage stage(c, "fitness", c.seed);
    stage.input_file(tensor_path).input_file(c.catalog).input_file(c.region).input_text("years", selection_text(years));
    for (const auto& p : inputs) stage.input_file(p);
    if (stage.cached()) return cached_note("fitness");

    const auto catalog = load_catalog(c);
    const auto region = load_region(c.region);
    const int vintage = tensor_vintage(tensor_path);

    EfcOptions options;
    options.anchor = c.efc_anchor;
    options.tolerance = c.efc_tolerance;
    options.max_iterations = c.efc_max_iterations;
    options.fitness_mean = c.fitness_mean;

    std::vector<YearlyEfc> yearly;
    std::set<std::string> subset;
    int unconverged = 0;
    for (std::size_t i = 0; i < years.size(); ++i) {
        auto m = load_specialization(c, inputs[i], years[i]);
        auto efc = fitness_complexity(m, options);
        unconverged += efc.converged ? 0 : 1;
        const auto tag = std::to_string(years[i]);
        std::ostringstream f, q, j;
        write_fitness_csv(f, efc);
        write_complexity_csv(q, efc);
        write_efc_json(j, efc, false);
        stage.write("fitness_" + tag + ".csv", f.str());
        stage.write("complexity_" + tag + ".csv", q.str());
        stage.write_json("efc_" + tag + ".json", j.str());
        if (subset.empty()) subset = automotive_subset(catalog, vintage, m.products());
        yearly.push_back({std::move(efc), std::move(m)});
    }
    if (subset.empty()) throw ForgeError(ErrorKind::Computation, "no catalogue input appears in the trade data");

    std::set<std::string> countries;
    if (c.sector_region_only) countries = region.members;
    const auto series = fitness_ranking_series(yearly, subset, c.fitness_normalization, countries);
    std::ostringstream s;
    s << "# subset: " << subset.size() << " catalogue inputs\n";
    write_sector_fitness_csv(s, series);
    stage.write("sector_fitness.csv", s.str());
    stage.commit();
    return "fitness: " + std::to_string(years.size()) + " year(s), " + std::to_string(unconverged) +
           " without convergence";
}

std::string cmd_progression(const PipelineConfig& c, std::optional<int> base_year) {
    const int base = base_year.value_or(c.base_year);
    if (!c.years.contains(base)) throw ForgeError(ErrorKind::Validation, "base year outside 'years'");
    // Every window starting at train_year whose end does not pass the base year.
    const int last_start = std::max(c.train_year, base - c.horizon);
    std::vector<int> snapshot_years;
    for (int y = c.train_year; y <= last_start + c.horizon; ++y)
        if (y <= last_start || y >= c.train_year + c.horizon) snapshot_years.push_back(y);
    if (std::find(snapshot_years.begin(), snapshot_years.end(), base) == snapshot_years.end())
        snapshot_years.push_back(base);
    std::sort(snapshot_years.begin(), snapshot_years.end());
    std::map<int, std::filesystem::path> paths;
    for (int y : snapshot_years) paths[y] = require_artifact(c, rca_file(y), "rca");
    const auto tensor_path = require_artifact(c, kTensorFile, "ingest");

    Stage stage(c, "progression", c.seed);
    stage.input_file(tensor_path).input_file(c.catalog).input_file(c.region);
    for (const auto& [y, p] : paths) stage.input_file(p);
    stage.input_text("base_year", std::to_string(base));
    if (stage.cached()) return cached_note("progression");

    std::map<int, SpecializationMatrix> snapshots;
    for (const auto& [y, p] : paths) snapshots.emplace(y, load_specialization(c, p, y));
    std::vector<TrainingWindow> windows;
    for (int y = c.train_year; y <= last_start; ++y)
        windows.push_back({&snapshots.at(y), &snapshots.at(y + c.horizon)});
    const auto& mb = snapshots.at(base);

    ProgressionParams params;
    params.trees.n_trees = c.trees;
    params.trees.max_depth = c.max_depth;
    params.max_negative_ratio = c.max_negative_ratio;
    params.horizon_years = c.horizon;
    params.seed = c.seed;
    const auto models = train_progression_models(windows, params);
    std::filesystem::remove_all(stage.dir() / "models");
    save_models(models, stage.dir() / "models", stage.header_plain());
    stage.record("models/manifest.txt");
    for (const auto& m : models.models)
        if (m.status == ModelStatus::Fitted) stage.record("models/trees/" + m.product + ".txt");

    const auto forecast = predict_progression(models, mb, {mb.rca, base});
    std::ostringstream f;
    write_forecast_csv(f, forecast);
    stage.write("forecast.csv", f.str());

    const auto catalog = load_catalog(c);
    const auto region = load_region(c.region);
    const int vintage = tensor_vintage(tensor_path);
    const auto subset = automotive_subset(catalog, vintage, mb.products());
    if (!subset.empty()) {
        std::ostringstream s;
        write_progression_stats_csv(s, country_progression_stats(forecast, subset, region.members));
        stage.write("country_stats.csv", s.str());
    }

    // Bar-chart data: region members that are candidates for each accumulator code.
    std::ostringstream acc;
    acc << "product,country,probability,rank\n";
    for (const auto& product : c.accumulator_products) {
        std::vector<std::string> labels;
        std::vector<double> probs;
        for (const auto& country : region.members)
            if (auto p = forecast.probability_of(country, product)) {
                labels.push_back(country);
                probs.push_back(*p);
            }
        const auto ranks = rank_descending(labels, probs);
        std::vector<std::size_t> order(labels.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[static_cast<std::size_t>(ranks[i] - 1)] = i;
        for (auto i : order)
            acc << product << ',' << labels[i] << ',' << csv::format_double(probs[i]) << ',' << ranks[i] << '\n';
    }
    stage.write("accumulators.csv", acc.str());
    stage.commit();

    int fitted = 0;
    for (const auto& m : models.models) fitted += m.status == ModelStatus::Fitted ? 1 : 0;
    return "progression: " + std::to_string(fitted) + " fitted model(s), " +
           std::to_string(models.models.size() - static_cast<std::size_t>(fitted)) + " density fallback(s) from " +
           std::to_string(windows.size()) + " window(s); base year " + std::to_string(base);
}

std::string cmd_io_shares(const PipelineConfig& c, std::optional<int> year) {
    if (!c.io) throw ForgeError(ErrorKind::Validation, "config has no 'io' table for io-shares");
    Stage stage(c, "io-shares", c.seed);
    stage.input_file(*c.io).input_file(c.region).input_text("year", year ? std::to_string(*year) : "all");
    if (stage.cached()) return cached_note("io-shares");

    const auto region = load_region(c.region);
    auto tables = parse_io_tables(*c.io, c.years.last);
    if (year) {
        auto it = tables.find(*year);
        if (it == tables.end())
            throw ForgeError(ErrorKind::MissingYear, "IO tables have no year " + std::to_string(*year));
        tables = {{it->first, it->second}};
    }
    std::vector<SupplierShareTable> same, other, sectors;
    for (const auto& [y, table] : tables) {
        const auto inputs = aggregate_region_sector(table, region, c.io_sector);
        same.push_back(partner_shares(inputs, SupplierScope::SameSector, c.io_threshold, c.io_threshold_base));
        other.push_back(partner_shares(inputs, SupplierScope::OtherSectors, c.io_threshold, c.io_threshold_base));
        sectors.push_back(sector_input_shares(inputs, c.io_sector_threshold));
    }
    auto emit = [&](const char* name, const std::vector<SupplierShareTable>& t) {
        std::ostringstream s;
        s << "# sector: " << c.io_sector << '\n';
        write_share_tables_csv(s, t);
        stage.write(name, s.str());
    };
    emit("partner_shares_auto.csv", same);
    emit("partner_shares_nonauto.csv", other);
    emit("sector_shares.csv", sectors);

    std::ostringstream levels;
    levels << "year,scope,level_usd\n";
    const std::pair<const char*, SupplierScope> scopes[] = {{"auto", SupplierScope::SameSector},
                                                            {"nonauto", SupplierScope::OtherSectors},
                                                            {"all", SupplierScope::AllSectors}};
    for (const auto& [label, scope] : scopes)
        for (const auto& [y, level] : import_level_series(tables, region, c.io_sector, scope))
            levels << y << ',' << label << ',' << csv::format_double(level) << '\n';
    stage.write("import_levels.csv", levels.str());
    stage.commit();
    return "io-shares: " + std::to_string(tables.size()) + " year(s) for sector " + c.io_sector;
}

std::string cmd_trends(const PipelineConfig& c, std::optional<int> end_year) {
    const auto tensor_path = require_artifact(c, kTensorFile, "ingest");
    YearRange range = c.trend_years;
    int growth_end = c.growth_end;
    if (end_year) {
        range.last = *end_year;
        growth_end = *end_year;
        if (range.last < range.first || growth_end <= c.growth_start)
            throw ForgeError(ErrorKind::Validation, "--year precedes the start of the trend window");
    }
    Stage stage(c, "trends", c.seed);
    stage.input_file(tensor_path).input_file(c.catalog).input_file(c.region);
    stage.input_text("window", std::to_string(range.first) + "-" + std::to_string(range.last) + "/" +
                                   std::to_string(growth_end));
    if (stage.cached()) return cached_note("trends");

    const auto tensor = load_tensor(tensor_path);
    const auto catalog = load_catalog(c);
    const auto region = load_region(c.region);

    for (auto dir : {FlowDirection::Import, FlowDirection::Export}) {
        std::ostringstream s;
        s << "category,year,partner,value_usd\n";
        for (const auto& [k, v] : category_series(tensor, catalog, region, dir, range))
            s << to_string(k.category) << ',' << k.year << ',' << k.partner << ',' << csv::format_double(v) << '\n';
        stage.write(std::string("category_") + (dir == FlowDirection::Import ? "imports" : "exports") + ".csv", s.str());
    }

    const auto growth = import_growth_ranking(tensor, catalog, region, c.growth_start, growth_end);
    std::ostringstream g;
    g << "# start_year: " << growth.start_year << "\n# end_year: " << growth.end_year
      << "\n# average_growth: " << csv::format_double(growth.average_growth)
      << "\n# aggregate_growth: " << csv::format_double(growth.aggregate_growth) << '\n';
    g << "product,description,category,start_usd,end_usd,growth,status\n";
    auto row = [&](const ProductGrowth& p, const char* status) {
        const auto* info = catalog.find(p.product, tensor.vintage());
        g << p.product << ',' << csv::quote_if_needed(info ? info->description : "") << ','
          << (info ? to_string(info->category) : "") << ',' << csv::format_double(p.start_value) << ','
          << csv::format_double(p.end_value) << ',';
        if (std::string_view(status) == "ranked") g << csv::format_double(p.growth);
        g << ',' << status << '\n';
    };
    for (const auto& p : growth.ranked) row(p, "ranked");
    for (const auto& p : growth.new_products) row(p, "new");
    stage.write("growth.csv", g.str());

    // Accumulator and vehicle series (import and export sides) by partner.
    std::set<std::string> watched(c.accumulator_products.begin(), c.accumulator_products.end());
    for (auto cat : {Category::Vehicles, Category::HybridVehicles, Category::ElectricVehicles})
        for (const auto& code : catalog.codes_in(tensor.vintage(), cat)) watched.insert(code);
    std::ostringstream ps;
    ps << "direction,product,year,partner,value_usd\n";
    for (auto dir : {FlowDirection::Export, FlowDirection::Import})
        for (const auto& [k, v] : product_series(tensor, watched, region, dir, range))
            ps << to_string(dir) << ',' << std::get<0>(k) << ',' << std::get<1>(k) << ',' << std::get<2>(k) << ','
               << csv::format_double(v) << '\n';
    stage.write("product_series.csv", ps.str());
    stage.commit();
    return "trends: " + std::to_string(range.first) + "-" + std::to_string(range.last) + ", " +
           std::to_string(growth.ranked.size()) + " ranked input(s)";
}

std::string cmd_vulnerability(const PipelineConfig& c, std::optional<int> year) {
    const int y = year.value_or(c.vulnerability_year);
    const auto tensor_path = require_artifact(c, kTensorFile, "ingest");
    const auto forecast_path = require_artifact(c, kForecastFile, "progression");
    Stage stage(c, "vulnerability", c.seed);
    stage.input_file(tensor_path).input_file(forecast_path).input_file(c.catalog).input_file(c.region);
    stage.input_text("year", std::to_string(y));
    if (stage.cached()) return cached_note("vulnerability");

    const auto tensor = load_tensor(tensor_path);
    if (!tensor.years().count(y))
        throw ForgeError(ErrorKind::MissingYear, "trade tensor has no year " + std::to_string(y));
    std::ifstream fin(forecast_path);
    const auto forecast = read_forecast_csv(fin);
    VulnerabilityOptions options;
    options.probability_floor = c.probability_floor;
    options.exposure_cut = c.exposure_cut;
    options.hhi_cut = c.hhi_cut;
    const auto table = build_vulnerability_table(tensor, load_region(c.region), load_catalog(c), forecast, y, options);
    std::ostringstream s;
    write_vulnerability_csv(s, table);
    stage.write("vulnerability_" + std::to_string(y) + ".csv", s.str());
    stage.commit();
    return "vulnerability: " + std::to_string(table.records.size()) + " input(s) with external supply in " +
           std::to_string(y);
}

} // namespace forge::cli
