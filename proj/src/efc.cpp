#include "forge/efc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "forge/csv.hpp"
#include "forge/ranking.hpp"
#include "json.hpp"

namespace forge {

const char* to_string(Anchor a) {
    return a == Anchor::DummyCountry ? "dummy_country" : "none";
}

namespace {

constexpr double kUnderflow = 1e-300;

double arithmetic_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double geometric_mean_positive(const std::vector<double>& v) {
    double log_sum = 0.0;
    std::size_t n = 0;
    for (double x : v)
        if (x > 0.0) {
            log_sum += std::log(x);
            ++n;
        }
    return n ? std::exp(log_sum / static_cast<double>(n)) : 0.0;
}

double max_relative_change(const std::vector<double>& prev, const std::vector<double>& next) {
    double worst = 0.0;
    for (std::size_t i = 0; i < prev.size(); ++i) {
        if (prev[i] == 0.0) {
            if (next[i] != 0.0) return std::numeric_limits<double>::infinity();
            continue;
        }
        worst = std::max(worst, std::abs(next[i] - prev[i]) / prev[i]);
    }
    return worst;
}

std::vector<int> positions(const std::vector<double>& values, std::size_t n) {
    std::vector<std::string> dummy_labels(n);
    for (std::size_t i = 0; i < n; ++i) dummy_labels[i] = std::to_string(i);
    return rank_descending(dummy_labels, std::vector<double>(values.begin(), values.begin() + static_cast<long>(n)));
}

} // namespace

double EfcResult::fitness_of(const std::string& country) const {
    for (std::size_t i = 0; i < countries.size(); ++i)
        if (countries[i] == country) return fitness[i];
    if (anchor == Anchor::DummyCountry && country == kDummyCountry) return 1.0;
    throw ForgeError(ErrorKind::UnknownCode, "no fitness for country " + country);
}

double EfcResult::complexity_of(const std::string& product) const {
    for (std::size_t i = 0; i < products.size(); ++i)
        if (products[i] == product) return complexity[i];
    throw ForgeError(ErrorKind::UnknownCode, "no complexity for product " + product);
}

EfcResult fitness_complexity(const SpecializationMatrix& s, const EfcOptions& options) {
    const auto& m = s.m;
    if (!(options.tolerance > 0.0)) throw ForgeError(ErrorKind::InvalidArgument, "tolerance must be positive");
    if (options.max_iterations < 1) throw ForgeError(ErrorKind::InvalidArgument, "max_iterations must be >= 1");
    bool any = false;
    for (auto v : m.data()) any |= v != 0;
    if (!any) throw ForgeError(ErrorKind::EmptyTrade, "specialization matrix has no nonzero entry");

    const bool anchored = options.anchor == Anchor::DummyCountry;
    const std::size_t n_real = m.n_rows();
    const std::size_t n_rows = n_real + (anchored ? 1 : 0);
    const std::size_t n_products = m.n_cols();

    // Sparse adjacency; the dummy row (last) exports everything.
    std::vector<std::vector<std::size_t>> products_of(n_rows), countries_of(n_products);
    for (std::size_t c = 0; c < n_real; ++c)
        for (std::size_t p = 0; p < n_products; ++p)
            if (m(c, p)) {
                products_of[c].push_back(p);
                countries_of[p].push_back(c);
            }
    if (anchored)
        for (std::size_t p = 0; p < n_products; ++p) {
            products_of[n_real].push_back(p);
            countries_of[p].push_back(n_real);
        }

    EfcResult r;
    r.countries = m.row_labels();
    r.products = m.col_labels();
    r.anchor = options.anchor;
    r.year = s.year;

    std::vector<double> fitness(n_rows, 1.0), complexity(n_products, 1.0);
    std::vector<double> raw_f(n_rows), raw_q(n_products);
    std::vector<bool> floored(n_products, false);
    std::vector<int> prev_f_rank, prev_q_rank;
    int stable_for = 0;

    for (int n = 1; n <= options.max_iterations; ++n) {
        for (std::size_t c = 0; c < n_rows; ++c) {
            double sum = 0.0;
            for (auto p : products_of[c]) sum += complexity[p];
            raw_f[c] = sum;
        }
        double f_norm = 0.0;
        if (anchored)
            f_norm = raw_f[n_real];
        else
            f_norm = options.fitness_mean == MeanKind::Geometric ? geometric_mean_positive(raw_f)
                                                                 : arithmetic_mean(raw_f);
        if (!(f_norm > 0.0) || !std::isfinite(f_norm))
            throw ForgeError(ErrorKind::Computation, "fitness normaliser degenerated at iteration " + std::to_string(n));

        std::vector<double> next_f(n_rows);
        for (std::size_t c = 0; c < n_rows; ++c) {
            next_f[c] = raw_f[c] / f_norm;
            if (next_f[c] < kUnderflow) next_f[c] = 0.0;
        }

        for (std::size_t p = 0; p < n_products; ++p) {
            double inv_sum = 0.0;
            for (auto c : countries_of[p]) inv_sum += next_f[c] > 0.0 ? 1.0 / next_f[c] : std::numeric_limits<double>::infinity();
            raw_q[p] = inv_sum > 0.0 && std::isfinite(inv_sum) ? 1.0 / inv_sum : 0.0;
        }
        const double q_norm = arithmetic_mean(raw_q);
        if (!(q_norm > 0.0) || !std::isfinite(q_norm))
            throw ForgeError(ErrorKind::Computation, "complexity normaliser degenerated at iteration " + std::to_string(n));
        std::vector<double> next_q(n_products);
        for (std::size_t p = 0; p < n_products; ++p) {
            next_q[p] = raw_q[p] / q_norm;
            if (next_q[p] < kUnderflow) {
                if (next_q[p] > 0.0 || !countries_of[p].empty()) floored[p] = true;
                next_q[p] = 0.0;
            }
        }

        const double df = max_relative_change(fitness, next_f);
        const double dq = max_relative_change(complexity, next_q);
        fitness = std::move(next_f);
        complexity = std::move(next_q);
        r.iterations = n;
        if (anchored) r.dummy_fitness_trace.push_back(fitness[n_real]);
        if (options.record_trace) r.trace.push_back({n, fitness, complexity, df, dq});

        auto f_rank = positions(fitness, n_real);
        auto q_rank = positions(complexity, n_products);
        stable_for = (f_rank == prev_f_rank && q_rank == prev_q_rank) ? stable_for + 1 : 0;
        prev_f_rank = std::move(f_rank);
        prev_q_rank = std::move(q_rank);
        r.rank_stable = stable_for >= options.rank_window;

        if (df < options.tolerance && dq < options.tolerance) {
            r.converged = true;
            break;
        }
        if (options.stop_on_rank_stability && r.rank_stable) break;
    }

    r.fitness.assign(fitness.begin(), fitness.begin() + static_cast<long>(n_real));
    r.complexity = complexity;
    for (std::size_t p = 0; p < n_products; ++p)
        if (floored[p]) r.floored_products.push_back(r.products[p]);
    return r;
}

std::map<std::string, double> sector_fitness(const EfcResult& efc, const SpecializationMatrix& s,
                                             const std::set<std::string>& subset) {
    std::vector<std::string> unknown;
    std::vector<std::pair<std::size_t, double>> cols;
    for (const auto& code : subset) {
        auto col = s.m.col_index(code);
        auto q = std::find(efc.products.begin(), efc.products.end(), code);
        if (!col || q == efc.products.end()) {
            unknown.push_back(code);
            continue;
        }
        cols.emplace_back(*col, efc.complexity[static_cast<std::size_t>(q - efc.products.begin())]);
    }
    if (!unknown.empty()) {
        std::string list;
        for (const auto& u : unknown) list += (list.empty() ? "" : ", ") + u;
        throw ForgeError(ErrorKind::UnknownCode, "sector subset contains unknown products: " + list);
    }
    std::map<std::string, double> out;
    for (std::size_t c = 0; c < s.m.n_rows(); ++c) {
        double sum = 0.0;
        for (const auto& [col, q] : cols)
            if (s.m(c, col)) sum += q;
        out[s.m.row_labels()[c]] = sum;
    }
    return out;
}

double SectorFitnessSeries::value(const std::string& country, int year) const {
    for (const auto& e : entries)
        if (e.country == country && e.year == year) return e.value;
    throw ForgeError(ErrorKind::UnknownCode, "no sector fitness for " + country + " in " + std::to_string(year));
}

SectorFitnessSeries fitness_ranking_series(const std::vector<YearlyEfc>& years, const std::set<std::string>& subset,
                                           Normalization normalization, const std::set<std::string>& countries) {
    SectorFitnessSeries series;
    series.subset = subset;
    series.normalization = normalization;

    std::vector<const YearlyEfc*> sorted;
    for (const auto& y : years) sorted.push_back(&y);
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const YearlyEfc* a, const YearlyEfc* b) { return a->efc.year < b->efc.year; });

    for (const auto* y : sorted) {
        const auto values = sector_fitness(y->efc, y->m, subset);
        std::vector<std::string> labels;
        std::vector<double> raw;
        for (const auto& [country, v] : values) {
            if (!countries.empty() && !countries.count(country)) continue;
            labels.push_back(country);
            raw.push_back(v);
        }
        double max = 0.0;
        for (double v : raw) max = std::max(max, v);
        const auto order = order_descending(labels, raw);
        for (std::size_t pos = 0; pos < order.size(); ++pos) {
            const auto i = order[pos];
            SectorFitnessEntry e;
            e.country = labels[i];
            e.year = y->efc.year;
            e.raw = raw[i];
            e.value = normalization == Normalization::ByMax ? (max > 0.0 ? raw[i] / max : 0.0) : raw[i];
            e.rank = static_cast<int>(pos) + 1;
            series.entries.push_back(std::move(e));
        }
    }
    return series;
}

namespace {

void write_ranked(std::ostream& out, const std::vector<std::string>& labels, const std::vector<double>& values,
                  int year) {
    out << "entity,year,value,rank\n";
    const auto order = order_descending(labels, values);
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        out << csv::quote_if_needed(labels[order[pos]]) << ',' << year << ',' << csv::format_double(values[order[pos]])
            << ',' << pos + 1 << '\n';
}

} // namespace

void write_fitness_csv(std::ostream& out, const EfcResult& r) {
    write_ranked(out, r.countries, r.fitness, r.year);
}

void write_complexity_csv(std::ostream& out, const EfcResult& r) {
    write_ranked(out, r.products, r.complexity, r.year);
}

void write_efc_json(std::ostream& out, const EfcResult& r, bool include_trace) {
    nlohmann::ordered_json doc;
    doc["year"] = r.year;
    doc["anchor"] = to_string(r.anchor);
    doc["iterations"] = r.iterations;
    doc["converged"] = r.converged;
    doc["rank_stable"] = r.rank_stable;
    auto& fit = doc["fitness"] = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < r.countries.size(); ++i) fit[r.countries[i]] = r.fitness[i];
    auto& cx = doc["complexity"] = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < r.products.size(); ++i) cx[r.products[i]] = r.complexity[i];
    doc["floored_products"] = r.floored_products;
    if (include_trace) {
        auto& trace = doc["trace"] = nlohmann::ordered_json::array();
        for (const auto& it : r.trace)
            trace.push_back({{"iteration", it.iteration},
                             {"fitness", it.fitness},
                             {"complexity", it.complexity},
                             {"fitness_change", it.fitness_change},
                             {"complexity_change", it.complexity_change}});
        doc["dummy_fitness_trace"] = r.dummy_fitness_trace;
    }
    out << doc.dump(2) << '\n';
}

void write_sector_fitness_csv(std::ostream& out, const SectorFitnessSeries& s) {
    out << "country,year,raw,value,rank\n";
    for (const auto& e : s.entries)
        out << e.country << ',' << e.year << ',' << csv::format_double(e.raw) << ',' << csv::format_double(e.value)
            << ',' << e.rank << '\n';
}

} // namespace forge
